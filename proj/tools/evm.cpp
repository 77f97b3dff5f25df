#include <iostream>
#include <string>
#include <vector>

#include "evm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return evm::cli_main(args, std::cout, std::cerr);
}
