#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "evm/cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace {

struct Call {
    int code;
    std::string out, err;
};

Call cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = evm::cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string corpus(const char* f) { return oracle::corpus_path(f); }

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("evm-unit-" + name)).string();
}

}  // namespace

TEST_CASE("validate a corpus file") {
    Call c = cli({"validate", corpus("levels.evm")});
    CHECK(c.code == 0);
    CHECK(c.out == "ok\n");
}

TEST_CASE("run reports stabilization") {
    Call c = cli({"run", corpus("modes.evm"), "--machine", "still", "--input", "0 1"});
    CHECK(c.code == 0);
    CHECK(c.out.find("outcome=stabilized t=1 result=\"0 1\"") != std::string::npos);
    Call j = cli({"run", corpus("modes.evm"), "--machine", "still", "--input", "0 1", "--format", "json-lines"});
    std::istringstream lines(j.out);
    std::string line, last;
    while (std::getline(lines, line)) {
        auto v = nlohmann::json::parse(line);
        CHECK(v.contains("type"));
        last = line;
    }
    CHECK(nlohmann::json::parse(last)["outcome"] == "stabilized");
}

TEST_CASE("run overrides mode and budgets") {
    Call c = cli({"run", corpus("modes.evm"), "--machine", "blink", "--input", "0", "--mode", "bounded 3"});
    CHECK(c.code == 0);
    CHECK(c.out.find("outcome=schedule-exhausted t=3") != std::string::npos);
    Call b = cli({"run", corpus("modes.evm"), "--machine", "blink", "--input", "0", "--budget", "generations=4"});
    CHECK(b.out.find("outcome=budget-exhausted t=4") != std::string::npos);
    CHECK(cli({"run", corpus("modes.evm"), "--input", "0", "--budget", "speed=4"}).code == 2);
}

TEST_CASE("flattened pipeline compares equivalent") {
    const std::string flat = temp_file("flat.evm");
    Call f = cli({"flatten", corpus("pipeline.evm"), "-o", flat});
    REQUIRE(f.code == 0);
    Call e = cli({"equiv", corpus("pipeline.evm"), flat, "--kind", "functional", "--max-len", "5"});
    CHECK(e.code == 0);
    CHECK(e.out.find("status=equivalent") != std::string::npos);
    std::filesystem::remove(flat);
}

TEST_CASE("exact and linguistic comparisons") {
    Call e = cli({"equiv", corpus("levels.evm"), corpus("levels.evm"), "--a", "even-ones", "--b", "odd-ones", "--kind",
                  "linguistic", "--exact"});
    CHECK(e.code == 0);
    CHECK(e.out.find("status=inequivalent") != std::string::npos);
    CHECK(e.out.find("witness=\"\"") != std::string::npos);
}

TEST_CASE("construction commands emit reloadable documents") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"collapse", corpus("periodic.evm"), "--machine", "triple"},
             {"gem2bem", corpus("bounce.evm"), "--horizon", "6"},
             {"to-ca", corpus("wobble.evm"), "--input", "0 1", "--generations", "2"},
         }) {
        const std::string path = temp_file(args[0] + ".evm");
        auto with_out = args;
        with_out.insert(with_out.end(), {"-o", path});
        Call c = cli(with_out);
        CAPTURE(args[0]);
        REQUIRE(c.code == 0);
        CHECK(cli({"validate", path}).code == 0);
        Call inline_doc = cli(args);
        CHECK(inline_doc.code == 0);
        std::filesystem::remove(path);
    }
}

TEST_CASE("exit codes") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"run", corpus("modes.evm")}).code == 2);
    Call missing = cli({"validate", "/nonexistent/file.evm"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("/nonexistent/file.evm") != std::string::npos);
    CHECK(cli({"gem2bem", corpus("anbn.evm")}).code == 1);
    CHECK(cli({"run", corpus("modes.evm"), "--input", "0 7"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("demos") {
    Call ga = cli({"demo-ga", "--seed", "3"});
    CHECK(ga.code == 0);
    CHECK(ga.out.rfind("t,best,mean\n", 0) == 0);
    CHECK(ga.out == cli({"demo-ga", "--seed", "3"}).out);
    Call um = cli({"demo-umachine", corpus("unet.net"), corpus("not.table"), "--seed", "1"});
    CHECK(um.code == 0);
    CHECK(um.out.find("score=1") != std::string::npos);
}
