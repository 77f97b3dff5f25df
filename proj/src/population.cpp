#include "evm/population.hpp"

#include "evm/errors.hpp"

namespace evm {

const Alphabet& population_alphabet() {
    static const Alphabet alphabet{"0", "1", "|"};
    return alphabet;
}

Word encode_population(const Population& p) {
    Word w;
    for (std::size_t i = 0; i < p.members.size(); ++i) {
        if (i) w.push_back(kSeparator);
        for (bool bit : p.members[i]) w.push_back(bit ? "1" : "0");
    }
    return w;
}

Population decode_population(const Word& w) {
    Population p;
    if (w.empty()) return p;
    p.members.emplace_back();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == kSeparator) {
            p.members.emplace_back();
        } else if (w[i] == "0" || w[i] == "1") {
            p.members.back().push_back(w[i] == "1");
        } else {
            throw DomainError("malformed population: symbol '" + w[i] + "' at position " + std::to_string(i));
        }
    }
    const std::size_t length = p.members.front().size();
    for (const auto& g : p.members) {
        if (g.empty()) throw DomainError("malformed population: empty genome");
        if (g.size() != length) throw DomainError("malformed population: genomes of unequal length");
    }
    return p;
}

}  // namespace evm
