#pragma once

// Bitstring populations and their encoding as generation words: genomes over {0,1}
// joined by the separator symbol "|".

#include <vector>

#include "evm/word.hpp"

namespace evm {

using Genome = std::vector<bool>;

struct Population {
    std::vector<Genome> members;

    bool operator==(const Population&) const = default;
};

inline const Symbol kSeparator = "|";

const Alphabet& population_alphabet();

Word encode_population(const Population& p);

/// Throws DomainError on empty genomes, unequal genome lengths or foreign symbols.
Population decode_population(const Word& w);

}  // namespace evm
