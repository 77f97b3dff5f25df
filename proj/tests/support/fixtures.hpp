#pragma once

#include <stdexcept>
#include <string>

#include "evm/format.hpp"
#include "oracles.hpp"

namespace fixture {

inline evm::Document load(const std::string& file) { return evm::parse_document(oracle::read_text(oracle::corpus_path(file))); }

inline const evm::FiniteTransducer& fa(const evm::Document& d, const std::string& name) {
    const auto* a = d.find(name);
    if (!a) throw std::runtime_error("fixture has no automaton " + name);
    return std::get<evm::FiniteTransducer>(*a);
}

inline const evm::EvolutionaryMachine& machine(const evm::Document& d, const std::string& name) {
    const auto* m = d.find_machine(name);
    if (!m) throw std::runtime_error("fixture has no machine " + name);
    return *m;
}

inline evm::LevelPtr level(const evm::Document& d, const std::string& name) { return evm::make_level(fa(d, name)); }

}  // namespace fixture
