#pragma once

// Reference implementations used by the tests. They walk the raw automaton tables
// directly and never call the library's algorithms.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evm/automata.hpp"
#include "evm/machine.hpp"
#include "evm/umachine.hpp"

namespace oracle {

using evm::Word;

std::string corpus_path(const std::string& file);
std::string read_text(const std::string& path);

/// Output of a deterministic transducer, nullopt when a move is missing.
std::optional<Word> transduce(const evm::FiniteTransducer& t, const Word& w);
bool accepts(const evm::FiniteTransducer& t, const Word& w);
bool nfa_accepts(const evm::Nfa& n, const Word& w);

std::optional<Word> pipeline(const std::vector<const evm::FiniteTransducer*>& levels, const Word& w);

/// Class = first acceptor accepting w, else the last branch; then that branch's output.
std::optional<Word> dispatch(const std::vector<const evm::FiniteTransducer*>& branches,
                             const std::vector<const evm::FiniteTransducer*>& selectors, const Word& w);

struct EmRun {
    std::string outcome;             // satisfied, stabilized, budget-exhausted, schedule-exhausted, undefined
    Word result;
    std::vector<Word> generations;   // X[0], X[1], ...
    std::vector<std::size_t> cursor; // cursor before each application, then the final cursor
};

/// Finite-transducer machines in terminal, bounded or inductive mode.
EmRun run_em(const evm::EvolutionaryMachine& e, const Word& w0);

/// Every word over {0,1} of length <= n.
std::vector<Word> binary_words(std::size_t n);

/// Number of complete DFAs over {0,1} with at most `max_states` states (start state 0)
/// that accept every word of `positive` and no word of `negative`.
std::size_t consistent_small_dfas(const std::vector<Word>& positive, const std::vector<Word>& negative,
                                  std::size_t max_states);

/// Best score over all switch settings and how many settings reach 1.
struct SwitchSearch {
    double best = 0;
    std::size_t perfect = 0;
    std::size_t total = 0;
};
SwitchSearch exhaustive_switches(const evm::UMachineNetwork& net, const evm::TruthTable& table);

// ---- random machines --------------------------------------------------------------

evm::FiniteTransducer random_transducer(std::mt19937_64& rng, const std::string& name, const evm::Alphabet& in,
                                        const evm::Alphabet& out, std::size_t states, std::size_t max_output,
                                        double missing = 0.0);
evm::FiniteTransducer random_dfa(std::mt19937_64& rng, const std::string& name, const evm::Alphabet& alphabet,
                                 std::size_t states, double missing = 0.0);

/// Same language: states renamed and shuffled, one state duplicated.
evm::FiniteTransducer disguise(std::mt19937_64& rng, const evm::FiniteTransducer& dfa);

/// Language comparison by enumerating every word up to `max_len`; the first (length-lex)
/// disagreement, if any.
std::optional<Word> first_language_difference(const evm::FiniteTransducer& a, const evm::FiniteTransducer& b,
                                              std::size_t max_len);

}  // namespace oracle
