#pragma once

// Functional and linguistic equivalence: bounded enumeration over input words, and an
// exact check for deterministic acceptors.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evm/format.hpp"
#include "evm/machine.hpp"

namespace evm {

/// What a machine does on one input. `accepted` is empty when undecided.
struct Observation {
    enum class Status { ok, undefined, undecided };

    Status status = Status::ok;
    Word output;
    std::optional<bool> accepted;

    /// "ok [w]", "undefined" or "undecided".
    std::string functional() const;
    /// "accept", "reject" or "undecided".
    std::string linguistic() const;
};

struct Subject {
    std::string name;
    Alphabet alphabet;
    std::function<Observation(const Word&)> observe;
};

/// Level automata run on their own; `budgets` bounds Turing machine steps.
Subject subject_of(const LevelPtr& level, const Budgets& budgets = {});
Subject subject_of(const Nfa& nfa);
/// Output = run result (satisfied, stabilized, schedule-exhausted); budget exhaustion is
/// undecided. Accepts iff the search condition is satisfied.
Subject subject_of(const EvolutionaryMachine& e);
Subject subject_of(const Automaton& a, const Budgets& budgets = {});

struct EquivVerdict {
    enum class Status { equivalent, inequivalent, undecided };

    Status status = Status::equivalent;
    bool exact = false;          // equivalent for all words, not only up to max_len
    std::size_t max_len = 0;
    Word witness;                // inequivalent only
    std::string lhs, rhs;        // behaviours on the witness
    std::string reason;          // undecided only

    std::string str() const;
};

EquivVerdict functional_equiv_bounded(const Subject& a, const Subject& b, const Alphabet& alphabet,
                                      std::size_t max_len);
EquivVerdict linguistic_equiv_bounded(const Subject& a, const Subject& b, const Alphabet& alphabet,
                                      std::size_t max_len);
/// Exact language comparison of two acceptors; witness is length-lex least.
EquivVerdict dfa_language_equiv_exact(const FiniteTransducer& a, const FiniteTransducer& b);

struct LanguageSample {
    std::vector<Word> accepted;
    std::vector<Word> undecided;
};

LanguageSample accepted_language_sample(const Subject& s, const Alphabet& alphabet, std::size_t max_len);

}  // namespace evm
