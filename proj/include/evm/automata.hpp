#pragma once

// Level-automaton classes: finite transducers/acceptors, NFAs, single-tape Turing
// machines and first-order inductive Turing machines.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "evm/word.hpp"

namespace evm {

using StateId = std::string;

struct TransducerEdge {
    StateId target;
    Word output;

    bool operator==(const TransducerEdge&) const = default;
};

/// Deterministic finite transducer with word outputs and accepting states. A plain DFA
/// is a transducer flagged `acceptor` whose edges all emit the empty word.
struct FiniteTransducer {
    std::string name;
    std::vector<StateId> states;
    StateId start;
    std::set<StateId> accepting;
    Alphabet input_alphabet;
    Alphabet output_alphabet;
    std::map<std::pair<StateId, Symbol>, TransducerEdge> transitions;
    bool acceptor = false;

    bool operator==(const FiniteTransducer&) const = default;

    bool has_state(const StateId& s) const;
    const TransducerEdge* edge(const StateId& state, const Symbol& symbol) const;
    bool is_accepting(const StateId& s) const { return accepting.count(s) != 0; }
    /// True iff every edge emits exactly one symbol.
    bool letter_to_letter() const;
    /// Largest output-word length over all edges.
    std::size_t max_output_length() const;
    void validate() const;
};

struct Nfa {
    std::string name;
    std::vector<StateId> states;
    std::vector<StateId> start;
    std::set<StateId> accepting;
    Alphabet alphabet;
    std::map<std::pair<StateId, Symbol>, std::vector<StateId>> transitions;

    bool operator==(const Nfa&) const = default;

    bool has_state(const StateId& s) const;
    void validate() const;
};

enum class Move { left, right, stay };

struct TmAction {
    StateId target;
    Symbol write;
    Move move = Move::stay;

    bool operator==(const TmAction&) const = default;
};

/// Deterministic single-tape machine. A non-halting state with no transition for the
/// scanned symbol halts and rejects.
struct TuringMachine {
    std::string name;
    std::vector<StateId> states;
    StateId start;
    std::set<StateId> accept;
    std::set<StateId> reject;
    Alphabet input_alphabet;
    Alphabet tape_alphabet;
    Symbol blank;
    std::map<std::pair<StateId, Symbol>, TmAction> transitions;

    bool operator==(const TuringMachine&) const = default;

    bool has_state(const StateId& s) const;
    bool is_halting(const StateId& s) const { return accept.count(s) || reject.count(s); }
    const TmAction* action(const StateId& state, const Symbol& symbol) const;
    void validate() const;
};

/// First-order inductive Turing machine: a TuringMachine plus a write-only output tape.
/// Transitions may append a word to the output tape; nothing ever reads it.
struct InductiveTuringMachine {
    TuringMachine machine;
    std::map<std::pair<StateId, Symbol>, Word> appends;
    int order = 1;

    bool operator==(const InductiveTuringMachine&) const = default;

    const std::string& name() const { return machine.name; }
    void validate() const;
};

// ---- finite automata -------------------------------------------------------------

/// Non-throwing transducer run. `defined` is false when a transition is missing, in which
/// case `stuck_at` is the position of the offending symbol.
struct Transduction {
    bool defined = true;
    Word output;
    StateId final_state;
    std::size_t stuck_at = 0;
    std::size_t steps = 0;
};

Transduction run_transducer(const FiniteTransducer& t, const Word& w);

bool fa_accepts(const FiniteTransducer& machine, const Word& w);
bool fa_accepts(const Nfa& machine, const Word& w);

/// Concatenated edge outputs along the run. Throws UndefinedTransition.
Word fa_transduce(const FiniteTransducer& t, const Word& w);

/// Subset construction over reachable non-empty subsets.
FiniteTransducer nfa_to_dfa(const Nfa& n);

/// Product construction with fa_transduce(result, w) = fa_transduce(t2, fa_transduce(t1, w)).
FiniteTransducer transducer_compose(const FiniteTransducer& t1, const FiniteTransducer& t2);

/// Either "equivalent" (no witness) or a length-lex shortest distinguishing word.
struct DfaEquivalence {
    bool equivalent = true;
    Word counterexample;
};

/// Exact language equivalence of two deterministic acceptors (outputs ignored). Missing
/// transitions go to an implicit dead state.
DfaEquivalence dfa_equiv(const FiniteTransducer& a, const FiniteTransducer& b);

/// `base`, or `base` with a numeric suffix, whichever is absent from `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// ---- Turing machines -------------------------------------------------------------

struct TmResult {
    enum class Status { halted, budget_exhausted };
    Status status = Status::halted;
    Word tape;
    bool accepted = false;
    std::size_t steps = 0;
    StateId final_state;

    bool halted() const { return status == Status::halted; }
    bool operator==(const TmResult&) const = default;
};

TmResult tm_run(const TuringMachine& m, const Word& w, std::size_t max_steps);

struct ItmResult {
    enum class Status { stabilized, undecided };
    Status status = Status::undecided;
    Word output;
    /// Step after which the output tape no longer changed.
    std::size_t since_step = 0;
    std::size_t steps = 0;
    bool halted = false;
    StateId final_state;

    bool stabilized() const { return status == Status::stabilized; }
    bool operator==(const ItmResult&) const = default;
};

ItmResult itm_run(const InductiveTuringMachine& m, const Word& w, std::size_t max_steps,
                  std::size_t stability_window);

/// Output-tape history of an inductive run, one entry per step (entry 0 is before any
/// step). Used to audit stabilization claims.
std::vector<Word> itm_output_history(const InductiveTuringMachine& m, const Word& w,
                                     std::size_t steps);

}  // namespace evm
