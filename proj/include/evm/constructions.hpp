#pragma once

// Machine-to-machine constructions: parallel composition under a selector, general to
// basic conversion, periodic collapse, pipeline flattening and the cellular encoding.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evm/automata.hpp"
#include "evm/cellular.hpp"
#include "evm/machine.hpp"

namespace evm {

/// Input classifier: class(u) is the index of the first acceptor accepting u, or
/// acceptors.size() when none does.
struct Selector {
    std::vector<AcceptorPtr> acceptors;

    std::size_t classes() const { return acceptors.size() + 1; }
    std::size_t classify(const Word& u) const;
};

/// D with D(u) = A_{P(u)}(u). Finite-automaton levels become one transducer when every
/// selector verdict is fixed by the first input symbol, and a dispatch level otherwise;
/// Turing machine levels become a dispatcher machine that sweeps, rewinds and branches.
LevelPtr p_compose(const std::vector<LevelPtr>& levels, const Selector& selector, std::string name = {});

/// True when p_compose over these selectors yields a single transducer.
bool selector_prefix_decidable(const Selector& selector, const Alphabet& alphabet);

struct BemConversion {
    EvolutionaryMachine machine;
    std::vector<Symbol> markers;  // markers[c] tags cursor position c; markers[horizon] is overflow
    std::size_t horizon = 0;

    Word encode(const Word& population) const;
    /// Population with the cursor marker removed.
    Word decode(const Word& payload) const;
    /// Cursor position carried by a payload, if any.
    std::optional<std::size_t> cursor(const Word& payload) const;
};

/// Basic machine reproducing a terminal-mode machine whose cursor stays below `horizon`.
/// The single level dispatches on the cursor marker appended to the population.
BemConversion gem_to_bem(const EvolutionaryMachine& e, std::size_t horizon);

/// Period-k finite-automaton machine to period 1; the level is the composition of one period.
EvolutionaryMachine collapse_periodic(const EvolutionaryMachine& e);

/// Explicit finite-automaton pipeline to one transducer.
FiniteTransducer flatten_bounded_efa(const EvolutionaryMachine& e);

// ---- cellular encoding ------------------------------------------------------------------

/// Head-simulation automaton for a Turing machine: cells are tape symbols and `[q|a]` head
/// cells; radius 1.
struct TmCellular {
    TuringMachine tm;
    CellularAutomaton1D ca;
    std::vector<std::vector<std::size_t>> head_cell;  // [state index][tape symbol index] -> cell

    CaConfiguration encode(const Word& tape) const;
    /// Head state and tape word, if the configuration holds exactly one head.
    std::optional<std::pair<StateId, long long>> head(const CaConfiguration& c) const;
    Symbol tape_symbol(std::size_t cell) const;
};

TmCellular tm_to_ca(const TuringMachine& tm, const std::string& name = {});

struct EfaCellular {
    TmCellular sim;
    Alphabet population;
    Symbol left_end, right_end;
    std::vector<StateId> boundary;  // head state at a generation boundary, per phase
    std::size_t expansion_bound = 0;
    std::size_t period = 0;

    CaConfiguration encode(const Word& w) const;
    /// The generation held by a configuration whose head rests at a generation boundary.
    std::optional<Word> decode(const CaConfiguration& c) const;
    /// Upper bound on the steps from one generation boundary to the next.
    std::size_t steps_per_generation(std::size_t support) const;
    /// Generations 1..n (fewer when a generation is undefined or overruns its bound).
    std::vector<Word> generations(const Word& w0, std::size_t n) const;
};

/// Periodic finite-automaton machine (either flavor) to a cellular automaton. The per-cell
/// expansion bound defaults to the longest edge output; a level exceeding an explicit bound
/// is rejected.
EfaCellular periodic_efa_to_ca(const EvolutionaryMachine& e, std::optional<std::size_t> expansion_bound = std::nullopt);

}  // namespace evm
