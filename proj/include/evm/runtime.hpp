#pragma once

// Execution of evolutionary machines in all eight modes of functioning.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evm/machine.hpp"

namespace evm {

struct Generation {
    Word payload;
    std::size_t index = 0;

    bool operator==(const Generation&) const = default;
};

enum class Direction { forward, backward };

enum class LevelStatus { ok, undefined, exhausted, schedule_end };

struct LevelOutput {
    LevelStatus status = LevelStatus::ok;
    Generation next;
    Direction direction = Direction::forward;
    std::size_t steps = 0;
    StateId final_state;
    std::string note;
};

/// One level computation: fa transduction, tm run (result tape), itm run (stabilized
/// output tape), dispatch or native step. Finishing in a `route_back` state routes the
/// result backward.
LevelOutput level_apply(const Level& level, const Generation& g, const Budgets& budgets,
                        const std::set<StateId>& route_back);

struct TraceRecord {
    std::size_t t = 0;
    std::size_t level = 0;  // cursor position
    std::string name;       // level automaton applied
    Direction direction = Direction::forward;
    Word input;
    Word output;
    std::size_t steps = 0;

    bool operator==(const TraceRecord&) const = default;
};

struct RunTrace {
    std::vector<TraceRecord> records;

    bool operator==(const RunTrace&) const = default;
};

enum class Outcome { satisfied, stabilized, budget_exhausted, schedule_exhausted, undefined };

std::string to_string(Outcome o);

struct RunResult {
    Outcome outcome = Outcome::budget_exhausted;
    /// Z for satisfied, the stable generation for stabilized, otherwise the last one.
    Generation result;
    Flavor flavor = Flavor::basic;
    Mode mode;
    RunTrace trace;
    /// Limit modes: the final observed window of generations.
    std::optional<std::vector<Word>> limit_candidate;
    std::string note;

    /// X[0], X[1], ... as chained through the trace.
    std::vector<Word> generations(const Word& initial) const;
};

bool check_search_condition(const SearchCondition& sc, const Generation& g);

/// Least s with X[s] = X[s+1] = ... = X[s+W] in the observed sequence, if any.
std::optional<std::size_t> detect_stabilization(std::span<const Word> trace, std::size_t window);

/// Forward-only execution. Throws DomainError on a general machine, a recursion-bearing
/// mode, or a level that routes backward.
RunResult bem_run(const EvolutionaryMachine& e, const Generation& g0);

/// Cursor-based execution: forward moves the cursor up, backward moves it down (floor 0).
RunResult gem_run(const EvolutionaryMachine& e, const Generation& g0);

/// bem_run or gem_run by flavor.
RunResult run_machine(const EvolutionaryMachine& e, const Generation& g0);

enum class TraceFormat { text, json_lines };

/// One line per record plus a summary line; field order is fixed.
std::string format_run(const EvolutionaryMachine& e, const RunResult& r, TraceFormat format);

}  // namespace evm
