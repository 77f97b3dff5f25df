#pragma once

// Evolutionary machines E = {A[t]}: level automata, level schedules, search conditions,
// modes of functioning and budgets.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "evm/automata.hpp"
#include "evm/population.hpp"
#include "evm/rational.hpp"

namespace evm {

struct Level;
using LevelPtr = std::shared_ptr<const Level>;
using AcceptorPtr = std::shared_ptr<const FiniteTransducer>;

enum class LevelClass { fa, tm, itm };

/// Terminal signals a dispatch branch may carry instead of a machine.
enum class Signal { none, budget, schedule_end };

struct DispatchTarget {
    LevelPtr level;
    Signal signal = Signal::none;
};

struct DispatchRule {
    AcceptorPtr selector;
    DispatchTarget target;
};

/// Two-pass parallel composition: classify the whole input with the selectors (first
/// accepting rule wins, else `otherwise`), then run the chosen branch on the input.
struct Dispatch {
    std::string name;
    Alphabet input_alphabet;
    std::vector<DispatchRule> rules;
    DispatchTarget otherwise;

    /// Index of the chosen rule, or rules.size() for `otherwise`.
    std::size_t classify(const Word& w) const;
    const DispatchTarget& target_for(const Word& w) const;
};

struct NativeStep {
    Word output;
    std::size_t steps = 0;
    bool route_back = false;
};

/// Level computed by a host procedure (the GA level). `apply` receives the generation
/// index so that seeded operators can derive per-generation random streams.
struct NativeLevel {
    std::string name;
    Alphabet input_alphabet;
    LevelClass declared_class = LevelClass::tm;
    std::function<NativeStep(const Word&, std::size_t)> apply;
};

struct Level {
    std::variant<FiniteTransducer, TuringMachine, InductiveTuringMachine, Dispatch, NativeLevel> body;

    const std::string& name() const;
    const Alphabet& input_alphabet() const;
    LevelClass level_class() const;

    template <typename T>
    const T* as() const { return std::get_if<T>(&body); }
};

template <typename T>
LevelPtr make_level(T automaton) {
    return std::make_shared<const Level>(Level{std::move(automaton)});
}

std::string to_string(LevelClass c);

// ---- schedules -------------------------------------------------------------------

struct ExplicitSchedule {
    std::vector<LevelPtr> levels;
};

struct PeriodicSchedule {
    std::vector<LevelPtr> levels;  // period k = levels.size()
};

struct GeneratedSchedule {
    std::string rule;
    std::function<LevelPtr(std::size_t)> generate;
};

using LevelSchedule = std::variant<ExplicitSchedule, PeriodicSchedule, GeneratedSchedule>;

/// Level automaton at index t, or nullptr when an explicit schedule is exhausted.
LevelPtr schedule_level(const LevelSchedule& s, std::size_t t);

/// Built-in named generator rules for `levels generated <rule>`.
std::vector<std::string> generator_rule_names();
GeneratedSchedule generated_schedule(const std::string& rule);

// ---- search conditions -------------------------------------------------------------

using FitnessFn = std::function<Rational(const Genome&)>;

struct AcceptedBy {
    AcceptorPtr acceptor;
};

struct FitnessAtLeast {
    std::string function;
    Rational threshold;
    FitnessFn fitness;
};

struct Never {};

using SearchCondition = std::variant<AcceptedBy, FitnessAtLeast, Never>;

/// Named fitness functions usable from machine files ("onemax").
FitnessFn builtin_fitness(const std::string& name);

// ---- modes, budgets, machine -------------------------------------------------------

enum class ModeKind {
    finite_state,
    bounded,
    terminal,
    recursive,
    inductive,
    inductive_with_recursion,
    limit,
    limit_with_recursion,
};

struct Mode {
    ModeKind kind = ModeKind::terminal;
    std::size_t limit = 0;  // bounded only

    bool recursion_bearing() const;
    bool stabilizing() const;  // inductive and limit families
    bool is_limit() const;
    bool operator==(const Mode&) const = default;
};

std::string to_string(const Mode& m);
Mode parse_mode(const std::string& name, std::size_t limit = 0);

struct Budgets {
    std::size_t max_generations = 10000;
    std::size_t max_steps_per_level = 100000;
    std::size_t stability_window = 8;

    bool operator==(const Budgets&) const = default;
};

enum class Flavor { basic, general };

std::string to_string(Flavor f);

struct EvolutionaryMachine {
    std::string name;
    Flavor flavor = Flavor::basic;
    LevelSchedule schedule;
    SearchCondition search = Never{};
    Mode mode;
    Budgets budgets;
    /// Per level-automaton name, the states whose completion routes backward.
    std::map<std::string, std::set<StateId>> route_back;

    LevelClass level_class() const;
    /// Input alphabet of the first level automaton.
    Alphabet population_alphabet() const;
    /// Every level automaton the schedule names (generated schedules: none).
    std::vector<LevelPtr> listed_levels() const;
    const std::set<StateId>& route_back_for(const std::string& level_name) const;
    void validate() const;
};

}  // namespace evm
