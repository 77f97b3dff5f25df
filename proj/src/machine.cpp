#include "evm/machine.hpp"

#include <algorithm>

#include "evm/errors.hpp"

namespace evm {

// ---- Dispatch / Level ------------------------------------------------------------

std::size_t Dispatch::classify(const Word& w) const {
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (fa_accepts(*rules[i].selector, w)) return i;
    return rules.size();
}

const DispatchTarget& Dispatch::target_for(const Word& w) const {
    const std::size_t i = classify(w);
    return i < rules.size() ? rules[i].target : otherwise;
}

const std::string& Level::name() const {
    return std::visit(
        [](const auto& a) -> const std::string& {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, InductiveTuringMachine>)
                return a.machine.name;
            else
                return a.name;
        },
        body);
}

const Alphabet& Level::input_alphabet() const {
    return std::visit(
        [](const auto& a) -> const Alphabet& {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, InductiveTuringMachine>)
                return a.machine.input_alphabet;
            else
                return a.input_alphabet;
        },
        body);
}

LevelClass Level::level_class() const {
    if (as<FiniteTransducer>()) return LevelClass::fa;
    if (as<TuringMachine>()) return LevelClass::tm;
    if (as<InductiveTuringMachine>()) return LevelClass::itm;
    if (const auto* n = as<NativeLevel>()) return n->declared_class;
    const auto& d = std::get<Dispatch>(body);
    for (const auto& r : d.rules)
        if (r.target.level) return r.target.level->level_class();
    if (d.otherwise.level) return d.otherwise.level->level_class();
    return LevelClass::fa;
}

std::string to_string(LevelClass c) {
    switch (c) {
        case LevelClass::fa: return "fa";
        case LevelClass::tm: return "tm";
        case LevelClass::itm: return "itm";
    }
    return "?";
}

// ---- schedules -------------------------------------------------------------------

LevelPtr schedule_level(const LevelSchedule& s, std::size_t t) {
    if (const auto* e = std::get_if<ExplicitSchedule>(&s)) return t < e->levels.size() ? e->levels[t] : nullptr;
    if (const auto* p = std::get_if<PeriodicSchedule>(&s)) return p->levels[t % p->levels.size()];
    return std::get<GeneratedSchedule>(s).generate(t);
}

namespace {

FiniteTransducer binary_map(std::string name, bool flip, bool drop_first) {
    FiniteTransducer t;
    t.name = std::move(name);
    t.input_alphabet = Alphabet{"0", "1"};
    t.output_alphabet = t.input_alphabet;
    t.states = {"s"};
    t.start = "s";
    t.accepting = {"s"};
    if (drop_first) {
        t.states = {"first", "rest"};
        t.start = "first";
        t.accepting = {"first", "rest"};
        for (const char* a : {"0", "1"}) {
            t.transitions[{"first", a}] = {"rest", {}};
            t.transitions[{"rest", a}] = {"rest", {a}};
        }
        return t;
    }
    t.transitions[{"s", "0"}] = {"s", {flip ? "1" : "0"}};
    t.transitions[{"s", "1"}] = {"s", {flip ? "0" : "1"}};
    return t;
}

}  // namespace

std::vector<std::string> generator_rule_names() { return {"flip-alternate", "drop-every-third"}; }

GeneratedSchedule generated_schedule(const std::string& rule) {
    if (rule == "flip-alternate") {
        // Identity at even t, bit-flip at odd t.
        return {rule, [rule](std::size_t t) {
                    return make_level(binary_map(rule + "@" + std::to_string(t), t % 2 == 1, false));
                }};
    }
    if (rule == "drop-every-third") {
        // Deletes the first symbol when t = 2 (mod 3), identity otherwise.
        return {rule, [rule](std::size_t t) {
                    return make_level(binary_map(rule + "@" + std::to_string(t), false, t % 3 == 2));
                }};
    }
    throw DomainError("unknown generator rule '" + rule + "'");
}

// ---- search / fitness ------------------------------------------------------------

FitnessFn builtin_fitness(const std::string& name) {
    if (name == "onemax")
        return [](const Genome& g) { return Rational(static_cast<long long>(std::count(g.begin(), g.end(), true))); };
    throw DomainError("unknown fitness function '" + name + "'");
}

// ---- modes -----------------------------------------------------------------------

bool Mode::recursion_bearing() const {
    return kind == ModeKind::recursive || kind == ModeKind::inductive_with_recursion ||
           kind == ModeKind::limit_with_recursion;
}

bool Mode::stabilizing() const {
    return kind == ModeKind::inductive || kind == ModeKind::inductive_with_recursion || is_limit();
}

bool Mode::is_limit() const { return kind == ModeKind::limit || kind == ModeKind::limit_with_recursion; }

namespace {

const std::pair<ModeKind, const char*> kModeNames[] = {
    {ModeKind::finite_state, "finite-state"},
    {ModeKind::bounded, "bounded"},
    {ModeKind::terminal, "terminal"},
    {ModeKind::recursive, "recursive"},
    {ModeKind::inductive, "inductive"},
    {ModeKind::inductive_with_recursion, "inductive-with-recursion"},
    {ModeKind::limit, "limit"},
    {ModeKind::limit_with_recursion, "limit-with-recursion"},
};

}  // namespace

std::string to_string(const Mode& m) {
    for (const auto& [kind, name] : kModeNames)
        if (kind == m.kind) return m.kind == ModeKind::bounded ? std::string(name) + " " + std::to_string(m.limit) : name;
    return "?";
}

Mode parse_mode(const std::string& name, std::size_t limit) {
    std::string normalized = name;
    std::replace(normalized.begin(), normalized.end(), '_', '-');
    for (const auto& [kind, n] : kModeNames) {
        if (normalized != n) continue;
        Mode m{kind, kind == ModeKind::bounded ? limit : 0};
        if (kind == ModeKind::bounded && limit == 0) throw DomainError("bounded mode needs a limit >= 1");
        return m;
    }
    throw DomainError("unknown mode '" + name + "'");
}

std::string to_string(Flavor f) { return f == Flavor::basic ? "basic" : "general"; }

// ---- EvolutionaryMachine -----------------------------------------------------------

std::vector<LevelPtr> EvolutionaryMachine::listed_levels() const {
    if (const auto* e = std::get_if<ExplicitSchedule>(&schedule)) return e->levels;
    if (const auto* p = std::get_if<PeriodicSchedule>(&schedule)) return p->levels;
    return {};
}

LevelClass EvolutionaryMachine::level_class() const {
    LevelPtr first = schedule_level(schedule, 0);
    if (!first) throw InvariantError(name, "machine has no levels");
    return first->level_class();
}

Alphabet EvolutionaryMachine::population_alphabet() const {
    LevelPtr first = schedule_level(schedule, 0);
    if (!first) throw InvariantError(name, "machine has no levels");
    return first->input_alphabet();
}

const std::set<StateId>& EvolutionaryMachine::route_back_for(const std::string& level_name) const {
    static const std::set<StateId> none;
    auto it = route_back.find(level_name);
    return it == route_back.end() ? none : it->second;
}

void EvolutionaryMachine::validate() const {
    if (const auto* e = std::get_if<ExplicitSchedule>(&schedule); e && e->levels.empty())
        throw InvariantError(name, "explicit schedule must list at least one level");
    if (const auto* p = std::get_if<PeriodicSchedule>(&schedule); p && p->levels.empty())
        throw InvariantError(name, "periodic schedule must list at least one level");
    if (const auto* g = std::get_if<GeneratedSchedule>(&schedule); g && !g->generate)
        throw InvariantError(name, "generated schedule without a rule");
    if (mode.recursion_bearing() && flavor != Flavor::general)
        throw DomainError("mode '" + to_string(mode) + "' requires a general machine ('" + name + "')");
    if (mode.kind == ModeKind::bounded && mode.limit == 0) throw InvariantError(name, "bounded mode needs a limit");
    if (budgets.stability_window == 0) throw InvariantError(name, "stability window must be positive");

    const LevelClass cls = level_class();
    const auto levels = listed_levels();
    for (const auto& l : levels)
        if (l->level_class() != cls) throw InvariantError(l->name(), "level automata of mixed classes");
    if (mode.kind == ModeKind::finite_state) {
        const auto* p = std::get_if<PeriodicSchedule>(&schedule);
        if (cls != LevelClass::fa || !p || p->levels.size() != 1)
            throw DomainError("finite-state mode needs a single periodic finite-automaton level ('" + name + "')");
    }
    for (const auto& [level_name, states] : route_back) {
        auto it = std::find_if(levels.begin(), levels.end(), [&](const LevelPtr& l) { return l->name() == level_name; });
        if (it == levels.end()) throw InvariantError(level_name, "route-back names a level not in the schedule");
    }
    if (const auto* a = std::get_if<AcceptedBy>(&search)) {
        if (!a->acceptor) throw InvariantError(name, "search acceptor missing");
        if (!population_alphabet().is_subset_of(a->acceptor->input_alphabet))
            throw InvariantError(a->acceptor->name, "search acceptor is not over the population alphabet");
    }
    if (const auto* f = std::get_if<FitnessAtLeast>(&search); f && !f->fitness)
        throw InvariantError(f->function, "fitness function not bound");
}

}  // namespace evm
