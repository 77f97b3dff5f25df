#include "evm/runtime.hpp"

#include <algorithm>
#include <sstream>

#include "evm/errors.hpp"
#include "json.hpp"

namespace evm {

namespace {

Direction route(const std::set<StateId>& route_back, const StateId& final_state) {
    return route_back.count(final_state) ? Direction::backward : Direction::forward;
}

LevelOutput foreign_input(const Level& level, const Generation& g) {
    LevelOutput out;
    out.status = LevelStatus::undefined;
    out.next = g;
    out.note = "input is not over the alphabet of " + level.name();
    return out;
}

}  // namespace

LevelOutput level_apply(const Level& level, const Generation& g, const Budgets& budgets,
                        const std::set<StateId>& route_back) {
    LevelOutput out;
    out.next.index = g.index + 1;

    if (const auto* fa = level.as<FiniteTransducer>()) {
        Transduction r = run_transducer(*fa, g.payload);
        out.steps = r.steps;
        out.final_state = r.final_state;
        if (!r.defined) {
            out.status = LevelStatus::undefined;
            out.next.payload = g.payload;
            out.note = "no transition from '" + r.final_state + "' on '" + g.payload[r.stuck_at] + "' at position " +
                       std::to_string(r.stuck_at) + " in " + fa->name;
            return out;
        }
        out.next.payload = std::move(r.output);
        out.direction = route(route_back, r.final_state);
        return out;
    }
    if (const auto* tm = level.as<TuringMachine>()) {
        if (!tm->input_alphabet.contains_all(g.payload)) return foreign_input(level, g);
        TmResult r = tm_run(*tm, g.payload, budgets.max_steps_per_level);
        out.steps = r.steps;
        out.final_state = r.final_state;
        if (!r.halted()) {
            out.status = LevelStatus::exhausted;
            out.next.payload = g.payload;
            out.note = tm->name + " exceeded " + std::to_string(budgets.max_steps_per_level) + " steps";
            return out;
        }
        out.next.payload = std::move(r.tape);
        out.direction = route(route_back, r.final_state);
        return out;
    }
    if (const auto* itm = level.as<InductiveTuringMachine>()) {
        if (!itm->machine.input_alphabet.contains_all(g.payload)) return foreign_input(level, g);
        ItmResult r = itm_run(*itm, g.payload, budgets.max_steps_per_level, budgets.stability_window);
        out.steps = r.steps;
        out.final_state = r.final_state;
        if (!r.stabilized()) {
            out.status = LevelStatus::exhausted;
            out.next.payload = g.payload;
            out.note = itm->name() + " did not stabilize within " + std::to_string(budgets.max_steps_per_level) + " steps";
            return out;
        }
        out.next.payload = std::move(r.output);
        out.direction = route(route_back, r.final_state);
        return out;
    }
    if (const auto* d = level.as<Dispatch>()) {
        if (!d->input_alphabet.contains_all(g.payload)) return foreign_input(level, g);
        const DispatchTarget& target = d->target_for(g.payload);
        if (target.signal != Signal::none || !target.level) {
            out.status = target.signal == Signal::schedule_end ? LevelStatus::schedule_end : LevelStatus::exhausted;
            out.next.payload = g.payload;
            out.note = d->name + (target.signal == Signal::schedule_end ? ": schedule end" : ": horizon exceeded");
            return out;
        }
        return level_apply(*target.level, g, budgets, route_back);
    }
    const auto& native = std::get<NativeLevel>(level.body);
    NativeStep step = native.apply(g.payload, g.index);
    out.next.payload = std::move(step.output);
    out.steps = step.steps;
    out.final_state = native.name;
    out.direction = step.route_back ? Direction::backward : Direction::forward;
    return out;
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::satisfied: return "satisfied";
        case Outcome::stabilized: return "stabilized";
        case Outcome::budget_exhausted: return "budget-exhausted";
        case Outcome::schedule_exhausted: return "schedule-exhausted";
        case Outcome::undefined: return "undefined";
    }
    return "?";
}

std::vector<Word> RunResult::generations(const Word& initial) const {
    std::vector<Word> out{initial};
    for (const auto& rec : trace.records) out.push_back(rec.output);
    return out;
}

bool check_search_condition(const SearchCondition& sc, const Generation& g) {
    if (std::holds_alternative<Never>(sc)) return false;
    if (const auto* a = std::get_if<AcceptedBy>(&sc)) {
        if (!a->acceptor->input_alphabet.contains_all(g.payload)) return false;
        return fa_accepts(*a->acceptor, g.payload);
    }
    const auto& f = std::get<FitnessAtLeast>(sc);
    const Population p = decode_population(g.payload);
    if (p.members.empty()) return false;
    Rational best = f.fitness(p.members.front());
    for (std::size_t i = 1; i < p.members.size(); ++i) best = std::max(best, f.fitness(p.members[i]));
    return best >= f.threshold;
}

std::optional<std::size_t> detect_stabilization(std::span<const Word> trace, std::size_t window) {
    if (window == 0) throw DomainError("stability window must be positive");
    std::size_t run_start = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i > 0 && trace[i] != trace[i - 1]) run_start = i;
        if (i - run_start >= window) return run_start;
    }
    return std::nullopt;
}

namespace {

RunResult execute(const EvolutionaryMachine& e, const Generation& g0, bool general) {
    e.validate();
    RunResult r;
    r.flavor = e.flavor;
    r.mode = e.mode;

    std::vector<Word> gens{g0.payload};
    std::size_t cursor = 0;
    std::size_t t = g0.index;
    const std::size_t t0 = g0.index;
    std::size_t stable_start = 0;

    auto finish = [&](Outcome o, std::size_t index, std::string note = {}) {
        r.outcome = o;
        r.result = Generation{gens[index - t0], index};
        r.note = std::move(note);
        if (e.mode.is_limit()) {
            const std::size_t n = std::min(gens.size(), e.budgets.stability_window + 1);
            r.limit_candidate = std::vector<Word>(gens.end() - static_cast<std::ptrdiff_t>(n), gens.end());
        }
        return r;
    };

    while (true) {
        const std::size_t applied = t - t0;
        if (e.mode.kind == ModeKind::bounded && applied >= e.mode.limit)
            return finish(Outcome::schedule_exhausted, t, "generation bound reached");
        if (applied >= e.budgets.max_generations) return finish(Outcome::budget_exhausted, t, "generation budget exhausted");
        LevelPtr level = schedule_level(e.schedule, cursor);
        if (!level) return finish(Outcome::schedule_exhausted, t, "no level at index " + std::to_string(cursor));

        LevelOutput out = level_apply(*level, Generation{gens.back(), t}, e.budgets, e.route_back_for(level->name()));
        switch (out.status) {
            case LevelStatus::ok: break;
            case LevelStatus::undefined: return finish(Outcome::undefined, t, out.note);
            case LevelStatus::exhausted: return finish(Outcome::budget_exhausted, t, out.note);
            case LevelStatus::schedule_end: return finish(Outcome::schedule_exhausted, t, out.note);
        }
        if (out.direction == Direction::backward && !general)
            throw DomainError("level '" + level->name() + "' routed backward in basic machine '" + e.name + "'");

        r.trace.records.push_back(TraceRecord{t, cursor, level->name(), out.direction, gens.back(), out.next.payload, out.steps});
        gens.push_back(std::move(out.next.payload));
        ++t;
        if (out.direction == Direction::forward)
            ++cursor;
        else if (cursor > 0)
            --cursor;

        if (check_search_condition(e.search, Generation{gens.back(), t})) return finish(Outcome::satisfied, t);
        if (e.mode.stabilizing()) {
            const std::size_t i = gens.size() - 1;
            if (i == 1 || gens[i] != gens[i - 1]) stable_start = i;
            if (i - stable_start >= e.budgets.stability_window)
                return finish(Outcome::stabilized, stable_start + t0);
        }
    }
}

}  // namespace

RunResult bem_run(const EvolutionaryMachine& e, const Generation& g0) {
    if (e.flavor != Flavor::basic) throw DomainError("bem_run needs a basic machine ('" + e.name + "')");
    if (e.mode.recursion_bearing())
        throw DomainError("mode '" + to_string(e.mode) + "' is not available to basic machines");
    return execute(e, g0, false);
}

RunResult gem_run(const EvolutionaryMachine& e, const Generation& g0) {
    if (e.flavor != Flavor::general) throw DomainError("gem_run needs a general machine ('" + e.name + "')");
    return execute(e, g0, true);
}

RunResult run_machine(const EvolutionaryMachine& e, const Generation& g0) {
    return e.flavor == Flavor::basic ? bem_run(e, g0) : gem_run(e, g0);
}

std::string format_run(const EvolutionaryMachine& e, const RunResult& r, TraceFormat format) {
    std::ostringstream os;
    auto dir = [](Direction d) { return d == Direction::forward ? "forward" : "backward"; };
    if (format == TraceFormat::text) {
        for (const auto& rec : r.trace.records)
            os << "record t=" << rec.t << " level=" << rec.level << " name=" << rec.name << " dir=" << dir(rec.direction) << " in=\""
               << format_word(rec.input) << "\" out=\"" << format_word(rec.output) << "\" steps=" << rec.steps << '\n';
        if (r.limit_candidate)
            for (std::size_t i = 0; i < r.limit_candidate->size(); ++i)
                os << "limit-candidate i=" << i << " gen=\"" << format_word((*r.limit_candidate)[i]) << "\"\n";
        os << "summary machine=" << e.name << " flavor=" << to_string(r.flavor) << " mode=\"" << to_string(r.mode)
           << "\" outcome=" << to_string(r.outcome) << " t=" << r.result.index << " result=\""
           << format_word(r.result.payload) << "\" applications=" << r.trace.records.size();
        if (!r.note.empty()) os << " note=\"" << r.note << '"';
        os << '\n';
        return os.str();
    }
    using nlohmann::ordered_json;
    for (const auto& rec : r.trace.records) {
        ordered_json j;
        j["type"] = "record";
        j["t"] = rec.t;
        j["level"] = rec.level;
        j["name"] = rec.name;
        j["dir"] = dir(rec.direction);
        j["in"] = format_word(rec.input);
        j["out"] = format_word(rec.output);
        j["steps"] = rec.steps;
        os << j.dump() << '\n';
    }
    if (r.limit_candidate)
        for (std::size_t i = 0; i < r.limit_candidate->size(); ++i) {
            ordered_json j;
            j["type"] = "limit-candidate";
            j["i"] = i;
            j["gen"] = format_word((*r.limit_candidate)[i]);
            os << j.dump() << '\n';
        }
    ordered_json s;
    s["type"] = "summary";
    s["machine"] = e.name;
    s["flavor"] = to_string(r.flavor);
    s["mode"] = to_string(r.mode);
    s["outcome"] = to_string(r.outcome);
    s["t"] = r.result.index;
    s["result"] = format_word(r.result.payload);
    s["applications"] = r.trace.records.size();
    if (!r.note.empty()) s["note"] = r.note;
    os << s.dump() << '\n';
    return os.str();
}

}  // namespace evm
