#include "evm/constructions.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "evm/errors.hpp"

namespace evm {

std::size_t Selector::classify(const Word& u) const {
    for (std::size_t i = 0; i < acceptors.size(); ++i)
        if (acceptors[i]->input_alphabet.contains_all(u) && fa_accepts(*acceptors[i], u)) return i;
    return acceptors.size();
}

namespace {

enum class Residual { empty, universal, mixed };

/// Language of `a` read from state `s` (nullopt = dead), over `alphabet`.
Residual residual(const FiniteTransducer& a, const std::optional<StateId>& s, const Alphabet& alphabet) {
    if (!s) return Residual::empty;
    std::set<StateId> seen{*s};
    std::deque<StateId> todo{*s};
    bool any_accepting = false, all_accepting = true, complete = true;
    while (!todo.empty()) {
        StateId q = todo.front();
        todo.pop_front();
        if (a.is_accepting(q)) any_accepting = true;
        else all_accepting = false;
        for (const auto& sym : alphabet.symbols()) {
            const TransducerEdge* e = a.edge(q, sym);
            if (!e) {
                complete = false;
                continue;
            }
            if (seen.insert(e->target).second) todo.push_back(e->target);
        }
    }
    if (!any_accepting) return Residual::empty;
    if (all_accepting && complete) return Residual::universal;
    return Residual::mixed;
}

std::optional<StateId> after(const FiniteTransducer& a, const Word& prefix) {
    StateId q = a.start;
    for (const auto& sym : prefix) {
        const TransducerEdge* e = a.edge(q, sym);
        if (!e) return std::nullopt;
        q = e->target;
    }
    return q;
}

/// Class shared by every word that starts with `prefix`, if there is one.
std::optional<std::size_t> prefix_class(const Selector& sel, const Word& prefix, const Alphabet& alphabet) {
    for (std::size_t i = 0; i < sel.acceptors.size(); ++i) {
        const auto& a = *sel.acceptors[i];
        auto q = a.input_alphabet.contains_all(prefix) ? after(a, prefix) : std::nullopt;
        const Residual r = residual(a, q, alphabet);
        if (r == Residual::mixed) return std::nullopt;
        if (r == Residual::universal) return i;
    }
    return sel.acceptors.size();
}

void require_common_alphabet(const std::vector<LevelPtr>& levels, const Selector& sel) {
    const Alphabet& sigma = levels.front()->input_alphabet();
    for (const auto& l : levels)
        if (!l->input_alphabet().same_symbols(sigma))
            throw DomainError("p_compose: input alphabet of '" + l->name() + "' differs from '" +
                              levels.front()->name() + "'");
    for (const auto& a : sel.acceptors)
        if (!sigma.is_subset_of(a->input_alphabet))
            throw DomainError("p_compose: selector '" + a->name + "' does not cover the input alphabet");
}

LevelPtr compose_transducers(const std::vector<const FiniteTransducer*>& ts, const Selector& sel,
                             const std::string& name) {
    const Alphabet& sigma = ts.front()->input_alphabet;
    FiniteTransducer d;
    d.name = name;
    d.input_alphabet = sigma;
    d.output_alphabet = ts.front()->output_alphabet;
    d.acceptor = true;
    for (const auto* t : ts) {
        d.output_alphabet = d.output_alphabet.merged(t->output_alphabet);
        d.acceptor = d.acceptor && t->acceptor;
    }
    auto pair_name = [](std::size_t i, const StateId& q) { return std::to_string(i) + "." + q; };
    std::set<std::string> taken;
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (const auto& q : ts[i]->states) taken.insert(pair_name(i, q));
    d.start = fresh_name("start", taken);
    d.states.push_back(d.start);
    const std::size_t eps_class = sel.classify({});
    if (ts[eps_class]->is_accepting(ts[eps_class]->start)) d.accepting.insert(d.start);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (const auto& q : ts[i]->states) {
            d.states.push_back(pair_name(i, q));
            if (ts[i]->is_accepting(q)) d.accepting.insert(pair_name(i, q));
        }
        for (const auto& [key, e] : ts[i]->transitions)
            d.transitions[{pair_name(i, key.first), key.second}] = TransducerEdge{pair_name(i, e.target), e.output};
    }
    for (const auto& sym : sigma.symbols()) {
        const std::size_t c = *prefix_class(sel, {sym}, sigma);
        if (const TransducerEdge* e = ts[c]->edge(ts[c]->start, sym))
            d.transitions[{d.start, sym}] = TransducerEdge{pair_name(c, e->target), e->output};
    }
    d.validate();
    return make_level(std::move(d));
}

LevelPtr compose_turing(const std::vector<const TuringMachine*>& ms, const Selector& sel, const std::string& name) {
    const Symbol& blank = ms.front()->blank;
    for (const auto* m : ms)
        if (m->blank != blank) throw DomainError("p_compose: machines use different blank symbols");
    TuringMachine d;
    d.name = name;
    d.input_alphabet = ms.front()->input_alphabet;
    d.blank = blank;
    d.tape_alphabet = ms.front()->tape_alphabet;
    for (const auto* m : ms) d.tape_alphabet = d.tape_alphabet.merged(m->tape_alphabet);

    auto branch = [](std::size_t i, const StateId& q) { return "b" + std::to_string(i) + "." + q; };
    std::set<std::string> taken;
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (const auto& q : ms[i]->states) {
            taken.insert(branch(i, q));
            d.states.push_back(branch(i, q));
            if (ms[i]->accept.count(q)) d.accept.insert(branch(i, q));
            if (ms[i]->reject.count(q)) d.reject.insert(branch(i, q));
        }
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (const auto& [key, act] : ms[i]->transitions)
            d.transitions[{branch(i, key.first), key.second}] = TmAction{branch(i, act.target), act.write, act.move};

    // Rewind to the left end, then enter branch i.
    std::vector<StateId> rewind;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        StateId r = fresh_name("rewind" + std::to_string(i), taken);
        taken.insert(r);
        rewind.push_back(r);
        d.states.push_back(r);
        for (const auto& sym : d.input_alphabet.symbols()) d.transitions[{r, sym}] = TmAction{r, sym, Move::left};
        d.transitions[{r, blank}] = TmAction{branch(i, ms[i]->start), blank, Move::right};
    }

    // Sweep right, running every selector in lockstep.
    using Tuple = std::vector<std::optional<StateId>>;
    std::map<Tuple, StateId> sweep;
    std::deque<Tuple> todo;
    auto state_for = [&](const Tuple& t) {
        auto it = sweep.find(t);
        if (it != sweep.end()) return it->second;
        StateId s = fresh_name("sweep" + std::to_string(sweep.size()), taken);
        taken.insert(s);
        d.states.push_back(s);
        sweep.emplace(t, s);
        todo.push_back(t);
        return s;
    };
    Tuple init;
    for (const auto& a : sel.acceptors) init.emplace_back(a->start);
    d.start = state_for(init);
    while (!todo.empty()) {
        Tuple t = todo.front();
        todo.pop_front();
        const StateId s = sweep.at(t);
        std::size_t c = sel.acceptors.size();
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] && sel.acceptors[i]->is_accepting(*t[i])) {
                c = i;
                break;
            }
        d.transitions[{s, blank}] = TmAction{rewind[c], blank, Move::left};
        for (const auto& sym : d.input_alphabet.symbols()) {
            Tuple next;
            for (std::size_t i = 0; i < t.size(); ++i) {
                std::optional<StateId> r;
                if (t[i])
                    if (const TransducerEdge* e = sel.acceptors[i]->edge(*t[i], sym)) r = e->target;
                next.push_back(r);
            }
            d.transitions[{s, sym}] = TmAction{state_for(next), sym, Move::right};
        }
    }
    d.validate();
    return make_level(std::move(d));
}

}  // namespace

bool selector_prefix_decidable(const Selector& selector, const Alphabet& alphabet) {
    for (const auto& sym : alphabet.symbols())
        if (!prefix_class(selector, {sym}, alphabet)) return false;
    return true;
}

LevelPtr p_compose(const std::vector<LevelPtr>& levels, const Selector& selector, std::string name) {
    if (levels.empty()) throw DomainError("p_compose: no machines");
    if (levels.size() != selector.classes())
        throw DomainError("p_compose: " + std::to_string(levels.size()) + " machines but the selector has " +
                          std::to_string(selector.classes()) + " classes");
    if (name.empty()) {
        name = "par(";
        for (std::size_t i = 0; i < levels.size(); ++i) name += (i ? "," : "") + levels[i]->name();
        name += ")";
    }
    const LevelClass cls = levels.front()->level_class();
    for (const auto& l : levels)
        if (l->level_class() != cls)
            throw DomainError("p_compose: '" + l->name() + "' is " + to_string(l->level_class()) + ", expected " +
                              to_string(cls));
    require_common_alphabet(levels, selector);
    const Alphabet& sigma = levels.front()->input_alphabet();

    if (cls == LevelClass::fa) {
        std::vector<const FiniteTransducer*> ts;
        for (const auto& l : levels) ts.push_back(l->as<FiniteTransducer>());
        const bool plain = std::all_of(ts.begin(), ts.end(), [](const auto* t) { return t != nullptr; });
        if (plain && selector_prefix_decidable(selector, sigma)) return compose_transducers(ts, selector, name);
    } else if (cls == LevelClass::tm) {
        std::vector<const TuringMachine*> ms;
        for (const auto& l : levels) ms.push_back(l->as<TuringMachine>());
        if (std::all_of(ms.begin(), ms.end(), [](const auto* m) { return m != nullptr; }))
            return compose_turing(ms, selector, name);
    } else {
        throw DomainError("p_compose: inductive Turing machine levels are not supported");
    }

    Dispatch d;
    d.name = name;
    d.input_alphabet = sigma;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        d.rules.push_back(DispatchRule{selector.acceptors[i], DispatchTarget{levels[i], Signal::none}});
    d.otherwise = DispatchTarget{levels.back(), Signal::none};
    return make_level(std::move(d));
}

// ---- general to basic -------------------------------------------------------------------

Word BemConversion::encode(const Word& population) const {
    Word w = population;
    w.push_back(markers.front());
    return w;
}

std::optional<std::size_t> BemConversion::cursor(const Word& payload) const {
    if (payload.empty()) return std::nullopt;
    auto it = std::find(markers.begin(), markers.end(), payload.back());
    if (it == markers.end()) return std::nullopt;
    return static_cast<std::size_t>(it - markers.begin());
}

Word BemConversion::decode(const Word& payload) const {
    Word w;
    for (const auto& s : payload)
        if (std::find(markers.begin(), markers.end(), s) == markers.end()) w.push_back(s);
    return w;
}

namespace {

/// Acceptor for  sigma* marker  over sigma plus every marker.
FiniteTransducer ends_with(const std::string& name, const Alphabet& sigma, const Alphabet& full, const Symbol& marker) {
    FiniteTransducer a;
    a.name = name;
    a.acceptor = true;
    a.input_alphabet = full;
    a.output_alphabet = full;
    a.states = {"body", "end"};
    a.start = "body";
    a.accepting = {"end"};
    for (const auto& s : sigma.symbols()) a.transitions[{"body", s}] = TransducerEdge{"body", {}};
    a.transitions[{"body", marker}] = TransducerEdge{"end", {}};
    return a;
}

}  // namespace

BemConversion gem_to_bem(const EvolutionaryMachine& e, std::size_t horizon) {
    if (horizon == 0) throw DomainError("gem_to_bem: horizon must be positive");
    if (e.mode.kind != ModeKind::terminal)
        throw DomainError("gem_to_bem: machine '" + e.name + "' is in " + to_string(e.mode) + " mode, expected terminal");
    if (std::holds_alternative<FitnessAtLeast>(e.search))
        throw DomainError("gem_to_bem: fitness search conditions cannot be lifted to marked payloads");

    std::vector<const FiniteTransducer*> at;  // level at cursor c, or nullptr past the schedule
    Alphabet sigma;
    for (std::size_t c = 0; c < horizon; ++c) {
        LevelPtr l = schedule_level(e.schedule, c);
        if (!l) {
            at.push_back(nullptr);
            continue;
        }
        const auto* t = l->as<FiniteTransducer>();
        if (!t) throw DomainError("gem_to_bem: level '" + l->name() + "' is not a finite transducer");
        at.push_back(t);
        sigma = sigma.merged(t->input_alphabet).merged(t->output_alphabet);
    }
    if (const auto* a = std::get_if<AcceptedBy>(&e.search)) sigma = sigma.merged(a->acceptor->input_alphabet);

    BemConversion out;
    out.horizon = horizon;
    std::set<std::string> taken(sigma.symbols().begin(), sigma.symbols().end());
    for (std::size_t c = 0; c <= horizon; ++c) {
        Symbol m = fresh_name("@" + std::to_string(c), taken);
        taken.insert(m);
        out.markers.push_back(m);
    }
    std::vector<Symbol> all = sigma.symbols();
    all.insert(all.end(), out.markers.begin(), out.markers.end());
    const Alphabet full(all);

    Dispatch d;
    d.name = e.name + ".cursor";
    d.input_alphabet = full;
    for (std::size_t c = 0; c < horizon; ++c) {
        FiniteTransducer sel = ends_with(e.name + ".at" + std::to_string(c), sigma, full, out.markers[c]);
        DispatchTarget target{nullptr, Signal::schedule_end};
        if (at[c]) {
            FiniteTransducer b = *at[c];
            b.name = e.name + ".c" + std::to_string(c) + "." + at[c]->name;
            b.acceptor = false;
            b.input_alphabet = b.input_alphabet.merged(Alphabet(std::vector<Symbol>{out.markers[c]}));
            b.output_alphabet = full;
            std::set<std::string> states(b.states.begin(), b.states.end());
            const StateId done = fresh_name("marked", states);
            b.states.push_back(done);
            const auto& back = e.route_back_for(at[c]->name);
            for (const auto& q : at[c]->states) {
                const std::size_t next = back.count(q) ? (c == 0 ? 0 : c - 1) : c + 1;
                b.transitions[{q, out.markers[c]}] = TransducerEdge{done, {out.markers[next]}};
            }
            b.accepting = {done};
            b.validate();
            target.level = make_level(std::move(b));
            target.signal = Signal::none;
        }
        d.rules.push_back(DispatchRule{std::make_shared<const FiniteTransducer>(std::move(sel)), target});
    }
    d.otherwise = DispatchTarget{nullptr, Signal::budget};

    EvolutionaryMachine& b = out.machine;
    b.name = e.name + ".basic";
    b.flavor = Flavor::basic;
    b.schedule = PeriodicSchedule{{make_level(std::move(d))}};
    b.mode = e.mode;
    b.budgets = e.budgets;
    if (const auto* a = std::get_if<AcceptedBy>(&e.search)) {
        FiniteTransducer lifted = *a->acceptor;
        lifted.name = a->acceptor->name + ".marked";
        lifted.input_alphabet = full;
        lifted.output_alphabet = full;
        std::set<std::string> states(lifted.states.begin(), lifted.states.end());
        const StateId done = fresh_name("marked", states);
        lifted.states.push_back(done);
        for (const auto& q : a->acceptor->accepting)
            for (const auto& m : out.markers) lifted.transitions[{q, m}] = TransducerEdge{done, {}};
        lifted.accepting = {done};
        lifted.acceptor = true;
        for (auto& [key, edge] : lifted.transitions) edge.output.clear();
        lifted.validate();
        b.search = AcceptedBy{std::make_shared<const FiniteTransducer>(std::move(lifted))};
    } else {
        b.search = Never{};
    }
    b.validate();
    return out;
}

// ---- collapse and flatten ------------------------------------------------------------------

namespace {

std::vector<const FiniteTransducer*> transducer_levels(const std::vector<LevelPtr>& levels, const std::string& op) {
    std::vector<const FiniteTransducer*> out;
    for (const auto& l : levels) {
        const auto* t = l->as<FiniteTransducer>();
        if (!t) throw DomainError(op + ": level '" + l->name() + "' is not a finite transducer");
        out.push_back(t);
    }
    return out;
}

FiniteTransducer fold(const std::vector<const FiniteTransducer*>& ts) {
    FiniteTransducer acc = *ts.front();
    for (std::size_t i = 1; i < ts.size(); ++i) acc = transducer_compose(acc, *ts[i]);
    return acc;
}

void require_no_routing(const EvolutionaryMachine& e, const std::string& op) {
    for (const auto& [level, states] : e.route_back)
        if (!states.empty()) throw DomainError(op + ": machine '" + e.name + "' routes backward from '" + level + "'");
}

}  // namespace

EvolutionaryMachine collapse_periodic(const EvolutionaryMachine& e) {
    const auto* p = std::get_if<PeriodicSchedule>(&e.schedule);
    if (!p) throw DomainError("collapse_periodic: machine '" + e.name + "' does not have a periodic schedule");
    const auto ts = transducer_levels(p->levels, "collapse_periodic");
    if (ts.size() == 1) return e;
    require_no_routing(e, "collapse_periodic");
    const std::size_t k = ts.size();
    FiniteTransducer one = fold(ts);
    one.name = e.name + ".period";
    one.validate();
    EvolutionaryMachine c = e;
    c.name = e.name + ".collapsed";
    c.schedule = PeriodicSchedule{{make_level(std::move(one))}};
    c.route_back.clear();
    c.budgets.max_generations = (e.budgets.max_generations + k - 1) / k;
    if (c.mode.kind == ModeKind::bounded) c.mode.limit = (e.mode.limit + k - 1) / k;
    return c;
}

FiniteTransducer flatten_bounded_efa(const EvolutionaryMachine& e) {
    const auto* x = std::get_if<ExplicitSchedule>(&e.schedule);
    if (!x) throw DomainError("flatten_bounded_efa: machine '" + e.name + "' does not have an explicit schedule");
    if (x->levels.empty()) throw DomainError("flatten_bounded_efa: machine '" + e.name + "' has no levels");
    if (!std::holds_alternative<Never>(e.search))
        throw DomainError("flatten_bounded_efa: machine '" + e.name + "' has a search condition; expected 'never'");
    require_no_routing(e, "flatten_bounded_efa");
    const auto ts = transducer_levels(x->levels, "flatten_bounded_efa");
    if (ts.size() == 1) return *ts.front();
    FiniteTransducer flat = fold(ts);
    flat.name = e.name + ".flat";
    flat.validate();
    return flat;
}

}  // namespace evm
