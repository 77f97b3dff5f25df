#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "evm/automata.hpp"
#include "evm/errors.hpp"

namespace evm {

namespace {

void check_states(const std::vector<StateId>& states, const std::string& owner) {
    std::set<StateId> seen;
    if (states.empty()) throw InvariantError(owner, "automaton declares no states");
    for (const auto& s : states) {
        if (!is_valid_symbol(s)) throw InvariantError(s, "invalid state name");
        if (!seen.insert(s).second) throw InvariantError(s, "duplicate state");
    }
}

bool contains(const std::vector<StateId>& states, const StateId& s) {
    return std::find(states.begin(), states.end(), s) != states.end();
}

std::string subset_name(const std::set<StateId>& subset) {
    std::string name = "{";
    bool first = true;
    for (const auto& s : subset) {
        if (!first) name += ',';
        name += s;
        first = false;
    }
    return name + "}";
}

}  // namespace

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (std::size_t i = 1;; ++i) {
        std::string candidate = base + "~" + std::to_string(i);
        if (!taken.count(candidate)) return candidate;
    }
}

// ---- FiniteTransducer ------------------------------------------------------------

bool FiniteTransducer::has_state(const StateId& s) const { return contains(states, s); }

const TransducerEdge* FiniteTransducer::edge(const StateId& state, const Symbol& symbol) const {
    auto it = transitions.find({state, symbol});
    return it == transitions.end() ? nullptr : &it->second;
}

bool FiniteTransducer::letter_to_letter() const {
    return std::all_of(transitions.begin(), transitions.end(),
                       [](const auto& kv) { return kv.second.output.size() == 1; });
}

std::size_t FiniteTransducer::max_output_length() const {
    std::size_t best = 0;
    for (const auto& [key, e] : transitions) best = std::max(best, e.output.size());
    return best;
}

void FiniteTransducer::validate() const {
    check_states(states, name);
    if (input_alphabet.empty()) throw InvariantError(name, "missing input alphabet");
    if (output_alphabet.empty()) throw InvariantError(name, "missing output alphabet");
    if (!has_state(start)) throw InvariantError(start, "start state is not declared");
    for (const auto& s : accepting)
        if (!has_state(s)) throw InvariantError(s, "accepting state is not declared");
    for (const auto& [key, e] : transitions) {
        if (!has_state(key.first)) throw InvariantError(key.first, "transition from undeclared state");
        if (!input_alphabet.contains(key.second))
            throw InvariantError(key.second, "transition on symbol outside the input alphabet");
        if (!has_state(e.target)) throw InvariantError(e.target, "transition to undeclared state");
        for (const auto& o : e.output)
            if (!output_alphabet.contains(o))
                throw InvariantError(o, "emitted symbol outside the output alphabet");
        if (acceptor && !e.output.empty())
            throw InvariantError(name, "acceptor transitions must not emit");
    }
}

Transduction run_transducer(const FiniteTransducer& t, const Word& w) {
    Transduction r;
    StateId state = t.start;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const TransducerEdge* e = t.edge(state, w[i]);
        if (!e) {
            r.defined = false;
            r.stuck_at = i;
            r.final_state = state;
            r.steps = i;
            return r;
        }
        r.output.insert(r.output.end(), e->output.begin(), e->output.end());
        state = e->target;
    }
    r.final_state = state;
    r.steps = w.size();
    return r;
}

bool fa_accepts(const FiniteTransducer& machine, const Word& w) {
    require_word_over(machine.input_alphabet, w, machine.name);
    Transduction r = run_transducer(machine, w);
    return r.defined && machine.is_accepting(r.final_state);
}

Word fa_transduce(const FiniteTransducer& t, const Word& w) {
    require_word_over(t.input_alphabet, w, t.name);
    Transduction r = run_transducer(t, w);
    if (!r.defined) throw UndefinedTransition(r.final_state, w[r.stuck_at], r.stuck_at);
    return std::move(r.output);
}

// ---- Nfa -------------------------------------------------------------------------

bool Nfa::has_state(const StateId& s) const { return contains(states, s); }

void Nfa::validate() const {
    check_states(states, name);
    if (alphabet.empty()) throw InvariantError(name, "missing alphabet");
    if (start.empty()) throw InvariantError(name, "NFA needs at least one start state");
    for (const auto& s : start)
        if (!has_state(s)) throw InvariantError(s, "start state is not declared");
    for (const auto& s : accepting)
        if (!has_state(s)) throw InvariantError(s, "accepting state is not declared");
    for (const auto& [key, targets] : transitions) {
        if (!has_state(key.first)) throw InvariantError(key.first, "transition from undeclared state");
        if (!alphabet.contains(key.second))
            throw InvariantError(key.second, "transition on symbol outside the alphabet");
        for (const auto& t : targets)
            if (!has_state(t)) throw InvariantError(t, "transition to undeclared state");
    }
}

bool fa_accepts(const Nfa& machine, const Word& w) {
    require_word_over(machine.alphabet, w, machine.name);
    std::set<StateId> current(machine.start.begin(), machine.start.end());
    for (const auto& sym : w) {
        std::set<StateId> next;
        for (const auto& s : current) {
            auto it = machine.transitions.find({s, sym});
            if (it != machine.transitions.end()) next.insert(it->second.begin(), it->second.end());
        }
        current = std::move(next);
        if (current.empty()) return false;
    }
    return std::any_of(current.begin(), current.end(),
                       [&machine](const StateId& s) { return machine.accepting.count(s) != 0; });
}

FiniteTransducer nfa_to_dfa(const Nfa& n) {
    FiniteTransducer d;
    d.name = n.name + ".det";
    d.input_alphabet = n.alphabet;
    d.output_alphabet = n.alphabet;
    d.acceptor = true;

    std::map<std::set<StateId>, StateId> names;
    std::deque<std::set<StateId>> queue;
    auto intern = [&](const std::set<StateId>& subset) -> const StateId& {
        auto it = names.find(subset);
        if (it != names.end()) return it->second;
        StateId name = subset_name(subset);
        d.states.push_back(name);
        if (std::any_of(subset.begin(), subset.end(),
                        [&n](const StateId& s) { return n.accepting.count(s) != 0; }))
            d.accepting.insert(name);
        queue.push_back(subset);
        return names.emplace(subset, name).first->second;
    };

    d.start = intern(std::set<StateId>(n.start.begin(), n.start.end()));
    while (!queue.empty()) {
        std::set<StateId> subset = queue.front();
        queue.pop_front();
        const StateId from = names.at(subset);
        for (const auto& sym : n.alphabet.symbols()) {
            std::set<StateId> next;
            for (const auto& s : subset) {
                auto it = n.transitions.find({s, sym});
                if (it != n.transitions.end()) next.insert(it->second.begin(), it->second.end());
            }
            if (next.empty()) continue;
            const StateId to = intern(next);
            d.transitions[{from, sym}] = TransducerEdge{to, {}};
        }
    }
    return d;
}

FiniteTransducer transducer_compose(const FiniteTransducer& t1, const FiniteTransducer& t2) {
    if (!t1.output_alphabet.is_subset_of(t2.input_alphabet))
        throw AlphabetError("cannot compose '" + t1.name + "' into '" + t2.name +
                            "': output alphabet is not contained in the next input alphabet");
    FiniteTransducer c;
    c.name = t1.name + "+" + t2.name;
    c.input_alphabet = t1.input_alphabet;
    c.output_alphabet = t2.output_alphabet;
    c.acceptor = t1.acceptor && t2.acceptor;

    using Pair = std::pair<StateId, StateId>;
    std::map<Pair, StateId> names;
    std::set<std::string> taken;
    std::deque<Pair> queue;
    auto intern = [&](const Pair& p) -> StateId {
        auto it = names.find(p);
        if (it != names.end()) return it->second;
        StateId name = fresh_name(p.first + "." + p.second, taken);
        taken.insert(name);
        c.states.push_back(name);
        if (t1.is_accepting(p.first) && t2.is_accepting(p.second)) c.accepting.insert(name);
        names.emplace(p, name);
        queue.push_back(p);
        return name;
    };

    c.start = intern({t1.start, t2.start});
    while (!queue.empty()) {
        Pair p = queue.front();
        queue.pop_front();
        const StateId from = names.at(p);
        for (const auto& sym : t1.input_alphabet.symbols()) {
            const TransducerEdge* e1 = t1.edge(p.first, sym);
            if (!e1) continue;
            StateId s2 = p.second;
            Word out;
            bool ok = true;
            for (const auto& mid : e1->output) {
                const TransducerEdge* e2 = t2.edge(s2, mid);
                if (!e2) {
                    ok = false;
                    break;
                }
                out.insert(out.end(), e2->output.begin(), e2->output.end());
                s2 = e2->target;
            }
            if (!ok) continue;
            const StateId to = intern({e1->target, s2});
            c.transitions[{from, sym}] = TransducerEdge{to, std::move(out)};
        }
    }
    return c;
}

DfaEquivalence dfa_equiv(const FiniteTransducer& a, const FiniteTransducer& b) {
    if (!a.input_alphabet.same_symbols(b.input_alphabet))
        throw AlphabetError("dfa_equiv: '" + a.name + "' and '" + b.name +
                            "' have different input alphabets");
    // An empty optional is the implicit dead state.
    using Node = std::pair<std::optional<StateId>, std::optional<StateId>>;
    auto accepting = [](const FiniteTransducer& m, const std::optional<StateId>& s) {
        return s && m.is_accepting(*s);
    };
    auto step = [](const FiniteTransducer& m, const std::optional<StateId>& s,
                   const Symbol& sym) -> std::optional<StateId> {
        if (!s) return std::nullopt;
        const TransducerEdge* e = m.edge(*s, sym);
        if (!e) return std::nullopt;
        return e->target;
    };

    std::map<Node, std::pair<Node, Symbol>> parent;
    std::set<Node> seen;
    std::deque<Node> queue;
    const Node origin{a.start, b.start};
    seen.insert(origin);
    queue.push_back(origin);
    while (!queue.empty()) {
        Node node = queue.front();
        queue.pop_front();
        if (accepting(a, node.first) != accepting(b, node.second)) {
            DfaEquivalence r;
            r.equivalent = false;
            for (Node cur = node; cur != origin;) {
                const auto& [prev, sym] = parent.at(cur);
                r.counterexample.push_back(sym);
                cur = prev;
            }
            std::reverse(r.counterexample.begin(), r.counterexample.end());
            return r;
        }
        for (const auto& sym : a.input_alphabet.symbols()) {
            Node next{step(a, node.first, sym), step(b, node.second, sym)};
            if (seen.insert(next).second) {
                parent.emplace(next, std::make_pair(node, sym));
                queue.push_back(next);
            }
        }
    }
    return {};
}

}  // namespace evm
