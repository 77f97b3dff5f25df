#include <algorithm>
#include <map>
#include <set>

#include "evm/constructions.hpp"
#include "evm/errors.hpp"

namespace evm {

// ---- Turing machine to cellular automaton --------------------------------------------------

namespace {

std::size_t state_index(const TuringMachine& tm, const StateId& q) {
    return static_cast<std::size_t>(std::find(tm.states.begin(), tm.states.end(), q) - tm.states.begin());
}

}  // namespace

TmCellular tm_to_ca(const TuringMachine& tm, const std::string& name) {
    tm.validate();
    const auto& gamma = tm.tape_alphabet.symbols();
    std::vector<Symbol> cells = gamma;
    std::set<std::string> taken(gamma.begin(), gamma.end());
    std::vector<std::vector<std::size_t>> head(tm.states.size(), std::vector<std::size_t>(gamma.size()));
    for (std::size_t q = 0; q < tm.states.size(); ++q)
        for (std::size_t a = 0; a < gamma.size(); ++a) {
            Symbol cell = fresh_name("[" + tm.states[q] + "|" + gamma[a] + "]", taken);
            taken.insert(cell);
            head[q][a] = cells.size();
            cells.push_back(std::move(cell));
        }

    std::vector<CaRule> rules;
    for (const auto& [key, act] : tm.transitions) {
        const std::size_t q = state_index(tm, key.first);
        const std::size_t a = *tm.tape_alphabet.index_of(key.second);
        const std::size_t q2 = state_index(tm, act.target);
        const std::size_t b = *tm.tape_alphabet.index_of(act.write);
        const std::size_t h = head[q][a];
        rules.push_back(CaRule{{std::nullopt, h, std::nullopt}, act.move == Move::stay ? head[q2][b] : b});
        if (act.move == Move::stay) continue;
        for (std::size_t c = 0; c < gamma.size(); ++c) {
            if (act.move == Move::right)
                rules.push_back(CaRule{{h, c, std::nullopt}, head[q2][c]});
            else
                rules.push_back(CaRule{{std::nullopt, c, h}, head[q2][c]});
        }
    }
    CellularAutomaton1D ca(name.empty() ? tm.name + ".ca" : name, Alphabet(std::move(cells)), 1, tm.blank,
                           std::move(rules), std::nullopt);
    return TmCellular{tm, std::move(ca), std::move(head)};
}

CaConfiguration TmCellular::encode(const Word& tape) const {
    CaConfiguration c;
    const std::size_t q0 = state_index(tm, tm.start);
    const Symbol& first = tape.empty() ? tm.blank : tape.front();
    c.cells.push_back(head_cell[q0][*tm.tape_alphabet.index_of(first)]);
    for (std::size_t i = 1; i < tape.size(); ++i) c.cells.push_back(*tm.tape_alphabet.index_of(tape[i]));
    return canonical(std::move(c), ca.quiescent());
}

Symbol TmCellular::tape_symbol(std::size_t cell) const {
    const std::size_t gamma = tm.tape_alphabet.size();
    if (cell < gamma) return tm.tape_alphabet[cell];
    return tm.tape_alphabet[(cell - gamma) % gamma];
}

std::optional<std::pair<StateId, long long>> TmCellular::head(const CaConfiguration& c) const {
    const std::size_t gamma = tm.tape_alphabet.size();
    std::optional<std::pair<StateId, long long>> found;
    for (std::size_t i = 0; i < c.cells.size(); ++i) {
        if (c.cells[i] < gamma) continue;
        if (found) return std::nullopt;
        found.emplace(tm.states[(c.cells[i] - gamma) / gamma], c.offset + static_cast<long long>(i));
    }
    return found;
}

// ---- periodic machine to Turing machine -----------------------------------------------------
//
// Tape:  (x|c)* L w R  with the head on L in state G<p> at every generation boundary.
// Consumed input cells become x; output is appended after R. At the end of the input the
// old R becomes the new L, the old L becomes filler and one filler slot flips between x and
// c to count the cursor (c cells = cursor value). Decoding reads the word between L and R.

namespace {

struct Builder {
    TuringMachine tm;
    std::set<std::string> taken;

    StateId state(const std::string& base) {
        auto it = names.find(base);
        if (it != names.end()) return it->second;
        StateId s = fresh_name(base, taken);
        taken.insert(s);
        tm.states.push_back(s);
        names.emplace(base, s);
        return s;
    }
    void on(const StateId& q, const Symbol& a, const StateId& to, const Symbol& write, Move m) {
        tm.transitions[{q, a}] = TmAction{to, write, m};
    }

    std::map<std::string, StateId> names;
};

}  // namespace

EfaCellular periodic_efa_to_ca(const EvolutionaryMachine& e, std::optional<std::size_t> expansion_bound) {
    const auto* p = std::get_if<PeriodicSchedule>(&e.schedule);
    if (!p) throw DomainError("periodic_efa_to_ca: machine '" + e.name + "' does not have a periodic schedule");
    std::vector<const FiniteTransducer*> ts;
    Alphabet sigma;
    std::size_t bound = 0;
    for (const auto& l : p->levels) {
        const auto* t = l->as<FiniteTransducer>();
        if (!t) throw DomainError("periodic_efa_to_ca: level '" + l->name() + "' is not a finite transducer");
        ts.push_back(t);
        sigma = sigma.merged(t->input_alphabet).merged(t->output_alphabet);
        bound = std::max(bound, t->max_output_length());
        if (expansion_bound && t->max_output_length() > *expansion_bound)
            throw DomainError("periodic_efa_to_ca: level '" + l->name() + "' emits up to " +
                              std::to_string(t->max_output_length()) + " symbols per cell, above the bound " +
                              std::to_string(*expansion_bound));
    }
    if (expansion_bound) bound = *expansion_bound;
    const std::size_t k = ts.size();

    Builder b;
    b.taken.insert(sigma.symbols().begin(), sigma.symbols().end());
    auto marker = [&](const std::string& base) {
        Symbol m = fresh_name(base, b.taken);
        b.taken.insert(m);
        return m;
    };
    const Symbol L = marker("L"), R = marker("R"), X = marker("x"), C = marker("c"), blank = marker("_");
    std::vector<Symbol> gamma = sigma.symbols();
    for (const auto& s : {L, R, X, C, blank}) gamma.push_back(s);
    b.tm.name = e.name + ".tm";
    b.tm.input_alphabet = Alphabet(std::vector<Symbol>{L, R}).merged(sigma);
    b.tm.tape_alphabet = Alphabet(gamma);
    b.tm.blank = blank;

    const auto& syms = sigma.symbols();
    auto ph = [](std::size_t i) { return std::to_string(i); };
    std::vector<StateId> boundary;
    for (std::size_t i = 0; i < k; ++i) boundary.push_back(b.state("G" + ph(i)));
    b.tm.start = boundary[0];

    for (std::size_t i = 0; i < k; ++i) {
        const FiniteTransducer& t = *ts[i];
        const std::string tag = ph(i) + "." ;
        auto A = [&](const StateId& q) { return b.state("A" + tag + q); };
        auto Bk = [&](const StateId& q) { return b.state("B" + tag + q); };
        b.on(boundary[i], L, A(t.start), L, Move::right);
        for (const auto& q : t.states) {
            // Return left to the last consumed cell, then resume at the next input cell.
            for (const auto& s : syms) b.on(Bk(q), s, Bk(q), s, Move::left);
            b.on(Bk(q), R, Bk(q), R, Move::left);
            b.on(Bk(q), X, A(q), X, Move::right);
            b.on(Bk(q), L, A(q), L, Move::right);

            for (const auto& a : syms) {
                const TransducerEdge* edge = t.edge(q, a);
                if (!edge) continue;  // undefined level: the machine halts here
                const Word& out = edge->output;
                if (out.empty()) {
                    b.on(A(q), a, A(edge->target), X, Move::right);
                    continue;
                }
                // W(j) walks to the blank and writes out[j..].
                std::vector<StateId> w;
                for (std::size_t j = 0; j < out.size(); ++j)
                    w.push_back(b.state("W" + tag + q + "." + a + "." + std::to_string(j)));
                b.on(A(q), a, w[0], X, Move::right);
                for (std::size_t j = 0; j < out.size(); ++j) {
                    if (j == 0) {
                        for (const auto& s : syms) b.on(w[0], s, w[0], s, Move::right);
                        b.on(w[0], R, w[0], R, Move::right);
                    }
                    const bool last = j + 1 == out.size();
                    b.on(w[j], blank, last ? Bk(edge->target) : w[j + 1], out[j], last ? Move::left : Move::right);
                }
            }

            // End of input: R becomes the new L; append R; retire the old L.
            const bool back = e.route_back_for(t.name).count(q) != 0;
            const std::string dir = back ? "b" : "f";
            const StateId e1 = b.state("E1." + ph(i) + dir), e2 = b.state("E2." + ph(i) + dir),
                          e3 = b.state("E3." + ph(i) + dir), kc = b.state("K." + ph(i) + dir);
            b.on(A(q), R, e1, L, Move::right);
            if (b.tm.transitions.count({e1, blank})) continue;
            for (const auto& s : syms) b.on(e1, s, e1, s, Move::right);
            b.on(e1, blank, e2, R, Move::left);
            for (const auto& s : syms) b.on(e2, s, e2, s, Move::left);
            b.on(e2, L, e3, L, Move::left);
            b.on(e3, X, e3, X, Move::left);
            b.on(e3, L, kc, X, Move::left);
            const std::size_t next = back ? (i + k - 1) % k : (i + 1) % k;
            const StateId ret = b.state("T" + ph(next)), ret0 = b.state("T0");
            if (!back) {
                b.on(kc, C, kc, C, Move::left);
                b.on(kc, X, ret, C, Move::right);
                b.on(kc, blank, ret, C, Move::right);
            } else {
                b.on(kc, X, kc, X, Move::left);
                b.on(kc, C, ret, X, Move::right);
                b.on(kc, blank, ret0, blank, Move::right);  // cursor already at 0
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        const StateId ret = b.state("T" + ph(i));
        b.on(ret, X, ret, X, Move::right);
        b.on(ret, C, ret, C, Move::right);
        b.on(ret, L, boundary[i], L, Move::stay);
    }
    b.tm.validate();

    EfaCellular out{tm_to_ca(b.tm, e.name + ".ca"), sigma, L, R, boundary, bound, k};
    return out;
}

CaConfiguration EfaCellular::encode(const Word& w) const {
    require_word_over(population, w, "population");
    Word tape{left_end};
    tape.insert(tape.end(), w.begin(), w.end());
    tape.push_back(right_end);
    return sim.encode(tape);
}

std::optional<Word> EfaCellular::decode(const CaConfiguration& c) const {
    auto h = sim.head(c);
    if (!h || std::find(boundary.begin(), boundary.end(), h->first) == boundary.end()) return std::nullopt;
    Word w;
    for (long long pos = h->second + 1;; ++pos) {
        const Symbol s = sim.tape_symbol(cell_at(c, pos, sim.ca.quiescent()));
        if (s == right_end) break;
        if (!population.contains(s)) return std::nullopt;
        w.push_back(s);
    }
    return w;
}

std::size_t EfaCellular::steps_per_generation(std::size_t support) const {
    // Every scan stays inside the support plus the output appended this generation.
    const std::size_t m = (expansion_bound + 1) * support + 4;
    return support * (2 * m + expansion_bound + 3) + 4 * m + 10;
}

std::vector<Word> EfaCellular::generations(const Word& w0, std::size_t n) const {
    std::vector<Word> out;
    CaConfiguration c = encode(w0);
    while (out.size() < n) {
        const std::size_t limit = steps_per_generation(c.cells.size());
        std::optional<Word> w;
        for (std::size_t s = 0; s < limit && !w; ++s) {
            CaConfiguration next = ca_step(sim.ca, c);
            if (next == c) return out;  // halted: the level was undefined
            c = std::move(next);
            w = decode(c);
        }
        if (!w) return out;
        out.push_back(std::move(*w));
    }
    return out;
}

}  // namespace evm
