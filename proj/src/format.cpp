#include "evm/format.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "evm/errors.hpp"

namespace evm {

namespace {

struct Line {
    std::size_t number = 0;
    std::vector<std::string> tokens;
};

struct Block {
    bool is_machine = false;
    std::string kind;
    std::string name;
    std::size_t header_line = 0;
    std::vector<Line> lines;
};

std::vector<std::string> tokenize(std::string_view line) {
    // A '#' at the start of a token opens a comment.
    std::vector<std::string> out;
    for (auto& tok : parse_word(line)) {
        if (tok.front() == '#') break;
        out.push_back(std::move(tok));
    }
    return out;
}

std::vector<Block> split_blocks(std::string_view text) {
    std::vector<Block> blocks;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        auto tokens = tokenize(text.substr(pos, end - pos));
        pos = end + 1;
        if (tokens.empty()) continue;
        if (tokens[0] == "automaton") {
            if (tokens.size() != 3) throw ParseError(number, "expected 'automaton <kind> <name>'");
            blocks.push_back(Block{false, tokens[1], tokens[2], number, {}});
        } else if (tokens[0] == "machine") {
            if (tokens.size() != 2) throw ParseError(number, "expected 'machine <name>'");
            blocks.push_back(Block{true, "machine", tokens[1], number, {}});
        } else {
            if (blocks.empty()) throw ParseError(number, "directive '" + tokens[0] + "' outside of a block");
            blocks.back().lines.push_back(Line{number, std::move(tokens)});
        }
    }
    return blocks;
}

std::vector<std::string> rest(const Line& l, std::size_t from = 1) {
    return std::vector<std::string>(l.tokens.begin() + static_cast<std::ptrdiff_t>(std::min(from, l.tokens.size())),
                                    l.tokens.end());
}

Alphabet make_alphabet(const Line& l, std::vector<std::string> symbols) {
    try {
        return Alphabet(std::move(symbols));
    } catch (const AlphabetError& e) {
        throw ParseError(l.number, e.what());
    }
}

std::size_t parse_count(const Line& l, const std::string& token) {
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError(l.number, "expected a non-negative integer, got '" + token + "'");
    return std::stoull(token);
}

/// Splits `delta <state> <sym> -> ...` into its parts and returns the tokens after the arrow.
std::vector<std::string> delta_head(const Line& l, std::string& state, std::string& symbol) {
    if (l.tokens.size() < 4 || l.tokens[3] != "->") throw ParseError(l.number, "expected 'delta <state> <sym> -> ...'");
    state = l.tokens[1];
    symbol = l.tokens[2];
    return rest(l, 4);
}

[[noreturn]] void unknown(const Line& l, const Block& b) {
    throw ParseError(l.number, "unknown directive '" + l.tokens[0] + "' in " + b.kind + " '" + b.name + "'");
}

FiniteTransducer parse_transducer(const Block& b) {
    FiniteTransducer t;
    t.name = b.name;
    t.acceptor = b.kind == "dfa";
    bool have_output = false;
    bool have_start = false;
    for (const auto& l : b.lines) {
        const auto& d = l.tokens[0];
        if (d == "alphabet") {
            t.input_alphabet = make_alphabet(l, rest(l));
        } else if (d == "output-alphabet" && !t.acceptor) {
            t.output_alphabet = make_alphabet(l, rest(l));
            have_output = true;
        } else if (d == "states") {
            t.states = rest(l);
        } else if (d == "start") {
            if (l.tokens.size() != 2) throw ParseError(l.number, "expected exactly one start state");
            t.start = l.tokens[1];
            have_start = true;
        } else if (d == "accept") {
            for (auto& s : rest(l)) t.accepting.insert(s);
        } else if (d == "delta") {
            std::string state, symbol;
            auto tail = delta_head(l, state, symbol);
            if (tail.empty()) throw ParseError(l.number, "missing target state");
            TransducerEdge e{tail[0], {}};
            if (t.acceptor) {
                if (tail.size() != 1) throw ParseError(l.number, "dfa transitions take a single target and no output");
            } else {
                if (tail.size() < 2 || tail[1] != "emit") throw ParseError(l.number, "expected '-> <state> emit <sym>*'");
                e.output.assign(tail.begin() + 2, tail.end());
            }
            if (!t.transitions.emplace(std::make_pair(state, symbol), std::move(e)).second)
                throw ParseError(l.number, "duplicate transition for (" + state + ", " + symbol + ")");
        } else {
            unknown(l, b);
        }
    }
    if (t.input_alphabet.empty()) throw ParseError(b.header_line, "'" + b.name + "' declares no alphabet");
    if (!have_start) throw ParseError(b.header_line, "'" + b.name + "' declares no start state");
    if (!have_output) t.output_alphabet = t.input_alphabet;
    t.validate();
    return t;
}

Nfa parse_nfa(const Block& b) {
    Nfa n;
    n.name = b.name;
    for (const auto& l : b.lines) {
        const auto& d = l.tokens[0];
        if (d == "alphabet") {
            n.alphabet = make_alphabet(l, rest(l));
        } else if (d == "states") {
            n.states = rest(l);
        } else if (d == "start") {
            n.start = rest(l);
        } else if (d == "accept") {
            for (auto& s : rest(l)) n.accepting.insert(s);
        } else if (d == "delta") {
            std::string state, symbol;
            auto targets = delta_head(l, state, symbol);
            if (targets.empty()) throw ParseError(l.number, "missing target state");
            auto& slot = n.transitions[{state, symbol}];
            for (auto& t : targets)
                if (std::find(slot.begin(), slot.end(), t) == slot.end()) slot.push_back(t);
        } else {
            unknown(l, b);
        }
    }
    if (n.alphabet.empty()) throw ParseError(b.header_line, "'" + b.name + "' declares no alphabet");
    n.validate();
    return n;
}

Move parse_move(const Line& l, const std::string& token) {
    if (token == "L") return Move::left;
    if (token == "R") return Move::right;
    if (token == "S") return Move::stay;
    throw ParseError(l.number, "expected move L, R or S, got '" + token + "'");
}

InductiveTuringMachine parse_tm(const Block& b) {
    InductiveTuringMachine itm;
    TuringMachine& m = itm.machine;
    m.name = b.name;
    const bool inductive = b.kind == "itm";
    bool have_start = false;
    for (const auto& l : b.lines) {
        const auto& d = l.tokens[0];
        if (d == "alphabet") {
            m.input_alphabet = make_alphabet(l, rest(l));
        } else if (d == "tape-alphabet") {
            auto syms = rest(l);
            auto it = std::find(syms.begin(), syms.end(), "blank");
            if (it == syms.end() || std::next(it) == syms.end() || std::next(it, 2) != syms.end())
                throw ParseError(l.number, "expected 'tape-alphabet <sym>... blank <sym>'");
            m.blank = *std::next(it);
            syms.erase(it, syms.end());
            if (std::find(syms.begin(), syms.end(), m.blank) == syms.end()) syms.push_back(m.blank);
            m.tape_alphabet = make_alphabet(l, std::move(syms));
        } else if (d == "states") {
            m.states = rest(l);
        } else if (d == "start") {
            if (l.tokens.size() != 2) throw ParseError(l.number, "expected exactly one start state");
            m.start = l.tokens[1];
            have_start = true;
        } else if (d == "accept") {
            for (auto& s : rest(l)) m.accept.insert(s);
        } else if (d == "reject") {
            for (auto& s : rest(l)) m.reject.insert(s);
        } else if (d == "delta") {
            std::string state, symbol;
            auto tail = delta_head(l, state, symbol);
            if (tail.size() < 3) throw ParseError(l.number, "expected '-> <state> <sym> <L|R|S>'");
            TmAction act{tail[0], tail[1], parse_move(l, tail[2])};
            if (!m.transitions.emplace(std::make_pair(state, symbol), act).second)
                throw ParseError(l.number, "duplicate transition for (" + state + ", " + symbol + ")");
            if (tail.size() > 3) {
                if (!inductive || tail[3] != "out") throw ParseError(l.number, "unexpected tokens after the move");
                itm.appends[{state, symbol}] = Word(tail.begin() + 4, tail.end());
            }
        } else {
            unknown(l, b);
        }
    }
    if (m.input_alphabet.empty()) throw ParseError(b.header_line, "'" + b.name + "' declares no alphabet");
    if (m.tape_alphabet.empty()) throw ParseError(b.header_line, "'" + b.name + "' declares no tape alphabet");
    if (!have_start) throw ParseError(b.header_line, "'" + b.name + "' declares no start state");
    itm.validate();
    return itm;
}

CellularAutomaton1D parse_ca(const Block& b) {
    std::optional<Alphabet> cells;
    std::optional<std::size_t> radius;
    std::optional<std::string> quiescent;
    std::vector<std::pair<const Line*, std::vector<std::string>>> rule_lines;
    std::optional<std::string> default_sym;
    bool keep = false;
    for (const auto& l : b.lines) {
        const auto& d = l.tokens[0];
        if (d == "cells") {
            cells = make_alphabet(l, rest(l));
        } else if (d == "radius") {
            if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'radius <int>'");
            radius = parse_count(l, l.tokens[1]);
        } else if (d == "quiescent") {
            if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'quiescent <sym>'");
            quiescent = l.tokens[1];
        } else if (d == "rule") {
            rule_lines.emplace_back(&l, rest(l));
        } else if (d == "default") {
            if (l.tokens.size() == 2 && l.tokens[1] == "keep") {
                keep = true;
            } else if (l.tokens.size() == 3 && l.tokens[1] == "->") {
                default_sym = l.tokens[2];
            } else {
                throw ParseError(l.number, "expected 'default -> <sym>' or 'default keep'");
            }
        } else {
            unknown(l, b);
        }
    }
    if (!cells || !radius || !quiescent)
        throw ParseError(b.header_line, "cellular automaton '" + b.name + "' needs cells, radius and quiescent");
    const std::size_t width = 2 * *radius + 1;
    auto cell = [&](const Line& l, const std::string& s) {
        auto i = cells->index_of(s);
        if (!i) throw InvariantError(s, "rule uses a symbol outside the cell alphabet (line " + std::to_string(l.number) + ")");
        return *i;
    };
    std::vector<CaRule> rules;
    for (const auto& [line, toks] : rule_lines) {
        if (toks.size() != width + 2 || toks[width] != "->")
            throw ParseError(line->number, "expected 'rule <" + std::to_string(width) + " cells> -> <sym>'");
        CaRule r;
        for (std::size_t i = 0; i < width; ++i)
            r.pattern.push_back(toks[i] == "*" ? std::nullopt : std::optional<std::size_t>(cell(*line, toks[i])));
        r.output = cell(*line, toks[width + 1]);
        rules.push_back(std::move(r));
    }
    std::optional<std::size_t> def;
    if (default_sym && !keep) {
        auto i = cells->index_of(*default_sym);
        if (!i) throw InvariantError(*default_sym, "default is not a cell symbol");
        def = *i;
    } else if (!keep && !default_sym) {
        throw ParseError(b.header_line, "cellular automaton '" + b.name + "' needs a 'default' line");
    }
    return CellularAutomaton1D(b.name, *cells, *radius, *quiescent, std::move(rules), def);
}

// ---- resolution of cross references -------------------------------------------------

class Resolver {
public:
    Resolver(const std::vector<Block>& blocks, Document& doc) : blocks_(blocks), doc_(doc) {}

    AcceptorPtr acceptor(const std::string& name, std::size_t line) {
        auto it = acceptors_.find(name);
        if (it != acceptors_.end()) return it->second;
        const Automaton* a = doc_.find(name);
        if (!a) throw InvariantError(name, "reference to undeclared automaton (line " + std::to_string(line) + ")");
        AcceptorPtr p;
        if (const auto* t = std::get_if<FiniteTransducer>(a)) {
            p = std::make_shared<const FiniteTransducer>(*t);
        } else if (const auto* n = std::get_if<Nfa>(a)) {
            FiniteTransducer d = nfa_to_dfa(*n);
            d.name = n->name;
            p = std::make_shared<const FiniteTransducer>(std::move(d));
        } else {
            throw InvariantError(name, "expected a dfa, transducer or nfa acceptor");
        }
        return acceptors_[name] = p;
    }

    LevelPtr level(const std::string& name, std::size_t line) {
        auto it = levels_.find(name);
        if (it != levels_.end()) return it->second;
        if (in_progress_.count(name)) throw InvariantError(name, "cyclic dispatch reference");
        const Automaton* a = doc_.find(name);
        if (!a) throw InvariantError(name, "reference to undeclared automaton (line " + std::to_string(line) + ")");
        LevelPtr p;
        if (const auto* t = std::get_if<FiniteTransducer>(a)) p = make_level(*t);
        else if (const auto* tm = std::get_if<TuringMachine>(a)) p = make_level(*tm);
        else if (const auto* itm = std::get_if<InductiveTuringMachine>(a)) p = make_level(*itm);
        else if (std::holds_alternative<Dispatch>(*a)) {
            in_progress_.insert(name);
            p = make_level(resolve_dispatch(name));
            in_progress_.erase(name);
        } else {
            throw InvariantError(name, "not a level automaton");
        }
        return levels_[name] = p;
    }

    DispatchTarget target(const std::string& token, std::size_t line) {
        if (token == "!budget") return {nullptr, Signal::budget};
        if (token == "!schedule-end") return {nullptr, Signal::schedule_end};
        return {level(token, line), Signal::none};
    }

    Dispatch resolve_dispatch(const std::string& name) {
        const Block& b = block(name);
        Dispatch d;
        d.name = name;
        bool have_otherwise = false;
        for (const auto& l : b.lines) {
            const auto& t = l.tokens;
            if (t[0] == "alphabet") {
                d.input_alphabet = make_alphabet(l, rest(l));
            } else if (t[0] == "select") {
                if (t.size() != 4 || t[2] != "->") throw ParseError(l.number, "expected 'select <acceptor> -> <target>'");
                d.rules.push_back(DispatchRule{acceptor(t[1], l.number), target(t[3], l.number)});
            } else if (t[0] == "otherwise") {
                if (t.size() != 3 || t[1] != "->") throw ParseError(l.number, "expected 'otherwise -> <target>'");
                d.otherwise = target(t[2], l.number);
                have_otherwise = true;
            } else {
                unknown(l, b);
            }
        }
        if (d.input_alphabet.empty()) throw ParseError(b.header_line, "dispatch '" + name + "' declares no alphabet");
        if (!have_otherwise) throw ParseError(b.header_line, "dispatch '" + name + "' needs an 'otherwise' line");
        for (const auto& r : d.rules)
            if (!d.input_alphabet.is_subset_of(r.selector->input_alphabet))
                throw InvariantError(r.selector->name, "selector is not over the dispatch alphabet");
        return d;
    }

private:
    const Block& block(const std::string& name) const {
        for (const auto& b : blocks_)
            if (!b.is_machine && b.name == name) return b;
        throw InvariantError(name, "reference to undeclared automaton");
    }

    const std::vector<Block>& blocks_;
    Document& doc_;
    std::map<std::string, AcceptorPtr> acceptors_;
    std::map<std::string, LevelPtr> levels_;
    std::set<std::string> in_progress_;
};

EvolutionaryMachine parse_machine(const Block& b, Resolver& resolver) {
    EvolutionaryMachine e;
    e.name = b.name;
    bool have_levels = false;
    for (const auto& l : b.lines) {
        const auto& t = l.tokens;
        const auto& d = t[0];
        if (d == "flavor") {
            if (t.size() != 2 || (t[1] != "basic" && t[1] != "general"))
                throw ParseError(l.number, "expected 'flavor basic|general'");
            e.flavor = t[1] == "basic" ? Flavor::basic : Flavor::general;
        } else if (d == "levels") {
            if (t.size() < 3) throw ParseError(l.number, "expected 'levels <periodic|explicit|generated> ...'");
            if (t[1] == "periodic") {
                const std::size_t k = parse_count(l, t[2]);
                if (k == 0 || t.size() != 3 + k)
                    throw ParseError(l.number, "periodic schedule must list exactly k >= 1 automata");
                PeriodicSchedule p;
                for (std::size_t i = 3; i < t.size(); ++i) p.levels.push_back(resolver.level(t[i], l.number));
                e.schedule = std::move(p);
            } else if (t[1] == "explicit") {
                ExplicitSchedule x;
                for (std::size_t i = 2; i < t.size(); ++i) x.levels.push_back(resolver.level(t[i], l.number));
                e.schedule = std::move(x);
            } else if (t[1] == "generated") {
                if (t.size() != 3) throw ParseError(l.number, "expected 'levels generated <rule>'");
                try {
                    e.schedule = generated_schedule(t[2]);
                } catch (const DomainError& err) {
                    throw ParseError(l.number, err.what());
                }
            } else {
                throw ParseError(l.number, "unknown schedule kind '" + t[1] + "'");
            }
            have_levels = true;
        } else if (d == "mode") {
            if (t.size() < 2 || t.size() > 3) throw ParseError(l.number, "expected 'mode <mode> [limit]'");
            try {
                e.mode = parse_mode(t[1], t.size() == 3 ? parse_count(l, t[2]) : 0);
            } catch (const DomainError& err) {
                throw ParseError(l.number, err.what());
            }
        } else if (d == "search") {
            if (t.size() == 2 && t[1] == "never") {
                e.search = Never{};
            } else if (t.size() == 3 && t[1] == "accepted-by") {
                e.search = AcceptedBy{resolver.acceptor(t[2], l.number)};
            } else if (t.size() == 5 && t[1] == "fitness" && t[3] == ">=") {
                try {
                    e.search = FitnessAtLeast{t[2], Rational::parse(t[4]), builtin_fitness(t[2])};
                } catch (const DomainError& err) {
                    throw ParseError(l.number, err.what());
                }
            } else {
                throw ParseError(l.number, "expected 'search accepted-by <name> | fitness <fn> >= <q> | never'");
            }
        } else if (d == "budget") {
            if (t.size() % 2 != 1) throw ParseError(l.number, "expected 'budget <key> <n> ...'");
            for (std::size_t i = 1; i < t.size(); i += 2) {
                const std::size_t n = parse_count(l, t[i + 1]);
                if (t[i] == "generations") e.budgets.max_generations = n;
                else if (t[i] == "level-steps") e.budgets.max_steps_per_level = n;
                else if (t[i] == "window") e.budgets.stability_window = n;
                else throw ParseError(l.number, "unknown budget '" + t[i] + "'");
            }
        } else if (d == "route-back") {
            if (t.size() < 2) throw ParseError(l.number, "expected 'route-back <automaton> <state>...'");
            auto& states = e.route_back[t[1]];
            for (std::size_t i = 2; i < t.size(); ++i) states.insert(t[i]);
        } else {
            unknown(l, b);
        }
    }
    if (!have_levels) throw ParseError(b.header_line, "machine '" + b.name + "' declares no levels");
    for (const auto& [level_name, states] : e.route_back) {
        for (const auto& lvl : e.listed_levels()) {
            if (lvl->name() != level_name) continue;
            for (const auto& s : states) {
                bool known = true;
                if (const auto* fa = lvl->as<FiniteTransducer>()) known = fa->has_state(s);
                else if (const auto* tm = lvl->as<TuringMachine>()) known = tm->has_state(s);
                else if (const auto* itm = lvl->as<InductiveTuringMachine>()) known = itm->machine.has_state(s);
                if (!known) throw InvariantError(s, "route-back state is not a state of " + level_name);
            }
        }
    }
    e.validate();
    return e;
}

// ---- emission ---------------------------------------------------------------------------

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        out += ' ';
        out += s;
    }
    return out;
}

std::vector<std::string> in_order(const std::vector<StateId>& order, const std::set<StateId>& subset) {
    std::vector<std::string> out;
    for (const auto& s : order)
        if (subset.count(s)) out.push_back(s);
    return out;
}

/// Transition keys sorted by declared state order, then alphabet order.
template <typename Map>
std::vector<typename Map::key_type> ordered_keys(const Map& m, const std::vector<StateId>& states, const Alphabet& alphabet) {
    std::vector<typename Map::key_type> keys;
    for (const auto& kv : m) keys.push_back(kv.first);
    auto rank = [&](const StateId& s) {
        return static_cast<std::size_t>(std::find(states.begin(), states.end(), s) - states.begin());
    };
    std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
        const auto ra = rank(a.first), rb = rank(b.first);
        if (ra != rb) return ra < rb;
        return alphabet.index_of(a.second).value_or(0) < alphabet.index_of(b.second).value_or(0);
    });
    return keys;
}

void emit_fa(std::ostream& os, const FiniteTransducer& t) {
    os << "automaton " << (t.acceptor ? "dfa" : "transducer") << ' ' << t.name << '\n';
    os << "alphabet" << join(t.input_alphabet.symbols()) << '\n';
    if (!t.acceptor) os << "output-alphabet" << join(t.output_alphabet.symbols()) << '\n';
    os << "states" << join(t.states) << '\n';
    os << "start " << t.start << '\n';
    if (!t.accepting.empty()) os << "accept" << join(in_order(t.states, t.accepting)) << '\n';
    for (const auto& key : ordered_keys(t.transitions, t.states, t.input_alphabet)) {
        const auto& e = t.transitions.at(key);
        os << "delta " << key.first << ' ' << key.second << " -> " << e.target;
        if (!t.acceptor) os << " emit" << join(e.output);
        os << '\n';
    }
}

void emit_nfa(std::ostream& os, const Nfa& n) {
    os << "automaton nfa " << n.name << '\n';
    os << "alphabet" << join(n.alphabet.symbols()) << '\n';
    os << "states" << join(n.states) << '\n';
    os << "start" << join(n.start) << '\n';
    if (!n.accepting.empty()) os << "accept" << join(in_order(n.states, n.accepting)) << '\n';
    for (const auto& key : ordered_keys(n.transitions, n.states, n.alphabet))
        os << "delta " << key.first << ' ' << key.second << " ->" << join(n.transitions.at(key)) << '\n';
}

void emit_tm(std::ostream& os, const TuringMachine& m, const std::map<std::pair<StateId, Symbol>, Word>* appends) {
    os << "automaton " << (appends ? "itm" : "tm") << ' ' << m.name << '\n';
    os << "alphabet" << join(m.input_alphabet.symbols()) << '\n';
    os << "tape-alphabet" << join(m.tape_alphabet.symbols()) << " blank " << m.blank << '\n';
    os << "states" << join(m.states) << '\n';
    os << "start " << m.start << '\n';
    if (!m.accept.empty()) os << "accept" << join(in_order(m.states, m.accept)) << '\n';
    if (!m.reject.empty()) os << "reject" << join(in_order(m.states, m.reject)) << '\n';
    for (const auto& key : ordered_keys(m.transitions, m.states, m.tape_alphabet)) {
        const auto& a = m.transitions.at(key);
        const char* mv = a.move == Move::left ? "L" : a.move == Move::right ? "R" : "S";
        os << "delta " << key.first << ' ' << key.second << " -> " << a.target << ' ' << a.write << ' ' << mv;
        if (appends) {
            auto it = appends->find(key);
            if (it != appends->end()) os << " out" << join(it->second);
        }
        os << '\n';
    }
}

void emit_ca(std::ostream& os, const CellularAutomaton1D& ca) {
    os << "automaton ca " << ca.name() << '\n';
    os << "cells" << join(ca.cells().symbols()) << '\n';
    os << "radius " << ca.radius() << '\n';
    os << "quiescent " << ca.cells()[ca.quiescent()] << '\n';
    for (const auto& r : ca.rules()) {
        os << "rule";
        for (const auto& p : r.pattern) os << ' ' << (p ? ca.cells()[*p] : std::string("*"));
        os << " -> " << ca.cells()[r.output] << '\n';
    }
    if (ca.default_output())
        os << "default -> " << ca.cells()[*ca.default_output()] << '\n';
    else
        os << "default keep\n";
}

std::string target_name(const DispatchTarget& t) {
    if (t.level) return t.level->name();
    return t.signal == Signal::schedule_end ? "!schedule-end" : "!budget";
}

void emit_dispatch(std::ostream& os, const Dispatch& d) {
    os << "automaton dispatch " << d.name << '\n';
    os << "alphabet" << join(d.input_alphabet.symbols()) << '\n';
    for (const auto& r : d.rules) os << "select " << r.selector->name << " -> " << target_name(r.target) << '\n';
    os << "otherwise -> " << target_name(d.otherwise) << '\n';
}

}  // namespace

// ---- public API ---------------------------------------------------------------------------

const std::string& automaton_name(const Automaton& a) {
    return std::visit(
        [](const auto& x) -> const std::string& {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, InductiveTuringMachine>) return x.machine.name;
            else if constexpr (std::is_same_v<T, CellularAutomaton1D>) return x.name();
            else return x.name;
        },
        a);
}

std::string automaton_kind(const Automaton& a) {
    if (const auto* t = std::get_if<FiniteTransducer>(&a)) return t->acceptor ? "dfa" : "transducer";
    if (std::holds_alternative<Nfa>(a)) return "nfa";
    if (std::holds_alternative<TuringMachine>(a)) return "tm";
    if (std::holds_alternative<InductiveTuringMachine>(a)) return "itm";
    if (std::holds_alternative<CellularAutomaton1D>(a)) return "ca";
    return "dispatch";
}

const Automaton* Document::find(const std::string& name) const {
    for (const auto& a : automata)
        if (automaton_name(a) == name) return &a;
    return nullptr;
}

const EvolutionaryMachine* Document::find_machine(const std::string& name) const {
    for (const auto& m : machines)
        if (m.name == name) return &m;
    return nullptr;
}

Document parse_document(std::string_view text) {
    const auto blocks = split_blocks(text);
    Document doc;
    std::set<std::string> names;
    for (const auto& b : blocks) {
        if (b.is_machine) continue;
        if (!names.insert(b.name).second) throw ParseError(b.header_line, "duplicate automaton name '" + b.name + "'");
        if (b.kind == "dfa" || b.kind == "transducer") doc.automata.emplace_back(parse_transducer(b));
        else if (b.kind == "nfa") doc.automata.emplace_back(parse_nfa(b));
        else if (b.kind == "tm") doc.automata.emplace_back(std::move(parse_tm(b).machine));
        else if (b.kind == "itm") doc.automata.emplace_back(parse_tm(b));
        else if (b.kind == "ca") doc.automata.emplace_back(parse_ca(b));
        else if (b.kind == "dispatch") doc.automata.emplace_back(Dispatch{b.name, {}, {}, {}});
        else throw ParseError(b.header_line, "unknown automaton kind '" + b.kind + "'");
    }
    Resolver resolver(blocks, doc);
    for (auto& a : doc.automata)
        if (auto* d = std::get_if<Dispatch>(&a)) *d = resolver.resolve_dispatch(d->name);
    std::set<std::string> machine_names;
    for (const auto& b : blocks) {
        if (!b.is_machine) continue;
        if (!machine_names.insert(b.name).second) throw ParseError(b.header_line, "duplicate machine name '" + b.name + "'");
        doc.machines.push_back(parse_machine(b, resolver));
    }
    return doc;
}

Automaton parse_automaton(std::string_view text) {
    Document d = parse_document(text);
    if (d.automata.empty()) throw ParseError(1, "document contains no automaton");
    return std::move(d.automata.front());
}

std::string emit_automaton(const Automaton& a) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, FiniteTransducer>) emit_fa(os, x);
            else if constexpr (std::is_same_v<T, Nfa>) emit_nfa(os, x);
            else if constexpr (std::is_same_v<T, TuringMachine>) emit_tm(os, x, nullptr);
            else if constexpr (std::is_same_v<T, InductiveTuringMachine>) emit_tm(os, x.machine, &x.appends);
            else if constexpr (std::is_same_v<T, CellularAutomaton1D>) emit_ca(os, x);
            else emit_dispatch(os, x);
        },
        a);
    return os.str();
}

std::string emit_machine_block(const EvolutionaryMachine& e) {
    std::ostringstream os;
    os << "machine " << e.name << '\n';
    os << "flavor " << to_string(e.flavor) << '\n';
    if (const auto* p = std::get_if<PeriodicSchedule>(&e.schedule)) {
        os << "levels periodic " << p->levels.size();
        for (const auto& l : p->levels) os << ' ' << l->name();
    } else if (const auto* x = std::get_if<ExplicitSchedule>(&e.schedule)) {
        os << "levels explicit";
        for (const auto& l : x->levels) os << ' ' << l->name();
    } else {
        os << "levels generated " << std::get<GeneratedSchedule>(e.schedule).rule;
    }
    os << '\n' << "mode " << to_string(e.mode) << '\n';
    if (const auto* a = std::get_if<AcceptedBy>(&e.search)) os << "search accepted-by " << a->acceptor->name << '\n';
    else if (const auto* f = std::get_if<FitnessAtLeast>(&e.search))
        os << "search fitness " << f->function << " >= " << f->threshold.str() << '\n';
    else os << "search never\n";
    os << "budget generations " << e.budgets.max_generations << " level-steps " << e.budgets.max_steps_per_level
       << " window " << e.budgets.stability_window << '\n';
    for (const auto& [level, states] : e.route_back) {
        if (states.empty()) continue;
        os << "route-back " << level;
        for (const auto& s : states) os << ' ' << s;
        os << '\n';
    }
    return os.str();
}

std::string emit_document(const Document& d) {
    std::string out;
    for (const auto& a : d.automata) {
        if (!out.empty()) out += '\n';
        out += emit_automaton(a);
    }
    for (const auto& m : d.machines) {
        if (!out.empty()) out += '\n';
        out += emit_machine_block(m);
    }
    return out;
}

Document document_of(const EvolutionaryMachine& e) {
    Document doc;
    std::map<std::string, std::string> seen;  // name -> emitted text
    auto add = [&](Automaton a) {
        const std::string name = automaton_name(a);
        std::string text = emit_automaton(a);
        auto it = seen.find(name);
        if (it != seen.end()) {
            if (it->second != text) throw InvariantError(name, "two different automata share a name");
            return;
        }
        seen.emplace(name, std::move(text));
        doc.automata.push_back(std::move(a));
    };
    std::function<void(const LevelPtr&)> add_level = [&](const LevelPtr& l) {
        if (!l) return;
        if (const auto* d = l->as<Dispatch>()) {
            for (const auto& r : d->rules) {
                add(*r.selector);
                add_level(r.target.level);
            }
            add_level(d->otherwise.level);
        }
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, NativeLevel>)
                    throw DomainError("native level '" + x.name + "' cannot be serialized");
                else
                    add(x);
            },
            l->body);
    };
    for (const auto& l : e.listed_levels()) add_level(l);
    if (const auto* a = std::get_if<AcceptedBy>(&e.search)) add(*a->acceptor);
    doc.machines.push_back(e);
    return doc;
}

LevelPtr as_level(const Automaton& a) {
    if (const auto* t = std::get_if<FiniteTransducer>(&a)) return make_level(*t);
    if (const auto* m = std::get_if<TuringMachine>(&a)) return make_level(*m);
    if (const auto* i = std::get_if<InductiveTuringMachine>(&a)) return make_level(*i);
    if (const auto* d = std::get_if<Dispatch>(&a)) return make_level(*d);
    throw DomainError("'" + automaton_name(a) + "' is not a level automaton");
}

bool same_automaton(const Automaton& a, const Automaton& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<Dispatch>(a)) return emit_automaton(a) == emit_automaton(b);
    return std::visit(
        [&b](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Dispatch>) return false;
            else return x == std::get<T>(b);
        },
        a);
}

}  // namespace evm
