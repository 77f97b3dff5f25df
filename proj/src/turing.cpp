#include <algorithm>
#include <deque>

#include "evm/automata.hpp"
#include "evm/errors.hpp"

namespace evm {

namespace {

/// Two-way unbounded tape of symbols, blank outside the written region.
class Tape {
public:
    Tape(const Word& input, Symbol blank) : cells_(input.begin(), input.end()), blank_(std::move(blank)) {
        if (cells_.empty()) cells_.push_back(blank_);
    }

    const Symbol& read() const { return cells_[head_]; }
    void write(const Symbol& s) { cells_[head_] = s; }

    void move(Move m) {
        if (m == Move::right) {
            if (++head_ == cells_.size()) cells_.push_back(blank_);
        } else if (m == Move::left) {
            if (head_ == 0)
                cells_.push_front(blank_);
            else
                --head_;
        }
    }

    Word content() const {
        auto first = std::find_if(cells_.begin(), cells_.end(), [this](const Symbol& s) { return s != blank_; });
        if (first == cells_.end()) return {};
        auto last = std::find_if(cells_.rbegin(), cells_.rend(), [this](const Symbol& s) { return s != blank_; });
        return Word(first, last.base());
    }

private:
    std::deque<Symbol> cells_;
    std::size_t head_ = 0;
    Symbol blank_;
};

void validate_tm(const TuringMachine& m) {
    const std::string& owner = m.name;
    if (m.states.empty()) throw InvariantError(owner, "machine declares no states");
    std::set<StateId> seen;
    for (const auto& s : m.states)
        if (!seen.insert(s).second) throw InvariantError(s, "duplicate state");
    if (!m.has_state(m.start)) throw InvariantError(m.start, "start state is not declared");
    for (const auto* group : {&m.accept, &m.reject})
        for (const auto& s : *group)
            if (!m.has_state(s)) throw InvariantError(s, "halting state is not declared");
    for (const auto& s : m.accept)
        if (m.reject.count(s)) throw InvariantError(s, "state is both accepting and rejecting");
    if (!m.tape_alphabet.contains(m.blank)) throw InvariantError(m.blank, "blank is not a tape symbol");
    if (m.input_alphabet.contains(m.blank)) throw InvariantError(m.blank, "blank must not be an input symbol");
    if (!m.input_alphabet.is_subset_of(m.tape_alphabet))
        throw InvariantError(owner, "input alphabet is not contained in the tape alphabet");
    for (const auto& [key, act] : m.transitions) {
        if (!m.has_state(key.first)) throw InvariantError(key.first, "transition from undeclared state");
        if (m.is_halting(key.first)) throw InvariantError(key.first, "halting state has an outgoing transition");
        if (!m.tape_alphabet.contains(key.second)) throw InvariantError(key.second, "transition on non-tape symbol");
        if (!m.has_state(act.target)) throw InvariantError(act.target, "transition to undeclared state");
        if (!m.tape_alphabet.contains(act.write)) throw InvariantError(act.write, "writes a non-tape symbol");
    }
}

}  // namespace

bool TuringMachine::has_state(const StateId& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
}

const TmAction* TuringMachine::action(const StateId& state, const Symbol& symbol) const {
    auto it = transitions.find({state, symbol});
    return it == transitions.end() ? nullptr : &it->second;
}

void TuringMachine::validate() const { validate_tm(*this); }

void InductiveTuringMachine::validate() const {
    machine.validate();
    if (order != 1) throw InvariantError(machine.name, "only first-order inductive machines are supported");
    for (const auto& [key, out] : appends) {
        if (!machine.transitions.count(key))
            throw InvariantError(key.first, "output append on a missing transition");
        for (const auto& s : out)
            if (!machine.tape_alphabet.contains(s)) throw InvariantError(s, "output symbol is not a tape symbol");
    }
}

TmResult tm_run(const TuringMachine& m, const Word& w, std::size_t max_steps) {
    require_word_over(m.input_alphabet, w, m.name);
    Tape tape(w, m.blank);
    StateId state = m.start;
    TmResult r;
    while (true) {
        // Halting is checked before each transition.
        const TmAction* act = m.is_halting(state) ? nullptr : m.action(state, tape.read());
        if (!act) {
            r.status = TmResult::Status::halted;
            r.accepted = m.accept.count(state) != 0;
            break;
        }
        if (r.steps == max_steps) {
            r.status = TmResult::Status::budget_exhausted;
            break;
        }
        tape.write(act->write);
        tape.move(act->move);
        state = act->target;
        ++r.steps;
    }
    r.tape = tape.content();
    r.final_state = state;
    return r;
}

namespace {

template <typename OnStep>
ItmResult drive_itm(const InductiveTuringMachine& m, const Word& w, std::size_t max_steps,
                    std::size_t window, OnStep&& on_step) {
    const TuringMachine& tm = m.machine;
    require_word_over(tm.input_alphabet, w, tm.name);
    Tape tape(w, tm.blank);
    StateId state = tm.start;
    ItmResult r;
    while (true) {
        const TmAction* act = tm.is_halting(state) ? nullptr : tm.action(state, tape.read());
        if (!act) {
            r.status = ItmResult::Status::stabilized;
            r.halted = true;
            break;
        }
        if (window > 0 && r.steps - r.since_step >= window) {
            r.status = ItmResult::Status::stabilized;
            break;
        }
        if (r.steps == max_steps) {
            r.status = ItmResult::Status::undecided;
            break;
        }
        auto app = m.appends.find({state, tape.read()});
        tape.write(act->write);
        tape.move(act->move);
        state = act->target;
        ++r.steps;
        if (app != m.appends.end() && !app->second.empty()) {
            r.output.insert(r.output.end(), app->second.begin(), app->second.end());
            r.since_step = r.steps;
        }
        on_step(r.output);
    }
    r.final_state = state;
    return r;
}

}  // namespace

ItmResult itm_run(const InductiveTuringMachine& m, const Word& w, std::size_t max_steps,
                  std::size_t stability_window) {
    if (stability_window == 0) throw DomainError("stability window must be positive");
    return drive_itm(m, w, max_steps, stability_window, [](const Word&) {});
}

std::vector<Word> itm_output_history(const InductiveTuringMachine& m, const Word& w, std::size_t steps) {
    std::vector<Word> history{Word{}};
    drive_itm(m, w, steps, 0, [&history](const Word& out) { history.push_back(out); });
    return history;
}

}  // namespace evm
