#include "evm/equivalence.hpp"

#include "evm/errors.hpp"
#include "evm/runtime.hpp"

namespace evm {

using Status = Observation::Status;

std::string Observation::functional() const {
    switch (status) {
        case Status::ok: return "ok [" + format_word(output) + "]";
        case Status::undefined: return "undefined";
        case Status::undecided: return "undecided";
    }
    return "?";
}

std::string Observation::linguistic() const {
    if (!accepted) return "undecided";
    return *accepted ? "accept" : "reject";
}

namespace {

Observation ok(Word w, bool accepted) { return Observation{Status::ok, std::move(w), accepted}; }
Observation undefined() { return Observation{Status::undefined, {}, false}; }
Observation undecided() { return Observation{Status::undecided, {}, std::nullopt}; }

Observation observe_level(const Level& level, const Word& u, const Budgets& budgets) {
    if (!level.input_alphabet().contains_all(u)) return undefined();
    if (const auto* fa = level.as<FiniteTransducer>()) {
        Transduction r = run_transducer(*fa, u);
        if (!r.defined) return undefined();
        return ok(std::move(r.output), fa->is_accepting(r.final_state));
    }
    if (const auto* tm = level.as<TuringMachine>()) {
        TmResult r = tm_run(*tm, u, budgets.max_steps_per_level);
        if (!r.halted()) return undecided();
        return ok(std::move(r.tape), r.accepted);
    }
    if (const auto* itm = level.as<InductiveTuringMachine>()) {
        ItmResult r = itm_run(*itm, u, budgets.max_steps_per_level, budgets.stability_window);
        if (!r.stabilized()) return undecided();
        return ok(std::move(r.output), r.halted && itm->machine.accept.count(r.final_state) != 0);
    }
    if (const auto* d = level.as<Dispatch>()) {
        const DispatchTarget& t = d->target_for(u);
        if (!t.level) return t.signal == Signal::schedule_end ? undefined() : undecided();
        return observe_level(*t.level, u, budgets);
    }
    const auto& native = std::get<NativeLevel>(level.body);
    return ok(native.apply(u, 0).output, true);
}

}  // namespace

Subject subject_of(const LevelPtr& level, const Budgets& budgets) {
    return Subject{level->name(), level->input_alphabet(),
                   [level, budgets](const Word& u) { return observe_level(*level, u, budgets); }};
}

Subject subject_of(const Nfa& nfa) {
    return Subject{nfa.name, nfa.alphabet, [nfa](const Word& u) {
                       if (!nfa.alphabet.contains_all(u)) return undefined();
                       return ok({}, fa_accepts(nfa, u));
                   }};
}

Subject subject_of(const EvolutionaryMachine& e) {
    return Subject{e.name, e.population_alphabet(), [e](const Word& u) {
                       RunResult r = run_machine(e, Generation{u, 0});
                       switch (r.outcome) {
                           case Outcome::budget_exhausted: return undecided();
                           case Outcome::undefined: return undefined();
                           default: return ok(r.result.payload, r.outcome == Outcome::satisfied);
                       }
                   }};
}

Subject subject_of(const Automaton& a, const Budgets& budgets) {
    if (const auto* n = std::get_if<Nfa>(&a)) return subject_of(*n);
    if (std::holds_alternative<CellularAutomaton1D>(a))
        throw DomainError("'" + automaton_name(a) + "' is a cellular automaton; it has no input/output behaviour");
    return subject_of(as_level(a), budgets);
}

std::string EquivVerdict::str() const {
    switch (status) {
        case Status::equivalent:
            return exact ? "equivalent (exact)" : "equivalent (bounded, max_len " + std::to_string(max_len) + ")";
        case Status::inequivalent:
            return "inequivalent witness=\"" + format_word(witness) + "\" lhs=" + lhs + " rhs=" + rhs;
        case Status::undecided:
            return "undecided (" + reason + ")";
    }
    return "?";
}

namespace {

void require_alphabet(const Subject& s, const Alphabet& alphabet) {
    if (!alphabet.is_subset_of(s.alphabet))
        throw DomainError("'" + s.name + "' does not read every symbol of the comparison alphabet");
}

EquivVerdict compare(const Subject& a, const Subject& b, const Alphabet& alphabet, std::size_t max_len,
                     bool linguistic) {
    require_alphabet(a, alphabet);
    require_alphabet(b, alphabet);
    EquivVerdict v;
    v.max_len = max_len;
    std::size_t open = 0;
    Word first_open;
    for_each_word(alphabet, max_len, [&](const Word& u) {
        const Observation x = a.observe(u), y = b.observe(u);
        const std::string sx = linguistic ? x.linguistic() : x.functional();
        const std::string sy = linguistic ? y.linguistic() : y.functional();
        if (x.status == Status::undecided || y.status == Status::undecided) {
            if (open++ == 0) first_open = u;
            return true;
        }
        if (sx != sy) {
            v.status = EquivVerdict::Status::inequivalent;
            v.witness = u;
            v.lhs = sx;
            v.rhs = sy;
            return false;
        }
        return true;
    });
    if (v.status == EquivVerdict::Status::equivalent && open) {
        v.status = EquivVerdict::Status::undecided;
        v.reason = std::to_string(open) + " input(s) exhausted a budget, first \"" + format_word(first_open) + "\"";
    }
    return v;
}

}  // namespace

EquivVerdict functional_equiv_bounded(const Subject& a, const Subject& b, const Alphabet& alphabet,
                                      std::size_t max_len) {
    return compare(a, b, alphabet, max_len, false);
}

EquivVerdict linguistic_equiv_bounded(const Subject& a, const Subject& b, const Alphabet& alphabet,
                                      std::size_t max_len) {
    return compare(a, b, alphabet, max_len, true);
}

EquivVerdict dfa_language_equiv_exact(const FiniteTransducer& a, const FiniteTransducer& b) {
    if (!a.input_alphabet.same_symbols(b.input_alphabet))
        throw DomainError("'" + a.name + "' and '" + b.name + "' have different alphabets");
    DfaEquivalence r = dfa_equiv(a, b);
    EquivVerdict v;
    v.exact = true;
    if (!r.equivalent) {
        v.status = EquivVerdict::Status::inequivalent;
        v.witness = r.counterexample;
        v.lhs = fa_accepts(a, v.witness) ? "accept" : "reject";
        v.rhs = fa_accepts(b, v.witness) ? "accept" : "reject";
    }
    return v;
}

LanguageSample accepted_language_sample(const Subject& s, const Alphabet& alphabet, std::size_t max_len) {
    require_alphabet(s, alphabet);
    LanguageSample out;
    for_each_word(alphabet, max_len, [&](const Word& u) {
        const Observation o = s.observe(u);
        if (!o.accepted) out.undecided.push_back(u);
        else if (*o.accepted) out.accepted.push_back(u);
        return true;
    });
    return out;
}

}  // namespace evm
