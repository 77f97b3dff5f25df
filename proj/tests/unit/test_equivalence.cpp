#include <random>

#include "doctest.h"
#include "evm/constructions.hpp"
#include "evm/equivalence.hpp"
#include "evm/errors.hpp"
#include "fixtures.hpp"

using namespace evm;

namespace {

using VS = EquivVerdict::Status;
const Alphabet kBits{"0", "1"};

}  // namespace

TEST_CASE("functional equivalence is reflexive") {
    auto d = fixture::load("levels.evm");
    Subject s = subject_of(fixture::level(d, "shift"));
    EquivVerdict v = functional_equiv_bounded(s, s, kBits, 5);
    CHECK(v.status == VS::equivalent);
    CHECK_FALSE(v.exact);
    CHECK(v.max_len == 5);
}

TEST_CASE("identity and flip differ on 0") {
    auto d = fixture::load("levels.evm");
    EquivVerdict v = functional_equiv_bounded(subject_of(fixture::level(d, "identity")), subject_of(fixture::level(d, "flip")), kBits, 3);
    CHECK(v.status == VS::inequivalent);
    CHECK(v.witness == parse_word("0"));
    CHECK(v.lhs == "ok [0]");
    CHECK(v.rhs == "ok [1]");
}

TEST_CASE("flattened pipeline is functionally equivalent") {
    auto p = fixture::load("pipeline.evm");
    const auto& e = fixture::machine(p, "pipeline");
    Subject flat = subject_of(make_level(flatten_bounded_efa(e)));
    CHECK(functional_equiv_bounded(subject_of(e), flat, kBits, 5).status == VS::equivalent);
}

TEST_CASE("linguistic equivalence") {
    auto d = fixture::load("levels.evm");
    Subject even = subject_of(fixture::level(d, "even-ones")), odd = subject_of(fixture::level(d, "odd-ones"));
    CHECK(linguistic_equiv_bounded(even, even, kBits, 6).status == VS::equivalent);
    EquivVerdict v = linguistic_equiv_bounded(even, odd, kBits, 6);
    CHECK(v.status == VS::inequivalent);
    CHECK(v.witness.empty());
}

TEST_CASE("basic periodic corpus machines match their reference acceptors") {
    auto d = fixture::load("regular.evm");
    for (const char* name : {"parity-flip", "late-pair", "lead-zero"}) {
        CAPTURE(name);
        Subject ref = subject_of(fixture::level(d, std::string(name) + "-ref"));
        CHECK(linguistic_equiv_bounded(subject_of(fixture::machine(d, name)), ref, kBits, 8).status == VS::equivalent);
    }
}

TEST_CASE("exact dfa comparison") {
    auto d = fixture::load("levels.evm");
    const auto& even = fixture::fa(d, "even-ones");
    std::mt19937_64 rng(1);
    EquivVerdict same = dfa_language_equiv_exact(even, oracle::disguise(rng, even));
    CHECK(same.status == VS::equivalent);
    CHECK(same.exact);
    EquivVerdict diff = dfa_language_equiv_exact(even, fixture::fa(d, "odd-ones"));
    CHECK(diff.status == VS::inequivalent);
    CHECK(diff.witness.empty());
    auto t = fixture::load("turing.evm");
    CHECK_THROWS_AS(dfa_language_equiv_exact(even, fixture::fa(t, "three-ones")), DomainError);
}

TEST_CASE("exact comparison agrees with enumeration on random 4-state pairs") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 40; ++i) {
        auto a = oracle::random_dfa(rng, "a", kBits, 4, 0.1);
        auto b = i % 2 ? oracle::disguise(rng, a) : oracle::random_dfa(rng, "b", kBits, 4, 0.1);
        EquivVerdict v = dfa_language_equiv_exact(a, b);
        auto brute = oracle::first_language_difference(a, b, a.states.size() + b.states.size());
        REQUIRE((v.status == VS::equivalent) == !brute.has_value());
        if (brute) CHECK(v.witness == *brute);
    }
}

TEST_CASE("functionally equivalent acceptors are linguistically equivalent") {
    auto d = fixture::load("regular.evm");
    const auto& even = fixture::fa(d, "even-ones");
    std::mt19937_64 rng(4);
    Subject a = subject_of(make_level(even)), b = subject_of(make_level(oracle::disguise(rng, even)));
    CHECK(functional_equiv_bounded(a, b, kBits, 6).status == VS::equivalent);
    CHECK(linguistic_equiv_bounded(a, b, kBits, 6).status == VS::equivalent);
}

TEST_CASE("budget exhaustion makes a comparison undecided") {
    auto m = fixture::load("modes.evm");
    Subject blink = subject_of(fixture::machine(m, "blink"));
    EquivVerdict v = functional_equiv_bounded(blink, blink, kBits, 2);
    CHECK(v.status == VS::undecided);
    CHECK_FALSE(v.reason.empty());
}

TEST_CASE("comparison alphabet must be shared") {
    auto d = fixture::load("levels.evm");
    Subject s = subject_of(fixture::level(d, "flip"));
    CHECK_THROWS_AS(functional_equiv_bounded(s, s, Alphabet{"0", "1", "2"}, 2), DomainError);
}

TEST_CASE("accepted samples") {
    auto d = fixture::load("levels.evm");
    FiniteTransducer none = fixture::fa(d, "even-ones");
    none.accepting.clear();
    CHECK(accepted_language_sample(subject_of(make_level(none)), kBits, 4).accepted.empty());
    LanguageSample even = accepted_language_sample(subject_of(fixture::level(d, "even-ones")), kBits, 2);
    CHECK(even.accepted == std::vector<Word>{{}, {"0"}, {"0", "0"}, {"1", "1"}});
}

TEST_CASE("counting machine's sample has no small dfa") {
    auto d = fixture::load("anbn.evm");
    LanguageSample s = accepted_language_sample(subject_of(fixture::machine(d, "anbn")), kBits, 8);
    CHECK(s.undecided.empty());
    for (std::size_t n = 2; n <= 4; ++n) {
        Word w(n, "0");
        w.insert(w.end(), n, "1");
        CHECK(std::find(s.accepted.begin(), s.accepted.end(), w) != s.accepted.end());
    }
    std::vector<Word> rejected;
    for (const auto& w : oracle::binary_words(8))
        if (std::find(s.accepted.begin(), s.accepted.end(), w) == s.accepted.end()) rejected.push_back(w);
    CHECK(oracle::consistent_small_dfas(s.accepted, rejected, 2) == 0);
}

TEST_CASE("small-dfa search finds a fit for a regular sample") {
    auto d = fixture::load("levels.evm");
    LanguageSample s = accepted_language_sample(subject_of(fixture::level(d, "even-ones")), kBits, 8);
    std::vector<Word> rejected;
    for (const auto& w : oracle::binary_words(8))
        if (std::find(s.accepted.begin(), s.accepted.end(), w) == s.accepted.end()) rejected.push_back(w);
    CHECK(oracle::consistent_small_dfas(s.accepted, rejected, 1) == 0);
    CHECK(oracle::consistent_small_dfas(s.accepted, rejected, 2) > 0);
}

TEST_CASE("deleting levels let a basic periodic machine count") {
    auto d = fixture::load("nonregular.evm");
    const auto& e = fixture::machine(d, "peel-count");
    CHECK(e.flavor == Flavor::basic);
    CHECK_FALSE(fixture::fa(d, "peel").letter_to_letter());
    std::vector<Word> accepted, rejected;
    for (const auto& w : oracle::binary_words(10)) {
        auto r = oracle::run_em(e, w);
        (r.outcome == "satisfied" ? accepted : rejected).push_back(w);
    }
    std::vector<Word> expect;
    for (std::size_t n = 2; n <= 5; ++n) {
        Word w(n, "0");
        w.insert(w.end(), n, "1");
        expect.push_back(w);
    }
    CHECK(accepted == expect);
    LanguageSample s = accepted_language_sample(subject_of(e), kBits, 10);
    CHECK(s.accepted == expect);
    CHECK(oracle::consistent_small_dfas(accepted, rejected, 3) == 0);
}
