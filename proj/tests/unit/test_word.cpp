#include "doctest.h"
#include "evm/errors.hpp"
#include "evm/population.hpp"
#include "evm/rational.hpp"
#include "evm/word.hpp"

using namespace evm;

TEST_CASE("words parse and format symmetrically") {
    CHECK(parse_word("") == Word{});
    CHECK(parse_word("  0 1\t1 ") == Word{"0", "1", "1"});
    CHECK(format_word({"a", "bc"}) == "a bc");
    CHECK(format_word({}) == "");
}

TEST_CASE("alphabet rejects duplicates and reports membership") {
    CHECK_THROWS(Alphabet({"0", "0"}));
    Alphabet a{"0", "1"};
    CHECK(a.contains("1"));
    CHECK_FALSE(a.contains("2"));
    CHECK(a.index_of("1") == 1);
    CHECK(a.merged(Alphabet{"2", "0"}) == Alphabet{"0", "1", "2"});
    CHECK_THROWS_AS(require_word_over(a, {"0", "x"}, "input"), AlphabetError);
}

TEST_CASE("word enumeration is length-lexicographic") {
    auto ws = words_up_to(Alphabet{"0", "1"}, 2);
    REQUIRE(ws.size() == 7);
    CHECK(ws[0].empty());
    CHECK(ws[1] == Word{"0"});
    CHECK(ws[3] == Word{"0", "0"});
    CHECK(ws[6] == Word{"1", "1"});
    for (std::size_t i = 1; i < ws.size(); ++i) CHECK(length_lex_less(Alphabet{"0", "1"}, ws[i - 1], ws[i]));
    std::size_t seen = 0;
    for_each_word(Alphabet{"a", "b", "c"}, 5, [&](const Word&) { return ++seen < 10; });
    CHECK(seen == 10);
}

TEST_CASE("rationals parse, reduce and compare") {
    CHECK(Rational::parse("7/2") == Rational(7, 2));
    CHECK(Rational::parse("0.95") == Rational(19, 20));
    CHECK(Rational(4, 8).str() == "1/2");
    CHECK(Rational(3) > Rational(5, 2));
    CHECK_THROWS(Rational::parse("x"));
}

TEST_CASE("populations encode with separators") {
    Population p{{{false, true, true}, {true, true, true}}};
    Word w = encode_population(p);
    CHECK(format_word(w) == "0 1 1 | 1 1 1");
    CHECK(decode_population(w) == p);
    CHECK_THROWS_AS(decode_population(parse_word("0 1 | 1")), DomainError);
    CHECK_THROWS_AS(decode_population(parse_word("0 | | 1")), DomainError);
}
