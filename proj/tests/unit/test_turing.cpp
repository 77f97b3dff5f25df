#include "doctest.h"
#include "evm/automata.hpp"
#include "fixtures.hpp"

using namespace evm;

namespace {

TuringMachine tiny(const std::string& name) {
    TuringMachine m;
    m.name = name;
    m.input_alphabet = Alphabet{"1"};
    m.tape_alphabet = Alphabet{"1", "_"};
    m.blank = "_";
    return m;
}

}  // namespace

TEST_CASE("machine starting in an accepting state halts at once") {
    TuringMachine m = tiny("done");
    m.states = {"h"};
    m.start = "h";
    m.accept = {"h"};
    TmResult r = tm_run(m, parse_word("1 1"), 10);
    CHECK(r.halted());
    CHECK(r.accepted);
    CHECK(r.steps == 0);
    CHECK(r.tape == parse_word("1 1"));
}

TEST_CASE("unary increment adds one symbol") {
    auto d = fixture::load("turing.evm");
    const auto& inc = std::get<TuringMachine>(*d.find("increment"));
    TmResult r = tm_run(inc, parse_word("1 1 1"), 1000);
    CHECK(r.halted());
    CHECK(r.accepted);
    CHECK(r.tape == parse_word("1 1 1 1"));
    CHECK(r.steps >= 4);
    for (std::size_t n = 0; n < 8; ++n) CHECK(tm_run(inc, Word(n, "1"), 1000).tape == Word(n + 1, "1"));
}

TEST_CASE("self-looping machine exhausts its budget") {
    TuringMachine m = tiny("spin");
    m.states = {"s"};
    m.start = "s";
    m.transitions[{"s", "1"}] = {"s", "1", Move::stay};
    m.transitions[{"s", "_"}] = {"s", "_", Move::stay};
    TmResult r = tm_run(m, parse_word("1"), 100);
    CHECK(r.status == TmResult::Status::budget_exhausted);
    CHECK(r.steps == 100);
}

TEST_CASE("missing move halts and rejects") {
    TuringMachine m = tiny("stuck");
    m.states = {"s"};
    m.start = "s";
    TmResult r = tm_run(m, parse_word("1"), 100);
    CHECK(r.halted());
    CHECK_FALSE(r.accepted);
}

TEST_CASE("inductive copy machine stabilizes on its input") {
    auto d = fixture::load("turing.evm");
    const auto& itm = std::get<InductiveTuringMachine>(*d.find("copy-then-idle"));
    for (const auto& w : oracle::binary_words(4)) {
        ItmResult r = itm_run(itm, w, 1000, 10);
        REQUIRE(r.stabilized());
        CHECK(r.output == w);
        CHECK(r.since_step == w.size());
        auto history = itm_output_history(itm, w, w.size() + 5);
        CHECK(history.back() == w);
        CHECK(history[w.size()] == w);
    }
}

TEST_CASE("machine appending forever stays undecided") {
    InductiveTuringMachine itm;
    itm.machine = tiny("chatter");
    itm.machine.states = {"s"};
    itm.machine.start = "s";
    itm.machine.transitions[{"s", "1"}] = {"s", "1", Move::stay};
    itm.machine.transitions[{"s", "_"}] = {"s", "_", Move::stay};
    itm.appends[{"s", "1"}] = {"1"};
    itm.appends[{"s", "_"}] = {"1"};
    ItmResult r = itm_run(itm, parse_word("1"), 500, 5);
    CHECK_FALSE(r.stabilized());
    CHECK(r.output.size() == 500);
}
