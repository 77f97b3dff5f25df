#include <random>

#include "doctest.h"
#include "evm/cellular.hpp"
#include "fixtures.hpp"

using namespace evm;

namespace {

const CellularAutomaton1D& rule90() {
    static const evm::Document d = fixture::load("rule90.evm");
    return std::get<CellularAutomaton1D>(*d.find("rule90"));
}

// Rule 90 by hand: next cell = left xor right.
std::vector<int> xor_row(const std::vector<int>& row) {
    std::vector<int> next(row.size() + 2, 0);
    for (std::size_t i = 0; i < next.size(); ++i) {
        const int l = i >= 2 ? row[i - 2] : 0;
        const int r = i < row.size() ? row[i] : 0;
        next[i] = l ^ r;
    }
    return next;
}

}  // namespace

TEST_CASE("quiescent configuration is a fixed point") {
    CaConfiguration empty;
    CHECK(ca_step(rule90(), empty) == empty);
}

TEST_CASE("single live cell splits into two neighbours") {
    const auto& ca = rule90();
    CaConfiguration c = make_configuration(ca, {"1"}, 0);
    CaConfiguration n = ca_step(ca, c);
    CHECK(n.offset == -1);
    CHECK(configuration_word(ca, n) == parse_word("1 0 1"));
}

TEST_CASE("four steps draw Pascal's triangle mod 2") {
    const auto& ca = rule90();
    auto trace = ca_run(ca, make_configuration(ca, {"1"}, 0), 4);
    REQUIRE(trace.size() == 5);
    std::vector<int> row{1};
    for (std::size_t t = 0; t <= 4; ++t) {
        Word expect;
        for (int v : row) expect.push_back(v ? "1" : "0");
        CHECK(trace[t].offset == -static_cast<long long>(t));
        CHECK(configuration_word(ca, trace[t]) == expect);
        row = xor_row(row);
    }
    CHECK(ca_run(ca, trace[0], 0).size() == 1);
    for (std::size_t t = 1; t < trace.size(); ++t) CHECK(ca_step(ca, trace[t - 1]) == trace[t]);
}

TEST_CASE("support grows by at most the radius per side") {
    const auto& ca = rule90();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        Word cells;
        const std::size_t n = 1 + rng() % 12;
        for (std::size_t k = 0; k < n; ++k) cells.push_back(rng() % 2 ? "1" : "0");
        CaConfiguration c = make_configuration(ca, cells, static_cast<long long>(rng() % 7) - 3);
        CaConfiguration next = ca_step(ca, c);
        if (next.cells.empty()) continue;
        CHECK(next.offset >= c.offset - 1);
        CHECK(next.offset + static_cast<long long>(next.cells.size()) <= c.offset + static_cast<long long>(c.cells.size()) + 1);
    }
}

TEST_CASE("configurations are canonical") {
    const auto& ca = rule90();
    CaConfiguration c = make_configuration(ca, parse_word("0 0 1 1 0"), 3);
    CHECK(c.offset == 5);
    CHECK(c.cells.size() == 2);
    CHECK(cell_at(c, 5, ca.quiescent()) == 1);
    CHECK(cell_at(c, 100, ca.quiescent()) == ca.quiescent());
}

TEST_CASE("one changed cell only affects its radius") {
    const auto& ca = rule90();
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        Word cells;
        for (int k = 0; k < 10; ++k) cells.push_back(rng() % 2 ? "1" : "0");
        const std::size_t at = rng() % cells.size();
        Word changed = cells;
        changed[at] = cells[at] == "1" ? "0" : "1";
        CaConfiguration a = ca_step(ca, make_configuration(ca, cells, 0));
        CaConfiguration b = ca_step(ca, make_configuration(ca, changed, 0));
        for (long long p = -3; p < 13; ++p)
            if (std::abs(p - static_cast<long long>(at)) > 1) CHECK(cell_at(a, p, ca.quiescent()) == cell_at(b, p, ca.quiescent()));
    }
}
