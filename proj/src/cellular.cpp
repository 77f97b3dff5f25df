#include "evm/cellular.hpp"

#include <algorithm>
#include <cstring>

#include "evm/errors.hpp"

namespace evm {

namespace {

std::string key_of(std::uint32_t mask, std::span<const std::size_t> cells) {
    std::string key;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        const auto v = static_cast<std::uint32_t>(cells[i]);
        char buf[sizeof v];
        std::memcpy(buf, &v, sizeof v);
        key.append(buf, sizeof v);
    }
    return key;
}

}  // namespace

CellularAutomaton1D::CellularAutomaton1D(std::string name, Alphabet cells, std::size_t radius,
                                         Symbol quiescent, std::vector<CaRule> rules,
                                         std::optional<std::size_t> default_output)
    : name_(std::move(name)), cells_(std::move(cells)), radius_(radius), rules_(std::move(rules)),
      default_(default_output) {
    if (cells_.empty()) throw InvariantError(name_, "cellular automaton needs a cell alphabet");
    if (width() > 31) throw InvariantError(name_, "radius too large");
    auto q = cells_.index_of(quiescent);
    if (!q) throw InvariantError(quiescent, "quiescent symbol is not a cell symbol");
    quiescent_ = *q;
    if (default_ && *default_ >= cells_.size()) throw InvariantError(name_, "default output out of range");

    for (std::size_t order = 0; order < rules_.size(); ++order) {
        const CaRule& rule = rules_[order];
        if (rule.pattern.size() != width())
            throw InvariantError(name_, "rule " + std::to_string(order) + " has the wrong neighbourhood width");
        if (rule.output >= cells_.size()) throw InvariantError(name_, "rule output out of range");
        std::uint32_t mask = 0;
        std::vector<std::size_t> concrete(width(), 0);
        for (std::size_t i = 0; i < width(); ++i) {
            if (!rule.pattern[i]) continue;
            if (*rule.pattern[i] >= cells_.size()) throw InvariantError(name_, "rule cell out of range");
            mask |= 1u << i;
            concrete[i] = *rule.pattern[i];
        }
        auto slot = std::find_if(index_.begin(), index_.end(), [mask](const auto& p) { return p.first == mask; });
        if (slot == index_.end()) {
            index_.emplace_back(mask, std::unordered_map<std::string, Hit>{});
            slot = std::prev(index_.end());
        }
        slot->second.emplace(key_of(mask, concrete), Hit{order, rule.output});  // keeps first
    }

    std::vector<std::size_t> all_quiescent(width(), quiescent_);
    if (apply(all_quiescent) != quiescent_)
        throw InvariantError(name_, "rule does not fix the all-quiescent neighbourhood");
}

std::size_t CellularAutomaton1D::apply(std::span<const std::size_t> neighbourhood) const {
    std::optional<Hit> best;
    for (const auto& [mask, table] : index_) {
        auto it = table.find(key_of(mask, neighbourhood));
        if (it != table.end() && (!best || it->second.order < best->order)) best = it->second;
    }
    if (best) return best->output;
    return default_ ? *default_ : neighbourhood[radius_];
}

CaConfiguration canonical(CaConfiguration c, std::size_t quiescent) {
    auto first = std::find_if(c.cells.begin(), c.cells.end(), [quiescent](std::size_t x) { return x != quiescent; });
    if (first == c.cells.end()) return {};
    auto last = std::find_if(c.cells.rbegin(), c.cells.rend(), [quiescent](std::size_t x) { return x != quiescent; });
    c.offset += first - c.cells.begin();
    c.cells = std::vector<std::size_t>(first, last.base());
    return c;
}

CaConfiguration make_configuration(const CellularAutomaton1D& ca, const Word& cells, long long offset) {
    CaConfiguration c;
    c.offset = offset;
    for (const auto& s : cells) {
        auto i = ca.cells().index_of(s);
        if (!i) throw AlphabetError("'" + s + "' is not a cell symbol of " + ca.name());
        c.cells.push_back(*i);
    }
    return canonical(std::move(c), ca.quiescent());
}

Word configuration_word(const CellularAutomaton1D& ca, const CaConfiguration& c) {
    Word w;
    for (auto i : c.cells) w.push_back(ca.cells()[i]);
    return w;
}

std::size_t cell_at(const CaConfiguration& c, long long position, std::size_t quiescent) {
    const long long i = position - c.offset;
    if (i < 0 || i >= static_cast<long long>(c.cells.size())) return quiescent;
    return c.cells[static_cast<std::size_t>(i)];
}

CaConfiguration ca_step(const CellularAutomaton1D& ca, const CaConfiguration& c) {
    if (c.cells.empty()) return {};
    const auto r = static_cast<long long>(ca.radius());
    const long long lo = c.offset - r;
    const long long hi = c.offset + static_cast<long long>(c.cells.size()) + r;
    CaConfiguration next;
    next.offset = lo;
    next.cells.reserve(static_cast<std::size_t>(hi - lo));
    std::vector<std::size_t> window(ca.width());
    for (long long p = lo; p < hi; ++p) {
        for (long long d = -r; d <= r; ++d)
            window[static_cast<std::size_t>(d + r)] = cell_at(c, p + d, ca.quiescent());
        next.cells.push_back(ca.apply(window));
    }
    return canonical(std::move(next), ca.quiescent());
}

std::vector<CaConfiguration> ca_run(const CellularAutomaton1D& ca, const CaConfiguration& c, std::size_t steps) {
    std::vector<CaConfiguration> trace{c};
    trace.reserve(steps + 1);
    for (std::size_t i = 0; i < steps; ++i) trace.push_back(ca_step(ca, trace.back()));
    return trace;
}

}  // namespace evm
