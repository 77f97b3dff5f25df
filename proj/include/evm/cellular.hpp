#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "evm/word.hpp"

namespace evm {

/// One line of a rule table. Empty pattern entries are wildcards.
struct CaRule {
    std::vector<std::optional<std::size_t>> pattern;
    std::size_t output = 0;

    bool operator==(const CaRule&) const = default;
};

/// One-dimensional cellular automaton over an infinite quiescent background.
///
/// The local rule is an ordered list of (possibly wildcarded) neighbourhood patterns; the
/// first matching line wins. Unmatched neighbourhoods map to `default_output`, or keep the
/// centre cell when no default is given.
class CellularAutomaton1D {
public:
    CellularAutomaton1D(std::string name, Alphabet cells, std::size_t radius, Symbol quiescent,
                        std::vector<CaRule> rules, std::optional<std::size_t> default_output);

    const std::string& name() const noexcept { return name_; }
    const Alphabet& cells() const noexcept { return cells_; }
    std::size_t radius() const noexcept { return radius_; }
    std::size_t quiescent() const noexcept { return quiescent_; }
    std::size_t width() const noexcept { return 2 * radius_ + 1; }
    const std::vector<CaRule>& rules() const noexcept { return rules_; }
    const std::optional<std::size_t>& default_output() const noexcept { return default_; }

    std::size_t apply(std::span<const std::size_t> neighbourhood) const;

    bool operator==(const CellularAutomaton1D& o) const {
        return name_ == o.name_ && cells_ == o.cells_ && radius_ == o.radius_ &&
               quiescent_ == o.quiescent_ && rules_ == o.rules_ && default_ == o.default_;
    }

private:
    struct Hit {
        std::size_t order;
        std::size_t output;
    };

    std::string name_;
    Alphabet cells_;
    std::size_t radius_;
    std::size_t quiescent_;
    std::vector<CaRule> rules_;
    std::optional<std::size_t> default_;
    // One table per wildcard mask in use, keyed by the concrete cells of the pattern.
    std::vector<std::pair<std::uint32_t, std::unordered_map<std::string, Hit>>> index_;
};

/// Finite support embedded in the quiescent background. Canonical form has no leading or
/// trailing quiescent cells; the all-quiescent configuration is empty with offset 0.
struct CaConfiguration {
    std::vector<std::size_t> cells;
    long long offset = 0;

    bool operator==(const CaConfiguration&) const = default;
};

CaConfiguration canonical(CaConfiguration c, std::size_t quiescent);
CaConfiguration make_configuration(const CellularAutomaton1D& ca, const Word& cells, long long offset = 0);
Word configuration_word(const CellularAutomaton1D& ca, const CaConfiguration& c);
std::size_t cell_at(const CaConfiguration& c, long long position, std::size_t quiescent);

CaConfiguration ca_step(const CellularAutomaton1D& ca, const CaConfiguration& c);
std::vector<CaConfiguration> ca_run(const CellularAutomaton1D& ca, const CaConfiguration& c, std::size_t steps);

}  // namespace evm
