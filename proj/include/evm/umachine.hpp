#pragma once

// Unorganized machines: synchronous networks of two-input NAND gates. B-type networks put
// an on/off switch on every gate input; a switched-off input reads as 1.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "evm/ga.hpp"

namespace evm {

struct GateSource {
    enum class Kind { gate, input };
    Kind kind = Kind::gate;
    std::size_t index = 0;

    bool operator==(const GateSource&) const = default;
};

struct UMachineNetwork {
    std::size_t gates = 0;
    std::size_t inputs = 0;
    std::vector<std::array<GateSource, 2>> wires;  // per gate
    std::optional<std::vector<bool>> switches;     // 2 per gate (B-type only)
    std::vector<std::size_t> outputs;

    bool btype() const { return switches.has_value(); }
    std::size_t switch_count() const { return 2 * gates; }
    void validate() const;
};

/// `gates G`, `inputs I`, `wire g<k> <src> <src>` (sources g<k> or i<k>),
/// `switches on|off ...`, `outputs g<k>...`.
UMachineNetwork parse_network(std::string_view text);

/// Next gate vector; `switches` overrides the network's own when given.
std::vector<bool> atype_step(const UMachineNetwork& net, const std::vector<bool>& state, const std::vector<bool>& inputs,
                             const std::vector<bool>* switches = nullptr);

struct TruthTable {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<std::pair<std::vector<bool>, std::vector<bool>>> rows;
};

/// Lines `row <input bits> -> <output bits>`.
TruthTable parse_truth_table(std::string_view text);

/// Output gate values after `settle` clock steps from the all-zero state.
std::vector<bool> network_response(const UMachineNetwork& net, const std::vector<bool>& inputs,
                                   const std::vector<bool>& switches, std::size_t settle);

/// Fraction of rows matched; `settle` defaults to 2G.
Rational switch_fitness(const UMachineNetwork& net, const TruthTable& table, const std::vector<bool>& switches,
                        std::optional<std::size_t> settle = std::nullopt);

struct TrainResult {
    std::vector<bool> switches;
    Rational score;
    GaRun run;
};

/// GA over switch configurations; cfg.length is forced to the switch count and the
/// threshold to 1 (all rows).
TrainResult btype_train(const UMachineNetwork& net, const TruthTable& table, GaConfig cfg,
                        const Budgets& budgets = {});

}  // namespace evm
