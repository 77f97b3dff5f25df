#pragma once

// Seeded genetic algorithm run as the level of a period-1 basic evolutionary machine.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "evm/machine.hpp"
#include "evm/population.hpp"
#include "evm/runtime.hpp"

namespace evm {

struct GaConfig {
    std::size_t length = 16;      // L
    std::size_t size = 20;        // N
    double mutation = 1.0 / 16;   // per bit
    double crossover = 0.7;
    std::size_t tournament = 2;
    std::size_t elitism = 1;
    std::uint64_t seed = 7;
    std::string fitness = "onemax";
    Rational threshold{16};

    /// Throws DomainError on out-of-range fields.
    void validate() const;
};

/// Deterministic random stream for (seed, stream).
class GaRandom {
public:
    GaRandom(std::uint64_t seed, std::uint64_t stream);
    double uniform();                     // [0, 1)
    std::size_t below(std::size_t n);     // [0, n)
    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

Population initial_population(const GaConfig& cfg);

/// One generation: elites copied, remaining slots filled by tournament parents, one-point
/// crossover and per-bit mutation. Stream t of the seed drives all draws.
Population ga_generation(const Population& p, const GaConfig& cfg, const FitnessFn& fitness, std::size_t t);

struct GaStats {
    std::size_t t = 0;
    Rational best;
    double mean = 0;
};

struct GaRun {
    EvolutionaryMachine machine;
    Population initial;
    RunResult result;
    std::vector<GaStats> stats;  // one entry per generation, t = 0 first
    Genome best;                 // fittest genome of the final generation
    Rational best_fitness;
};

EvolutionaryMachine ga_machine(const GaConfig& cfg, const FitnessFn& fitness, const Mode& mode, const Budgets& budgets);

GaRun run_ga_as_etm(const GaConfig& cfg, const Mode& mode = {}, const Budgets& budgets = {});
GaRun run_ga_as_etm(const GaConfig& cfg, const FitnessFn& fitness, const Mode& mode = {}, const Budgets& budgets = {});

/// CSV lines "t,best,mean" with a header.
std::string ga_csv(const std::vector<GaStats>& stats);

/// Shortest round-trip decimal text for `x`.
std::string format_number(double x);

}  // namespace evm
