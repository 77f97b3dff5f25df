#include "evm/ga.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "evm/errors.hpp"

namespace evm {

void GaConfig::validate() const {
    if (length == 0) throw DomainError("genome length must be positive");
    if (size == 0) throw DomainError("population size must be positive");
    if (!(mutation >= 0 && mutation <= 1)) throw DomainError("mutation rate must lie in [0, 1]");
    if (!(crossover >= 0 && crossover <= 1)) throw DomainError("crossover rate must lie in [0, 1]");
    if (tournament == 0) throw DomainError("tournament size must be at least 1");
    if (elitism > size) throw DomainError("elitism count exceeds the population size");
}

GaRandom::GaRandom(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double GaRandom::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t GaRandom::below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

namespace {

constexpr std::uint64_t kInitialStream = ~std::uint64_t{0};

std::size_t tournament(const std::vector<Rational>& fit, std::size_t k, GaRandom& rng) {
    std::size_t best = rng.below(fit.size());
    for (std::size_t i = 1; i < k; ++i) {
        const std::size_t c = rng.below(fit.size());
        if (fit[c] > fit[best]) best = c;
    }
    return best;
}

}  // namespace

Population initial_population(const GaConfig& cfg) {
    cfg.validate();
    GaRandom rng(cfg.seed, kInitialStream);
    Population p;
    for (std::size_t i = 0; i < cfg.size; ++i) {
        Genome g(cfg.length);
        for (std::size_t j = 0; j < cfg.length; ++j) g[j] = rng.chance(0.5);
        p.members.push_back(std::move(g));
    }
    return p;
}

Population ga_generation(const Population& p, const GaConfig& cfg, const FitnessFn& fitness, std::size_t t) {
    GaRandom rng(cfg.seed, t);
    std::vector<Rational> fit;
    for (const auto& g : p.members) fit.push_back(fitness(g));
    std::vector<std::size_t> order(p.members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

    // Elites keep their relative order in p, so elitism N copies p unchanged.
    order.resize(std::min(cfg.elitism, p.members.size()));
    std::sort(order.begin(), order.end());
    Population next;
    for (std::size_t i : order) next.members.push_back(p.members[i]);
    while (next.members.size() < cfg.size) {
        const Genome& a = p.members[tournament(fit, cfg.tournament, rng)];
        const Genome& b = p.members[tournament(fit, cfg.tournament, rng)];
        Genome child = a;
        if (rng.chance(cfg.crossover) && a.size() > 1) {
            const std::size_t cut = 1 + rng.below(a.size() - 1);
            std::copy(b.begin() + static_cast<std::ptrdiff_t>(cut), b.end(), child.begin() + static_cast<std::ptrdiff_t>(cut));
        }
        for (std::size_t j = 0; j < child.size(); ++j)
            if (rng.chance(cfg.mutation)) child[j] = !child[j];
        next.members.push_back(std::move(child));
    }
    return next;
}

EvolutionaryMachine ga_machine(const GaConfig& cfg, const FitnessFn& fitness, const Mode& mode, const Budgets& budgets) {
    cfg.validate();
    NativeLevel level;
    level.name = "ga-step";
    level.input_alphabet = population_alphabet();
    level.declared_class = LevelClass::tm;
    level.apply = [cfg, fitness](const Word& w, std::size_t t) {
        const Population p = decode_population(w);
        if (p.members.size() != cfg.size || p.members.front().size() != cfg.length)
            throw DomainError("population does not match the configured size and genome length");
        return NativeStep{encode_population(ga_generation(p, cfg, fitness, t)), cfg.size * cfg.length, false};
    };
    EvolutionaryMachine e;
    e.name = "ga";
    e.flavor = Flavor::basic;
    e.schedule = PeriodicSchedule{{make_level(std::move(level))}};
    e.search = FitnessAtLeast{cfg.fitness, cfg.threshold, fitness};
    e.mode = mode;
    e.budgets = budgets;
    e.validate();
    return e;
}

GaRun run_ga_as_etm(const GaConfig& cfg, const Mode& mode, const Budgets& budgets) {
    return run_ga_as_etm(cfg, builtin_fitness(cfg.fitness), mode, budgets);
}

GaRun run_ga_as_etm(const GaConfig& cfg, const FitnessFn& fitness, const Mode& mode, const Budgets& budgets) {
    GaRun run;
    run.machine = ga_machine(cfg, fitness, mode, budgets);
    run.initial = initial_population(cfg);
    const Word w0 = encode_population(run.initial);
    run.result = bem_run(run.machine, Generation{w0, 0});
    std::size_t t = 0;
    for (const auto& w : run.result.generations(w0)) {
        const Population p = decode_population(w);
        GaStats s{t++, fitness(p.members.front()), 0};
        double total = 0;
        for (const auto& g : p.members) {
            const Rational f = fitness(g);
            s.best = std::max(s.best, f);
            total += f.to_double();
        }
        s.mean = total / static_cast<double>(p.members.size());
        run.stats.push_back(s);
    }
    const Population last = decode_population(run.result.result.payload);
    run.best = last.members.front();
    run.best_fitness = fitness(run.best);
    for (const auto& g : last.members) {
        const Rational f = fitness(g);
        if (f > run.best_fitness) {
            run.best = g;
            run.best_fitness = f;
        }
    }
    return run;
}

std::string format_number(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string ga_csv(const std::vector<GaStats>& stats) {
    std::string out = "t,best,mean\n";
    for (const auto& s : stats)
        out += std::to_string(s.t) + "," + format_number(s.best.to_double()) + "," + format_number(s.mean) + "\n";
    return out;
}

}  // namespace evm
