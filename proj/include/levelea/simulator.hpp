#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "levelea/bounds.hpp"
#include "levelea/kernels.hpp"
#include "levelea/problems.hpp"

namespace levelea {

enum class Variant { Ea, OneCommaLambda, OnePlusOne, Rls };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::Ea: return "ea";
        case Variant::OneCommaLambda: return "one_comma_lambda";
        case Variant::OnePlusOne: return "one_plus_one";
        case Variant::Rls: return "rls";
    }
    return "?";
}

enum class InitRule { AllZeros, UniformRandom, UniformSharedCopy };

struct AlgorithmConfig {
    Variant variant = Variant::Ea;
    int lambda = 1;
    int s = 1;
    MutationKernel kernel;
    ProblemInstance problem;
    InitRule init = InitRule::AllZeros;
    int t_max = 100;
    std::uint64_t seed = 1;
    bool record_levels = true;      // level of the first individual at each t
    bool record_population = false; // full per-level histogram at each t

    /// Tournament selection is inert in a single-individual population.
    AlgorithmConfig normalized() const {
        AlgorithmConfig c = *this;
        if (c.variant == Variant::Ea && c.lambda == 1) c.s = 1;
        return c;
    }

    void validate() const {
        if (lambda < 1) throw std::invalid_argument("AlgorithmConfig: lambda must be >= 1");
        if (s < 1) throw std::invalid_argument("AlgorithmConfig: s must be >= 1");
        if (t_max < 0) throw std::invalid_argument("AlgorithmConfig: t_max must be >= 0");
        if (variant != Variant::Rls && !kernel.sample)
            throw std::invalid_argument("AlgorithmConfig: kernel has no sampler");
        if (!problem.fitness) throw std::invalid_argument("AlgorithmConfig: problem has no evaluator");
    }
};

struct RunStatistics {
    std::uint64_t run_index = 0;
    std::vector<std::uint8_t> first_level;       // level of g_1^{(t)}, t = 0..t_max
    std::vector<std::vector<int>> level_counts;  // per t, histogram over levels 0..m
    long long hit_iteration = -1;                // first t with an optimal genotype generated
    long long hit_evaluations = -1;              // fitness evaluations made up to that point
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Independent per-run stream: identical (seed, run) gives an identical run
/// regardless of how runs are scheduled across threads.
inline Rng make_run_rng(std::uint64_t seed, std::uint64_t run_index) {
    const std::uint64_t a = detail::splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
    return Rng(detail::splitmix64(a + run_index));
}

namespace detail {

struct RunRecorder {
    const ProblemInstance* problem;
    const AlgorithmConfig* cfg;
    RunStatistics stats;
    long long evals = 0;

    explicit RunRecorder(const AlgorithmConfig& c, std::uint64_t run) : problem(&c.problem), cfg(&c) {
        stats.run_index = run;
        if (c.record_levels) stats.first_level.reserve(c.t_max + 1);
        if (c.record_population) stats.level_counts.reserve(c.t_max + 1);
    }

    void evaluated(const Genotype& g, double /*fitness*/) {
        ++evals;
        if (stats.hit_evaluations < 0 && problem->optimum_test(g)) {
            stats.hit_evaluations = evals;
        }
    }

    void generation_done(long long t, const std::vector<int>& levels_of_population) {
        if (stats.hit_iteration < 0 && stats.hit_evaluations >= 0) stats.hit_iteration = t;
        if (cfg->record_levels) {
            const int lvl = levels_of_population.front();
            stats.first_level.push_back(static_cast<std::uint8_t>(std::min(lvl, 255)));
        }
        if (cfg->record_population) {
            std::vector<int> hist(problem->m() + 1, 0);
            for (const int lvl : levels_of_population) ++hist[lvl];
            stats.level_counts.push_back(std::move(hist));
        }
    }
};

inline Genotype make_initial(const AlgorithmConfig& cfg, Rng& rng) {
    Genotype g(cfg.problem.n, 0);
    if (cfg.init != InitRule::AllZeros) {
        std::bernoulli_distribution bit(0.5);
        for (auto& b : g) b = bit(rng) ? 1 : 0;
    }
    return g;
}

}  // namespace detail

/// Non-elitist generational loop: each of the lambda slots of the next
/// population is filled independently by best-of-s tournament selection
/// (uniform draws with replacement) followed by one mutation.
inline RunStatistics run_ea(const AlgorithmConfig& config, std::uint64_t run_index = 0) {
    const AlgorithmConfig cfg = config.normalized();
    cfg.validate();
    if (cfg.variant != Variant::Ea) throw std::invalid_argument("run_ea: variant mismatch");
    Rng rng = make_run_rng(cfg.seed, run_index);
    detail::RunRecorder rec(cfg, run_index);

    std::vector<Genotype> pop(cfg.lambda);
    std::vector<double> fit(cfg.lambda);
    std::vector<int> levels(cfg.lambda);
    if (cfg.init == InitRule::UniformSharedCopy) {
        const Genotype shared = detail::make_initial(cfg, rng);
        for (auto& g : pop) g = shared;
    } else {
        for (auto& g : pop) g = detail::make_initial(cfg, rng);
    }
    for (int k = 0; k < cfg.lambda; ++k) {
        fit[k] = cfg.problem.fitness(pop[k]);
        levels[k] = cfg.problem.partition.level_of(fit[k]);
        rec.evaluated(pop[k], fit[k]);
    }
    rec.generation_done(0, levels);

    std::uniform_int_distribution<int> pick(0, cfg.lambda - 1);
    std::vector<Genotype> next(cfg.lambda);
    std::vector<double> next_fit(cfg.lambda);
    std::vector<int> next_levels(cfg.lambda);
    for (int t = 1; t <= cfg.t_max; ++t) {
        for (int k = 0; k < cfg.lambda; ++k) {
            int best = pick(rng);
            for (int d = 1; d < cfg.s; ++d) {
                const int cand = pick(rng);
                if (fit[cand] > fit[best]) best = cand;
            }
            next[k] = cfg.kernel.sample(pop[best], rng);
            next_fit[k] = cfg.problem.fitness(next[k]);
            next_levels[k] = cfg.problem.partition.level_of(next_fit[k]);
            rec.evaluated(next[k], next_fit[k]);
        }
        pop.swap(next);
        fit.swap(next_fit);
        levels.swap(next_levels);
        rec.generation_done(t, levels);
    }
    return rec.stats;
}

/// Single-parent process keeping the best of lambda offspring each iteration;
/// ties among the best offspring are broken uniformly.
inline RunStatistics run_one_comma_lambda(const AlgorithmConfig& config, std::uint64_t run_index = 0) {
    const AlgorithmConfig& cfg = config;
    cfg.validate();
    if (cfg.variant != Variant::OneCommaLambda)
        throw std::invalid_argument("run_one_comma_lambda: variant mismatch");
    Rng rng = make_run_rng(cfg.seed, run_index);
    detail::RunRecorder rec(cfg, run_index);

    Genotype b = detail::make_initial(cfg, rng);
    double fb = cfg.problem.fitness(b);
    rec.evaluated(b, fb);
    std::vector<int> lvl{cfg.problem.partition.level_of(fb)};
    rec.generation_done(0, lvl);

    for (int t = 1; t <= cfg.t_max; ++t) {
        Genotype best;
        double best_fit = 0.0;
        int tie_count = 0;
        for (int k = 0; k < cfg.lambda; ++k) {
            Genotype child = cfg.kernel.sample(b, rng);
            const double f = cfg.problem.fitness(child);
            rec.evaluated(child, f);
            if (k == 0 || f > best_fit) {
                best = std::move(child);
                best_fit = f;
                tie_count = 1;
            } else if (f == best_fit) {
                ++tie_count;
                std::uniform_int_distribution<int> keep(1, tie_count);
                if (keep(rng) == 1) best = std::move(child);
            }
        }
        b = std::move(best);
        fb = best_fit;
        lvl[0] = cfg.problem.partition.level_of(fb);
        rec.generation_done(t, lvl);
    }
    return rec.stats;
}

/// Elitist single-individual process accepting strict improvements only.
inline RunStatistics run_one_plus_one(const AlgorithmConfig& config, std::uint64_t run_index = 0) {
    const AlgorithmConfig& cfg = config;
    cfg.validate();
    if (cfg.variant != Variant::OnePlusOne)
        throw std::invalid_argument("run_one_plus_one: variant mismatch");
    Rng rng = make_run_rng(cfg.seed, run_index);
    detail::RunRecorder rec(cfg, run_index);

    Genotype x = detail::make_initial(cfg, rng);
    double fx = cfg.problem.fitness(x);
    rec.evaluated(x, fx);
    std::vector<int> lvl{cfg.problem.partition.level_of(fx)};
    rec.generation_done(0, lvl);

    for (int t = 1; t <= cfg.t_max; ++t) {
        Genotype y = cfg.kernel.sample(x, rng);
        const double fy = cfg.problem.fitness(y);
        rec.evaluated(y, fy);
        if (fy > fx) {
            x = std::move(y);
            fx = fy;
        }
        lvl[0] = cfg.problem.partition.level_of(fx);
        rec.generation_done(t, lvl);
    }
    return rec.stats;
}

/// One-bit local search: flip a uniformly chosen bit, accept ties or better.
inline RunStatistics run_rls(const AlgorithmConfig& config, std::uint64_t run_index = 0) {
    const AlgorithmConfig& cfg = config;
    if (cfg.variant != Variant::Rls) throw std::invalid_argument("run_rls: variant mismatch");
    if (!cfg.problem.fitness) throw std::invalid_argument("run_rls: problem has no evaluator");
    Rng rng = make_run_rng(cfg.seed, run_index);
    detail::RunRecorder rec(cfg, run_index);

    Genotype x = detail::make_initial(cfg, rng);
    double fx = cfg.problem.fitness(x);
    rec.evaluated(x, fx);
    std::vector<int> lvl{cfg.problem.partition.level_of(fx)};
    rec.generation_done(0, lvl);

    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    for (int t = 1; t <= cfg.t_max; ++t) {
        Genotype y = x;
        y[pick(rng)] ^= 1u;
        const double fy = cfg.problem.fitness(y);
        rec.evaluated(y, fy);
        if (fy >= fx) {
            x = std::move(y);
            fx = fy;
        }
        lvl[0] = cfg.problem.partition.level_of(fx);
        rec.generation_done(t, lvl);
    }
    return rec.stats;
}

inline RunStatistics run(const AlgorithmConfig& cfg, std::uint64_t run_index = 0) {
    switch (cfg.variant) {
        case Variant::Ea: return run_ea(cfg, run_index);
        case Variant::OneCommaLambda: return run_one_comma_lambda(cfg, run_index);
        case Variant::OnePlusOne: return run_one_plus_one(cfg, run_index);
        case Variant::Rls: return run_rls(cfg, run_index);
    }
    throw std::logic_error("run: unknown variant");
}

/// Runs are the unit of parallel work; aggregation is by run index, so the
/// result is identical for any thread count.
inline std::vector<RunStatistics> run_many(const AlgorithmConfig& cfg, int runs, int threads = 0) {
    if (runs < 0) throw std::invalid_argument("run_many: negative run count");
    std::vector<RunStatistics> out(runs);
    if (runs == 0) return out;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const int nthreads = threads > 0 ? threads : static_cast<int>(std::min<unsigned>(hw, 8));
    if (nthreads <= 1) {
        for (int r = 0; r < runs; ++r) out[r] = run(cfg, r);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&] {
            for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) out[r] = run(cfg, r);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

// ---------------------------------------------------------------------------
// Estimation with normal-approximation confidence intervals.
// ---------------------------------------------------------------------------

struct PointEstimate {
    int t = 0;
    double p = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool degenerate = false;  // p in {0,1}: the normal approximation is invalid
};

inline PointEstimate normal_ci(int successes, int trials, int t = 0, double z = 1.96) {
    if (trials < 1) throw std::invalid_argument("normal_ci: need at least one trial");
    PointEstimate e;
    e.t = t;
    e.p = static_cast<double>(successes) / trials;
    const double hw = z * std::sqrt(e.p * (1.0 - e.p) / trials);
    e.lo = e.p - hw;
    e.hi = e.p + hw;
    e.degenerate = successes == 0 || successes == trials;
    return e;
}

/// Per requested iteration, the share of runs whose first individual sits in
/// H_level, with a 95% normal-approximation interval. Each run contributes
/// one Bernoulli observation (an unbiased estimate of E[z_level^(t)]).
inline std::vector<PointEstimate> estimate_level_probability(
    const std::vector<RunStatistics>& runs, int level, const std::vector<int>& iterations,
    double z = 1.96) {
    if (runs.empty()) throw std::invalid_argument("estimate_level_probability: no runs");
    if (static_cast<int>(runs.size()) < 30)
        throw std::invalid_argument("estimate_level_probability: need at least 30 runs");
    std::vector<PointEstimate> out;
    out.reserve(iterations.size());
    for (const int t : iterations) {
        int hits = 0;
        for (const auto& r : runs) {
            if (t >= static_cast<int>(r.first_level.size()))
                throw std::out_of_range("estimate_level_probability: iteration beyond recorded range");
            hits += r.first_level[t] >= level;
        }
        out.push_back(normal_ci(hits, static_cast<int>(runs.size()), t, z));
    }
    return out;
}

/// Empirical P{hit time > t} with a 95% interval.
inline PointEstimate estimate_hit_time_tail(const std::vector<RunStatistics>& runs, int t) {
    if (runs.empty()) throw std::invalid_argument("estimate_hit_time_tail: no runs");
    int beyond = 0;
    for (const auto& r : runs) beyond += (r.hit_iteration < 0 || r.hit_iteration > t);
    return normal_ci(beyond, static_cast<int>(runs.size()), t);
}

// ---------------------------------------------------------------------------
// Direct simulation of a level chain (the single-individual surrogate).
// ---------------------------------------------------------------------------

/// Walks the chain for t_max steps and returns the first step at which
/// `absorbing_state` is reached, or -1.
inline long long chain_hit_time(const Matrix& transition, int start, int absorbing_state,
                                int t_max, Rng& rng) {
    const int states = static_cast<int>(transition.rows());
    if (start < 0 || start >= states) throw std::invalid_argument("chain_hit_time: bad start state");
    int state = start;
    if (state == absorbing_state) return 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 1; t <= t_max; ++t) {
        double u = unit(rng);
        int next = states - 1;
        for (int j = 0; j < states; ++j) {
            u -= transition(state, j);
            if (u < 0.0) {
                next = j;
                break;
            }
        }
        state = next;
        if (state == absorbing_state) return t;
    }
    return -1;
}

/// Exact marginals p^(0) T^t computed by stepwise powering.
inline std::vector<double> chain_marginals(const Matrix& transition, std::vector<double> p0, int t) {
    for (int step = 0; step < t; ++step) p0 = p0 * transition;
    return p0;
}

}  // namespace levelea
