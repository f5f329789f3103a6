#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "levelea/kernels.hpp"
#include "levelea/levels.hpp"

namespace levelea {

/// Benchmark instance: a fitness evaluator wired to the level partition the
/// bound machinery expects. For every preset here the top level holds exactly
/// the optima, so optimum_test(g) <=> classify(g) == m.
struct ProblemInstance {
    std::string name;
    int n = 0;
    std::function<double(const Genotype&)> fitness;
    LevelPartition partition;
    std::function<bool(const Genotype&)> optimum_test;

    int m() const { return partition.level_count(); }
    int classify(const Genotype& g) const { return partition.level_of(fitness(g)); }
};

inline int popcount(const Genotype& g) {
    int c = 0;
    for (const auto b : g) c += b != 0;
    return c;
}

// ---------------------------------------------------------------------------
// Count of ones, canonical partition with one level per fitness value.
// ---------------------------------------------------------------------------

inline ProblemInstance onemax(int n) {
    if (n < 1) throw std::invalid_argument("onemax: n must be >= 1");
    ProblemInstance p;
    p.name = "onemax:n=" + std::to_string(n);
    p.n = n;
    p.fitness = [](const Genotype& g) { return static_cast<double>(popcount(g)); };
    p.partition.thresholds.resize(n + 1);
    std::iota(p.partition.thresholds.begin(), p.partition.thresholds.end(), 0.0);
    p.partition.all_levels_nonempty = true;
    p.optimum_test = [n](const Genotype& g) { return popcount(g) == n; };
    return p;
}

// ---------------------------------------------------------------------------
// Vertex cover on disjoint triangles with the edge-based encoding: gene k of
// a block picks one endpoint of edge k; a triangle is covered optimally when
// the three picks hit only two distinct vertices. Fitness = number of
// optimally covered triangles.
// ---------------------------------------------------------------------------

namespace detail {
// Local endpoint tables for a triangle with vertices {0,1,2} and edges
// (0,1), (1,2), (2,0); gene value 1 picks the first endpoint.
inline int vcp_pick(int edge, int gene) {
    static constexpr int first[3] = {0, 1, 2};
    static constexpr int second[3] = {1, 2, 0};
    return gene ? first[edge] : second[edge];
}
}  // namespace detail

/// True when the 3-gene pattern covers its triangle with two vertices.
inline bool vcp_block_optimal(int g0, int g1, int g2) {
    bool seen[3] = {false, false, false};
    seen[detail::vcp_pick(0, g0)] = true;
    seen[detail::vcp_pick(1, g1)] = true;
    seen[detail::vcp_pick(2, g2)] = true;
    return (seen[0] + seen[1] + seen[2]) == 2;
}

struct VcpPreset {
    ProblemInstance problem;
    MutationKernel kernel;
};

inline VcpPreset vcp_triangles(int m_triangles, double p_m) {
    if (m_triangles < 1) throw std::invalid_argument("vcp_triangles: need at least one triangle");
    VcpPreset out;
    const int n = 3 * m_triangles;
    out.problem.name = "vcp:m=" + std::to_string(m_triangles);
    out.problem.n = n;
    out.problem.fitness = [m_triangles](const Genotype& g) {
        int opt = 0;
        for (int b = 0; b < m_triangles; ++b)
            opt += vcp_block_optimal(g[3 * b], g[3 * b + 1], g[3 * b + 2]);
        return static_cast<double>(opt);
    };
    out.problem.partition.thresholds.resize(m_triangles + 1);
    std::iota(out.problem.partition.thresholds.begin(), out.problem.partition.thresholds.end(), 0.0);
    out.problem.partition.all_levels_nonempty = true;
    auto fitness = out.problem.fitness;
    out.problem.optimum_test = [fitness, m_triangles](const Genotype& g) {
        return fitness(g) == m_triangles;
    };

    const BlockParams bp = vcp_block_params(p_m);
    out.kernel.name = "vcp-bitwise";
    out.kernel.params = {{"pm", p_m}, {"r", bp.r}, {"rt", bp.r_tilde}};
    out.kernel.sample = [p_m](const Genotype& g, Rng& rng) {
        return bitwise_mutation_sample(g, p_m, rng);
    };
    out.kernel.gamma = block_gamma(m_triangles, bp.r, bp.r_tilde);
    return out;
}

// ---------------------------------------------------------------------------
// Capped leading-ones: a concrete member of the ell-valued unimodal class
// (every non-optimal point improves by flipping its first zero bit).
// ---------------------------------------------------------------------------

inline ProblemInstance unimodal_path(int n, int ell) {
    if (ell < 2 || ell > n + 1)
        throw std::invalid_argument("unimodal_path: need 2 <= ell <= n+1");
    ProblemInstance p;
    p.name = "unimodal:n=" + std::to_string(n) + ",ell=" + std::to_string(ell);
    p.n = n;
    const int cap = ell - 1;
    p.fitness = [cap](const Genotype& g) {
        int lead = 0;
        for (const auto b : g) {
            if (!b) break;
            ++lead;
        }
        return static_cast<double>(std::min(lead, cap));
    };
    p.partition.thresholds.resize(ell);
    std::iota(p.partition.thresholds.begin(), p.partition.thresholds.end(), 0.0);
    p.partition.all_levels_nonempty = true;
    auto fitness = p.fitness;
    p.optimum_test = [fitness, cap](const Genotype& g) { return fitness(g) == cap; };
    return p;
}

// ---------------------------------------------------------------------------
// Planted 2-SAT. The walk operator never looks at fitness; the analysis
// partition grades genotypes by closeness to the planted assignment
// (level i <=> Hamming distance n - i, so the top level is the plant).
// ---------------------------------------------------------------------------

struct TwoSatInstance {
    ProblemInstance problem;
    CnfFormula formula;
    Genotype planted;
};

inline TwoSatInstance two_sat_instance(int n, CnfFormula formula, Genotype planted) {
    if (static_cast<int>(planted.size()) != n)
        throw std::invalid_argument("two_sat_instance: planted assignment has wrong length");
    formula.n = n;
    formula.validate();
    if (!formula.satisfied(planted))
        throw std::invalid_argument("two_sat_instance: planted assignment does not satisfy the formula");
    TwoSatInstance out;
    out.formula = std::move(formula);
    out.planted = std::move(planted);
    out.problem.name = "2sat:n=" + std::to_string(n);
    out.problem.n = n;
    const Genotype star = out.planted;
    out.problem.fitness = [star, n](const Genotype& g) {
        int dist = 0;
        for (int i = 0; i < n; ++i) dist += g[i] != star[i];
        return static_cast<double>(n - dist);
    };
    out.problem.partition.thresholds.resize(n + 1);
    std::iota(out.problem.partition.thresholds.begin(), out.problem.partition.thresholds.end(), 0.0);
    out.problem.partition.all_levels_nonempty = true;
    out.problem.optimum_test = [star](const Genotype& g) { return g == star; };
    return out;
}

inline TwoSatInstance two_sat_planted(int n, int num_clauses, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("two_sat_planted: n must be >= 2");
    Rng rng(seed);
    Genotype star(n);
    std::bernoulli_distribution bit(0.5);
    for (auto& b : star) b = bit(rng) ? 1 : 0;
    CnfFormula f;
    f.n = n;
    std::uniform_int_distribution<int> var(0, n - 1);
    for (int c = 0; c < num_clauses; ++c) {
        int u = var(rng), v = var(rng);
        while (v == u) v = var(rng);
        int lu = bit(rng) ? (u + 1) : -(u + 1);
        int lv = bit(rng) ? (v + 1) : -(v + 1);
        const auto truthy = [&](int lit) {
            const int idx = std::abs(lit) - 1;
            return lit > 0 ? star[idx] != 0 : star[idx] == 0;
        };
        if (!truthy(lu) && !truthy(lv)) {
            if (bit(rng)) lu = -lu;
            else lv = -lv;
        }
        f.clauses.push_back({lu, lv});
    }
    return two_sat_instance(n, std::move(f), std::move(star));
}

// ---------------------------------------------------------------------------
// Half-cover set-cover family in its unitation form: with k = n/2, every
// k-subset of the ground-set indices is an optimal cover. Fitness depends
// only on the number of ones: R(x) = n - x on covers (x >= n/2, decreasing),
// L(x) = x - n below (increasing, always smaller than every R value).
// ---------------------------------------------------------------------------

inline ProblemInstance balas_scp(int n) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("balas_scp: n must be even and >= 4");
    ProblemInstance p;
    p.name = "balas:n=" + std::to_string(n);
    p.n = n;
    const int half = n / 2;
    p.fitness = [n, half](const Genotype& g) {
        const int x = popcount(g);
        return x >= half ? static_cast<double>(n - x) : static_cast<double>(x - n);
    };
    p.partition.thresholds.resize(half + 1);
    for (int i = 0; i < half; ++i) p.partition.thresholds[i] = static_cast<double>(i - n);
    p.partition.thresholds[half] = static_cast<double>(half);  // fitness of an optimal cover
    p.partition.all_levels_nonempty = true;
    p.optimum_test = [half](const Genotype& g) { return popcount(g) == half; };
    return p;
}

/// Explicit ground-set evaluation of the same family (covers scored by size,
/// non-covers by -#uncovered elements). Exponential in n; cross-check only.
inline double balas_ground_set_fitness(const Genotype& g, int n) {
    if (static_cast<int>(g.size()) != n)
        throw std::invalid_argument("balas_ground_set_fitness: length mismatch");
    if (n > 20) throw std::invalid_argument("balas_ground_set_fitness: n too large for enumeration");
    const int k = n / 2;
    const int subset_size = n - k + 1;
    std::uint32_t chosen = 0;
    for (int i = 0; i < n; ++i)
        if (g[i]) chosen |= (1u << i);
    int uncovered = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != subset_size) continue;
        if ((mask & chosen) == 0) ++uncovered;  // ground-set element with no chosen subset
    }
    if (uncovered == 0) return static_cast<double>(n - std::popcount(chosen));
    return -static_cast<double>(uncovered);
}

/// Partition induced by the ground-set fitness (canonical over unitation
/// representatives); used to verify the unitation form classifies every
/// genotype identically.
inline LevelPartition balas_ground_set_partition(int n) {
    LevelPartition part;
    const int half = n / 2;
    part.thresholds.resize(half + 1);
    for (int x = 0; x <= half; ++x) {
        Genotype g(n, 0);
        for (int i = 0; i < x; ++i) g[i] = 1;
        part.thresholds[x] = balas_ground_set_fitness(g, n);
    }
    part.all_levels_nonempty = true;
    return part;
}

}  // namespace levelea
