#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "levelea/levels.hpp"
#include "levelea/rational.hpp"

namespace levelea {

using Genotype = std::vector<std::uint8_t>;
using Rng = std::mt19937_64;

/// Randomized genotype map plus, when the operator is level-based, its exact
/// cumulative transition matrix (row i, column j = probability of mutating a
/// level-i parent into the superlevel H_j).
struct MutationKernel {
    std::string name;
    std::function<Genotype(const Genotype&, Rng&)> sample;
    std::optional<BoundMatrix> gamma;
    std::map<std::string, double> params;
};

// ---------------------------------------------------------------------------
// Point mutation: keep the genotype with probability q, otherwise flip one
// uniformly chosen gene.
// ---------------------------------------------------------------------------

inline Genotype point_mutation_sample(const Genotype& g, double q, Rng& rng) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("point_mutation_sample: q outside [0,1]");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < q) return g;
    Genotype out = g;
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    const std::size_t i = pick(rng);
    out[i] ^= 1u;
    return out;
}

/// Cumulative transition matrix of point mutation under the canonical
/// unitation partition with m = n (one level per number of ones): one flip
/// moves at most one level, so rows are 1 below the diagonal, q (+ upgrade
/// mass) on it, (1-q)(n-i)/n just above, 0 beyond.
inline BoundMatrix point_mutation_gamma(int n, double q) {
    if (n < 1) throw std::invalid_argument("point_mutation_gamma: n must be >= 1");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("point_mutation_gamma: q outside [0,1]");
    const auto qr = detail::rationalize(q);
    BoundMatrix g(n, BoundKind::Exact, qr ? 0.0 : 1e-12);
    const auto up = [&](int i) -> double {
        if (qr) return ((detail::Rational(1) - *qr) * detail::Rational(n - i, n)).value();
        return (1.0 - q) * (n - i) / n;
    };
    const auto diag = [&](int i) -> double {
        if (i == n) return qr ? qr->value() : q;
        if (qr) return (*qr + (detail::Rational(1) - *qr) * detail::Rational(n - i, n)).value();
        return q + (1.0 - q) * (n - i) / n;
    };
    for (int i = 0; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (j <= i - 1) g.at(i, j) = 1.0;
            else if (j == i) g.at(i, j) = diag(i);
            else if (j == i + 1) g.at(i, j) = up(i);
            else g.at(i, j) = 0.0;
        }
    }
    g.validate();
    return g;
}

inline MutationKernel point_mutation_kernel(int n, double q) {
    MutationKernel k;
    k.name = "point";
    k.params = {{"q", q}, {"n", static_cast<double>(n)}};
    k.sample = [q](const Genotype& g, Rng& rng) { return point_mutation_sample(g, q, rng); };
    k.gamma = point_mutation_gamma(n, q);
    return k;
}

// ---------------------------------------------------------------------------
// Block kernels: genotype decomposes into d blocks, fitness = number of
// blocks holding a property. A block without the property gains it with
// probability r_tilde; a block with it keeps it with probability r.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<double>> binomial_table(int n) {
    std::vector<std::vector<double>> c(n + 1);
    for (int i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1.0);
        for (int k = 1; k < i; ++k) c[i][k] = c[i - 1][k - 1] + c[i - 1][k];
    }
    return c;
}

/// Binomial(n, p) point mass at k, with exact handling of p in {0, 1}.
inline double binomial_pmf(const std::vector<std::vector<double>>& table, int n, int k, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    return table[n][k] * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

}  // namespace detail

/// Probability of ending with at least j property blocks, starting from i of
/// them: convolve gains over the d-i empty blocks with the survival count of
/// the i occupied ones. Entries are float-constructed; comparisons downstream
/// use a 1e-12 tolerance.
inline BoundMatrix block_gamma(int d, double r, double r_tilde) {
    if (d < 1) throw std::invalid_argument("block_gamma: d must be >= 1");
    if (r < 0.0 || r > 1.0 || r_tilde < 0.0 || r_tilde > 1.0)
        throw std::invalid_argument("block_gamma: probabilities outside [0,1]");
    const int m = d;
    const auto table = detail::binomial_table(m);
    BoundMatrix g(m, BoundKind::Exact, 1e-12);
    for (int i = 0; i <= m; ++i) {
        // keep_at_least[l] = probability at least l of the i property blocks survive
        std::vector<double> keep_at_least(i + 2, 0.0);
        for (int l = i; l >= 0; --l) {
            // exactly l survive <=> i - l are lost
            keep_at_least[l] = keep_at_least[l + 1] + detail::binomial_pmf(table, i, i - l, 1.0 - r);
        }
        const auto q_of = [&](int l) {
            if (l > i) return 0.0;
            if (l <= 0) return 1.0;
            return keep_at_least[l];
        };
        for (int j = 1; j <= m; ++j) {
            double acc = 0.0;
            for (int k = 0; k <= m - i; ++k)
                acc += detail::binomial_pmf(table, m - i, k, r_tilde) * q_of(j - k);
            g.at(i, j) = std::min(1.0, acc);
        }
    }
    g.validate();
    return g;
}

// ---------------------------------------------------------------------------
// Bitwise mutation: flip each gene independently with probability p_m.
// ---------------------------------------------------------------------------

inline Genotype bitwise_mutation_sample(const Genotype& g, double p_m, Rng& rng) {
    if (p_m < 0.0 || p_m > 1.0)
        throw std::invalid_argument("bitwise_mutation_sample: p_m outside [0,1]");
    Genotype out = g;
    if (p_m == 0.0) return out;
    if (p_m == 1.0) {
        for (auto& b : out) b ^= 1u;
        return out;
    }
    std::bernoulli_distribution flip(p_m);
    for (auto& b : out)
        if (flip(rng)) b ^= 1u;
    return out;
}

/// Bitwise mutation on the unitation partition is the d = n block kernel with
/// gain probability p_m and keep probability 1 - p_m.
inline BoundMatrix bitwise_onemax_gamma(int n, double p_m) { return block_gamma(n, 1.0 - p_m, p_m); }

inline MutationKernel bitwise_mutation_kernel(int n, double p_m) {
    MutationKernel k;
    k.name = "bitwise";
    k.params = {{"pm", p_m}, {"n", static_cast<double>(n)}};
    k.sample = [p_m](const Genotype& g, Rng& rng) { return bitwise_mutation_sample(g, p_m, rng); };
    k.gamma = bitwise_onemax_gamma(n, p_m);
    return k;
}

/// Per-block transition probabilities of bitwise mutation on a disjoint
/// triangle under the edge-based cover encoding. A triangle block is optimal
/// iff its three genes select only two distinct vertices; the two redundant
/// patterns are the all-equal ones, so
///   r_tilde = 1 - p^3 - (1-p)^3   (redundant block becomes optimal)
///   r       = 1 - p(1-p)^2 - p^2(1-p)   (optimal block stays optimal).
struct BlockParams {
    double r;
    double r_tilde;
};

inline BlockParams vcp_block_params(double p_m) {
    if (p_m < 0.0 || p_m > 1.0) throw std::invalid_argument("vcp_block_params: p_m outside [0,1]");
    const double p = p_m, s = 1.0 - p_m;
    return BlockParams{1.0 - p * s * s - p * p * s, 1.0 - p * p * p - s * s * s};
}

// ---------------------------------------------------------------------------
// Local-search style mutation: flip one uniformly chosen gene, keep the
// result only if it strictly improves fitness.
// ---------------------------------------------------------------------------

inline Genotype rls_mutation_sample(const Genotype& g,
                                    const std::function<double(const Genotype&)>& fitness,
                                    Rng& rng) {
    Genotype out = g;
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    out[pick(rng)] ^= 1u;
    if (fitness(out) > fitness(g)) return out;
    return g;
}

inline MutationKernel rls_mutation_kernel(const std::function<double(const Genotype&)>& fitness) {
    MutationKernel k;
    k.name = "rls";
    k.sample = [fitness](const Genotype& g, Rng& rng) {
        return rls_mutation_sample(g, fitness, rng);
    };
    return k;
}

// ---------------------------------------------------------------------------
// 2-SAT random walk: if the assignment violates the formula, pick a violated
// clause uniformly, pick one of its variables uniformly, flip it.
// ---------------------------------------------------------------------------

/// CNF with clauses of at most two literals. A literal is +-(v+1) for
/// variable index v; positive means the variable must be true.
struct CnfFormula {
    int n = 0;
    std::vector<std::vector<int>> clauses;

    void validate() const {
        for (const auto& c : clauses) {
            if (c.empty() || c.size() > 2)
                throw std::invalid_argument("CnfFormula: clauses must have 1 or 2 literals");
            for (const int lit : c) {
                const int v = std::abs(lit) - 1;
                if (lit == 0 || v >= n) throw std::invalid_argument("CnfFormula: bad literal");
            }
        }
    }

    bool literal_true(int lit, const Genotype& g) const {
        const int v = std::abs(lit) - 1;
        return lit > 0 ? g[v] != 0 : g[v] == 0;
    }

    bool clause_satisfied(const std::vector<int>& c, const Genotype& g) const {
        for (const int lit : c)
            if (literal_true(lit, g)) return true;
        return false;
    }

    bool satisfied(const Genotype& g) const {
        for (const auto& c : clauses)
            if (!clause_satisfied(c, g)) return false;
        return true;
    }
};

inline Genotype sat_walk_sample(const Genotype& g, const CnfFormula& formula, Rng& rng) {
    std::vector<const std::vector<int>*> violated;
    for (const auto& c : formula.clauses)
        if (!formula.clause_satisfied(c, g)) violated.push_back(&c);
    if (violated.empty()) return g;
    std::uniform_int_distribution<std::size_t> pick_clause(0, violated.size() - 1);
    const auto& clause = *violated[pick_clause(rng)];
    std::uniform_int_distribution<std::size_t> pick_lit(0, clause.size() - 1);
    const int var = std::abs(clause[pick_lit(rng)]) - 1;
    Genotype out = g;
    out[var] ^= 1u;
    return out;
}

inline MutationKernel sat_walk_kernel(CnfFormula formula) {
    MutationKernel k;
    k.name = "sat-walk";
    k.sample = [formula = std::move(formula)](const Genotype& g, Rng& rng) {
        return sat_walk_sample(g, formula, rng);
    };
    return k;
}

// ---------------------------------------------------------------------------
// Preset lower-bound matrices. All are built from exact small rationals, so
// their comparison tolerance is 0.
// ---------------------------------------------------------------------------

/// One-bit local search on an ell-valued unimodal landscape: never loses a
/// level, gains one with probability at least 1/n.
inline BoundMatrix rls_unimodal_lower_bounds(int n, int ell) {
    if (n < 1 || ell < 2) throw std::invalid_argument("rls_unimodal_lower_bounds: need n >= 1, ell >= 2");
    const int m = ell - 1;
    BoundMatrix a(m, BoundKind::Lower, 0.0);
    for (int i = 0; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            if (i >= 1 && j <= i) a.at(i, j) = 1.0;
            else if (j == i + 1) a.at(i, j) = detail::Rational(1, n).value();
            else a.at(i, j) = 0.0;
        }
    return a;
}

/// Violated-clause walk over distance levels: gains or keeps a level with
/// probability 1/2 each, never falls more than one level, absorbs at m.
inline BoundMatrix sat_walk_lower_bounds(int m) {
    if (m < 1) throw std::invalid_argument("sat_walk_lower_bounds: m must be >= 1");
    BoundMatrix a(m, BoundKind::Lower, 0.0);
    for (int i = 0; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            if (j <= i - 1) a.at(i, j) = 1.0;
            else if (j == i) a.at(i, j) = (i == m) ? 1.0 : 0.5;
            else if (j == i + 1) a.at(i, j) = 0.5;
            else a.at(i, j) = 0.0;
        }
    return a;
}

/// Point mutation on the half-cover set-cover family, folded onto unitation
/// levels 0..n/2. The optimum row is pessimistically given only the staying
/// mass q so the associated chain matches the lazy two-urn diffusion walk.
inline BoundMatrix balas_point_lower_bounds(int n, double q) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("balas_point_lower_bounds: n must be even, >= 4");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("balas_point_lower_bounds: q outside [0,1]");
    const int m = n / 2;
    const auto qr = detail::rationalize(q);
    BoundMatrix a(m, BoundKind::Lower, qr ? 0.0 : 1e-12);
    const auto up = [&](int i) -> double {
        if (qr) return ((detail::Rational(1) - *qr) * detail::Rational(n - i, n)).value();
        return (1.0 - q) * (n - i) / n;
    };
    for (int i = 0; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            if (j <= i - 1) a.at(i, j) = 1.0;
            else if (j == i) {
                if (i == m) a.at(i, j) = qr ? qr->value() : q;
                else a.at(i, j) = qr ? (*qr + (detail::Rational(1) - *qr) * detail::Rational(n - i, n)).value()
                                     : q + (1.0 - q) * (n - i) / n;
            } else if (j == i + 1) a.at(i, j) = up(i);
            else a.at(i, j) = 0.0;
        }
    return a;
}

/// Named dispatch used by the CLI. Parameters: rls-unimodal(n, ell),
/// sat-walk(m), balas-point(n, q).
inline BoundMatrix lower_bounds_for_kernel(const std::string& kind,
                                           const std::map<std::string, double>& params) {
    const auto need = [&](const char* key) {
        const auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("lower_bounds_for_kernel: missing parameter " +
                                        std::string(key));
        return it->second;
    };
    if (kind == "rls-unimodal")
        return rls_unimodal_lower_bounds(static_cast<int>(need("n")), static_cast<int>(need("ell")));
    if (kind == "sat-walk") return sat_walk_lower_bounds(static_cast<int>(need("m")));
    if (kind == "balas-point")
        return balas_point_lower_bounds(static_cast<int>(need("n")), need("q"));
    throw std::invalid_argument("lower_bounds_for_kernel: unknown preset '" + kind + "'");
}

}  // namespace levelea
