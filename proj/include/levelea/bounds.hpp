#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levelea/kernels.hpp"
#include "levelea/levels.hpp"
#include "levelea/matrix.hpp"

namespace levelea {

/// Thrown when a routine requires a monotone matrix and the input is not.
struct MonotonicityError : std::invalid_argument {
    MonotonicityError(int i_, int j_)
        : std::invalid_argument("matrix not monotone at entry (" + std::to_string(i_) + "," +
                                std::to_string(j_) + ")"),
          i(i_), j(j_) {}
    int i, j;
};

enum class TrajectoryKind { LowerLinear, LowerChain, UpperJensen, InfinitePopulation, OneCommaLambdaExact };

inline const char* to_string(TrajectoryKind k) {
    switch (k) {
        case TrajectoryKind::LowerLinear: return "lower_linear";
        case TrajectoryKind::LowerChain: return "lower_chain";
        case TrajectoryKind::UpperJensen: return "upper_jensen";
        case TrajectoryKind::InfinitePopulation: return "infinite_population";
        case TrajectoryKind::OneCommaLambdaExact: return "one_comma_lambda";
    }
    return "?";
}

/// Per-iteration bound vectors over the superlevel sets, t = 0..t_max.
struct BoundTrajectory {
    TrajectoryKind kind;
    std::vector<std::vector<double>> values;   // values[t] has m components (levels 1..m)
    std::vector<std::string> warnings;
    double route_gap = 0.0;                    // max |closed form - iteration|, when both ran
    bool closed_form_used = false;

    int t_max() const { return static_cast<int>(values.size()) - 1; }
    const std::vector<double>& at(int t) const { return values.at(t); }
};

// ---------------------------------------------------------------------------
// Difference matrix and first-row vector.
// ---------------------------------------------------------------------------

struct WAlpha {
    Matrix w;                   // w(i-1, j-1) = a(i,j) - a(i-1,j), i,j = 1..m
    std::vector<double> alpha;  // row 0 of the bound matrix
};

inline WAlpha build_w_and_alpha(const BoundMatrix& a) {
    if (a.kind() == BoundKind::Upper)
        throw std::invalid_argument("build_w_and_alpha: expects a lower or exact matrix");
    const int m = a.m();
    WAlpha out{Matrix(m, m), std::vector<double>(m)};
    for (int j = 1; j <= m; ++j) {
        out.alpha[j - 1] = a.at(0, j);
        for (int i = 1; i <= m; ++i) out.w(i - 1, j - 1) = a.at(i, j) - a.at(i - 1, j);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrix norms and spectra.
// ---------------------------------------------------------------------------

enum class NormConvention {
    RowSums,  // max_i sum_j |w_ij|; controls ||xW||_1 under row-vector multiplication
    ColSums,  // max_j sum_i |w_ij|
};

inline double matrix_norm_inf(const Matrix& w, NormConvention conv = NormConvention::RowSums) {
    if (w.rows() != w.cols()) throw std::invalid_argument("matrix_norm_inf: not square");
    double best = 0.0;
    for (std::size_t a = 0; a < w.rows(); ++a) {
        double sum = 0.0;
        for (std::size_t b = 0; b < w.cols(); ++b)
            sum += std::abs(conv == NormConvention::RowSums ? w(a, b) : w(b, a));
        best = std::max(best, sum);
    }
    return best;
}

/// Spectral norm via symmetric power iteration on W W^T, Rayleigh-quotient
/// convergence to `tol` (default 1e-12).
inline double matrix_norm_2(const Matrix& w, double tol = 1e-12, int max_iters = 200000) {
    if (w.rows() != w.cols()) throw std::invalid_argument("matrix_norm_2: not square");
    const std::size_t n = w.rows();
    const Matrix s = w * w.transpose();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i) / (n + 1.0);
    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> sv(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) sv[i] += s(i, j) * v[j];
        double dot = 0.0, nrm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dot += v[i] * sv[i];
            nrm2 += v[i] * v[i];
        }
        const double next = dot / nrm2;
        double len = 0.0;
        for (const double x : sv) len += x * x;
        len = std::sqrt(len);
        if (len == 0.0) return 0.0;  // reached the null space: largest eigenvalue is 0
        for (std::size_t i = 0; i < n; ++i) v[i] = sv[i] / len;
        if (it > 0 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(0.0, lambda));
}

/// Eigenvalues of the n x n tridiagonal Toeplitz matrix with diagonal delta,
/// subdiagonal sigma, superdiagonal tau:
///   lambda_h = delta + 2 sqrt(sigma tau) cos(h pi / (n+1)),  h = 1..n,
/// returned in descending order. Requires sigma * tau >= 0 (real spectrum).
inline std::vector<double> toeplitz_tridiagonal_spectrum(int n, double delta, double sigma,
                                                         double tau) {
    if (n < 1) throw std::invalid_argument("toeplitz_tridiagonal_spectrum: n must be >= 1");
    if (sigma * tau < 0.0)
        throw std::invalid_argument("toeplitz_tridiagonal_spectrum: sigma*tau < 0 (complex spectrum)");
    const double root = 2.0 * std::sqrt(sigma * tau);
    std::vector<double> out(n);
    constexpr double pi = 3.14159265358979323846;
    for (int h = 1; h <= n; ++h) out[h - 1] = delta + root * std::cos(h * pi / (n + 1));
    return out;  // cos is decreasing on (0, pi), so already descending
}

/// Checks whether repeated application of W is certified to die out: either
/// absolute-sum norm < 1, or the power-iteration spectral norm < 1.
struct NormCertificate {
    bool certified = false;
    double norm_inf_rows = 0.0;
    double norm_inf_cols = 0.0;
    double norm_2 = -1.0;  // computed lazily, -1 when not needed
};

inline NormCertificate certify_contraction(const Matrix& w) {
    NormCertificate c;
    c.norm_inf_rows = matrix_norm_inf(w, NormConvention::RowSums);
    c.norm_inf_cols = matrix_norm_inf(w, NormConvention::ColSums);
    if (c.norm_inf_rows < 1.0 || c.norm_inf_cols < 1.0) {
        c.certified = true;
        return c;
    }
    c.norm_2 = matrix_norm_2(w);
    c.certified = c.norm_2 < 1.0;
    return c;
}

/// When every entry of a monotone lower-bound matrix is at least eps > 0, the
/// column sums of W telescope to a_mj - a_0j <= 1 - eps, so powers of W die
/// out. Returns that norm bound, or nullopt when some entry is below eps.
inline std::optional<double> epsilon_uniform_certificate(const BoundMatrix& a, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("epsilon_uniform_certificate: eps must be positive");
    for (int i = 0; i <= a.m(); ++i)
        for (int j = 1; j <= a.m(); ++j)
            if (a.at(i, j) < eps) return std::nullopt;
    double bound = 0.0;
    for (int j = 1; j <= a.m(); ++j) bound = std::max(bound, a.at(a.m(), j) - a.at(0, j));
    return bound;
}

// ---------------------------------------------------------------------------
// Linear lower-bound recursion and its geometric-series closed form.
// ---------------------------------------------------------------------------

struct LinearBoundOptions {
    bool require_monotone = true;  // verify turns this off for documented non-monotone presets
};

/// Runs u <- alpha + u W from u = E[z^(0)] and cross-checks against the
/// closed form z0 W^t + alpha (I-W)^{-1} (I - W^t); the iterative values are
/// returned and the max discrepancy recorded. The closed form reduces to the
/// stationary vector plus a geometric correction, so for dense trajectories
/// both routes cost O(m^2) per step.
inline BoundTrajectory lower_bound_linear(const BoundMatrix& a, const PopulationVector& z0,
                                          int t_max, const LinearBoundOptions& opts = {}) {
    if (a.kind() == BoundKind::Upper)
        throw std::invalid_argument("lower_bound_linear: expects a lower or exact matrix");
    if (z0.m() != a.m()) throw std::invalid_argument("lower_bound_linear: dimension mismatch");
    z0.validate();
    BoundTrajectory traj;
    traj.kind = TrajectoryKind::LowerLinear;
    if (const auto viol = first_monotonicity_violation(a, a.comparison_tol())) {
        if (opts.require_monotone) throw MonotonicityError(viol->first, viol->second);
        traj.warnings.push_back("matrix not monotone at (" + std::to_string(viol->first) + "," +
                                std::to_string(viol->second) + "); lower-bound guarantee void");
    }
    const auto [w, alpha] = build_w_and_alpha(a);

    const NormCertificate cert = certify_contraction(w);
    if (!cert.certified)
        traj.warnings.push_back("no available norm certifies that powers of W vanish");

    std::optional<std::vector<double>> stationary;
    try {
        const Matrix i_minus_w = Matrix::identity(a.m()) - w;
        stationary = solve_left(i_minus_w, alpha);
    } catch (const std::runtime_error&) {
        traj.warnings.push_back("I - W numerically singular; iterative route only");
    }

    std::vector<double> u = z0.z;
    traj.values.push_back(u);
    // closed form tracked incrementally: y + (z0 - y) W^t
    std::vector<double> drift;
    if (stationary) {
        drift.resize(a.m());
        for (int i = 0; i < a.m(); ++i) drift[i] = z0.z[i] - (*stationary)[i];
    }
    for (int t = 1; t <= t_max; ++t) {
        std::vector<double> next = u * w;
        for (int i = 0; i < a.m(); ++i) next[i] += alpha[i];
        u = std::move(next);
        traj.values.push_back(u);
        if (stationary) {
            drift = drift * w;
            for (int i = 0; i < a.m(); ++i) {
                const double closed = (*stationary)[i] + drift[i];
                traj.route_gap = std::max(traj.route_gap, std::abs(closed - u[i]));
            }
        }
    }
    traj.closed_form_used = stationary.has_value();
    return traj;
}

/// Single closed-form evaluation z0 W^t + alpha (I-W)^{-1} (I - W^t) using
/// binary-exponentiation matrix powers. Used by tests to pin the algebraic
/// route independently of the incremental one.
inline std::vector<double> lower_bound_linear_closed_form(const BoundMatrix& a,
                                                          const PopulationVector& z0, int t) {
    const auto [w, alpha] = build_w_and_alpha(a);
    const Matrix wt = w.power(static_cast<unsigned long long>(t));
    const std::vector<double> y = solve_left(Matrix::identity(a.m()) - w, alpha);
    std::vector<double> out = z0.z * wt;
    const std::vector<double> ywt = y * wt;
    for (int i = 0; i < a.m(); ++i) out[i] += y[i] - ywt[i];
    return out;
}

// ---------------------------------------------------------------------------
// Associated surrogate chain over levels 0..m.
// ---------------------------------------------------------------------------

/// Transition matrix t_ij = a(i,j) - a(i,j+1) (with the conceptual a(i,0) = 1
/// and a(i,m+1) = 0) of the one-individual surrogate process, plus an initial
/// level distribution.
struct AssociatedChain {
    Matrix t;                 // (m+1) x (m+1), rows sum to 1
    std::vector<double> p0;   // distribution over levels 0..m
};

/// p_i = z_i - z_{i+1} with z_0 = 1, z_{m+1} = 0.
inline std::vector<double> level_distribution(const PopulationVector& z) {
    const int m = z.m();
    std::vector<double> p(m + 1);
    double prev = 1.0;
    for (int i = 1; i <= m; ++i) {
        p[i - 1] = prev - z.z[i - 1];
        prev = z.z[i - 1];
    }
    p[m] = prev;
    return p;
}

inline Matrix associated_chain_matrix(const BoundMatrix& a, int* clamped_entries = nullptr) {
    const int m = a.m();
    Matrix t(m + 1, m + 1);
    if (clamped_entries) *clamped_entries = 0;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            const double hi = j == 0 ? 1.0 : a.at(i, j);
            const double lo = j == m ? 0.0 : a.at(i, j + 1);
            double v = hi - lo;
            if (v < 0.0) {
                if (v < -1e-15)
                    throw std::invalid_argument(
                        "associated_chain_matrix: row not monotone in j at (" + std::to_string(i) +
                        "," + std::to_string(j) + ")");
                v = 0.0;  // clamp rounding-scale negatives
                if (clamped_entries) ++*clamped_entries;
            }
            t(i, j) = v;
        }
    }
    for (int i = 0; i <= m; ++i) {
        double sum = 0.0;
        for (int j = 0; j <= m; ++j) sum += t(i, j);
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("associated_chain_matrix: row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum));
    }
    return t;
}

inline AssociatedChain make_associated_chain(const BoundMatrix& a, std::vector<double> p0,
                                             int* clamped_entries = nullptr) {
    if (static_cast<int>(p0.size()) != a.m() + 1)
        throw std::invalid_argument("make_associated_chain: p0 must have m+1 entries");
    double sum = 0.0;
    for (const double p : p0) {
        if (p < -1e-12) throw std::invalid_argument("make_associated_chain: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("make_associated_chain: p0 does not sum to 1");
    return AssociatedChain{associated_chain_matrix(a, clamped_entries), std::move(p0)};
}

/// Superlevel marginals of a level distribution: out_j = sum_{i >= j} p_i,
/// i.e. p multiplied by the lower-triangular all-ones matrix, dropping j = 0.
inline std::vector<double> cumulate_levels(const std::vector<double>& p) {
    const int m = static_cast<int>(p.size()) - 1;
    std::vector<double> out(m);
    double acc = 0.0;
    for (int j = m; j >= 1; --j) {
        acc += p[j];
        out[j - 1] = acc;
    }
    return out;
}

/// Chain lower bound: p^(0) T^t, cumulated over superlevels, for t = 0..t_max.
/// Requires a monotone matrix and a partition with no empty level set.
inline BoundTrajectory lower_bound_chain(const BoundMatrix& a, const std::vector<double>& p0,
                                         int t_max, bool all_levels_nonempty = true) {
    if (!all_levels_nonempty)
        throw std::invalid_argument("lower_bound_chain: requires all level sets non-empty");
    if (const auto viol = first_monotonicity_violation(a, a.comparison_tol()))
        throw MonotonicityError(viol->first, viol->second);
    int clamped = 0;
    const AssociatedChain chain = make_associated_chain(a, p0, &clamped);
    BoundTrajectory traj;
    traj.kind = TrajectoryKind::LowerChain;
    if (clamped > 0)
        traj.warnings.push_back("clamped " + std::to_string(clamped) +
                                " rounding-scale negative chain entries to zero");
    std::vector<double> p = chain.p0;
    traj.values.push_back(cumulate_levels(p));
    for (int t = 1; t <= t_max; ++t) {
        p = p * chain.t;
        traj.values.push_back(cumulate_levels(p));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Tournament-aware recursions (shared step).
// ---------------------------------------------------------------------------

namespace detail {
/// out_j = b(m,j) - sum_i (b(i,j) - b(i-1,j)) (1 - u_i)^s
inline std::vector<double> tournament_step(const BoundMatrix& b, const std::vector<double>& u,
                                           int s) {
    const int m = b.m();
    std::vector<double> pow_term(m);
    for (int i = 0; i < m; ++i) pow_term[i] = std::pow(1.0 - u[i], s);
    std::vector<double> out(m);
    for (int j = 1; j <= m; ++j) {
        double acc = b.at(m, j);
        for (int i = 1; i <= m; ++i) acc -= (b.at(i, j) - b.at(i - 1, j)) * pow_term[i - 1];
        out[j - 1] = std::min(1.0, std::max(0.0, acc));
    }
    return out;
}
}  // namespace detail

/// Componentwise upper bound under s-tournament selection, iterated from
/// E[z^(0)]: E[z_j^(t+1)] <= b_mj - sum_i (b_ij - b_{i-1,j}) (1 - E[z_i^(t)])^s.
/// Monotone B required (Jensen direction of the convex selection term).
inline BoundTrajectory upper_bound_jensen(const BoundMatrix& b, const PopulationVector& z0, int s,
                                          int t_max) {
    if (s < 1) throw std::invalid_argument("upper_bound_jensen: tournament size must be >= 1");
    if (z0.m() != b.m()) throw std::invalid_argument("upper_bound_jensen: dimension mismatch");
    z0.validate();
    if (const auto viol = first_monotonicity_violation(b, b.comparison_tol()))
        throw MonotonicityError(viol->first, viol->second);
    BoundTrajectory traj;
    traj.kind = TrajectoryKind::UpperJensen;
    std::vector<double> u = z0.z;
    traj.values.push_back(u);
    for (int t = 1; t <= t_max; ++t) {
        u = detail::tournament_step(b, u, s);
        traj.values.push_back(u);
    }
    return traj;
}

/// Deterministic infinite-population dynamics: the same recursion on an exact
/// monotone cumulative matrix equals the population-size limit of E[z^(t)].
inline BoundTrajectory infinite_population_recursion(const BoundMatrix& gamma,
                                                     const std::vector<double>& u0, int s,
                                                     int t_max) {
    if (gamma.kind() != BoundKind::Exact)
        throw std::invalid_argument("infinite_population_recursion: matrix must be exact");
    if (s < 1) throw std::invalid_argument("infinite_population_recursion: tournament size must be >= 1");
    if (static_cast<int>(u0.size()) != gamma.m())
        throw std::invalid_argument("infinite_population_recursion: dimension mismatch");
    if (const auto viol = first_monotonicity_violation(gamma, gamma.comparison_tol()))
        throw MonotonicityError(viol->first, viol->second);
    BoundTrajectory traj;
    traj.kind = TrajectoryKind::InfinitePopulation;
    std::vector<double> u = u0;
    traj.values.push_back(u);
    for (int t = 1; t <= t_max; ++t) {
        u = detail::tournament_step(gamma, u, s);
        traj.values.push_back(u);
    }
    return traj;
}

/// Exact superlevel recursion of the best-of-lambda single-parent process:
/// P_j^(t) = 1 - (1-g_0j)^L + sum_i ((1-g_{i-1,j})^L - (1-g_ij)^L) P_i^(t-1).
inline BoundTrajectory one_comma_lambda_recursion(const BoundMatrix& gamma,
                                                  const std::vector<double>& p_init, int lambda,
                                                  int t_max) {
    if (lambda < 1) throw std::invalid_argument("one_comma_lambda_recursion: lambda must be >= 1");
    if (static_cast<int>(p_init.size()) != gamma.m())
        throw std::invalid_argument("one_comma_lambda_recursion: dimension mismatch");
    if (const auto viol = first_monotonicity_violation(gamma, gamma.comparison_tol()))
        throw MonotonicityError(viol->first, viol->second);
    const int m = gamma.m();
    BoundTrajectory traj;
    traj.kind = TrajectoryKind::OneCommaLambdaExact;
    std::vector<double> p = p_init;
    traj.values.push_back(p);
    for (int t = 1; t <= t_max; ++t) {
        std::vector<double> next(m);
        for (int j = 1; j <= m; ++j) {
            double acc = 1.0 - std::pow(1.0 - gamma.at(0, j), lambda);
            for (int i = 1; i <= m; ++i) {
                const double coef = std::pow(1.0 - gamma.at(i - 1, j), lambda) -
                                    std::pow(1.0 - gamma.at(i, j), lambda);
                acc += coef * p[i - 1];
            }
            next[j - 1] = std::min(1.0, std::max(0.0, acc));
        }
        p = std::move(next);
        traj.values.push_back(p);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Closed forms for the one-bit local-search analysis on unimodal landscapes.
// ---------------------------------------------------------------------------

/// 1 - sqrt(ell-1) * (1 - (2(n-1)/n^2)(1 - cos(pi/ell)))^(t/2); can be
/// negative (vacuous) for small t.
inline double closed_form_lower_bound_unimodal(int n, int ell, int t) {
    if (n < 2 || ell < 2 || t < 0)
        throw std::invalid_argument("closed_form_lower_bound_unimodal: need n >= 2, ell >= 2, t >= 0");
    constexpr double pi = 3.14159265358979323846;
    const double base =
        1.0 - (2.0 * (n - 1) / (static_cast<double>(n) * n)) * (1.0 - std::cos(pi / ell));
    return 1.0 - std::sqrt(static_cast<double>(ell - 1)) * std::pow(base, t / 2.0);
}

/// Exponentially vanishing tail bound for the hit time of the one-bit local
/// search: exp{ (1/2) [ ln(ell-1) - (t/(ell^2 n)) (pi^2 - 20/ell) ] }.
inline double unimodal_tail_bound(int n, int ell, int t) {
    if (n < 2 || ell < 2 || t < 0)
        throw std::invalid_argument("unimodal_tail_bound: need n >= 2, ell >= 2, t >= 0");
    constexpr double pi = 3.14159265358979323846;
    const double exponent =
        0.5 * (std::log(static_cast<double>(ell - 1)) -
               (static_cast<double>(t) / (static_cast<double>(ell) * ell * n)) * (pi * pi - 20.0 / ell));
    return std::exp(exponent);
}

/// Expectation-based tail: E[T] <= n(ell-1), so P{T >= t} <= n(ell-1)/t.
inline double unimodal_markov_tail(int n, int ell, int t) {
    if (t <= 0) return 1.0;
    return std::min(1.0, static_cast<double>(n) * (ell - 1) / t);
}

// ---------------------------------------------------------------------------
// Stationary limit vector for the half-cover set-cover family.
// ---------------------------------------------------------------------------

struct BalasStationary {
    std::vector<double> v;      // limit of the linear lower bound, components 1..m
    double equation_residual;   // max residual of the tridiagonal stationarity system
    double solve_gap;           // max |v - alpha (I-W)^{-1}| from the numeric solve
};

/// Limit vector v = alpha (I-W)^{-1} of the point-mutation bound matrix on
/// the half-cover family, in closed form via the folded two-urn stationary
/// distribution: v_i = (sum_{l=i}^{n/2-1} 2 C(n,l) + C(n,n/2)) / 2^n.
/// The result is independent of the staying probability q.
inline BalasStationary balas_stationary_vector(int n) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("balas_stationary_vector: n must be even and >= 4");
    const int m = n / 2;
    const auto table = detail::binomial_table(n);
    const double scale = std::ldexp(1.0, -n);  // 2^-n
    BalasStationary out;
    out.v.resize(m);
    double acc = table[n][m] * scale;
    out.v[m - 1] = acc;
    for (int i = m - 1; i >= 1; --i) {
        acc += 2.0 * table[n][i] * scale;
        out.v[i - 1] = acc;
    }

    // residual of the stationarity system v(I - W) = alpha, written out as the
    // tridiagonal equations scaled by n/(1-q)
    const auto& v = out.v;
    double res = std::abs(v[0] * (n + 1.0) / n - (m >= 2 ? v[1] / n : 0.0) - 1.0);
    for (int i = 2; i <= m - 1; ++i) {
        const double lhs = -v[i - 2] * (n - i + 1.0) / n + v[i - 1] * (n + 1.0) / n -
                           v[i] * static_cast<double>(i) / n;
        res = std::max(res, std::abs(lhs));
    }
    if (m >= 2) {
        const double lhs = -v[m - 2] * (n + 2.0) / (2.0 * n) + v[m - 1] * (3.0 * n + 2.0) / (2.0 * n);
        res = std::max(res, std::abs(lhs));
    }
    out.equation_residual = res;

    const BoundMatrix a = balas_point_lower_bounds(n, 1.0 / (n + 1));
    const auto [w, alpha] = build_w_and_alpha(a);
    const std::vector<double> solved = solve_left(Matrix::identity(m) - w, alpha);
    double gap = 0.0;
    for (int i = 0; i < m; ++i) gap = std::max(gap, std::abs(solved[i] - v[i]));
    out.solve_gap = gap;
    return out;
}

}  // namespace levelea
