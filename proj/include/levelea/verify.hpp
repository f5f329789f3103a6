#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "levelea/experiment.hpp"

namespace levelea::verify {

struct CheckResult {
    std::string id;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    double n_scale = 1.0;      // fraction of the full Monte-Carlo budgets
    int threads = 0;           // 0 = auto
    std::uint64_t seed = 20240817;
};

namespace detail {

inline int scaled(int full, double scale) {
    return std::max(30, static_cast<int>(std::lround(full * scale)));
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Exact level-chain marginals built directly from a cumulative matrix, kept
/// separate from the bound recursions it cross-checks.
inline std::vector<double> exact_superlevels(const BoundMatrix& gamma, std::vector<double> p,
                                             int t) {
    const int states = gamma.m() + 1;
    for (int step = 0; step < t; ++step) {
        std::vector<double> next(states, 0.0);
        for (int i = 0; i < states; ++i) {
            for (int k = 0; k < states; ++k) {
                const double hi = k == 0 ? 1.0 : gamma.at(i, k);
                const double lo = k == states - 1 ? 0.0 : gamma.at(i, k + 1);
                next[k] += p[i] * (hi - lo);
            }
        }
        p = std::move(next);
    }
    std::vector<double> out(states - 1);
    double acc = 0.0;
    for (int j = states - 1; j >= 1; --j) {
        acc += p[j];
        out[j - 1] = acc;
    }
    return out;
}

/// Symmetric-tridiagonal eigenvalues by Sturm-sequence bisection; the dense
/// route for validating the closed-form spectrum without any solver library.
inline std::vector<double> sturm_tridiagonal_eigenvalues(int n, double diag, double off) {
    const auto count_below = [&](double x) {
        int count = 0;
        double q = diag - x;
        if (q < 0) ++count;
        for (int i = 1; i < n; ++i) {
            double denom = q;
            if (std::abs(denom) < 1e-300) denom = denom < 0 ? -1e-300 : 1e-300;
            q = diag - x - off * off / denom;
            if (q < 0) ++count;
        }
        return count;
    };
    const double radius = std::abs(diag) + 2.0 * std::abs(off) + 1.0;
    std::vector<double> out(n);
    for (int idx = 0; idx < n; ++idx) {
        double lo = -radius, hi = radius;
        // idx-th smallest eigenvalue
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(mid) > idx) hi = mid;
            else lo = mid;
        }
        out[n - 1 - idx] = 0.5 * (lo + hi);  // store descending
    }
    return out;
}

struct Budget {
    explicit Budget(double limit_s) : limit(limit_s), start(std::chrono::steady_clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    bool within() const { return elapsed() < limit; }
    double limit;
    std::chrono::steady_clock::time_point start;
};

/// Exact Binomial(n, p) tails P{X <= k} and P{X >= k}. The Monte-Carlo
/// comparisons use these instead of the normal approximation, which is
/// invalid at the p-hat in {0,1} cells the estimator flags.
struct BinomialTails {
    double below;
    double above;
};

inline BinomialTails binomial_tails(int k, int n, double p) {
    if (p <= 0.0) return BinomialTails{1.0, k <= 0 ? 1.0 : 0.0};
    if (p >= 1.0) return BinomialTails{k >= n ? 1.0 : 0.0, 1.0};
    const double lp = std::log(p), lq = std::log1p(-p), lgn = std::lgamma(n + 1.0);
    double below = 0.0, above = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double lpmf =
            lgn - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq;
        const double pmf = std::exp(lpmf);
        if (i <= k) below += pmf;
        if (i >= k) above += pmf;
    }
    return BinomialTails{std::min(1.0, below), std::min(1.0, above)};
}

/// Two-sided: observed count sits inside the central (1-alpha) band.
inline bool central_covered(int k, int n, double p, double alpha = 0.05) {
    const auto t = binomial_tails(k, n, p);
    return t.below >= alpha / 2 && t.above >= alpha / 2;
}

/// One-sided at 2.5%: k too large to have come from a rate <= p.
inline bool implausibly_high(int k, int n, double p, double alpha = 0.025) {
    return binomial_tails(k, n, p).above < alpha;
}

/// One-sided at 2.5%: k too small to have come from a rate >= p.
inline bool implausibly_low(int k, int n, double p, double alpha = 0.025) {
    return binomial_tails(k, n, p).below < alpha;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Criterion 1: the four analytic routes agree and Monte Carlo matches them.
// ---------------------------------------------------------------------------

inline CheckResult check_exactness_lambda1(const VerifyOptions& opt) {
    detail::Budget budget(10.0);
    CheckResult res{"A1", "single-parent exactness: analytic routes and Monte Carlo agree", false, "", 0.0};
    const int n = 3, t_max = 100;
    const auto gamma = point_mutation_gamma(n, 0.25);
    const auto z0 = PopulationVector::zeros(n);

    const auto linear = lower_bound_linear(gamma, z0, t_max);
    std::vector<double> p0(n + 1, 0.0);
    p0[0] = 1.0;
    const auto chain = lower_bound_chain(gamma, p0, t_max);

    double route_gap = linear.route_gap;  // closed form vs iteration
    for (int t = 0; t <= t_max; ++t) {
        const auto exact = detail::exact_superlevels(gamma, p0, t);
        for (int j = 0; j < n; ++j) {
            route_gap = std::max(route_gap, std::abs(linear.at(t)[j] - chain.at(t)[j]));
            route_gap = std::max(route_gap, std::abs(linear.at(t)[j] - exact[j]));
        }
    }

    AlgorithmConfig cfg;
    cfg.variant = Variant::Ea;
    cfg.lambda = 1;
    cfg.s = 1;
    cfg.problem = onemax(n);
    cfg.kernel = point_mutation_kernel(n, 0.25);
    cfg.init = InitRule::AllZeros;
    cfg.t_max = t_max;
    cfg.seed = opt.seed + 1;
    const int runs_n = detail::scaled(10000, opt.n_scale);
    const auto runs = run_many(cfg, runs_n, opt.threads);
    // joint agreement test: every (t, j) cell must stay inside the exact
    // binomial band at the family-wise 95% level
    int covered = 0, cells = 0, rejects = 0;
    for (int j = 1; j <= n; ++j) {
        std::vector<int> grid;
        for (int t = 0; t <= t_max; t += 2) grid.push_back(t);
        for (const auto& pt : estimate_level_probability(runs, j, grid)) {
            const int k = static_cast<int>(std::lround(pt.p * runs_n));
            ++cells;
            covered += detail::central_covered(k, runs_n, linear.at(pt.t)[j - 1]);
        }
    }
    for (int j = 1; j <= n; ++j) {
        std::vector<int> grid;
        for (int t = 0; t <= t_max; t += 2) grid.push_back(t);
        for (const auto& pt : estimate_level_probability(runs, j, grid)) {
            const int k = static_cast<int>(std::lround(pt.p * runs_n));
            rejects += !detail::central_covered(k, runs_n, linear.at(pt.t)[j - 1], 0.05 / cells);
        }
    }
    const double coverage = static_cast<double>(covered) / cells;

    res.seconds = budget.elapsed();
    res.pass = route_gap <= 1e-10 && rejects == 0 && budget.within();
    res.detail = "route gap " + detail::fmt(route_gap) + " (<=1e-10), MC joint rejects " +
                 std::to_string(rejects) + " of " + std::to_string(cells) +
                 " cells (=0; pointwise coverage " + detail::fmt(coverage) + ", N=" +
                 std::to_string(runs_n) + "), " + detail::fmt(res.seconds) + "s (<10s)";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 2: triangle-cover figure, population-size sweep at s = 2.
// ---------------------------------------------------------------------------

inline CheckResult check_vcp_population_sweep(const VerifyOptions& opt) {
    detail::Budget budget(120.0);
    CheckResult res{"A2", "triangle-cover figure: bounds envelope the population sweep", false, "", 0.0};
    const int m = 8, t_max = 150;
    auto preset = vcp_triangles(m, 0.1);
    const auto& gamma = *preset.kernel.gamma;
    const auto z0 = PopulationVector::zeros(m);
    const auto lower = lower_bound_linear(gamma, z0, t_max);
    const auto upper = upper_bound_jensen(gamma, z0, 2, t_max);

    const int runs_n = detail::scaled(1000, opt.n_scale);
    std::vector<int> grid;
    for (int t = 0; t <= t_max; ++t) grid.push_back(t);

    std::map<int, std::vector<PointEstimate>> series;
    for (const int lambda : {1, 2, 10}) {
        AlgorithmConfig cfg;
        cfg.variant = Variant::Ea;
        cfg.lambda = lambda;
        cfg.s = 2;
        cfg.problem = preset.problem;
        cfg.kernel = preset.kernel;
        cfg.init = InitRule::AllZeros;
        cfg.t_max = t_max;
        cfg.seed = opt.seed + 2;
        series[lambda] = estimate_level_probability(run_many(cfg, runs_n, opt.threads), m, grid);
    }

    int covered = 0;
    for (const auto& pt : series[1]) {
        const int k = static_cast<int>(std::lround(pt.p * runs_n));
        covered += detail::central_covered(k, runs_n, lower.at(pt.t)[m - 1]);
    }
    const double coverage = static_cast<double>(covered) / grid.size();

    int upper_violations = 0;
    double worst_upper_margin = 1e300;  // informational: min of upper + hw - phat
    const double alpha_fw = 0.025 / static_cast<double>(grid.size());
    for (const auto& pt : series[10]) {
        const int k = static_cast<int>(std::lround(pt.p * runs_n));
        upper_violations += detail::implausibly_high(k, runs_n, upper.at(pt.t)[m - 1], alpha_fw);
        worst_upper_margin =
            std::min(worst_upper_margin, upper.at(pt.t)[m - 1] + (pt.hi - pt.p) - pt.p);
    }

    double worst_order_margin = 1e300;
    const auto order_margin = [&](const std::vector<PointEstimate>& lo_s,
                                  const std::vector<PointEstimate>& hi_s) {
        for (std::size_t k = 0; k < lo_s.size(); ++k) {
            const double slack = (lo_s[k].hi - lo_s[k].p) + (hi_s[k].hi - hi_s[k].p);
            worst_order_margin =
                std::min(worst_order_margin, hi_s[k].p - lo_s[k].p + slack);
        }
    };
    order_margin(series[1], series[2]);
    order_margin(series[2], series[10]);

    res.seconds = budget.elapsed();
    res.pass = coverage >= 0.95 && upper_violations == 0 && worst_order_margin >= 0.0 &&
               budget.within();
    res.detail = "lam=1 coverage " + detail::fmt(coverage) + " (>=0.95), lam=10 upper violations " +
                 std::to_string(upper_violations) + " (=0, worst margin " +
                 detail::fmt(worst_upper_margin) + "), lambda ordering margin " +
                 detail::fmt(worst_order_margin) + " (>=0), N=" + std::to_string(runs_n) + ", " +
                 detail::fmt(res.seconds) + "s (<120s)";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 3: triangle-cover figure, tournament sweep at lambda = 100.
// ---------------------------------------------------------------------------

inline CheckResult check_vcp_tournament_sweep(const VerifyOptions& opt) {
    detail::Budget budget(300.0);
    CheckResult res{"A3", "triangle-cover figure: proportions rise with tournament size", false, "", 0.0};
    const int m = 8, t_max = 150;
    auto preset = vcp_triangles(m, 0.1);
    const auto& gamma = *preset.kernel.gamma;
    const auto z0 = PopulationVector::zeros(m);

    const int runs_n = detail::scaled(1000, opt.n_scale);
    std::vector<int> grid;
    for (int t = 0; t <= t_max; ++t) grid.push_back(t);

    std::map<int, std::vector<PointEstimate>> series;
    int upper_violations = 0;
    double worst_upper_margin = 1e300;
    for (const int s : {1, 2, 10}) {
        AlgorithmConfig cfg;
        cfg.variant = Variant::Ea;
        cfg.lambda = 100;
        cfg.s = s;
        cfg.problem = preset.problem;
        cfg.kernel = preset.kernel;
        cfg.init = InitRule::AllZeros;
        cfg.t_max = t_max;
        cfg.seed = opt.seed + 3;
        series[s] = estimate_level_probability(run_many(cfg, runs_n, opt.threads), m, grid);
        const auto upper = upper_bound_jensen(gamma, z0, s, t_max);
        const double alpha_fw = 0.025 / (3.0 * static_cast<double>(grid.size()));
        for (const auto& pt : series[s]) {
            const int k = static_cast<int>(std::lround(pt.p * runs_n));
            upper_violations += detail::implausibly_high(k, runs_n, upper.at(pt.t)[m - 1], alpha_fw);
            worst_upper_margin =
                std::min(worst_upper_margin, upper.at(pt.t)[m - 1] + (pt.hi - pt.p) - pt.p);
        }
    }

    double worst_order_margin = 1e300;
    const auto order_margin = [&](const std::vector<PointEstimate>& lo_s,
                                  const std::vector<PointEstimate>& hi_s) {
        for (std::size_t k = 0; k < lo_s.size(); ++k) {
            const double slack = (lo_s[k].hi - lo_s[k].p) + (hi_s[k].hi - hi_s[k].p);
            worst_order_margin = std::min(worst_order_margin, hi_s[k].p - lo_s[k].p + slack);
        }
    };
    order_margin(series[1], series[2]);
    order_margin(series[2], series[10]);

    res.seconds = budget.elapsed();
    res.pass = upper_violations == 0 && worst_order_margin >= 0.0 && budget.within();
    res.detail = "upper violations " + std::to_string(upper_violations) + " (=0, worst margin " +
                 detail::fmt(worst_upper_margin) + "), tournament ordering margin " +
                 detail::fmt(worst_order_margin) + " (>=0), N=" + std::to_string(runs_n) + ", " +
                 detail::fmt(res.seconds) + "s (<300s)";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 4: strict tournament dominance of the deterministic recursion.
// ---------------------------------------------------------------------------

inline CheckResult check_tournament_dominance(const VerifyOptions&) {
    detail::Budget budget(30.0);
    CheckResult res{"A4", "deterministic population limit strictly improves with tournament size",
                    false, "", 0.0};
    const int m = 8;
    const auto bp = vcp_block_params(0.1);
    const auto gamma = block_gamma(m, bp.r, bp.r_tilde);
    bool columns_separated = true;
    for (int j = 1; j <= m; ++j) columns_separated &= gamma.at(m, j) > gamma.at(0, j);

    std::vector<double> u0(m);
    for (int i = 0; i < m; ++i) u0[i] = 0.55 - 0.05 * i;
    const auto small = infinite_population_recursion(gamma, u0, 2, 100);
    const auto big = infinite_population_recursion(gamma, u0, 10, 100);
    double min_gap = 1e300;
    for (int t = 1; t <= 100; ++t)
        for (int j = 0; j < m; ++j) min_gap = std::min(min_gap, big.at(t)[j] - small.at(t)[j]);

    res.seconds = budget.elapsed();
    res.pass = columns_separated && min_gap > 0.0;
    res.detail = std::string("columns separated: ") + (columns_separated ? "yes" : "no") +
                 ", min componentwise gap over t<=100: " + detail::fmt(min_gap) + " (>0 exactly)";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 5: spectral identities.
// ---------------------------------------------------------------------------

inline CheckResult check_spectral_identities(const VerifyOptions&) {
    detail::Budget budget(30.0);
    CheckResult res{"A5", "power iteration and closed-form spectra agree", false, "", 0.0};
    const int n = 10, ell = 5, m = ell - 1;
    constexpr double pi = 3.14159265358979323846;
    const double diag = (1.0 + (n - 1.0) * (n - 1.0)) / (static_cast<double>(n) * n);
    const double off = (n - 1.0) / (static_cast<double>(n) * n);

    Matrix s(m, m);
    for (int i = 0; i < m; ++i) {
        s(i, i) = diag;
        if (i + 1 < m) {
            s(i + 1, i) = off;
            s(i, i + 1) = off;
        }
    }
    const double top = diag + 2.0 * off * std::cos(pi / ell);
    const double power_gap = std::abs(matrix_norm_2(s) - top);

    const double closed_norm = std::sqrt(1.0 - (2.0 * (n - 1.0) / (static_cast<double>(n) * n)) *
                                                   (1.0 - std::cos(pi / ell)));
    const auto [w, alpha] = build_w_and_alpha(rls_unimodal_lower_bounds(n, ell));
    const double true_norm = matrix_norm_2(w);
    const bool norm_valid = true_norm <= closed_norm + 1e-12;

    double spectrum_gap = 0.0;
    struct Case {
        int size;
        double d, sub, sup;
    };
    for (const auto& c : {Case{5, 0.82, 0.09, 0.09}, Case{20, 2.0, 0.5, 2.0},
                          Case{50, -1.0, 0.25, 0.36}, Case{50, 0.82, 0.09, 0.09}}) {
        const auto closed = toeplitz_tridiagonal_spectrum(c.size, c.d, c.sub, c.sup);
        // similarity transform makes the matrix symmetric with off = sqrt(sub*sup)
        const auto dense =
            detail::sturm_tridiagonal_eigenvalues(c.size, c.d, std::sqrt(c.sub * c.sup));
        for (int i = 0; i < c.size; ++i)
            spectrum_gap = std::max(spectrum_gap, std::abs(closed[i] - dense[i]));
    }

    res.seconds = budget.elapsed();
    res.pass = power_gap <= 1e-10 && spectrum_gap <= 1e-9 && norm_valid;
    res.detail = "power-iteration gap " + detail::fmt(power_gap) + " (<=1e-10), spectrum gap " +
                 detail::fmt(spectrum_gap) + " (<=1e-9), closed form upper-bounds the true norm: " +
                 (norm_valid ? "yes" : "no") + " (boundary defect " +
                 detail::fmt(closed_norm - true_norm) + ")";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 6: local-search tail bounds on the capped ridge.
// ---------------------------------------------------------------------------

inline CheckResult check_rls_tail(const VerifyOptions& opt) {
    detail::Budget budget(60.0);
    CheckResult res{"A6", "local-search hit-time tail sits below both closed-form bounds", false, "", 0.0};
    const int n = 12, ell = 13, t_max = 2400;
    AlgorithmConfig cfg;
    cfg.variant = Variant::Rls;
    cfg.problem = unimodal_path(n, ell);
    cfg.init = InitRule::AllZeros;
    cfg.t_max = t_max;
    cfg.seed = opt.seed + 6;
    cfg.record_levels = false;
    const int runs_n = detail::scaled(10000, opt.n_scale);
    const auto runs = run_many(cfg, runs_n, opt.threads);

    double worst_exp_margin = 1e300, worst_markov_margin = 1e300;
    const int markov_from = n * (ell - 1);
    for (int t = 0; t <= t_max; t += 8) {
        const double tail = estimate_hit_time_tail(runs, t).p;
        const double exp_bound = unimodal_tail_bound(n, ell, t);
        if (exp_bound < 1.0) worst_exp_margin = std::min(worst_exp_margin, exp_bound - tail);
        if (t >= markov_from)
            worst_markov_margin =
                std::min(worst_markov_margin, unimodal_markov_tail(n, ell, t) - tail);
    }

    res.seconds = budget.elapsed();
    res.pass = worst_exp_margin >= 0.0 && worst_markov_margin >= 0.0 && budget.within();
    res.detail = "exp-bound margin " + detail::fmt(worst_exp_margin) +
                 " (>=0 where bound<1), expectation-bound margin " +
                 detail::fmt(worst_markov_margin) + " (>=0 for t>=" + std::to_string(markov_from) +
                 "), N=" + std::to_string(runs_n) + ", " + detail::fmt(res.seconds) + "s (<60s)";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 7: ruin-walk scaling for the clause-walk chain.
// ---------------------------------------------------------------------------

inline CheckResult check_two_sat_scaling(const VerifyOptions& opt) {
    detail::Budget budget(60.0);
    CheckResult res{"A7", "clause-walk chain reaches satisfaction in quadratic time", false, "", 0.0};
    std::vector<double> ratios;
    std::map<int, int> t_half;
    for (const int m : {10, 20, 40}) {
        const auto a = sat_walk_lower_bounds(m);
        std::vector<double> p0(m + 1, 0.0);
        p0[0] = 1.0;
        const auto chain = make_associated_chain(a, p0);
        std::vector<double> p = chain.p0;
        int t = 0;
        while (p[m] < 0.5 && t < 100 * m * m) {
            p = p * chain.t;
            ++t;
        }
        t_half[m] = t;
        ratios.push_back(static_cast<double>(t) / (m * m));
    }
    const double spread = (*std::max_element(ratios.begin(), ratios.end()) -
                           *std::min_element(ratios.begin(), ratios.end())) /
                          *std::min_element(ratios.begin(), ratios.end());
    const double c_hat = *std::max_element(ratios.begin(), ratios.end());

    // Monte-Carlo walk on the m = 20 chain vs exact powering at the half-way point
    const int m = 20;
    const auto chain = make_associated_chain(sat_walk_lower_bounds(m), [&] {
        std::vector<double> p0(m + 1, 0.0);
        p0[0] = 1.0;
        return p0;
    }());
    const int probe_t = t_half[m];
    const int walkers = detail::scaled(2000, opt.n_scale);
    int absorbed = 0;
    for (int wk = 0; wk < walkers; ++wk) {
        Rng rng = make_run_rng(opt.seed + 7, wk);
        absorbed += chain_hit_time(chain.t, 0, m, probe_t, rng) >= 0;
    }
    const auto est = normal_ci(absorbed, walkers);
    double exact = 0.0;
    {
        std::vector<double> p = chain.p0;
        for (int t = 0; t < probe_t; ++t) p = p * chain.t;
        exact = p[m];
    }
    const bool mc_ok = detail::central_covered(absorbed, walkers, exact);

    res.seconds = budget.elapsed();
    res.pass = spread <= 0.25 && mc_ok && budget.within();
    std::ostringstream d;
    d << "t_half/m^2 = {";
    for (std::size_t i = 0; i < ratios.size(); ++i) d << (i ? ", " : "") << detail::fmt(ratios[i]);
    d << "}, spread " << detail::fmt(spread) << " (<=0.25), c_hat " << detail::fmt(c_hat)
      << ", MC absorb " << detail::fmt(est.p) << " vs exact " << detail::fmt(exact) << " ("
      << (mc_ok ? "inside CI" : "outside CI") << "), " << detail::fmt(res.seconds) << "s";
    res.detail = d.str();
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 8: half-cover stationary vector and transient hitting.
// ---------------------------------------------------------------------------

inline CheckResult check_balas(const VerifyOptions& opt) {
    detail::Budget budget(120.0);
    CheckResult res{"A8", "half-cover limit vector and transient lower bound", false, "", 0.0};
    bool ok = true;
    std::ostringstream d;
    for (const int n : {8, 12, 16}) {
        const int m = n / 2;
        const auto st = balas_stationary_vector(n);
        ok &= st.equation_residual <= 1e-10;
        ok &= st.solve_gap <= 1e-9;

        // closed-form top component: central binomial mass of the folded walk
        double binom = 1.0;
        for (int k = 1; k <= m; ++k) binom = binom * (n - k + 1) / k;
        const double vm = binom * std::ldexp(1.0, -n);
        ok &= st.v[m - 1] == vm;

        // a doubled top component (2 vm) would miss the numeric solve by vm
        const double doubled_gap = std::abs(2.0 * vm - (st.v[m - 1] - st.solve_gap));

        const double q = 1.0 / (n + 1);
        const auto a = balas_point_lower_bounds(n, q);
        LinearBoundOptions opts;
        opts.require_monotone = false;  // the pessimistic top row is documented non-monotone
        const int t_star = static_cast<int>(std::ceil(((n + 1) / 2.0) * std::log(n / vm)));
        const auto traj = lower_bound_linear(a, PopulationVector::zeros(m), t_star, opts);
        const double reached = traj.at(t_star)[m - 1];
        ok &= reached >= vm / 2.0;

        AlgorithmConfig cfg;
        cfg.variant = Variant::Ea;
        cfg.lambda = 20;
        cfg.s = 2;
        cfg.problem = balas_scp(n);
        cfg.kernel = point_mutation_kernel(n, q);
        cfg.init = InitRule::AllZeros;
        cfg.t_max = t_star;
        cfg.seed = opt.seed + 8 + n;
        cfg.record_levels = false;
        const int runs_n = detail::scaled(2000, opt.n_scale);
        const auto runs = run_many(cfg, runs_n, opt.threads);
        int hit = 0;
        for (const auto& r : runs) hit += r.hit_iteration >= 0 && r.hit_iteration <= t_star;
        const auto est = normal_ci(hit, runs_n);
        ok &= !detail::implausibly_low(hit, runs_n, vm / 2.0);

        d << "n=" << n << ": residual " << detail::fmt(st.equation_residual) << ", solve gap "
          << detail::fmt(st.solve_gap) << ", v_m " << detail::fmt(st.v[m - 1]) << " (doubled variant off by "
          << detail::fmt(doubled_gap) << "), bound(t*=" << t_star << ") " << detail::fmt(reached)
          << " >= " << detail::fmt(vm / 2.0) << ", hit-rate " << detail::fmt(est.p) << "; ";
    }
    res.seconds = budget.elapsed();
    res.pass = ok && budget.within();
    res.detail = d.str() + detail::fmt(res.seconds) + "s";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 9: ones-count upper bound and elitist dominance.
// ---------------------------------------------------------------------------

inline CheckResult check_onemax_upper(const VerifyOptions& opt) {
    detail::Budget budget(120.0);
    CheckResult res{"A9", "ones-count ceiling from the best-of-lambda recursion", false, "", 0.0};
    const int n = 20, lambda = 10, t_max = 100;
    const double pm = 1.0 / n;
    const auto gamma = bitwise_onemax_gamma(n, pm);

    const auto preset = resolve_preset("onemax:n=20", "bitwise:pm=0.05");
    const auto p_init = initial_expected_vector(preset, InitRule::UniformSharedCopy);
    const auto rec = one_comma_lambda_recursion(gamma, p_init.z, lambda, t_max);

    AlgorithmConfig ea;
    ea.variant = Variant::Ea;
    ea.lambda = lambda;
    ea.s = 2;
    ea.problem = onemax(n);
    ea.kernel = bitwise_mutation_kernel(n, pm);
    ea.init = InitRule::UniformSharedCopy;
    ea.t_max = t_max + 1;
    ea.seed = opt.seed + 9;
    const int runs_n = detail::scaled(5000, opt.n_scale);
    const auto ea_runs = run_many(ea, runs_n, opt.threads);

    std::vector<int> grid;
    for (int t = 0; t <= t_max + 1; ++t) grid.push_back(t);
    const auto ea_series = estimate_level_probability(ea_runs, n, grid);

    int ceiling_violations = 0;
    double worst_ceiling_margin = 1e300;
    for (int t = 0; t <= t_max; ++t) {
        const auto& pt = ea_series[t + 1];
        const double ceiling = 0.74 * rec.at(t)[n - 1] + 5.0 / n;
        const int k = static_cast<int>(std::lround(pt.p * runs_n));
        ceiling_violations +=
            detail::implausibly_high(k, runs_n, std::min(1.0, ceiling), 0.025 / (t_max + 1.0));
        worst_ceiling_margin =
            std::min(worst_ceiling_margin, ceiling + (pt.hi - pt.p) - pt.p);
    }

    AlgorithmConfig plus;
    plus.variant = Variant::OnePlusOne;
    plus.problem = onemax(n);
    plus.kernel = bitwise_mutation_kernel(n, pm);
    plus.init = InitRule::UniformRandom;
    plus.t_max = t_max * lambda;
    plus.seed = opt.seed + 10;
    const auto plus_runs = run_many(plus, runs_n, opt.threads);
    int dominance_violations = 0;
    double worst_dominance_margin = 1e300;
    for (int t = 0; t <= t_max; ++t) {
        int hits = 0;
        for (const auto& r : plus_runs) hits += r.first_level[t * lambda] >= n;
        const auto est = normal_ci(hits, runs_n);
        dominance_violations +=
            detail::implausibly_low(hits, runs_n, rec.at(t)[n - 1], 0.025 / (t_max + 1.0));
        worst_dominance_margin = std::min(worst_dominance_margin,
                                          est.p + (est.hi - est.p) - rec.at(t)[n - 1]);
    }

    res.seconds = budget.elapsed();
    res.pass = ceiling_violations == 0 && dominance_violations == 0 && budget.within();
    res.detail = "ceiling violations " + std::to_string(ceiling_violations) +
                 " (=0, worst margin " + detail::fmt(worst_ceiling_margin) +
                 "), elitist dominance violations " + std::to_string(dominance_violations) +
                 " (=0, worst margin " + detail::fmt(worst_dominance_margin) + "), N=" +
                 std::to_string(runs_n) + ", " + detail::fmt(res.seconds) + "s";
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 10: structural property sweep over randomized presets.
// ---------------------------------------------------------------------------

inline CheckResult check_property_sweep(const VerifyOptions& opt) {
    detail::Budget budget(60.0);
    CheckResult res{"A10", "structural properties across randomized presets", false, "", 0.0};
    Rng rng(opt.seed + 1000);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    std::ostringstream fail;

    const auto expect = [&](bool cond, const std::string& what) {
        if (!cond && ok) fail << "first failure: " << what;
        ok &= cond;
    };

    // monotonicity thresholds, both directions
    int presets = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(unit(rng) * 10);
        const double qc = 1.0 / (n + 1);
        expect(is_monotone(point_mutation_gamma(n, qc)), "point matrix at threshold");
        expect(is_monotone(point_mutation_gamma(n, qc + 0.8 * unit(rng) * (1 - qc))),
               "point matrix above threshold");
        expect(!is_monotone(point_mutation_gamma(n, qc * (0.1 + 0.8 * unit(rng)))),
               "point matrix below threshold");

        const double r = unit(rng), rt = unit(rng) * r;  // r >= rt
        expect(is_monotone(block_gamma(1 + rep % 10, r, rt)), "block matrix with r >= rt");

        const double p = 0.5 * unit(rng);
        expect(is_monotone(bitwise_onemax_gamma(2 + rep % 8, p)), "bitwise matrix with pm <= 0.5");

        expect(is_monotone(rls_unimodal_lower_bounds(n + 1, 2 + rep % n)), "local-search bounds");
        expect(is_monotone(sat_walk_lower_bounds(1 + rep)), "clause-walk bounds");

        const int even_n = 2 * (2 + rep % 7);
        const double balas_threshold = (even_n + 2.0) / (3.0 * even_n + 2.0);
        expect(is_monotone(balas_point_lower_bounds(even_n, balas_threshold)),
               "half-cover bounds at threshold");
        expect(is_monotone(balas_point_lower_bounds(
                   even_n, balas_threshold + unit(rng) * (1 - balas_threshold))),
               "half-cover bounds above threshold");
        expect(!is_monotone(balas_point_lower_bounds(even_n, balas_threshold * 0.9 * unit(rng))),
               "half-cover bounds below threshold");
        presets += 10;
    }

    // sandwich and route agreement on randomized exact matrices
    for (int rep = 0; rep < 60; ++rep) {
        const int d = 2 + static_cast<int>(unit(rng) * 6);
        const double r = 0.5 + 0.5 * unit(rng);
        const double rt = unit(rng) * r;
        const auto gamma = block_gamma(d, r, rt);
        ++presets;
        if (!is_monotone(gamma)) continue;
        std::vector<double> z(d);
        for (auto& v : z) v = unit(rng);
        std::sort(z.rbegin(), z.rend());
        const PopulationVector z0{z, std::nullopt};
        const int s = 1 + static_cast<int>(unit(rng) * 4);

        const auto lower = lower_bound_linear(gamma, z0, 60);
        const auto upper = upper_bound_jensen(gamma, z0, s, 60);
        for (int t = 0; t <= 60; ++t)
            for (int j = 0; j < d; ++j)
                expect(lower.at(t)[j] <= upper.at(t)[j] + 1e-12, "bound sandwich");

        const auto chain = lower_bound_chain(gamma, level_distribution(z0), 60);
        for (int t = 0; t <= 60; ++t)
            for (int j = 0; j < d; ++j)
                expect(std::abs(lower.at(t)[j] - chain.at(t)[j]) <= 1e-10,
                       "linear/chain agreement");

        // single-parent exactness across all analytic routes
        const auto upper1 = upper_bound_jensen(gamma, z0, 1, 60);
        const auto exact = detail::exact_superlevels(gamma, level_distribution(z0), 60);
        for (int j = 0; j < d; ++j) {
            expect(std::abs(upper1.at(60)[j] - lower.at(60)[j]) <= 1e-12,
                   "upper at s=1 equals lower");
            expect(std::abs(lower.at(60)[j] - exact[j]) <= 1e-10, "lower equals exact chain");
        }
    }

    // lattice invariants and the one-sided convexity gap on live populations
    AlgorithmConfig cfg;
    cfg.variant = Variant::Ea;
    cfg.lambda = 6;
    cfg.s = 2;
    cfg.problem = onemax(6);
    cfg.kernel = point_mutation_kernel(6, 0.3);
    cfg.init = InitRule::AllZeros;
    cfg.t_max = 20;
    cfg.seed = opt.seed + 11;
    cfg.record_population = true;
    const auto runs = run_many(cfg, detail::scaled(400, opt.n_scale), opt.threads);
    for (const auto& r : runs)
        for (const auto& hist : r.level_counts)
            expect(PopulationVector::from_level_counts(hist, cfg.lambda).is_valid(),
                   "population lattice invariant");
    for (const int t : {5, 20}) {
        for (const int s : {2, 5}) {
            double mean_pow = 0.0, mean_z = 0.0;
            for (const auto& r : runs) {
                const auto pv = PopulationVector::from_level_counts(r.level_counts[t], cfg.lambda);
                mean_pow += std::pow(1.0 - pv.z[2], s);
                mean_z += pv.z[2];
            }
            mean_pow /= static_cast<double>(runs.size());
            mean_z /= static_cast<double>(runs.size());
            expect(mean_pow >= std::pow(1.0 - mean_z, s) - 1e-12, "convexity direction");
        }
    }

    res.seconds = budget.elapsed();
    res.pass = ok && presets >= 100 && budget.within();
    res.detail = (ok ? "all structural predicates held" : fail.str()) + ", randomized presets " +
                 std::to_string(presets) + ", " + detail::fmt(res.seconds) + "s (<60s)";
    return res;
}

// ---------------------------------------------------------------------------

inline std::vector<CheckResult> run_all(const VerifyOptions& opt, std::ostream& log) {
    using Check = std::function<CheckResult(const VerifyOptions&)>;
    const std::vector<Check> checks{
        check_exactness_lambda1, check_vcp_population_sweep, check_vcp_tournament_sweep,
        check_tournament_dominance, check_spectral_identities, check_rls_tail,
        check_two_sat_scaling, check_balas, check_onemax_upper, check_property_sweep};
    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (const auto& check : checks) {
        auto r = check(opt);
        log << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << "\n       " << r.detail
            << '\n';
        log.flush();
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace levelea::verify
