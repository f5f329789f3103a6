#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "levelea/bounds.hpp"
#include "levelea/kernels.hpp"

using namespace levelea;

namespace {

// Independent oracle: single-individual level chain built directly from an
// exact cumulative matrix, marginals by stepwise powering.
struct ExactChainOracle {
    std::vector<std::vector<double>> step;  // step[i][k] = P(level i -> level k)
    explicit ExactChainOracle(const BoundMatrix& gamma) {
        const int m = gamma.m();
        step.assign(m + 1, std::vector<double>(m + 1, 0.0));
        for (int i = 0; i <= m; ++i)
            for (int k = 0; k <= m; ++k) {
                const double hi = k == 0 ? 1.0 : gamma.at(i, k);
                const double lo = k == m ? 0.0 : gamma.at(i, k + 1);
                step[i][k] = hi - lo;
            }
    }

    // superlevel marginals after t steps from a level distribution
    std::vector<double> superlevels(std::vector<double> p, int t) const {
        const int states = static_cast<int>(p.size());
        for (int it = 0; it < t; ++it) {
            std::vector<double> next(states, 0.0);
            for (int i = 0; i < states; ++i)
                for (int k = 0; k < states; ++k) next[k] += p[i] * step[i][k];
            p = std::move(next);
        }
        std::vector<double> out(states - 1, 0.0);
        double acc = 0.0;
        for (int j = states - 1; j >= 1; --j) {
            acc += p[j];
            out[j - 1] = acc;
        }
        return out;
    }
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("difference matrix and first row") {
    SECTION("zero matrix") {
        const BoundMatrix a(3, BoundKind::Lower);
        const auto [w, alpha] = build_w_and_alpha(a);
        for (int i = 0; i < 3; ++i) {
            CHECK(alpha[i] == 0.0);
            for (int j = 0; j < 3; ++j) CHECK(w(i, j) == 0.0);
        }
    }

    SECTION("one-bit local search structure") {
        const int n = 10, ell = 5, m = ell - 1;
        const auto a = rls_unimodal_lower_bounds(n, ell);
        const auto [w, alpha] = build_w_and_alpha(a);
        CHECK(alpha[0] == Catch::Approx(1.0 / n));
        for (int j = 1; j < m; ++j) CHECK(alpha[j] == 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double v = w(i, j);
                if (i == j) CHECK(v == Catch::Approx(1.0 - 1.0 / n));
                else if (j == i + 1) CHECK(v == Catch::Approx(1.0 / n));
                else CHECK(v == 0.0);
            }
    }

    SECTION("half-cover family row-sum norm") {
        for (const int n : {8, 12}) {
            for (const double q : {1.0 / (n + 1), 0.5}) {
                const auto a = balas_point_lower_bounds(n, q);
                const auto [w, alpha] = build_w_and_alpha(a);
                CHECK(matrix_norm_inf(w, NormConvention::RowSums) ==
                      Catch::Approx(1.0 - 2.0 * (1.0 - q) / n).margin(1e-12));
            }
        }
    }
}

TEST_CASE("matrix norms") {
    SECTION("zero and identity") {
        const Matrix zero(4, 4);
        CHECK(matrix_norm_inf(zero) == 0.0);
        CHECK(matrix_norm_2(zero) == 0.0);
        const Matrix id = Matrix::identity(5);
        CHECK(matrix_norm_inf(id) == 1.0);
        CHECK(matrix_norm_inf(id, NormConvention::ColSums) == 1.0);
        CHECK(matrix_norm_2(id) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("row and column conventions differ on lopsided matrices") {
        Matrix w(2, 2);
        w(0, 0) = 0.5;
        w(0, 1) = 0.4;
        w(1, 0) = 0.1;
        CHECK(matrix_norm_inf(w, NormConvention::RowSums) == Catch::Approx(0.9));
        CHECK(matrix_norm_inf(w, NormConvention::ColSums) == Catch::Approx(0.6));
    }
}

TEST_CASE("tridiagonal Toeplitz spectrum") {
    SECTION("antidiagonal pair") {
        const auto ev = toeplitz_tridiagonal_spectrum(2, 0.0, 1.0, 1.0);
        CHECK(ev[0] == Catch::Approx(1.0).margin(1e-15));
        CHECK(ev[1] == Catch::Approx(-1.0).margin(1e-15));
    }

    SECTION("size three against the characteristic polynomial") {
        const auto ev = toeplitz_tridiagonal_spectrum(3, 2.0, 1.0, 1.0);
        CHECK(ev[0] == Catch::Approx(2.0 + std::sqrt(2.0)).margin(1e-12));
        CHECK(ev[1] == Catch::Approx(2.0).margin(1e-12));
        CHECK(ev[2] == Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-12));
    }

    SECTION("complex spectra rejected") {
        CHECK_THROWS_AS(toeplitz_tridiagonal_spectrum(3, 0.0, 1.0, -1.0), std::invalid_argument);
    }

    SECTION("dense eigensolve oracle up to n = 50") {
        struct Case {
            int n;
            double delta, sigma, tau;
        };
        for (const auto& c : {Case{5, 0.82, 0.09, 0.09}, Case{17, 2.0, 0.5, 2.0},
                              Case{50, -1.0, 0.25, 0.36}, Case{50, 0.82, 0.09, 0.09}}) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(c.n, c.n);
            for (int i = 0; i < c.n; ++i) {
                t(i, i) = c.delta;
                if (i + 1 < c.n) {
                    t(i + 1, i) = c.sigma;
                    t(i, i + 1) = c.tau;
                }
            }
            Eigen::EigenSolver<Eigen::MatrixXd> solver(t);
            std::vector<double> dense(c.n);
            for (int i = 0; i < c.n; ++i) {
                REQUIRE(std::abs(solver.eigenvalues()[i].imag()) < 1e-9);
                dense[i] = solver.eigenvalues()[i].real();
            }
            std::sort(dense.rbegin(), dense.rend());
            const auto closed = toeplitz_tridiagonal_spectrum(c.n, c.delta, c.sigma, c.tau);
            for (int i = 0; i < c.n; ++i) CHECK(closed[i] == Catch::Approx(dense[i]).margin(1e-9));
        }
    }
}

TEST_CASE("power iteration matches the closed-form top eigenvalue") {
    const int n = 10, ell = 5, m = ell - 1;
    const double diag = (1.0 + (n - 1.0) * (n - 1.0)) / (static_cast<double>(n) * n);
    const double off = (n - 1.0) / (static_cast<double>(n) * n);

    // exact tridiagonal Toeplitz matrix: spectral norm equals its top eigenvalue
    Matrix s(m, m);
    for (int i = 0; i < m; ++i) {
        s(i, i) = diag;
        if (i + 1 < m) {
            s(i + 1, i) = off;
            s(i, i + 1) = off;
        }
    }
    const double top = toeplitz_tridiagonal_spectrum(m, diag, off, off).front();
    constexpr double pi = 3.14159265358979323846;
    CHECK(top == Catch::Approx(diag + 2.0 * off * std::cos(pi / ell)).margin(1e-15));
    CHECK(matrix_norm_2(s) == Catch::Approx(top).margin(1e-10));

    // the closed form upper-bounds the true norm of W itself; the defect is
    // a boundary diagonal entry of W W^T ((n-1)^2/n^2 instead of diag)
    const auto [w, alpha] = build_w_and_alpha(rls_unimodal_lower_bounds(n, ell));
    const double closed_norm =
        std::sqrt(1.0 - (2.0 * (n - 1.0) / (static_cast<double>(n) * n)) * (1.0 - std::cos(pi / ell)));
    CHECK(closed_norm == Catch::Approx(std::sqrt(top)).margin(1e-12));
    const double true_norm = matrix_norm_2(w);
    CHECK(true_norm <= closed_norm + 1e-12);
    CHECK(closed_norm - true_norm < 2e-3);  // boundary defect is O(1/n^2)
}

TEST_CASE("entrywise-positive matrices certify contraction") {
    const int m = 4;
    BoundMatrix a(m, BoundKind::Lower);
    const double eps = 0.05;
    for (int i = 0; i <= m; ++i)
        for (int j = 1; j <= m; ++j) a.at(i, j) = eps + 0.9 * eps * i / m;  // monotone, >= eps
    const auto cert = epsilon_uniform_certificate(a, eps);
    REQUIRE(cert.has_value());
    CHECK(*cert <= 1.0 - eps);
    const auto [w, alpha] = build_w_and_alpha(a);
    CHECK(matrix_norm_inf(w, NormConvention::ColSums) == Catch::Approx(*cert).margin(1e-15));

    BoundMatrix below = a;
    below.at(2, 3) = eps / 2;
    CHECK_FALSE(epsilon_uniform_certificate(below, eps).has_value());
    CHECK_THROWS_AS(epsilon_uniform_certificate(a, 0.0), std::invalid_argument);
}

TEST_CASE("linear lower bound equals the exact chain at s = 1") {
    const int n = 3;
    const auto gamma = point_mutation_gamma(n, 0.25);
    REQUIRE(is_monotone(gamma));
    const auto z0 = PopulationVector::zeros(n);
    const auto traj = lower_bound_linear(gamma, z0, 50);
    CHECK(traj.closed_form_used);
    CHECK(traj.route_gap <= 1e-10);
    CHECK(traj.warnings.empty());
    CHECK(max_abs_diff(traj.at(0), z0.z) == 0.0);

    const ExactChainOracle oracle(gamma);
    for (int t = 0; t <= 50; ++t) {
        const auto exact = oracle.superlevels({1.0, 0.0, 0.0, 0.0}, t);
        CHECK(max_abs_diff(traj.at(t), exact) <= 1e-12);
    }

    // the binary-exponentiation closed form agrees as well
    for (const int t : {1, 7, 31, 50}) {
        const auto closed = lower_bound_linear_closed_form(gamma, z0, t);
        CHECK(max_abs_diff(closed, traj.at(t)) <= 1e-10);
    }
}

TEST_CASE("linear lower bound approaches all-ones on the unimodal preset") {
    const auto a = rls_unimodal_lower_bounds(10, 5);
    const auto traj = lower_bound_linear(a, PopulationVector::zeros(4), 5000);
    for (const double v : traj.at(5000)) CHECK(v >= 1.0 - 1e-6);
    CHECK(traj.route_gap <= 1e-10);
}

TEST_CASE("linear lower bound rejects non-monotone input by default") {
    const auto bad = point_mutation_gamma(4, 0.1);
    CHECK_THROWS_AS(lower_bound_linear(bad, PopulationVector::zeros(4), 5), MonotonicityError);
    LinearBoundOptions opts;
    opts.require_monotone = false;
    const auto traj = lower_bound_linear(bad, PopulationVector::zeros(4), 5, opts);
    REQUIRE_FALSE(traj.warnings.empty());
}

TEST_CASE("chain lower bound") {
    SECTION("t = 0 reproduces the cumulative initial distribution") {
        const auto a = sat_walk_lower_bounds(4);
        const std::vector<double> p0{0.5, 0.25, 0.25, 0.0, 0.0};
        const auto traj = lower_bound_chain(a, p0, 0);
        const std::vector<double> expect{0.5, 0.25, 0.0, 0.0};
        CHECK(max_abs_diff(traj.at(0), expect) <= 1e-15);
    }

    SECTION("agrees with the linear route for equal matrices") {
        struct Preset {
            BoundMatrix a;
            int m;
        };
        const std::vector<Preset> presets{{rls_unimodal_lower_bounds(10, 5), 4},
                                          {sat_walk_lower_bounds(6), 6},
                                          {point_mutation_gamma(5, 0.25), 5}};
        for (const auto& preset : presets) {
            const auto z0 = PopulationVector::zeros(preset.m);
            std::vector<double> p0(preset.m + 1, 0.0);
            p0[0] = 1.0;
            const auto linear = lower_bound_linear(preset.a, z0, 200);
            const auto chain = lower_bound_chain(preset.a, p0, 200);
            for (int t = 0; t <= 200; ++t)
                CHECK(max_abs_diff(linear.at(t), chain.at(t)) <= 1e-10);
        }
    }

    SECTION("ruin-walk absorption against a direct chain") {
        const int m = 10;
        const auto a = sat_walk_lower_bounds(m);
        std::vector<double> p0(m + 1, 0.0);
        p0[0] = 1.0;
        const auto traj = lower_bound_chain(a, p0, 400);

        // direct ruin walk built without the bound matrix: lazy-reflecting at 0
        // (the bottom level keeps mass 1/2 in place), absorbing at m
        Matrix ruin(m + 1, m + 1);
        ruin(0, 0) = 0.5;
        ruin(0, 1) = 0.5;
        for (int i = 1; i < m; ++i) {
            ruin(i, i - 1) = 0.5;
            ruin(i, i + 1) = 0.5;
        }
        ruin(m, m) = 1.0;
        std::vector<double> p{p0};
        for (int t = 0; t <= 400; ++t) {
            CHECK(traj.at(t)[m - 1] == Catch::Approx(p[m]).margin(1e-12));
            p = p * ruin;
        }
    }

    SECTION("requires every level set inhabited") {
        const auto a = sat_walk_lower_bounds(3);
        const std::vector<double> p0{1.0, 0.0, 0.0, 0.0};
        CHECK_THROWS_AS(lower_bound_chain(a, p0, 5, false), std::invalid_argument);
    }
}

TEST_CASE("tournament upper bound") {
    SECTION("all-ones matrix saturates immediately") {
        BoundMatrix ones(3, BoundKind::Upper);
        for (int i = 0; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) ones.at(i, j) = 1.0;
        const auto traj = upper_bound_jensen(ones, PopulationVector::zeros(3), 2, 5);
        for (int t = 1; t <= 5; ++t)
            for (const double v : traj.at(t)) CHECK(v == 1.0);
    }

    SECTION("s = 1 collapses to the linear recursion") {
        const auto gamma = point_mutation_gamma(4, 0.25);
        const auto z0 = PopulationVector{{0.8, 0.4, 0.2, 0.1}, std::nullopt};
        const auto upper = upper_bound_jensen(gamma, z0, 1, 80);
        const auto lower = lower_bound_linear(gamma, z0, 80);
        for (int t = 0; t <= 80; ++t) CHECK(max_abs_diff(upper.at(t), lower.at(t)) <= 1e-12);
    }

    SECTION("rejects non-monotone matrices") {
        const auto bad = point_mutation_gamma(4, 0.05);
        CHECK_THROWS_AS(upper_bound_jensen(bad, PopulationVector::zeros(4), 2, 5),
                        MonotonicityError);
    }
}

TEST_CASE("deterministic population-limit recursion") {
    const auto bp = vcp_block_params(0.1);
    const auto gamma = block_gamma(8, bp.r, bp.r_tilde);
    REQUIRE(is_monotone(gamma));

    SECTION("s = 1 equals the tournament upper bound recursion") {
        std::vector<double> u0{0.9, 0.8, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
        const auto inf = infinite_population_recursion(gamma, u0, 1, 60);
        const auto up = upper_bound_jensen(gamma, PopulationVector{u0, std::nullopt}, 1, 60);
        for (int t = 0; t <= 60; ++t) CHECK(max_abs_diff(inf.at(t), up.at(t)) <= 1e-15);
    }

    SECTION("strictly larger tournaments dominate strictly") {
        // needs gamma_mj > gamma_0j for every column
        for (int j = 1; j <= 8; ++j) REQUIRE(gamma.at(8, j) > gamma.at(0, j));
        std::vector<double> u0(8);
        for (int i = 0; i < 8; ++i) u0[i] = 0.5 - 0.04 * i;
        const auto small = infinite_population_recursion(gamma, u0, 2, 100);
        const auto big = infinite_population_recursion(gamma, u0, 10, 100);
        for (int t = 1; t <= 100; ++t)
            for (int j = 0; j < 8; ++j) CHECK(big.at(t)[j] > small.at(t)[j]);
    }

    SECTION("fixed point satisfies the recursion") {
        std::vector<double> u0(8, 0.0);
        const auto traj = infinite_population_recursion(gamma, u0, 2, 20000);
        const auto& u = traj.at(20000);
        const auto next = infinite_population_recursion(gamma, u, 2, 1);
        CHECK(max_abs_diff(next.at(1), u) <= 1e-12);
    }

    SECTION("requires an exact monotone matrix") {
        BoundMatrix lower(2, BoundKind::Lower);
        CHECK_THROWS_AS(infinite_population_recursion(lower, {0.0, 0.0}, 2, 3),
                        std::invalid_argument);
    }
}

TEST_CASE("best-of-lambda superlevel recursion") {
    const auto gamma = point_mutation_gamma(6, 1.0 / 7.0);
    REQUIRE(is_monotone(gamma));
    const std::vector<double> p0(6, 0.0);

    SECTION("lambda = 1 collapses to the linear recursion") {
        const auto rec = one_comma_lambda_recursion(gamma, p0, 1, 60);
        const auto lin = lower_bound_linear(gamma, PopulationVector::zeros(6), 60);
        for (int t = 0; t <= 60; ++t) CHECK(max_abs_diff(rec.at(t), lin.at(t)) <= 1e-12);
    }

    SECTION("larger offspring pools dominate componentwise") {
        std::vector<double> start(6);
        for (int i = 0; i < 6; ++i) start[i] = 0.6 - 0.08 * i;
        const auto two = one_comma_lambda_recursion(gamma, start, 2, 50);
        const auto ten = one_comma_lambda_recursion(gamma, start, 10, 50);
        for (int t = 1; t <= 50; ++t)
            for (int j = 0; j < 6; ++j) CHECK(ten.at(t)[j] >= two.at(t)[j] - 1e-15);
    }

    SECTION("rejects non-monotone matrices") {
        const auto bad = point_mutation_gamma(6, 0.01);
        CHECK_THROWS_AS(one_comma_lambda_recursion(bad, p0, 3, 5), MonotonicityError);
    }
}

TEST_CASE("closed forms for the unimodal local-search bound") {
    const int n = 10, ell = 5;

    SECTION("vacuous at t = 0, monotone toward one") {
        CHECK(closed_form_lower_bound_unimodal(n, ell, 0) ==
              Catch::Approx(1.0 - std::sqrt(4.0)).margin(1e-15));
        double prev = -10.0;
        for (int t = 0; t <= 4000; t += 40) {
            const double v = closed_form_lower_bound_unimodal(n, ell, t);
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(prev >= 1.0 - 1e-6);
    }

    SECTION("never exceeds the matrix recursion it relaxes") {
        const auto a = rls_unimodal_lower_bounds(n, ell);
        const auto traj = lower_bound_linear(a, PopulationVector::zeros(ell - 1), 500);
        for (int t = 0; t <= 500; ++t)
            CHECK(closed_form_lower_bound_unimodal(n, ell, t) <= traj.at(t)[ell - 2] + 1e-12);
    }

    SECTION("tail bounds") {
        CHECK(unimodal_markov_tail(12, 13, 144) == 1.0);
        CHECK(unimodal_markov_tail(12, 13, 288) == Catch::Approx(0.5));
        CHECK(unimodal_markov_tail(12, 13, 0) == 1.0);
        // exponential-in-t decay
        const double a1 = unimodal_tail_bound(12, 13, 1000);
        const double a2 = unimodal_tail_bound(12, 13, 2000);
        const double a3 = unimodal_tail_bound(12, 13, 3000);
        CHECK(a2 / a1 == Catch::Approx(a3 / a2).margin(1e-12));
        CHECK(a2 < a1);
    }
}

TEST_CASE("trajectories stay in [0,1] and ordered across superlevels") {
    struct Spec {
        BoundMatrix mat;
        int m;
    };
    const std::vector<Spec> specs{{point_mutation_gamma(5, 0.25), 5},
                                  {block_gamma(6, 0.91, 0.27), 6},
                                  {rls_unimodal_lower_bounds(10, 5), 4},
                                  {sat_walk_lower_bounds(6), 6}};
    const auto well_formed = [](const BoundTrajectory& traj) {
        for (int t = 0; t <= traj.t_max(); ++t) {
            const auto& row = traj.at(t);
            double prev = 1.0 + 1e-12;
            for (const double v : row) {
                REQUIRE(v >= -1e-12);
                REQUIRE(v <= prev + 1e-12);
                prev = v;
            }
        }
    };
    for (const auto& spec : specs) {
        std::vector<double> z(spec.m);
        for (int i = 0; i < spec.m; ++i) z[i] = 0.8 - 0.8 * i / spec.m;
        const PopulationVector z0{z, std::nullopt};
        well_formed(lower_bound_linear(spec.mat, z0, 120));
        well_formed(lower_bound_chain(spec.mat, level_distribution(z0), 120));
        well_formed(upper_bound_jensen(spec.mat, z0, 3, 120));
        if (spec.mat.kind() == BoundKind::Exact) {
            well_formed(infinite_population_recursion(spec.mat, z, 4, 120));
            well_formed(one_comma_lambda_recursion(spec.mat, z, 6, 120));
        }
    }

    // start vectors must satisfy the population invariants
    const auto gamma = point_mutation_gamma(3, 0.25);
    const PopulationVector unsorted{{0.2, 0.9, 0.1}, std::nullopt};
    CHECK_THROWS_AS(lower_bound_linear(gamma, unsorted, 5), std::invalid_argument);
    CHECK_THROWS_AS(upper_bound_jensen(gamma, unsorted, 2, 5), std::invalid_argument);
}

TEST_CASE("half-cover stationary vector") {
    SECTION("small case by hand") {
        const auto st = balas_stationary_vector(4);
        REQUIRE(st.v.size() == 2);
        CHECK(st.v[0] == Catch::Approx(0.875).margin(1e-15));
        CHECK(st.v[1] == Catch::Approx(0.375).margin(1e-15));
        CHECK(st.equation_residual <= 1e-10);
        CHECK(st.solve_gap <= 1e-9);
    }

    SECTION("residuals and structure for larger sizes") {
        for (const int n : {8, 12, 16}) {
            const auto st = balas_stationary_vector(n);
            CHECK(st.equation_residual <= 1e-10);
            CHECK(st.solve_gap <= 1e-9);
            CHECK(st.v.front() <= 1.0);
            for (std::size_t i = 1; i < st.v.size(); ++i) CHECK(st.v[i] <= st.v[i - 1]);
            // top component: central binomial mass of the folded walk
            double binom = 1.0;
            for (int k = 1; k <= n / 2; ++k) binom = binom * (n - k + 1) / k;
            CHECK(st.v.back() == Catch::Approx(binom * std::ldexp(1.0, -n)).margin(1e-15));
        }
    }

    SECTION("matches the long-run chain marginals") {
        const int n = 8, m = 4;
        const auto a = balas_point_lower_bounds(n, 1.0 / (n + 1));
        std::vector<double> p0(m + 1, 0.0);
        p0[0] = 1.0;
        const auto chain = make_associated_chain(a, p0);
        std::vector<double> p = chain.p0;
        for (int t = 0; t < 2000; ++t) p = p * chain.t;
        const auto cum = cumulate_levels(p);
        const auto st = balas_stationary_vector(n);
        for (int j = 0; j < m; ++j) CHECK(cum[j] == Catch::Approx(st.v[j]).margin(1e-10));
    }

    SECTION("odd sizes rejected") {
        CHECK_THROWS_AS(balas_stationary_vector(7), std::invalid_argument);
    }
}
