#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include "levelea/bounds.hpp"
#include "levelea/problems.hpp"
#include "levelea/simulator.hpp"

using namespace levelea;

namespace {

Genotype from_mask(std::uint32_t mask, int n) {
    Genotype g(n, 0);
    for (int i = 0; i < n; ++i) g[i] = (mask >> i) & 1u;
    return g;
}

// brute-force optimum search over all genotypes
int count_optima(const ProblemInstance& p) {
    int count = 0;
    for (std::uint32_t mask = 0; mask < (1u << p.n); ++mask)
        count += p.optimum_test(from_mask(mask, p.n));
    return count;
}

}  // namespace

TEST_CASE("ones-count instance") {
    const auto p = onemax(6);
    CHECK(p.fitness(Genotype(6, 0)) == 0.0);
    CHECK(p.fitness(Genotype(6, 1)) == 6.0);
    CHECK(p.fitness({1, 0, 1, 1, 0, 1}) == 4.0);
    CHECK(p.classify({1, 0, 1, 1, 0, 1}) == 4);
    CHECK(count_optima(p) == 1);
    for (std::uint32_t mask = 0; mask < (1u << 6); ++mask) {
        const auto g = from_mask(mask, 6);
        CHECK(p.optimum_test(g) == (p.classify(g) == p.m()));
    }
}

TEST_CASE("triangle covers") {
    SECTION("exactly the two equal patterns are redundant") {
        int optimal_patterns = 0;
        for (int g0 : {0, 1})
            for (int g1 : {0, 1})
                for (int g2 : {0, 1}) {
                    // directly count distinct endpoints chosen by the pattern
                    const bool opt = vcp_block_optimal(g0, g1, g2);
                    optimal_patterns += opt;
                    const bool all_equal = (g0 == g1 && g1 == g2);
                    CHECK(opt == !all_equal);
                }
        CHECK(optimal_patterns == 6);
    }

    SECTION("fitness counts optimal blocks; all-zeros sits at the bottom") {
        const auto preset = vcp_triangles(8, 0.1);
        const auto& p = preset.problem;
        CHECK(p.n == 24);
        CHECK(p.m() == 8);
        CHECK(p.fitness(Genotype(24, 0)) == 0.0);
        CHECK(p.classify(Genotype(24, 0)) == 0);
        Genotype g(24, 0);
        g[0] = 1;  // block 0 becomes "100" which covers with two vertices
        CHECK(p.fitness(g) == 1.0);
        CHECK_FALSE(p.optimum_test(g));
    }

    SECTION("single-block gain probability equals the block parameter") {
        const auto preset = vcp_triangles(1, 0.3);
        REQUIRE(preset.kernel.gamma.has_value());
        const auto& gamma = *preset.kernel.gamma;
        const auto bp = vcp_block_params(0.3);
        CHECK(gamma.at(0, 1) == Catch::Approx(bp.r_tilde).margin(1e-12));
        CHECK(gamma.at(1, 1) == Catch::Approx(bp.r).margin(1e-12));
    }

    SECTION("exhaustive optimum census for small sizes") {
        for (int m : {1, 2, 3, 4}) {
            const auto preset = vcp_triangles(m, 0.1);
            int expect = 1;
            for (int b = 0; b < m; ++b) expect *= 6;  // six optimal patterns per block
            CHECK(count_optima(preset.problem) == expect);
        }
    }
}

TEST_CASE("capped leading-ones ridge") {
    const auto p = unimodal_path(10, 6);
    CHECK(p.fitness(Genotype(10, 1)) == 5.0);
    CHECK(p.fitness(Genotype(10, 0)) == 0.0);
    CHECK(p.m() == 5);
    CHECK_THROWS_AS(unimodal_path(4, 7), std::invalid_argument);

    SECTION("every non-optimal point improves by one flip") {
        for (int n : {8, 10, 14}) {
            for (int ell : {2, 5, n + 1}) {
                const auto inst = unimodal_path(n, ell);
                int distinct_values = 0;
                std::vector<bool> seen(ell, false);
                for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                    const auto g = from_mask(mask, n);
                    const double f = inst.fitness(g);
                    if (!seen[static_cast<int>(f)]) {
                        seen[static_cast<int>(f)] = true;
                        ++distinct_values;
                    }
                    if (inst.optimum_test(g)) continue;
                    bool improvable = false;
                    for (int b = 0; b < n && !improvable; ++b) {
                        Genotype h = g;
                        h[b] ^= 1u;
                        improvable = inst.fitness(h) > f;
                    }
                    CHECK(improvable);
                }
                CHECK(distinct_values == ell);
            }
        }
    }
}

TEST_CASE("planted 2-SAT instances") {
    SECTION("plant satisfies, classification follows closeness to it") {
        const auto inst = two_sat_planted(12, 30, 7);
        CHECK(inst.formula.satisfied(inst.planted));
        CHECK(inst.problem.classify(inst.planted) == inst.problem.m());
        CHECK(inst.problem.optimum_test(inst.planted));
        Genotype g = inst.planted;
        g[3] ^= 1u;
        g[7] ^= 1u;
        CHECK(inst.problem.classify(g) == inst.problem.m() - 2);
        CHECK_FALSE(inst.problem.optimum_test(g));
    }

    SECTION("unsatisfiable plants rejected") {
        CnfFormula f;
        f.n = 2;
        f.clauses = {{1}, {-1}};
        CHECK_THROWS_AS(two_sat_instance(2, f, Genotype{1, 0}), std::invalid_argument);
    }

    SECTION("clause width is validated") {
        CnfFormula f;
        f.n = 3;
        f.clauses = {{1, 2, 3}};
        CHECK_THROWS_AS(two_sat_instance(3, f, Genotype{1, 1, 1}), std::invalid_argument);
    }
}

TEST_CASE("clause walk satisfies a planted instance within the quadratic budget") {
    // fit c on the surrogate chain, then check the real walk beats it
    const int n = 20;
    const auto a = sat_walk_lower_bounds(n);
    std::vector<double> p0(n + 1, 0.0);
    p0[0] = 1.0;
    const auto chain = make_associated_chain(a, p0);
    std::vector<double> p = chain.p0;
    int t_half = 0;
    while (p[n] < 0.5) {
        p = p * chain.t;
        ++t_half;
    }
    const double c_hat = static_cast<double>(t_half) / (n * n);

    const auto inst = two_sat_planted(n, 3 * n, 2024);
    const int budget = static_cast<int>(std::ceil(c_hat * n * n));
    const int walkers = 600;
    int satisfied = 0;
    for (int w = 0; w < walkers; ++w) {
        Rng rng = make_run_rng(77, w);
        Genotype g(n);
        for (int i = 0; i < n; ++i) g[i] = inst.planted[i] ^ 1u;  // worst-case start
        for (int t = 0; t < budget && !inst.formula.satisfied(g); ++t)
            g = sat_walk_sample(g, inst.formula, rng);
        satisfied += inst.formula.satisfied(g);
    }
    // the walk improves with probability >= 1/2, so it dominates the chain
    CHECK(static_cast<double>(satisfied) / walkers >= 0.5);
}

TEST_CASE("half-cover set-cover family") {
    SECTION("level structure of the unitation form") {
        const auto p = balas_scp(8);
        CHECK(p.m() == 4);
        Genotype g(8, 0);
        for (int i = 0; i < 4; ++i) g[i] = 1;
        CHECK(p.optimum_test(g));          // any half-size subset covers
        CHECK(p.classify(g) == 4);
        g[4] = 1;                           // a five-element cover is non-optimal
        CHECK_FALSE(p.optimum_test(g));
        CHECK(p.classify(g) == 3);          // big covers fold just below the top
        CHECK(p.classify(Genotype(8, 0)) == 0);
        CHECK(p.classify(Genotype(8, 1)) == 3);
        CHECK_THROWS_AS(balas_scp(6 + 1), std::invalid_argument);
    }

    SECTION("one ones-count short of half leaves exactly one element uncovered") {
        const int n = 8;
        Genotype g(n, 0);
        for (int i = 0; i < n / 2 - 1; ++i) g[i] = 1;
        CHECK(balas_ground_set_fitness(g, n) == -1.0);
    }

    SECTION("ground-set form induces identical levels") {
        for (const int n : {4, 8, 12}) {
            const auto unit = balas_scp(n);
            const auto ground = balas_ground_set_partition(n);
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                const auto g = from_mask(mask, n);
                const int lu = unit.classify(g);
                const int lg = ground.level_of(balas_ground_set_fitness(g, n));
                REQUIRE(lu == lg);
            }
        }
    }
}
