#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "levelea/kernels.hpp"
#include "levelea/levels.hpp"

using namespace levelea;

TEST_CASE("level partition classifies by threshold membership") {
    LevelPartition part{{0.0, 1.0, 2.0, 4.0}};
    part.validate();
    REQUIRE(part.level_count() == 3);
    CHECK(part.level_of(0.0) == 0);
    CHECK(part.level_of(0.9) == 0);
    CHECK(part.level_of(1.0) == 1);
    CHECK(part.level_of(3.5) == 2);
    CHECK(part.level_of(4.0) == 3);
    CHECK(part.level_of(17.0) == 3);
    CHECK(part.level_of(-1.0) == 0);  // total map: below the bottom threshold clamps to 0

    CHECK_THROWS_AS((LevelPartition{{1.0, 1.0}}.validate()), std::invalid_argument);
}

TEST_CASE("all-zero matrix is monotone") {
    const BoundMatrix zero(5, BoundKind::Lower);
    CHECK(is_monotone(zero));
}

TEST_CASE("point-mutation matrix monotone iff q >= 1/(n+1)") {
    // column i = j has difference q + (q-1)/n, zero exactly at q = 1/5 for n = 4
    const auto at_boundary = point_mutation_gamma(4, 0.2);
    CHECK(at_boundary.comparison_tol() == 0.0);
    CHECK(is_monotone(at_boundary));

    const auto below = point_mutation_gamma(4, 0.1);
    CHECK_FALSE(is_monotone(below));
    const auto viol = first_monotonicity_violation(below, 0.0);
    REQUIRE(viol.has_value());
    CHECK(viol->first == viol->second);  // the failing column is a diagonal one
}

TEST_CASE("selection probability matches the tournament law") {
    PopulationVector z{{0.5, 0.25}, std::nullopt};
    CHECK(selection_probability(z, 2, 1) == Catch::Approx(0.75).margin(1e-15));

    PopulationVector zero{{0.0, 0.0}, std::nullopt};
    PopulationVector one{{1.0, 1.0}, std::nullopt};
    for (int s : {1, 2, 7}) {
        CHECK(selection_probability(zero, s, 1) == 0.0);
        CHECK(selection_probability(one, s, 2) == 1.0);
    }
    CHECK_THROWS_AS(selection_probability(z, 0, 1), std::invalid_argument);
}

TEST_CASE("per-set selection probabilities telescope to one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const int m = 1 + static_cast<int>(unit(rng) * 6);
        std::vector<double> z(m);
        for (auto& v : z) v = unit(rng);
        std::sort(z.rbegin(), z.rend());
        PopulationVector pv{z, std::nullopt};
        const int s = 1 + rep % 5;
        double total = 0.0;
        for (int i = 0; i <= m; ++i) total += selection_probability_level_set(pv, s, i);
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
        // set form at i = m agrees with the superlevel form at j = m
        CHECK(selection_probability_level_set(pv, s, m) ==
              Catch::Approx(selection_probability(pv, s, m)).margin(1e-12));
    }
}

TEST_CASE("selection probability is monotone in s and z") {
    for (double zj : {0.1, 0.5, 0.9, 1.0}) {
        PopulationVector pv{{zj}, std::nullopt};
        double prev = 0.0;
        for (int s = 1; s <= 8; ++s) {
            const double cur = selection_probability(pv, s, 1);
            CHECK(cur >= prev - 1e-15);
            prev = cur;
        }
    }
    for (int s : {1, 3, 9}) {
        double prev = -1.0;
        for (double zj = 0.0; zj <= 1.0; zj += 0.05) {
            PopulationVector pv{{zj}, std::nullopt};
            const double cur = selection_probability(pv, s, 1);
            CHECK(cur >= prev - 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("bound pair validation") {
    const int m = 4;
    BoundMatrix lower(m, BoundKind::Lower);
    BoundMatrix upper(m, BoundKind::Upper);
    for (int i = 0; i <= m; ++i)
        for (int j = 1; j <= m; ++j) upper.at(i, j) = 1.0;

    SECTION("zero lower vs all-ones upper: valid, not level-based") {
        const auto rep = validate_bound_pair(lower, upper);
        CHECK(rep.valid_pair);
        CHECK(rep.lower_monotone);
        CHECK(rep.upper_monotone);
        CHECK_FALSE(rep.level_based);
    }

    SECTION("equal exact matrices at the monotonicity threshold") {
        const auto gamma = point_mutation_gamma(4, 1.0 / 5.0);
        const auto rep = validate_bound_pair(gamma, gamma);
        CHECK(rep.valid_pair);
        CHECK(rep.level_based);
        CHECK(rep.lower_monotone);
        CHECK(rep.upper_monotone);
    }

    SECTION("lower above upper is flagged with a location") {
        BoundMatrix bad = lower;
        bad.at(2, 3) = 0.7;
        BoundMatrix tight = upper;
        tight.at(2, 3) = 0.5;
        const auto rep = validate_bound_pair(bad, tight);
        CHECK_FALSE(rep.valid_pair);
        REQUIRE(rep.first_violation.has_value());
        CHECK(rep.first_violation->first == 2);
        CHECK(rep.first_violation->second == 3);
    }

    SECTION("dimension mismatch rejected") {
        BoundMatrix small(2, BoundKind::Upper);
        CHECK_THROWS_AS(validate_bound_pair(lower, small), std::invalid_argument);
    }
}

TEST_CASE("population vector invariants") {
    PopulationVector good{{0.75, 0.5, 0.5, 0.0}, 4};
    CHECK(good.is_valid());

    PopulationVector not_sorted{{0.5, 0.75}, std::nullopt};
    CHECK_FALSE(not_sorted.is_valid());

    PopulationVector not_multiple{{0.3}, 4};
    CHECK_FALSE(not_multiple.is_valid());

    const auto from_counts = PopulationVector::from_level_counts({1, 2, 1}, 4);
    REQUIRE(from_counts.m() == 2);
    CHECK(from_counts.z[0] == Catch::Approx(0.75));
    CHECK(from_counts.z[1] == Catch::Approx(0.25));
    CHECK(from_counts.is_valid());
}

TEST_CASE("csv round trips") {
    const auto gamma = point_mutation_gamma(5, 0.25);
    const auto text = to_csv(gamma);
    const auto back = bound_matrix_from_csv(text, BoundKind::Exact, 0.0);
    REQUIRE(back.m() == gamma.m());
    for (int i = 0; i <= gamma.m(); ++i)
        for (int j = 1; j <= gamma.m(); ++j) CHECK(back.at(i, j) == gamma.at(i, j));

    PopulationVector pv{{0.75, 0.5, 0.25}, 4};
    const auto pv_back = population_vector_from_csv(to_csv(pv));
    REQUIRE(pv_back.m() == 3);
    CHECK(pv_back.z == pv.z);
    REQUIRE(pv_back.lambda.has_value());
    CHECK(*pv_back.lambda == 4);
}

TEST_CASE("exact matrices must be row-monotone") {
    BoundMatrix bad(3, BoundKind::Exact);
    bad.at(1, 1) = 0.2;
    bad.at(1, 2) = 0.4;  // H_2 cannot be more likely than H_1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
