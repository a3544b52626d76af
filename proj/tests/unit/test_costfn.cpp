#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fjrec/costfn.hpp"
#include "fjrec/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fjrec;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) x[i++] = d;
    return x;
}
}  // namespace

TEST_CASE("engagement cost examples") {
    CHECK(engagement_cost(vec({0.5, 0.5}), 0.5) == 0.0);
    CHECK(engagement_cost(vec({1.0, 0.0}), 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    // 0.04 + 0 + 0.25
    CHECK(engagement_cost(vec({0.2, 0.4, 0.9}), 0.4) == doctest::Approx(0.29).epsilon(1e-14));
    CHECK_THROWS_AS(engagement_cost(vec({0.5}), 1.5), DomainError);
    CHECK_THROWS_AS(engagement_cost(vec({0.5}), -0.01), DomainError);
}

TEST_CASE("novelty factor") {
    CostParams p{.rho = 1.0, .delta_novelty = 0.7, .window_z = 5};
    CHECK(novelty_factor(3, 3, p) == 1.0);
    p.delta_novelty = 0.0;
    for (int age = 0; age <= 5; ++age) CHECK(novelty_factor(10 + age, 10, p) == 1.0);
    p.delta_novelty = 0.5;
    CHECK(novelty_factor(2, 0, p) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(novelty_factor(2, 0, p) == doctest::Approx(0.36788).epsilon(1e-5));
    CHECK_THROWS_AS(novelty_factor(6, 0, p), OutOfWindowError);
    CHECK_THROWS_AS(novelty_factor(0, 1, p), DomainError);
}

TEST_CASE("invalid cost parameters are rejected") {
    CHECK_THROWS_AS(check(CostParams{.rho = -1.0}), DomainError);
    CHECK_THROWS_AS(check(CostParams{.delta_novelty = -0.1}), DomainError);
    CHECK_THROWS_AS(check(CostParams{.window_z = 0}), DomainError);
    CHECK_NOTHROW(check(CostParams{}));
}

TEST_CASE("mitigation cost examples") {
    const CostParams p{.rho = 2.0, .delta_novelty = 0.0, .window_z = 5};
    CHECK(mitigation_cost(vec({1.0, 0.0}), 0.5, 0, 0, p) == doctest::Approx(1.5).epsilon(1e-15));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Eigen::VectorXd x = gen::random_state(rng, 1 + k % 9);
        const double u = unit(rng);
        const CostParams zero{.rho = 0.0, .delta_novelty = unit(rng), .window_z = 5};
        CHECK(mitigation_cost(x, u, 3, 1, zero) == engagement_cost(x, u));
        const CostParams any{.rho = 10.0 * unit(rng), .delta_novelty = unit(rng), .window_z = 5};
        CHECK(mitigation_cost(x, 0.0, 4, 0, any) == engagement_cost(x, 0.0));
    }
}

TEST_CASE("mitigation cost matches direct evaluation") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const Eigen::VectorXd x = gen::random_state(rng, 1 + k % 20);
        const double u = unit(rng);
        const CostParams p{.rho = 5.0 * unit(rng), .delta_novelty = unit(rng), .window_z = 5};
        const int age = k % 6;
        const double expected = oracle::direct_mitigation_cost(x, u, p.rho, p.delta_novelty, age);
        CHECK(mitigation_cost(x, u, 10 + age, 10, p) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("cost properties: nonnegative, convex in u, symmetric in users, dominates engagement") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 300; ++k) {
        const int n = 2 + k % 15;
        Eigen::VectorXd x = gen::random_state(rng, n);
        const CostParams p{.rho = 4.0 * unit(rng), .delta_novelty = unit(rng), .window_z = 5};
        const int age = k % 6;
        const double u1 = unit(rng);
        const double u2 = unit(rng);
        const double a = unit(rng);
        const double mid = a * u1 + (1.0 - a) * u2;
        const double f1 = mitigation_cost(x, u1, age, 0, p);
        const double f2 = mitigation_cost(x, u2, age, 0, p);
        const double fm = mitigation_cost(x, mid, age, 0, p);
        CHECK(f1 >= 0.0);
        CHECK(fm <= a * f1 + (1.0 - a) * f2 + 1e-12);
        CHECK(f1 >= engagement_cost(x, u1));

        Eigen::VectorXd shuffled = x;
        std::shuffle(shuffled.data(), shuffled.data() + n, rng);
        CHECK(mitigation_cost(shuffled, u1, age, 0, p) == doctest::Approx(f1).epsilon(1e-13));
    }
}

TEST_CASE("penalty scale") {
    const CostParams p{.rho = 2.5, .delta_novelty = 0.5, .window_z = 5};
    CHECK(penalty_scale(0, p) == 3.5);
    CHECK(penalty_scale(2, p) == doctest::Approx(1.0 + 2.5 * std::exp(-1.0)).epsilon(1e-15));
}
