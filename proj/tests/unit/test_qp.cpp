#include <doctest.h>

#include <random>

#include "fjrec/errors.hpp"
#include "fjrec/qp.hpp"
#include "oracles.hpp"

using namespace fjrec;

TEST_CASE("separable examples") {
    const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(4, 4);
    const QpResult interior = qp_solve_box(h, Eigen::VectorXd::Constant(4, -0.5), 0.0, 1.0, 1e-12, 100);
    CHECK((interior.u - Eigen::VectorXd::Constant(4, 0.5)).lpNorm<Eigen::Infinity>() <= 1e-12);
    const QpResult lower = qp_solve_box(h, Eigen::VectorXd::Ones(4), 0.0, 1.0, 1e-12, 100);
    CHECK(lower.u.isZero(0.0));
    const QpResult upper = qp_solve_box(h, Eigen::VectorXd::Constant(4, -3.0), 0.0, 1.0, 1e-12, 100);
    CHECK(upper.u.isOnes(0.0));
}

TEST_CASE("matches exhaustive active-set enumeration") {
    std::mt19937_64 rng(909);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 8;
        const Eigen::MatrixXd h = oracle::random_spd(rng, n, trial % 2 == 0 ? 1e-3 : 0.5);
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) g[i] = 2.0 * nd(rng);
        const oracle::BoxQpOracle best = oracle::enumerate_box_qp(h, g, 0.0, 1.0);
        const QpResult r = qp_solve_box(h, g, 0.0, 1.0, 1e-10, 500);
        CHECK(std::abs(r.objective - best.objective) <= 1e-8);
        CHECK(r.u.minCoeff() >= 0.0);
        CHECK(r.u.maxCoeff() <= 1.0);
        for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1] + 1e-14);
    }
}

TEST_CASE("general box bounds and warm starts") {
    std::mt19937_64 rng(910);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 5;
        const Eigen::MatrixXd h = oracle::random_spd(rng, n);
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) g[i] = 3.0 * nd(rng);
        const oracle::BoxQpOracle best = oracle::enumerate_box_qp(h, g, -1.0, 2.0);
        const Eigen::VectorXd warm = Eigen::VectorXd::Constant(n, 5.0);  // projected onto the box
        const QpResult r = qp_solve_box(h, g, -1.0, 2.0, 1e-10, 500, warm);
        CHECK(std::abs(r.objective - best.objective) <= 1e-8);
        CHECK(r.kkt_residual <= 1e-10);
    }
}

TEST_CASE("badly scaled problems converge") {
    // Shape of the MPC Hessian with a large terminal weight: rank one dominant term.
    std::mt19937_64 rng(911);
    for (double scale : {1e3, 1e6, 1e8}) {
        const int n = 8;
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = 0.1 + 0.1 * i;
        const Eigen::MatrixXd h = oracle::random_spd(rng, n, 0.1) + scale * v * v.transpose();
        const Eigen::VectorXd g = -h * Eigen::VectorXd::Constant(n, 0.3);
        const QpResult r = qp_solve_box(h, g, 0.0, 1.0, 1e-8, 500);
        CHECK((r.u - Eigen::VectorXd::Constant(n, 0.3)).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
}

TEST_CASE("invalid problems") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(qp_solve_box(h, Eigen::VectorXd::Zero(2), 1.0, 0.0, 1e-8, 10), DomainError);
    h(0, 1) = 0.5;
    CHECK_THROWS_AS(qp_solve_box(h, Eigen::VectorXd::Zero(2), 0.0, 1.0, 1e-8, 10), NumericalError);
    h(1, 0) = 0.5;
    h(1, 1) = -1.0;
    CHECK_THROWS_AS(qp_solve_box(h, Eigen::VectorXd::Zero(2), 0.0, 1.0, 1e-8, 10), NumericalError);
}

TEST_CASE("iteration cap reports the residual") {
    std::mt19937_64 rng(912);
    const Eigen::MatrixXd h = oracle::random_spd(rng, 8, 1e-4);
    const Eigen::VectorXd g = Eigen::VectorXd::Constant(8, -0.7);
    try {
        (void)qp_solve_box(h, g, 0.0, 1.0, 1e-300, 1);
        FAIL("expected NonConvergedError");
    } catch (const NonConvergedError& e) {
        CHECK(e.iterations() == 1);
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("non-positive tolerance or iteration cap is rejected") {
    const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(qp_solve_box(h, Eigen::VectorXd::Zero(2), 0.0, 1.0, 0.0, 10), DomainError);
    CHECK_THROWS_AS(qp_solve_box(h, Eigen::VectorXd::Zero(2), 0.0, 1.0, 1e-8, 0), DomainError);
}
