#pragma once

// Independent reference computations used only by the test suites. Nothing here calls
// into the code paths it is used to check.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Minimum of 0.5 u'Hu + g'u over lo <= u <= hi by enumerating all 3^T assignments of
// each coordinate to {lower bound, upper bound, free}. For every pattern the free block
// is solved exactly; infeasible candidates are discarded.
struct BoxQpOracle {
    Eigen::VectorXd u;
    double objective = std::numeric_limits<double>::infinity();
};

inline BoxQpOracle enumerate_box_qp(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, double lo, double hi) {
    const int n = static_cast<int>(g.size());
    int patterns = 1;
    for (int i = 0; i < n; ++i) patterns *= 3;

    BoxQpOracle best;
    std::vector<int> state(static_cast<std::size_t>(n));
    for (int p = 0; p < patterns; ++p) {
        int code = p;
        std::vector<int> free;
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            state[static_cast<std::size_t>(i)] = code % 3;
            code /= 3;
            if (state[static_cast<std::size_t>(i)] == 0) u[i] = lo;
            else if (state[static_cast<std::size_t>(i)] == 1) u[i] = hi;
            else free.push_back(i);
        }
        if (!free.empty()) {
            const int k = static_cast<int>(free.size());
            Eigen::MatrixXd hf(k, k);
            Eigen::VectorXd rhs(k);
            for (int a = 0; a < k; ++a) {
                double r = -g[free[a]];
                for (int j = 0; j < n; ++j)
                    if (state[static_cast<std::size_t>(j)] != 2) r -= h(free[a], j) * u[j];
                rhs[a] = r;
                for (int b = 0; b < k; ++b) hf(a, b) = h(free[a], free[b]);
            }
            const Eigen::VectorXd sol = hf.fullPivLu().solve(rhs);
            bool feasible = true;
            for (int a = 0; a < k; ++a) {
                if (sol[a] < lo - 1e-12 || sol[a] > hi + 1e-12) feasible = false;
                u[free[a]] = std::min(hi, std::max(lo, sol[a]));
            }
            if (!feasible) continue;
        }
        const double f = 0.5 * u.dot(h * u) + g.dot(u);
        if (f < best.objective) {
            best.objective = f;
            best.u = u;
        }
    }
    return best;
}

// Recovers the Hessian and linear term of a quadratic function of T variables from
// function values at 0, e_i and e_i + e_j.
struct Quadratic {
    Eigen::MatrixXd h;
    Eigen::VectorXd g;
    double c = 0.0;
};

inline Quadratic identify_quadratic(const std::function<double(const Eigen::VectorXd&)>& f, int dim) {
    Quadratic q;
    q.h.resize(dim, dim);
    q.g.resize(dim);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim);
    q.c = f(zero);
    std::vector<double> fe(static_cast<std::size_t>(dim));
    std::vector<double> fm(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd e = zero;
        e[i] = 1.0;
        fe[static_cast<std::size_t>(i)] = f(e);
        fm[static_cast<std::size_t>(i)] = f(-e);
        // f(e) = c + g_i + h_ii/2, f(-e) = c - g_i + h_ii/2
        q.h(i, i) = fe[static_cast<std::size_t>(i)] + fm[static_cast<std::size_t>(i)] - 2.0 * q.c;
        q.g[i] = 0.5 * (fe[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            Eigen::VectorXd e = zero;
            e[i] = 1.0;
            e[j] = 1.0;
            // f(e_i + e_j) = c + g_i + g_j + (h_ii + h_jj)/2 + h_ij
            const double hij = f(e) - q.c - q.g[i] - q.g[j] - 0.5 * (q.h(i, i) + q.h(j, j));
            q.h(i, j) = hij;
            q.h(j, i) = hij;
        }
    }
    return q;
}

// argmin over a uniform grid of [lo, hi] with the given spacing.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi, double spacing) {
    const long steps = static_cast<long>(std::llround((hi - lo) / spacing));
    double best_u = lo;
    double best = f(lo);
    for (long k = 1; k <= steps; ++k) {
        const double u = lo + static_cast<double>(k) * spacing;
        const double v = f(u);
        if (v < best) {
            best = v;
            best_u = u;
        }
    }
    return best_u;
}

inline double direct_mitigation_cost(const Eigen::VectorXd& x, double u, double rho, double delta, int age) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += (x[i] - u) * (x[i] - u);
    return s + rho * static_cast<double>(x.size()) * u * u * std::exp(-delta * age);
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& gen, int n, double ridge = 0.1) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = nd(gen);
    return m * m.transpose() + ridge * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace oracle
