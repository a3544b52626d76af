#include "fjrec/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fjrec/errors.hpp"

namespace fjrec {

namespace {

double objective(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, const Eigen::VectorXd& u) {
    return 0.5 * u.dot(h * u) + g.dot(u);
}

Eigen::VectorXd clamp(Eigen::VectorXd u, double lo, double hi) {
    return u.cwiseMax(lo).cwiseMin(hi);
}

// Exact minimiser of q along u(t) = P(u - t grad), t >= 0. The path is piecewise linear
// with a kink each time a coordinate reaches a bound.
Eigen::VectorXd cauchy_point(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& grad, double lo, double hi) {
    const Eigen::Index n = u.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> hit(static_cast<std::size_t>(n), inf);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (grad[i] > 0.0) hit[i] = (u[i] - lo) / grad[i];
        else if (grad[i] < 0.0) hit[i] = (u[i] - hi) / grad[i];
    }
    std::vector<double> breaks;
    breaks.reserve(hit.size() + 1);
    for (double t : hit)
        if (t > 0.0 && std::isfinite(t)) breaks.push_back(t);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.push_back(inf);

    Eigen::VectorXd x = u;
    double t_prev = 0.0;
    for (double t_next : breaks) {
        Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i)
            if (hit[i] > t_prev) dir[i] = -grad[i];
        if (dir.isZero(0.0)) return x;

        const double slope = (h * x + g).dot(dir);
        if (slope >= 0.0) return x;
        const double curvature = dir.dot(h * dir);
        if (curvature > 0.0) {
            const double t_star = t_prev - slope / curvature;
            if (t_star < t_next) return clamp(x + (t_star - t_prev) * dir, lo, hi);
        } else if (!std::isfinite(t_next)) {
            throw NumericalError("qp_solve_box: objective unbounded along projected gradient");
        }
        x = clamp(x + (t_next - t_prev) * dir, lo, hi);
        t_prev = t_next;
    }
    return x;
}

}  // namespace

double projected_gradient_residual(const Eigen::Ref<const Eigen::VectorXd>& u,
                                   const Eigen::Ref<const Eigen::VectorXd>& grad, double lo, double hi) {
    if (u.size() == 0) return 0.0;
    return (u - (u - grad).cwiseMax(lo).cwiseMin(hi)).lpNorm<Eigen::Infinity>();
}

QpResult qp_solve_box(const Eigen::Ref<const Eigen::MatrixXd>& h_in, const Eigen::Ref<const Eigen::VectorXd>& g_in,
                      double lo, double hi, double tol, int max_iter,
                      const std::optional<Eigen::VectorXd>& warm_start) {
    const Eigen::Index n = g_in.size();
    if (!(lo < hi)) throw DomainError("qp_solve_box: need lo < hi");
    if (h_in.rows() != n || h_in.cols() != n) throw DomainError("qp_solve_box: dimension mismatch");
    if (!(tol > 0.0) || max_iter < 1) throw DomainError("qp_solve_box: tol and max_iter must be positive");

    // Work on the problem divided by its largest curvature so that tol is scale free.
    const double scale = std::max(1.0, h_in.diagonal().cwiseAbs().maxCoeff());
    const Eigen::MatrixXd h = h_in / scale;
    const Eigen::VectorXd g = g_in / scale;
    if (!h.isApprox(h.transpose(), 1e-12)) throw NumericalError("qp_solve_box: h is not symmetric");
    {
        Eigen::LLT<Eigen::MatrixXd> llt(h);
        if (llt.info() != Eigen::Success) throw NumericalError("qp_solve_box: h is not positive definite");
    }

    QpResult res;
    res.u = warm_start && warm_start->size() == n ? clamp(*warm_start, lo, hi)
                                                  : Eigen::VectorXd::Constant(n, 0.5 * (lo + hi));
    double f = objective(h, g, res.u);
    res.history.push_back(f);

    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd grad = h * res.u + g;
        res.kkt_residual = projected_gradient_residual(res.u, grad, lo, hi);
        if (res.kkt_residual <= tol) {
            res.objective = f * scale;
            for (double& v : res.history) v *= scale;
            return res;
        }
        res.iterations = it + 1;

        Eigen::VectorXd cand = cauchy_point(h, g, res.u, grad, lo, hi);
        double f_cand = objective(h, g, cand);

        // Newton step on the variables free at the Cauchy point.
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i)
            if (cand[i] > lo && cand[i] < hi) free.push_back(i);
        if (!free.empty()) {
            const auto k = static_cast<Eigen::Index>(free.size());
            const Eigen::VectorXd grad_c = h * cand + g;
            Eigen::MatrixXd hf(k, k);
            Eigen::VectorXd rhs(k);
            for (Eigen::Index a = 0; a < k; ++a) {
                rhs[a] = -grad_c[free[a]];
                for (Eigen::Index b = 0; b < k; ++b) hf(a, b) = h(free[a], free[b]);
            }
            const Eigen::VectorXd d = hf.llt().solve(rhs);
            Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
            for (Eigen::Index a = 0; a < k; ++a) dir[free[a]] = d[a];

            // Accept on the exact quadratic change grad^T s + 0.5 s^T h s, which does not
            // suffer the cancellation of differencing two objective values.
            double step = 1.0;
            for (int bt = 0; bt < 40; ++bt, step *= 0.5) {
                Eigen::VectorXd trial = clamp(cand + step * dir, lo, hi);
                const Eigen::VectorXd s = trial - cand;
                const double change = grad_c.dot(s) + 0.5 * s.dot(h * s);
                if (change <= 0.0) {
                    cand = std::move(trial);
                    f_cand = objective(h, g, cand);
                    break;
                }
            }
        }

        const Eigen::VectorXd moved = cand - res.u;
        if (grad.dot(moved) + 0.5 * moved.dot(h * moved) > 0.0) {
            cand = res.u;
            f_cand = f;
        }
        res.u = std::move(cand);
        f = f_cand;
        res.history.push_back(f);
    }

    const Eigen::VectorXd grad = h * res.u + g;
    res.kkt_residual = projected_gradient_residual(res.u, grad, lo, hi);
    res.objective = f * scale;
    for (double& v : res.history) v *= scale;
    if (res.kkt_residual <= tol) return res;
    throw NonConvergedError("qp_solve_box: no convergence after " + std::to_string(max_iter) +
                                " iterations (KKT residual " + std::to_string(res.kkt_residual) + ")",
                            res.kkt_residual, max_iter);
}

}  // namespace fjrec
