#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fjrec {

struct QpResult {
    Eigen::VectorXd u;
    double objective = 0.0;          // 0.5 u^T h u + g^T u
    int iterations = 0;
    double kkt_residual = 0.0;       // || u - clamp(u - grad / s) ||_inf, s = max(1, max_k h_kk)
    std::vector<double> history;     // objective after each iteration, starting with the initial point
};

// Minimises 0.5 u^T h u + g^T u subject to lo <= u_k <= hi.
//
// Gradient projection with subspace Newton acceleration: every iteration first moves to
// the exact minimiser of the quadratic along the projected steepest-descent path (the
// generalised Cauchy point), then takes a Newton step on the variables that are strictly
// inside the box, projected back onto the box with backtracking. The objective never
// increases. Converges once the projected-gradient residual of the problem scaled by
// 1 / max(1, max_k h_kk) drops to tol.
//
// Throws NonConvergedError after max_iter iterations, NumericalError when h is not
// symmetric positive definite, DomainError when lo >= hi.
QpResult qp_solve_box(const Eigen::Ref<const Eigen::MatrixXd>& h, const Eigen::Ref<const Eigen::VectorXd>& g,
                      double lo, double hi, double tol, int max_iter,
                      const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

double projected_gradient_residual(const Eigen::Ref<const Eigen::VectorXd>& u,
                                   const Eigen::Ref<const Eigen::VectorXd>& grad, double lo, double hi);

}  // namespace fjrec
