#pragma once

#include <Eigen/Dense>

namespace fjrec {

struct CostParams {
    double rho = 0.0;            // penalty strength
    double delta_novelty = 0.0;  // novelty decay rate per time step
    int window_z = 5;            // content stays eligible for window_z steps after creation
};

// Throws DomainError unless rho >= 0, delta_novelty >= 0 and window_z >= 1.
void check(const CostParams& params);

// Sum_i (x_i - u)^2.
double engagement_cost(const Eigen::Ref<const Eigen::VectorXd>& x, double u);

// exp(-delta * (t - t_c)). Throws OutOfWindowError when the content age exceeds
// window_z and DomainError when t < t_c.
double novelty_factor(int t, int t_c, const CostParams& params);

// 1 + rho * novelty: the factor multiplying n*u^2 in the mitigation cost's Hessian.
double penalty_scale(int age, const CostParams& params);

// engagement_cost(x, u) + rho * n * u^2 * novelty_factor(t, t_c).
double mitigation_cost(const Eigen::Ref<const Eigen::VectorXd>& x, double u, int t, int t_c,
                       const CostParams& params);

}  // namespace fjrec
