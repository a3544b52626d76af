#pragma once

#include <optional>

#include <Eigen/Dense>

#include "fjrec/costfn.hpp"
#include "fjrec/dynamics.hpp"
#include "fjrec/qp.hpp"

namespace fjrec {

struct MpcConfig {
    int horizon = 50;
    double terminal_weight = 1e3;  // weight on ||x_T - x*||^2 (soft terminal constraint)
    double kkt_tolerance = 1e-8;
    int max_iterations = 500;
};

void check(const MpcConfig& cfg);

struct SteadyState {
    Eigen::VectorXd x_star;
    double u_star = 0.0;
};

// || x - (a x + b u + anchor) ||_inf
double steady_state_residual(const SystemMatrices& m, const SteadyState& s);

// Unconstrained minimiser of the mitigation cost in u, which already lies in [0,1]:
// sum(x) / (n (1 + rho e^{-delta (t - t_c)})).
double mf_control(const Eigen::Ref<const Eigen::VectorXd>& x, int t, int t_c, const CostParams& params);

// Fixed point of the model-free closed loop, by direct solve of
// (I - A - B 1^T / (n (1 + rho e^{-delta age}))) x* = Lambda x(0).
// Throws NumericalError when that matrix is (numerically) singular.
SteadyState mf_steady_state(const SystemMatrices& m, const CostParams& params, int age);

// Optimal equilibrium: minimises the mitigation cost over the equilibrium line
// x = v u + y, v = (I-A)^{-1} B, y = (I-A)^{-1} Lambda x(0). The interior stationary
// point is clamped to [0,1] and x* recomputed from it.
SteadyState mb_steady_state(const SystemMatrices& m, const CostParams& params, int age);

struct MpcSolution {
    Eigen::VectorXd controls;  // u_{0..T-1}
    double objective = 0.0;    // horizon cost plus terminal penalty, by rollout
    int iterations = 0;
    double kkt_residual = 0.0;
};

// Condensed receding-horizon problem. States are eliminated through the dynamics, so
// the decision variable is the control sequence alone and the problem is the box QP
//   min 0.5 u^T H u + (P x_now + q)^T u,  0 <= u <= 1.
// H, P and q depend on the system, target, cost and horizon but not on x_now, so one
// instance serves a whole closed-loop run. The novelty factor is frozen at `age` over
// the horizon.
class CondensedMpc {
public:
    CondensedMpc(const SystemMatrices& m, const SteadyState& target, const CostParams& params, int age,
                 const MpcConfig& cfg);

    MpcSolution solve(const Eigen::Ref<const Eigen::VectorXd>& x_now,
                      const std::optional<Eigen::VectorXd>& warm_start = std::nullopt) const;

    // Horizon objective of an arbitrary control sequence by forward simulation.
    double objective(const Eigen::Ref<const Eigen::VectorXd>& x_now,
                     const Eigen::Ref<const Eigen::VectorXd>& controls) const;

    const Eigen::MatrixXd& hessian() const noexcept { return hessian_; }
    Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x_now) const;
    int horizon() const noexcept { return cfg_.horizon; }

private:
    SystemMatrices m_;
    Eigen::VectorXd target_;
    double penalty_;  // rho * n * e^{-delta age}
    MpcConfig cfg_;
    Eigen::MatrixXd hessian_;
    Eigen::MatrixXd grad_state_;  // P
    Eigen::VectorXd grad_const_;  // q
};

MpcSolution solve_mpc(const SystemMatrices& m, const Eigen::Ref<const Eigen::VectorXd>& x_now,
                      const SteadyState& target, int t, int t_c, const CostParams& params, const MpcConfig& cfg);

// First element of the MPC solution.
double mpc_control(const SystemMatrices& m, const Eigen::Ref<const Eigen::VectorXd>& x_now,
                   const SteadyState& target, int t, int t_c, const CostParams& params, const MpcConfig& cfg);

}  // namespace fjrec
