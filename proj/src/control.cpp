#include "fjrec/control.hpp"

#include <algorithm>
#include <cmath>

#include "fjrec/errors.hpp"

namespace fjrec {

namespace {

constexpr double kSingularRcond = 1e-13;

Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, const char* what) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    if (!(lu.rcond() > kSingularRcond))
        throw NumericalError(std::string(what) + ": system matrix is singular (non-convergent configuration)");
    return lu.solve(rhs);
}

void check_age(int age, const CostParams& params) {
    if (age < 0 || age > params.window_z)
        throw OutOfWindowError("content age " + std::to_string(age) + " outside [0, " +
                               std::to_string(params.window_z) + "]");
}

}  // namespace

void check(const MpcConfig& cfg) {
    if (cfg.horizon < 1) throw DomainError("mpc: horizon must be >= 1");
    if (!(cfg.terminal_weight >= 0.0)) throw DomainError("mpc: terminal_weight must be >= 0");
    if (!(cfg.kkt_tolerance > 0.0)) throw DomainError("mpc: kkt_tolerance must be > 0");
    if (cfg.max_iterations < 1) throw DomainError("mpc: max_iterations must be >= 1");
}

double steady_state_residual(const SystemMatrices& m, const SteadyState& s) {
    return (s.x_star - (m.a * s.x_star + m.b * s.u_star + m.anchor)).lpNorm<Eigen::Infinity>();
}

double mf_control(const Eigen::Ref<const Eigen::VectorXd>& x, int t, int t_c, const CostParams& params) {
    if (x.size() == 0) throw DomainError("mf_control: empty state");
    const double novelty = novelty_factor(t, t_c, params);
    const double u = x.sum() / (static_cast<double>(x.size()) * (1.0 + params.rho * novelty));
    return std::clamp(u, 0.0, 1.0);
}

SteadyState mf_steady_state(const SystemMatrices& m, const CostParams& params, int age) {
    check(params);
    check_age(age, params);
    const Eigen::Index n = m.n();
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - mf_closed_loop_matrix(m, params, age);
    SteadyState s;
    s.x_star = solve_checked(lhs, m.anchor, "mf_steady_state");
    s.u_star = std::clamp(s.x_star.sum() / (static_cast<double>(n) * penalty_scale(age, params)), 0.0, 1.0);
    return s;
}

SteadyState mb_steady_state(const SystemMatrices& m, const CostParams& params, int age) {
    check(params);
    check_age(age, params);
    const Eigen::Index n = m.n();
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - m.a;
    Eigen::MatrixXd rhs(n, 2);
    rhs.col(0) = m.b;
    rhs.col(1) = m.anchor;
    const Eigen::MatrixXd sol = solve_checked(lhs, rhs, "mb_steady_state");
    const Eigen::VectorXd v = sol.col(0);
    const Eigen::VectorXd y = sol.col(1);

    // d/du [ ||(v - 1) u + y||^2 + rho n e^{-delta age} u^2 ] = 0
    const double nd = static_cast<double>(n);
    const double numer = y.sum() - v.dot(y);
    const double denom = nd - 2.0 * v.sum() + v.dot(v) + params.rho * nd * std::exp(-params.delta_novelty * age);
    if (!(denom > 1e-14 * nd))
        throw NumericalError("mb_steady_state: cost is flat along the equilibrium line; optimum not unique");

    SteadyState s;
    s.u_star = std::clamp(numer / denom, 0.0, 1.0);
    s.x_star = v * s.u_star + y;
    return s;
}

CondensedMpc::CondensedMpc(const SystemMatrices& m, const SteadyState& target, const CostParams& params, int age,
                           const MpcConfig& cfg)
    : m_(m), target_(target.x_star), cfg_(cfg) {
    check(params);
    check(cfg);
    check_age(age, params);
    const Eigen::Index n = m.n();
    const Eigen::Index horizon = cfg.horizon;
    if (target_.size() != n) throw DomainError("mpc: target dimension mismatch");
    penalty_ = params.rho * static_cast<double>(n) * std::exp(-params.delta_novelty * age);

    // x_k = phi_k x_now + d_k + g_k u, with phi_0 = I, d_0 = 0, g_0 = 0.
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, horizon);

    hessian_ = Eigen::MatrixXd::Zero(horizon, horizon);
    grad_state_ = Eigen::MatrixXd::Zero(horizon, n);
    grad_const_ = Eigen::VectorXd::Zero(horizon);

    Eigen::MatrixXd resid(n, horizon);
    for (Eigen::Index k = 0; k < horizon; ++k) {
        // stage residual x_k - u_k 1
        resid = g;
        resid.col(k).array() -= 1.0;
        hessian_.noalias() += resid.transpose() * resid;
        grad_state_.noalias() += resid.transpose() * phi;
        grad_const_.noalias() += resid.transpose() * d;
        hessian_(k, k) += penalty_;

        phi = m.a * phi;
        d = m.a * d + m.anchor;
        g = m.a * g;
        g.col(k) += m.b;
    }
    const double mu = cfg.terminal_weight;
    hessian_.noalias() += mu * g.transpose() * g;
    grad_state_.noalias() += mu * g.transpose() * phi;
    grad_const_.noalias() += mu * g.transpose() * (d - target_);

    hessian_ *= 2.0;
    hessian_ = 0.5 * (hessian_ + hessian_.transpose()).eval();
    grad_state_ *= 2.0;
    grad_const_ *= 2.0;
}

Eigen::VectorXd CondensedMpc::gradient(const Eigen::Ref<const Eigen::VectorXd>& x_now) const {
    return grad_state_ * x_now + grad_const_;
}

double CondensedMpc::objective(const Eigen::Ref<const Eigen::VectorXd>& x_now,
                               const Eigen::Ref<const Eigen::VectorXd>& controls) const {
    Eigen::VectorXd x = x_now;
    double total = 0.0;
    for (Eigen::Index k = 0; k < controls.size(); ++k) {
        const double u = controls[k];
        total += (x.array() - u).square().sum() + penalty_ * u * u;
        x = m_.a * x + m_.b * u + m_.anchor;
    }
    return total + cfg_.terminal_weight * (x - target_).squaredNorm();
}

MpcSolution CondensedMpc::solve(const Eigen::Ref<const Eigen::VectorXd>& x_now,
                                const std::optional<Eigen::VectorXd>& warm_start) const {
    if (x_now.size() != m_.n()) throw DomainError("mpc: state dimension mismatch");
    if (!(x_now.minCoeff() >= 0.0 && x_now.maxCoeff() <= 1.0)) throw DomainError("mpc: state outside [0,1]^n");
    const QpResult qp = qp_solve_box(hessian_, gradient(x_now), 0.0, 1.0, cfg_.kkt_tolerance, cfg_.max_iterations,
                                     warm_start);
    MpcSolution sol;
    sol.controls = qp.u.cwiseMax(0.0).cwiseMin(1.0);
    sol.objective = objective(x_now, sol.controls);
    sol.iterations = qp.iterations;
    sol.kkt_residual = qp.kkt_residual;
    return sol;
}

MpcSolution solve_mpc(const SystemMatrices& m, const Eigen::Ref<const Eigen::VectorXd>& x_now,
                      const SteadyState& target, int t, int t_c, const CostParams& params, const MpcConfig& cfg) {
    return CondensedMpc(m, target, params, t - t_c, cfg).solve(x_now);
}

double mpc_control(const SystemMatrices& m, const Eigen::Ref<const Eigen::VectorXd>& x_now,
                   const SteadyState& target, int t, int t_c, const CostParams& params, const MpcConfig& cfg) {
    return solve_mpc(m, x_now, target, t, t_c, params, cfg).controls[0];
}

}  // namespace fjrec
