#include "fjrec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fjrec/errors.hpp"
#include "fjrec/numfmt.hpp"

namespace fjrec {

SystemMatrices build_matrices(const Network& net) {
    const Eigen::VectorXd keep = Eigen::VectorXd::Ones(net.n()) - net.lambda;
    SystemMatrices m;
    m.a = keep.asDiagonal() * net.w;
    m.b = keep.cwiseProduct(net.w_rec);
    m.anchor = net.lambda.cwiseProduct(net.x0);
    return m;
}

Eigen::VectorXd step(const SystemMatrices& m, const Eigen::Ref<const Eigen::VectorXd>& x, double u) {
    if (x.size() != m.n()) throw DomainError("step: state has wrong dimension");
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("step: u=" + std::to_string(u) + " outside [0,1]");
    if (!(x.minCoeff() >= 0.0 && x.maxCoeff() <= 1.0)) throw DomainError("step: state outside [0,1]^n");
    Eigen::VectorXd next = m.a * x + m.b * u + m.anchor;
    return next.cwiseMax(0.0).cwiseMin(1.0);
}

Eigen::MatrixXd mf_closed_loop_matrix(const SystemMatrices& m, const CostParams& cost, int age) {
    const auto n = static_cast<double>(m.n());
    const double denom = n * penalty_scale(age, cost);
    Eigen::MatrixXd out = m.a;
    out.colwise() += m.b / denom;
    return out;
}

double nonnegative_spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    const Eigen::Index n = m.rows();
    if (n == 0 || m.cols() != n) throw NumericalError("spectral radius: matrix must be square and non-empty");
    if (m.minCoeff() < 0.0) throw NumericalError("spectral radius: matrix has negative entries");

    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd y(n);
    double previous = -1.0;
    for (int it = 0; it < kSpectralMaxIterations; ++it) {
        y.noalias() = m * x;
        y += x;  // shift by the identity

        const Eigen::ArrayXd ratio = y.array() / x.array();
        const double upper = ratio.maxCoeff() - 1.0;
        const double lower = ratio.minCoeff() - 1.0;
        const double scale = std::max(std::abs(upper), std::numeric_limits<double>::min());
        if (upper - lower <= kSpectralTolerance * scale) return std::max(0.5 * (upper + lower), 0.0);

        const double norm = y.lpNorm<Eigen::Infinity>();
        const double estimate = norm / x.lpNorm<Eigen::Infinity>() - 1.0;
        y /= norm;
        // reducible case: accept only once the direction itself has stopped moving
        const double drift = (y - x).lpNorm<Eigen::Infinity>();
        if (previous >= 0.0 && drift <= 1e-3 * kSpectralTolerance &&
            std::abs(estimate - previous) <= kSpectralTolerance * std::max(estimate, 1e-300)) {
            return std::max(estimate, 0.0);
        }
        previous = estimate;
        x = y;
    }
    throw NumericalError("spectral radius: power iteration did not settle within " +
                         std::to_string(kSpectralMaxIterations) + " iterations");
}

double spectral_radius_check(const SystemMatrices& m, const CostParams& cost, int content_age) {
    return nonnegative_spectral_radius(mf_closed_loop_matrix(m, cost, content_age));
}

double h_matrix_min_eigenvalue(int n, double rho, double delta_novelty, int age) {
    if (n < 1) throw DomainError("h_matrix_min_eigenvalue: n must be >= 1");
    const double nd = n;
    const double corner = nd * (1.0 + rho * std::exp(-delta_novelty * age));
    const double trace = 1.0 + corner;
    const double det = corner - nd;  // n * rho * e^{-delta age}
    const double disc = std::sqrt(std::max(trace * trace - 4.0 * det, 0.0));
    const double largest = 0.5 * (trace + disc);
    const double smallest = det / largest;
    return n >= 2 ? std::min(1.0, smallest) : smallest;
}

Eigen::MatrixXd h_matrix(int n, double rho, double delta_novelty, int age) {
    if (n < 1) throw DomainError("h_matrix: n must be >= 1");
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n + 1, n + 1);
    h.block(0, n, n, 1).setConstant(-1.0);
    h.block(n, 0, 1, n).setConstant(-1.0);
    h(n, n) = n * (1.0 + rho * std::exp(-delta_novelty * age));
    return h;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    if (traj.states.size() != traj.controls.size() + 1)
        throw Error("trajectory: states must have exactly one more entry than controls");
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();

    out << "t,u,content_id,x_mean,x_std";
    for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i;
    out << '\n';

    for (std::size_t t = 0; t < traj.states.size(); ++t) {
        const Eigen::VectorXd& x = traj.states[t];
        out << t << ',';
        if (t < traj.controls.size()) out << format_double(traj.controls[t]);
        out << ',';
        if (t < traj.content_ids.size() && traj.content_ids[t]) out << *traj.content_ids[t];
        const double mean = x.mean();
        const double var = (x.array() - mean).square().mean();
        out << ',' << format_double(mean) << ',' << format_double(std::sqrt(var));
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(x[i]);
        out << '\n';
    }
}

}  // namespace fjrec
