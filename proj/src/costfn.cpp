#include "fjrec/costfn.hpp"

#include <cmath>
#include <string>

#include "fjrec/errors.hpp"

namespace fjrec {

void check(const CostParams& params) {
    if (!(params.rho >= 0.0) || !std::isfinite(params.rho)) throw DomainError("rho must be a finite value >= 0");
    if (!(params.delta_novelty >= 0.0) || !std::isfinite(params.delta_novelty))
        throw DomainError("delta_novelty must be a finite value >= 0");
    if (params.window_z < 1) throw DomainError("window_z must be >= 1");
}

double engagement_cost(const Eigen::Ref<const Eigen::VectorXd>& x, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("engagement_cost: u=" + std::to_string(u) + " outside [0,1]");
    return (x.array() - u).square().sum();
}

double novelty_factor(int t, int t_c, const CostParams& params) {
    const int age = t - t_c;
    if (age < 0) throw DomainError("novelty_factor: content created after t");
    if (age > params.window_z)
        throw OutOfWindowError("novelty_factor: content age " + std::to_string(age) + " exceeds window " +
                               std::to_string(params.window_z));
    return std::exp(-params.delta_novelty * age);
}

double penalty_scale(int age, const CostParams& params) {
    return 1.0 + params.rho * std::exp(-params.delta_novelty * age);
}

double mitigation_cost(const Eigen::Ref<const Eigen::VectorXd>& x, double u, int t, int t_c,
                       const CostParams& params) {
    const double base = engagement_cost(x, u);
    const double novelty = novelty_factor(t, t_c, params);
    return base + params.rho * static_cast<double>(x.size()) * u * u * novelty;
}

}  // namespace fjrec
