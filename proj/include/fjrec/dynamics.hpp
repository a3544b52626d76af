#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fjrec/costfn.hpp"
#include "fjrec/graph.hpp"

namespace fjrec {

// x(t+1) = a x(t) + b u(t) + anchor
struct SystemMatrices {
    Eigen::MatrixXd a;       // (I - Lambda) W
    Eigen::VectorXd b;       // (I - Lambda) w_rec
    Eigen::VectorXd anchor;  // Lambda x(0)

    Eigen::Index n() const noexcept { return b.size(); }
};

struct Trajectory {
    std::vector<Eigen::VectorXd> states;                 // x(0..tau)
    std::vector<double> controls;                        // u(0..tau-1), the applied input
    std::vector<std::optional<std::string>> content_ids; // discrete mode; nullopt = nothing shown
    std::vector<double> targets;                         // continuous controller output (diagnostic)

    int steps() const noexcept { return static_cast<int>(controls.size()); }
};

SystemMatrices build_matrices(const Network& net);

// One step of the dynamics. Inputs must lie in the unit box; the result is clamped to
// [0,1] to absorb rounding (mathematically it already lies there).
Eigen::VectorXd step(const SystemMatrices& m, const Eigen::Ref<const Eigen::VectorXd>& x, double u);

// (I - Lambda) F with F = W + w_rec 1^T / (n (1 + rho e^{-delta age})): the closed-loop
// matrix under the model-free controller.
Eigen::MatrixXd mf_closed_loop_matrix(const SystemMatrices& m, const CostParams& cost, int age);

inline constexpr double kSpectralTolerance = 1e-10;
inline constexpr int kSpectralMaxIterations = 200000;

// Spectral radius of mf_closed_loop_matrix by power iteration on the shifted matrix
// M + I from the all-ones vector. The shift keeps iterates positive and removes
// periodicity, so Collatz-Wielandt bounds bracket the Perron root; iteration stops when
// the bracket (or, for reducible matrices, the norm-ratio estimate) settles to a
// relative 1e-10. Throws NumericalError when it does not settle within the cap.
double spectral_radius_check(const SystemMatrices& m, const CostParams& cost, int content_age);

// Spectral radius of an arbitrary nonnegative square matrix (same method).
double nonnegative_spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& m);

// Smallest eigenvalue of H = [[I_n, -1_n], [-1_n^T, n(1 + rho e^{-delta age})]].
//
// H has eigenvalue 1 on the (n-1)-dimensional complement of span{1_n}; the remaining
// 2x2 block [[1, -sqrt(n)], [-sqrt(n), n s]] has determinant n(s - 1), so its smaller
// eigenvalue is n(s-1) / lambda_max. Exact zero at rho = 0.
double h_matrix_min_eigenvalue(int n, double rho, double delta_novelty, int age);

Eigen::MatrixXd h_matrix(int n, double rho, double delta_novelty, int age);

// CSV with header t,u,content_id,x_mean,x_std,x_0,...,x_{n-1}. Rows t = 0..tau; the
// final row carries x(tau) and leaves u and content_id empty. x_std is the population
// standard deviation.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace fjrec
