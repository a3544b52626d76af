#pragma once

#include <optional>
#include <vector>

#include "fjrec/content.hpp"
#include "fjrec/dynamics.hpp"

namespace fjrec {

struct MeanMedian {
    double mean = 0.0;
    double median = 0.0;
};

struct RunMetrics {
    std::optional<double> misinformation;  // discrete mode only
    double sentiment_shift_mean = 0.0;
    double sentiment_shift_median = 0.0;
    double engagement_cost_mean = 0.0;
    double engagement_cost_median = 0.0;
    double rho = 0.0;
};

// Share of recommendation events whose item is labelled false. Steps that showed
// nothing are excluded. Throws MetricError on a trajectory without content ids, with no
// recommendation events, or referring to an id the corpus does not contain.
double misinformation_ratio(const Trajectory& traj, const Corpus& corpus);

// Mean and median over users of |x_i(tau) - x_i(0)|.
MeanMedian sentiment_shift(const Trajectory& traj);

// Mean and median over users of (1/tau) sum_t (x_i(t) - u(t))^2, t = 0..tau-1.
MeanMedian engagement_cost_per_user(const Trajectory& traj);

// Median with the even-count convention (midpoint of the two central values).
double median(std::vector<double> values);

RunMetrics compute_metrics(const Trajectory& traj, const Corpus* corpus, double rho);

struct ParetoPoint {
    double rho = 0.0;
    double engagement_cost_median = 0.0;
    std::optional<double> misinformation;
    bool non_dominated = true;
};

// Points ordered by rho. A point is dominated when another point is no worse on both
// median engagement cost and misinformation and strictly better on at least one; equal
// points never dominate each other. A missing misinformation value compares as equal.
std::vector<ParetoPoint> pareto_points(const std::vector<RunMetrics>& runs);

}  // namespace fjrec
