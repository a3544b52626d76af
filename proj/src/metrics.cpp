#include "fjrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "fjrec/errors.hpp"

namespace fjrec {

double median(std::vector<double> values) {
    if (values.empty()) throw MetricError("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

namespace {

MeanMedian summarize(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return {sum / static_cast<double>(values.size()), median(values)};
}

}  // namespace

double misinformation_ratio(const Trajectory& traj, const Corpus& corpus) {
    if (traj.content_ids.empty()) throw MetricError("misinformation_ratio: trajectory carries no content ids");
    std::unordered_map<std::string, bool> fabricated;
    fabricated.reserve(corpus.items.size());
    for (const auto& item : corpus.items) fabricated.emplace(item.id, item.is_false());

    std::size_t events = 0;
    std::size_t false_events = 0;
    for (const auto& id : traj.content_ids) {
        if (!id) continue;
        auto it = fabricated.find(*id);
        if (it == fabricated.end()) throw MetricError("misinformation_ratio: unknown content id '" + *id + "'");
        ++events;
        false_events += it->second;
    }
    if (events == 0) throw MetricError("misinformation_ratio: no recommendation events");
    return static_cast<double>(false_events) / static_cast<double>(events);
}

MeanMedian sentiment_shift(const Trajectory& traj) {
    if (traj.states.size() < 2) throw MetricError("sentiment_shift: need at least two states");
    const Eigen::VectorXd diff = (traj.states.back() - traj.states.front()).cwiseAbs();
    return summarize(std::vector<double>(diff.data(), diff.data() + diff.size()));
}

MeanMedian engagement_cost_per_user(const Trajectory& traj) {
    if (traj.controls.empty()) throw MetricError("engagement_cost_per_user: need at least one control");
    const Eigen::Index n = traj.states.front().size();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (std::size_t t = 0; t < traj.controls.size(); ++t)
        acc += (traj.states[t].array() - traj.controls[t]).square().matrix();
    acc /= static_cast<double>(traj.controls.size());
    return summarize(std::vector<double>(acc.data(), acc.data() + acc.size()));
}

RunMetrics compute_metrics(const Trajectory& traj, const Corpus* corpus, double rho) {
    RunMetrics m;
    m.rho = rho;
    if (corpus != nullptr) m.misinformation = misinformation_ratio(traj, *corpus);
    const MeanMedian shift = sentiment_shift(traj);
    const MeanMedian cost = engagement_cost_per_user(traj);
    m.sentiment_shift_mean = shift.mean;
    m.sentiment_shift_median = shift.median;
    m.engagement_cost_mean = cost.mean;
    m.engagement_cost_median = cost.median;
    return m;
}

std::vector<ParetoPoint> pareto_points(const std::vector<RunMetrics>& runs) {
    std::vector<ParetoPoint> pts;
    pts.reserve(runs.size());
    for (const auto& r : runs) pts.push_back({r.rho, r.engagement_cost_median, r.misinformation, true});
    std::stable_sort(pts.begin(), pts.end(), [](const ParetoPoint& a, const ParetoPoint& b) { return a.rho < b.rho; });

    auto mis = [](const ParetoPoint& p, const ParetoPoint& q, auto cmp) {
        if (!p.misinformation || !q.misinformation) return cmp(0.0, 0.0);
        return cmp(*p.misinformation, *q.misinformation);
    };
    for (auto& p : pts) {
        for (const auto& q : pts) {
            const bool no_worse = q.engagement_cost_median <= p.engagement_cost_median &&
                                  mis(q, p, std::less_equal<double>());
            const bool strictly = q.engagement_cost_median < p.engagement_cost_median || mis(q, p, std::less<double>());
            if (no_worse && strictly) {
                p.non_dominated = false;
                break;
            }
        }
    }
    return pts;
}

}  // namespace fjrec
