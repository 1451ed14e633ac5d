#include "gsvm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace gsvm {

Vector decision_scores(const LinearModel& model, const TrialSet& data) {
    if (model.w.size() != data.features.cols()) {
        throw std::invalid_argument("scores: model dimension does not match data");
    }
    Vector scores = data.features * model.w;
    scores.array() += model.b;
    return scores;
}

double auc(const Vector& scores, const Vector& labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("auc: scores and labels differ in length");
    }
    const Eigen::Index n = scores.size();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return scores[i] < scores[j]; });

    double positive_rank_sum = 0.0;
    double n_pos = 0.0;
    double n_neg = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] > 0.0) {
                positive_rank_sum += midrank;
                n_pos += 1.0;
            } else {
                n_neg += 1.0;
            }
        }
        i = j;
    }
    if (n_pos == 0.0 || n_neg == 0.0) {
        throw std::invalid_argument("auc: both classes must be present");
    }
    return (positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

namespace {

EvalReport selection_metrics_impl(const LinearModel& model, const SensorLayout& layout,
                                  const std::vector<int>* relevant) {
    layout.validate();
    if (model.w.size() != layout.dim()) {
        throw std::invalid_argument("selection: model dimension does not match layout");
    }
    EvalReport report;
    for (int sensor = 0; sensor < layout.sensors; ++sensor) {
        const int offset = sensor * layout.features_per_sensor;
        bool nonzero = false;
        for (int j = 0; j < layout.features_per_sensor; ++j) {
            if (model.w[offset + j] != 0.0) {
                nonzero = true;
                break;
            }
        }
        if (nonzero) report.selected_sensors.push_back(sensor);
    }
    report.selection_rate = static_cast<double>(report.selected_sensors.size()) /
                            static_cast<double>(layout.sensors);
    if (relevant != nullptr) {
        std::vector<int> truth = *relevant;
        std::sort(truth.begin(), truth.end());
        double overlap = 0.0;
        for (int sensor : report.selected_sensors) {
            if (std::binary_search(truth.begin(), truth.end(), sensor)) overlap += 1.0;
        }
        const double denom = static_cast<double>(truth.size()) +
                             static_cast<double>(report.selected_sensors.size());
        report.f_measure = denom > 0.0 ? 2.0 * overlap / denom : 1.0;
    }
    return report;
}

}  // namespace

EvalReport selection_metrics(const LinearModel& model, const SensorLayout& layout) {
    return selection_metrics_impl(model, layout, nullptr);
}

EvalReport selection_metrics(const LinearModel& model, const SensorLayout& layout,
                             const std::vector<int>& relevant_sensors) {
    return selection_metrics_impl(model, layout, &relevant_sensors);
}

EvalReport evaluate_model(const LinearModel& model, const TrialSet& test) {
    EvalReport report = selection_metrics(model, test.layout);
    report.auc = auc(decision_scores(model, test), test.labels);
    return report;
}

EvalReport evaluate_model(const LinearModel& model, const TrialSet& test,
                          const std::vector<int>& relevant_sensors) {
    EvalReport report = selection_metrics(model, test.layout, relevant_sensors);
    report.auc = auc(decision_scores(model, test), test.labels);
    return report;
}

double wilcoxon_signed_rank(const std::vector<double>& a,
                            const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("wilcoxon: samples differ in length");
    }
    const std::size_t k = a.size();
    if (k == 0) throw std::invalid_argument("wilcoxon: empty input");
    if (k < 5) {
        std::clog << "warning: wilcoxon on fewer than 5 pairs has a coarse p-value\n";
    }

    std::vector<double> diff(k);
    for (std::size_t i = 0; i < k; ++i) diff[i] = a[i] - b[i];

    // Midranks of |d| over all k entries, zeros included (Pratt).
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return std::abs(diff[static_cast<std::size_t>(i)]) <
               std::abs(diff[static_cast<std::size_t>(j)]);
    });
    std::vector<double> rank(k, 0.0);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        const double magnitude = std::abs(diff[static_cast<std::size_t>(order[i])]);
        while (j < k && std::abs(diff[static_cast<std::size_t>(order[j])]) == magnitude) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t t = i; t < j; ++t) {
            rank[static_cast<std::size_t>(order[t])] = midrank;
        }
        i = j;
    }

    // Zeros drop out of the statistic.
    std::vector<double> nonzero_ranks;
    double w_plus = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        if (diff[t] == 0.0) continue;
        nonzero_ranks.push_back(rank[t]);
        if (diff[t] > 0.0) w_plus += rank[t];
    }
    if (nonzero_ranks.empty()) return 1.0;

    const std::size_t m = nonzero_ranks.size();
    if (k <= 12) {
        // Exact two-sided tail by enumerating sign assignments, in doubled
        // integer rank units so all comparisons are exact.
        std::vector<std::int64_t> rank2(m);
        std::int64_t total2 = 0;
        for (std::size_t t = 0; t < m; ++t) {
            rank2[t] = std::llround(2.0 * nonzero_ranks[t]);
            total2 += rank2[t];
        }
        std::int64_t observed2 = 0;
        {
            std::size_t t = 0;
            for (std::size_t idx = 0; idx < k; ++idx) {
                if (diff[idx] == 0.0) continue;
                if (diff[idx] > 0.0) observed2 += rank2[t];
                ++t;
            }
        }
        const std::int64_t observed_dev = std::llabs(2 * observed2 - total2);
        std::uint64_t count = 0;
        const std::uint64_t assignments = std::uint64_t{1} << m;
        for (std::uint64_t mask = 0; mask < assignments; ++mask) {
            std::int64_t w2 = 0;
            for (std::size_t t = 0; t < m; ++t) {
                if (mask & (std::uint64_t{1} << t)) w2 += rank2[t];
            }
            if (std::llabs(2 * w2 - total2) >= observed_dev) ++count;
        }
        return static_cast<double>(count) / static_cast<double>(assignments);
    }

    double mean = 0.0;
    double var = 0.0;
    for (double r : nonzero_ranks) {
        mean += 0.5 * r;
        var += 0.25 * r * r;
    }
    if (var == 0.0) return 1.0;
    const double z = (std::abs(w_plus - mean) - 0.5) / std::sqrt(var);
    const double p = std::erfc(z / std::sqrt(2.0));
    return std::min(1.0, std::max(0.0, p));
}

std::vector<int> selection_frequency(const std::vector<LinearModel>& models,
                                     const SensorLayout& layout) {
    layout.validate();
    std::vector<int> counts(static_cast<std::size_t>(layout.sensors), 0);
    for (const LinearModel& model : models) {
        const EvalReport report = selection_metrics(model, layout);
        for (int sensor : report.selected_sensors) {
            counts[static_cast<std::size_t>(sensor)] += 1;
        }
    }
    return counts;
}

}  // namespace gsvm
