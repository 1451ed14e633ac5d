#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "gsvm/solver.hpp"
#include "gsvm/trial_set.hpp"

namespace gsvm {

struct EvalReport {
    double auc = std::numeric_limits<double>::quiet_NaN();
    double selection_rate = 0.0;
    std::vector<int> selected_sensors;
    std::optional<double> f_measure;
};

/// Decision scores X w + b.
Vector decision_scores(const LinearModel& model, const TrialSet& data);

/// Mann-Whitney AUC: fraction of (positive, negative) pairs with the
/// positive scored higher, ties counted half. Throws when a class is absent.
double auc(const Vector& scores, const Vector& labels);

/// Sensors whose weight block is not exactly zero, their fraction, and the
/// overlap F-measure 2|C ∩ C*| / (|C*| + |C|) when the truly relevant set
/// is known.
EvalReport selection_metrics(const LinearModel& model, const SensorLayout& layout);
EvalReport selection_metrics(const LinearModel& model, const SensorLayout& layout,
                             const std::vector<int>& relevant_sensors);

/// AUC plus selection metrics against a test set.
EvalReport evaluate_model(const LinearModel& model, const TrialSet& test);
EvalReport evaluate_model(const LinearModel& model, const TrialSet& test,
                          const std::vector<int>& relevant_sensors);

/// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
/// differences stay in the ranking but leave the statistic (Pratt); tied
/// magnitudes get midranks. Exact by sign enumeration for inputs of length
/// <= 12, otherwise a normal approximation with the midrank variance and a
/// continuity correction.
double wilcoxon_signed_rank(const std::vector<double>& a,
                            const std::vector<double>& b);

/// Count per sensor of models in which it was selected.
std::vector<int> selection_frequency(const std::vector<LinearModel>& models,
                                     const SensorLayout& layout);

}  // namespace gsvm
