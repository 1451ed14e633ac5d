#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsvm/solver.hpp"
#include "gsvm/synthetic.hpp"
#include "gsvm/trial_set.hpp"

namespace gsvm {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

SensorLayout load_layout(const std::string& path);
void save_layout(const SensorLayout& layout, const std::string& path);

/// Trials CSV: header f0,...,f{d-1},label; one trial per row.
TrialSet load_trials_csv(const std::string& path, const SensorLayout& layout);
void save_trials_csv(const TrialSet& data, const std::string& path);

/// Convenience: layout JSON plus trials CSV.
TrialSet load_trialset(const std::string& trials_path, const std::string& layout_path);

void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

void save_ground_truth(const GroundTruth& truth, const std::string& path);
GroundTruth load_ground_truth(const std::string& path);

struct EvalRow {
    std::string method;
    long long seed = 0;
    double auc = 0.0;
    double selection_rate = 0.0;
    std::optional<double> f_measure;
};

/// Eval CSV: method,seed,auc,selection_rate,f_measure (blank when unknown).
void append_eval_rows(const std::string& path, const std::vector<EvalRow>& rows);
std::vector<EvalRow> load_eval_csv(const std::string& path);

}  // namespace gsvm
