#pragma once

#include "gsvm/solver.hpp"

namespace gsvm {

/// Joint multi-task hyperparameters: lambda_r drives stacked group
/// sparsity, lambda_s shrinks task classifiers toward their average.
struct MtlSpec {
    double lambda_r = 0.0;
    double lambda_s = 0.0;

    void validate() const;
};

struct MtlModel {
    std::vector<LinearModel> tasks;
    GroupPartition stacked_groups;
    std::vector<int> selected_groups;  // computed on stacked blocks
    FitDiagnostics diagnostics;

    int task_count() const { return static_cast<int>(tasks.size()); }

    /// Stacked weight matrix, one column per task.
    Matrix stacked() const;
};

/// FBS on task-stacked coordinates: per-task squared hinge losses plus the
/// similarity term form the smooth part; the stacked-group l2 mixed norm is
/// handled by its prox. Per-task biases take plain gradient steps.
MtlModel fit_mtl(const TaskCollection& tasks, const MtlSpec& spec,
                 const SolveSettings& settings, const Matrix& w0 = Matrix(),
                 const Vector& b0 = Vector());

/// Single model fit on the concatenation of every task's trials.
LinearModel fit_pooled(const TaskCollection& tasks, const RegularizerSpec& spec,
                       const SolveSettings& settings);

/// Full multi-task objective at stacked weights (one column per task).
double mtl_objective(const TaskCollection& tasks, const MtlSpec& spec,
                     const Matrix& task_weights, const Vector& biases);

}  // namespace gsvm
