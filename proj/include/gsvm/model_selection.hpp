#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gsvm/mtl.hpp"
#include "gsvm/solver.hpp"

namespace gsvm {

std::vector<double> log_spaced(double lo, double hi, int count);

struct GridSpec {
    std::vector<double> lambda_grid = log_spaced(1e-3, 1e1, 13);
    std::vector<double> q_grid = {1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
    int folds = 3;
    std::uint64_t seed = 0;

    void validate() const;
};

struct FoldSplit {
    std::vector<int> train;
    std::vector<int> valid;
};

/// Seeded shuffle then contiguous chunks; fold sizes differ by at most one.
std::vector<FoldSplit> kfold_split(int n, int folds, std::uint64_t seed);

/// Per-class shuffle and chunking so every fold sees both classes whenever
/// each class has at least `folds` members.
std::vector<FoldSplit> stratified_kfold(const Vector& labels, int folds,
                                        std::uint64_t seed);

struct GridRow {
    double lambda = 0.0;
    std::optional<double> q;
    std::optional<double> lambda_s;
    int fold = 0;
    double auc = 0.0;
};

struct ChosenPoint {
    double lambda = 0.0;
    std::optional<double> q;
    std::optional<double> lambda_s;
    double mean_auc = 0.0;
};

struct CvReport {
    std::vector<GridRow> rows;
    ChosenPoint chosen;
    LinearModel refit;
    double max_trace_increase = 0.0;
};

/// Nested cross-validation over the lambda grid (and the q grid when
/// tune_q is set, valid for the group-lq family). Ties in mean validation
/// AUC break toward larger lambda, then smaller q. The adaptive family
/// runs its full two-stage fit inside every fold. Fits within a fold are
/// warm-started along descending lambda.
CvReport cv_select(const TrialSet& train, const RegularizerSpec& prototype,
                   const GridSpec& grid, const GroupPartition& groups,
                   const SolveSettings& settings, bool tune_q = false,
                   int jobs = 1);

struct MtlCvReport {
    std::vector<GridRow> rows;  // lambda column holds lambda_r
    ChosenPoint chosen;
    MtlModel refit;
    double max_trace_increase = 0.0;
};

/// 2-D grid search for the joint multi-task fit; fold k pools every task's
/// fold-k trials and the score is the mean validation AUC over tasks.
MtlCvReport cv_select_mtl(const TaskCollection& tasks,
                          const std::vector<double>& lambda_r_grid,
                          const std::vector<double>& lambda_s_grid, int folds,
                          std::uint64_t seed, const SolveSettings& settings,
                          int jobs = 1);

}  // namespace gsvm
