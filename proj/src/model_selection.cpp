#include "gsvm/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gsvm/evaluation.hpp"
#include "gsvm/parallel.hpp"
#include "gsvm/rng.hpp"

namespace gsvm {

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > 0.0) || count < 1) {
        throw std::invalid_argument("log grid: bounds must be positive, count >= 1");
    }
    std::vector<double> grid(static_cast<std::size_t>(count));
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    const double log_lo = std::log(lo);
    const double log_hi = std::log(hi);
    for (int i = 0; i < count; ++i) {
        grid[static_cast<std::size_t>(i)] =
            std::exp(log_lo + (log_hi - log_lo) * i / (count - 1));
    }
    return grid;
}

void GridSpec::validate() const {
    if (lambda_grid.empty()) {
        throw std::invalid_argument("grid: lambda grid must be non-empty");
    }
    for (double v : lambda_grid) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("grid: lambda values must be positive and finite");
        }
    }
    for (double q : q_grid) {
        if (!(q >= 1.0 && q <= 2.0)) {
            throw std::invalid_argument("grid: q values must lie in [1, 2]");
        }
    }
    if (folds < 2) {
        throw std::invalid_argument("grid: folds must be >= 2");
    }
}

std::vector<FoldSplit> kfold_split(int n, int folds, std::uint64_t seed) {
    if (folds < 1) throw std::invalid_argument("kfold: folds must be >= 1");
    if (folds > n) throw std::invalid_argument("kfold: folds exceed sample count");
    rng::Engine eng(seed);
    const std::vector<int> perm = rng::permutation(n, eng);

    std::vector<FoldSplit> splits(static_cast<std::size_t>(folds));
    const int base = n / folds;
    const int extra = n % folds;
    int cursor = 0;
    for (int f = 0; f < folds; ++f) {
        const int size = base + (f < extra ? 1 : 0);
        FoldSplit& split = splits[static_cast<std::size_t>(f)];
        split.valid.assign(perm.begin() + cursor, perm.begin() + cursor + size);
        split.train.reserve(static_cast<std::size_t>(n - size));
        split.train.insert(split.train.end(), perm.begin(), perm.begin() + cursor);
        split.train.insert(split.train.end(), perm.begin() + cursor + size, perm.end());
        std::sort(split.valid.begin(), split.valid.end());
        std::sort(split.train.begin(), split.train.end());
        cursor += size;
    }
    return splits;
}

std::vector<FoldSplit> stratified_kfold(const Vector& labels, int folds,
                                        std::uint64_t seed) {
    const int n = static_cast<int>(labels.size());
    if (folds < 1) throw std::invalid_argument("kfold: folds must be >= 1");
    if (folds > n) throw std::invalid_argument("kfold: folds exceed sample count");

    std::vector<int> positives;
    std::vector<int> negatives;
    for (int i = 0; i < n; ++i) {
        (labels[i] > 0.0 ? positives : negatives).push_back(i);
    }
    rng::Engine eng(seed);
    rng::shuffle(positives, eng);
    rng::shuffle(negatives, eng);

    std::vector<FoldSplit> splits(static_cast<std::size_t>(folds));
    auto deal = [&](const std::vector<int>& pool) {
        const int count = static_cast<int>(pool.size());
        const int base = count / folds;
        const int extra = count % folds;
        int cursor = 0;
        for (int f = 0; f < folds; ++f) {
            const int size = base + (f < extra ? 1 : 0);
            auto& valid = splits[static_cast<std::size_t>(f)].valid;
            valid.insert(valid.end(), pool.begin() + cursor, pool.begin() + cursor + size);
            cursor += size;
        }
    };
    deal(positives);
    deal(negatives);

    std::vector<char> fold_of(static_cast<std::size_t>(n), 0);
    for (int f = 0; f < folds; ++f) {
        for (int idx : splits[static_cast<std::size_t>(f)].valid) {
            fold_of[static_cast<std::size_t>(idx)] = static_cast<char>(f);
        }
        std::sort(splits[static_cast<std::size_t>(f)].valid.begin(),
                  splits[static_cast<std::size_t>(f)].valid.end());
    }
    for (int f = 0; f < folds; ++f) {
        auto& train = splits[static_cast<std::size_t>(f)].train;
        train.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (fold_of[static_cast<std::size_t>(i)] != f) train.push_back(i);
        }
    }
    return splits;
}

namespace {

bool has_both_classes(const Vector& labels, const std::vector<int>& idx) {
    bool pos = false;
    bool neg = false;
    for (int i : idx) {
        if (labels[i] > 0.0) pos = true;
        else neg = true;
    }
    return pos && neg;
}

std::vector<FoldSplit> make_cv_splits(const Vector& labels, int folds,
                                      std::uint64_t seed) {
    for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
        std::vector<FoldSplit> splits = stratified_kfold(labels, folds, seed + attempt);
        bool ok = true;
        for (const FoldSplit& split : splits) {
            if (!has_both_classes(labels, split.train) ||
                !has_both_classes(labels, split.valid)) {
                ok = false;
                break;
            }
        }
        if (ok) return splits;
    }
    throw std::runtime_error(
        "cross-validation: could not give every fold both classes "
        "(too few examples of one class)");
}

std::vector<int> descending_order(const std::vector<double>& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return values[i] > values[j]; });
    return order;
}

}  // namespace

CvReport cv_select(const TrialSet& train, const RegularizerSpec& prototype,
                   const GridSpec& grid, const GroupPartition& groups,
                   const SolveSettings& settings, bool tune_q, int jobs) {
    train.validate();
    grid.validate();
    if (tune_q && prototype.kind != RegKind::GroupLq) {
        throw std::invalid_argument("cv: q tuning applies to the group-lq family only");
    }
    const std::vector<double> qs =
        tune_q ? grid.q_grid : std::vector<double>{prototype.q};
    if (qs.empty()) throw std::invalid_argument("cv: q grid must be non-empty");

    const std::vector<FoldSplit> splits =
        make_cv_splits(train.labels, grid.folds, grid.seed);

    std::vector<TrialSet> fold_train;
    std::vector<TrialSet> fold_valid;
    fold_train.reserve(splits.size());
    fold_valid.reserve(splits.size());
    for (const FoldSplit& split : splits) {
        fold_train.push_back(train.subset(split.train));
        fold_valid.push_back(train.subset(split.valid));
    }

    const std::vector<int> lambda_order = descending_order(grid.lambda_grid);
    const int n_lambda = static_cast<int>(grid.lambda_grid.size());
    const int n_q = static_cast<int>(qs.size());
    const int n_chains = grid.folds * n_q;

    // auc[(q_idx * n_lambda + lambda_idx) * folds + fold]
    std::vector<double> auc_table(
        static_cast<std::size_t>(n_q * n_lambda * grid.folds), 0.0);
    std::vector<double> chain_trace(static_cast<std::size_t>(n_chains), 0.0);

    parallel_for(n_chains, jobs, [&](int chain) {
        const int fold = chain % grid.folds;
        const int q_idx = chain / grid.folds;
        const double q = qs[static_cast<std::size_t>(q_idx)];
        const TrialSet& ftrain = fold_train[static_cast<std::size_t>(fold)];
        const TrialSet& fvalid = fold_valid[static_cast<std::size_t>(fold)];

        Vector warm;
        double warm_b = 0.0;
        double worst_increase = 0.0;
        for (int k = 0; k < n_lambda; ++k) {
            const int lambda_idx = lambda_order[static_cast<std::size_t>(k)];
            const double lambda = grid.lambda_grid[static_cast<std::size_t>(lambda_idx)];
            LinearModel model;
            if (prototype.kind == RegKind::AdaptiveGroupLq) {
                LinearModel stage_one;
                model = fit_adaptive(ftrain, q, lambda, groups, settings, warm, warm_b,
                                     &stage_one);
                warm = stage_one.w;
                warm_b = stage_one.b;
                worst_increase =
                    std::max(worst_increase, stage_one.diagnostics.max_trace_increase);
            } else {
                RegularizerSpec spec = prototype;
                spec.q = q;
                spec.lambda = lambda;
                model = fbs_solve(ftrain, spec, groups, settings, warm, warm_b);
                warm = model.w;
                warm_b = model.b;
            }
            worst_increase =
                std::max(worst_increase, model.diagnostics.max_trace_increase);
            const double score = auc(decision_scores(model, fvalid), fvalid.labels);
            auc_table[static_cast<std::size_t>(
                (q_idx * n_lambda + lambda_idx) * grid.folds + fold)] = score;
        }
        chain_trace[static_cast<std::size_t>(chain)] = worst_increase;
    });

    CvReport report;
    for (double inc : chain_trace) {
        report.max_trace_increase = std::max(report.max_trace_increase, inc);
    }

    const bool emit_q = prototype.grouped();
    bool have_best = false;
    double best_mean = 0.0;
    double best_lambda = 0.0;
    double best_q = 0.0;
    for (int q_idx = 0; q_idx < n_q; ++q_idx) {
        for (int lambda_idx = 0; lambda_idx < n_lambda; ++lambda_idx) {
            double mean = 0.0;
            for (int fold = 0; fold < grid.folds; ++fold) {
                GridRow row;
                row.lambda = grid.lambda_grid[static_cast<std::size_t>(lambda_idx)];
                if (emit_q) row.q = qs[static_cast<std::size_t>(q_idx)];
                row.fold = fold;
                row.auc = auc_table[static_cast<std::size_t>(
                    (q_idx * n_lambda + lambda_idx) * grid.folds + fold)];
                report.rows.push_back(row);
                mean += row.auc;
            }
            mean /= static_cast<double>(grid.folds);
            const double lambda = grid.lambda_grid[static_cast<std::size_t>(lambda_idx)];
            const double q = qs[static_cast<std::size_t>(q_idx)];
            const bool better =
                !have_best || mean > best_mean ||
                (mean == best_mean &&
                 (lambda > best_lambda || (lambda == best_lambda && q < best_q)));
            if (better) {
                have_best = true;
                best_mean = mean;
                best_lambda = lambda;
                best_q = q;
            }
        }
    }

    report.chosen.lambda = best_lambda;
    if (emit_q) report.chosen.q = best_q;
    report.chosen.mean_auc = best_mean;

    if (prototype.kind == RegKind::AdaptiveGroupLq) {
        report.refit = fit_adaptive(train, best_q, best_lambda, groups, settings);
    } else {
        RegularizerSpec spec = prototype;
        spec.q = best_q;
        spec.lambda = best_lambda;
        report.refit = fbs_solve(train, spec, groups, settings);
    }
    return report;
}

MtlCvReport cv_select_mtl(const TaskCollection& tasks,
                          const std::vector<double>& lambda_r_grid,
                          const std::vector<double>& lambda_s_grid, int folds,
                          std::uint64_t seed, const SolveSettings& settings,
                          int jobs) {
    tasks.validate();
    if (lambda_r_grid.empty() || lambda_s_grid.empty()) {
        throw std::invalid_argument("cv: grids must be non-empty");
    }
    for (double v : lambda_r_grid) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("cv: lambda_r values must be finite and >= 0");
        }
    }
    for (double v : lambda_s_grid) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("cv: lambda_s values must be finite and >= 0");
        }
    }
    if (folds < 2) throw std::invalid_argument("cv: folds must be >= 2");

    const int m = tasks.task_count();
    std::vector<std::vector<FoldSplit>> task_splits(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) {
        task_splits[static_cast<std::size_t>(t)] = make_cv_splits(
            tasks.tasks[static_cast<std::size_t>(t)].labels, folds,
            seed + static_cast<std::uint64_t>(t));
    }

    std::vector<TaskCollection> fold_train(static_cast<std::size_t>(folds));
    std::vector<std::vector<TrialSet>> fold_valid(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) {
        for (int t = 0; t < m; ++t) {
            const FoldSplit& split = task_splits[static_cast<std::size_t>(t)]
                                                [static_cast<std::size_t>(f)];
            const TrialSet& task = tasks.tasks[static_cast<std::size_t>(t)];
            fold_train[static_cast<std::size_t>(f)].tasks.push_back(task.subset(split.train));
            fold_valid[static_cast<std::size_t>(f)].push_back(task.subset(split.valid));
        }
    }

    const std::vector<int> r_order = descending_order(lambda_r_grid);
    const int n_r = static_cast<int>(lambda_r_grid.size());
    const int n_s = static_cast<int>(lambda_s_grid.size());
    const int n_chains = folds * n_s;

    std::vector<double> auc_table(static_cast<std::size_t>(n_r * n_s * folds), 0.0);
    std::vector<double> chain_trace(static_cast<std::size_t>(n_chains), 0.0);

    parallel_for(n_chains, jobs, [&](int chain) {
        const int fold = chain % folds;
        const int s_idx = chain / folds;
        const double lambda_s = lambda_s_grid[static_cast<std::size_t>(s_idx)];
        const TaskCollection& ftrain = fold_train[static_cast<std::size_t>(fold)];
        const std::vector<TrialSet>& fvalid = fold_valid[static_cast<std::size_t>(fold)];

        Matrix warm;
        Vector warm_b;
        double worst_increase = 0.0;
        for (int k = 0; k < n_r; ++k) {
            const int r_idx = r_order[static_cast<std::size_t>(k)];
            const MtlSpec spec{lambda_r_grid[static_cast<std::size_t>(r_idx)], lambda_s};
            const MtlModel model = fit_mtl(ftrain, spec, settings, warm, warm_b);
            warm = model.stacked();
            warm_b.resize(m);
            for (int t = 0; t < m; ++t) {
                warm_b[t] = model.tasks[static_cast<std::size_t>(t)].b;
            }
            worst_increase =
                std::max(worst_increase, model.diagnostics.max_trace_increase);

            double mean_task_auc = 0.0;
            for (int t = 0; t < m; ++t) {
                const TrialSet& valid = fvalid[static_cast<std::size_t>(t)];
                mean_task_auc +=
                    auc(decision_scores(model.tasks[static_cast<std::size_t>(t)], valid),
                        valid.labels);
            }
            mean_task_auc /= static_cast<double>(m);
            auc_table[static_cast<std::size_t>((r_idx * n_s + s_idx) * folds + fold)] =
                mean_task_auc;
        }
        chain_trace[static_cast<std::size_t>(chain)] = worst_increase;
    });

    MtlCvReport report;
    for (double inc : chain_trace) {
        report.max_trace_increase = std::max(report.max_trace_increase, inc);
    }

    bool have_best = false;
    double best_mean = 0.0;
    double best_r = 0.0;
    double best_s = 0.0;
    for (int r_idx = 0; r_idx < n_r; ++r_idx) {
        for (int s_idx = 0; s_idx < n_s; ++s_idx) {
            double mean = 0.0;
            for (int fold = 0; fold < folds; ++fold) {
                GridRow row;
                row.lambda = lambda_r_grid[static_cast<std::size_t>(r_idx)];
                row.lambda_s = lambda_s_grid[static_cast<std::size_t>(s_idx)];
                row.fold = fold;
                row.auc = auc_table[static_cast<std::size_t>(
                    (r_idx * n_s + s_idx) * folds + fold)];
                report.rows.push_back(row);
                mean += row.auc;
            }
            mean /= static_cast<double>(folds);
            const double lambda_r = lambda_r_grid[static_cast<std::size_t>(r_idx)];
            const double lambda_s = lambda_s_grid[static_cast<std::size_t>(s_idx)];
            const bool better =
                !have_best || mean > best_mean ||
                (mean == best_mean &&
                 (lambda_r > best_r || (lambda_r == best_r && lambda_s > best_s)));
            if (better) {
                have_best = true;
                best_mean = mean;
                best_r = lambda_r;
                best_s = lambda_s;
            }
        }
    }

    report.chosen.lambda = best_r;
    report.chosen.lambda_s = best_s;
    report.chosen.mean_auc = best_mean;
    report.refit = fit_mtl(tasks, MtlSpec{best_r, best_s}, settings);
    return report;
}

}  // namespace gsvm
