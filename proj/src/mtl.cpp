#include "gsvm/mtl.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace gsvm {

void MtlSpec::validate() const {
    if (!(lambda_r >= 0.0) || !std::isfinite(lambda_r) ||
        !(lambda_s >= 0.0) || !std::isfinite(lambda_s)) {
        throw std::invalid_argument("mtl: lambda_r and lambda_s must be finite and >= 0");
    }
}

Matrix MtlModel::stacked() const {
    const int m = task_count();
    const int d = m == 0 ? 0 : static_cast<int>(tasks.front().w.size());
    Matrix weights(d, m);
    for (int t = 0; t < m; ++t) weights.col(t) = tasks[static_cast<std::size_t>(t)].w;
    return weights;
}

MtlModel fit_mtl(const TaskCollection& tasks, const MtlSpec& spec,
                 const SolveSettings& settings, const Matrix& w0, const Vector& b0) {
    tasks.validate();
    spec.validate();
    const int m = tasks.task_count();
    const int d = tasks.dim();

    static std::atomic<bool> warned_unequal{false};
    for (int t = 1; t < m; ++t) {
        if (tasks.tasks[static_cast<std::size_t>(t)].n() != tasks.tasks[0].n()) {
            if (!warned_unequal.exchange(true)) {
                std::clog << "warning: tasks have unequal trial counts; "
                             "losses are left unweighted\n";
            }
            break;
        }
    }

    const GroupPartition stacked_groups = build_mtl_groups(tasks.layout(), m);
    const SmoothPart smooth = SmoothPart::multi_task(tasks, spec.lambda_s);

    Vector z0 = Vector::Zero(d * m);
    if (w0.size() != 0) {
        if (w0.rows() != d || w0.cols() != m) {
            throw std::invalid_argument("mtl: warm start has wrong shape");
        }
        z0 = Eigen::Map<const Vector>(w0.data(), w0.size());
    }
    Vector bias0 = b0.size() == 0 ? Vector::Zero(m) : b0;
    if (bias0.size() != m) {
        throw std::invalid_argument("mtl: warm-start biases have wrong length");
    }

    std::function<ProxResult(const Vector&, double)> backward;
    std::function<double(const Vector&)> penalty;
    const RegularizerSpec group_spec{RegKind::GroupLq, 2.0,
                                     spec.lambda_r > 0.0 ? spec.lambda_r : 1.0};
    if (spec.lambda_r > 0.0) {
        backward = [&spec, &stacked_groups](const Vector& v, double gamma) {
            return prox_group_l2(v, gamma * spec.lambda_r, stacked_groups);
        };
        penalty = [&spec, &group_spec, &stacked_groups](const Vector& z) {
            return spec.lambda_r * regularizer_value(z, group_spec, stacked_groups);
        };
    } else {
        backward = [](const Vector& v, double) {
            ProxResult identity;
            identity.x = v;
            return identity;
        };
        penalty = [](const Vector&) { return 0.0; };
    }

    detail::CoreResult core = detail::fbs_core(smooth, backward, penalty, settings,
                                               std::move(z0), std::move(bias0));

    MtlModel model;
    model.stacked_groups = stacked_groups;
    model.selected_groups = nonzero_groups(core.z, stacked_groups);
    model.diagnostics = core.diagnostics;
    model.tasks.resize(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) {
        LinearModel& task = model.tasks[static_cast<std::size_t>(t)];
        task.w = core.z.segment(t * d, d);
        task.b = core.biases[t];
        task.regularizer = RegularizerSpec{RegKind::GroupLq, 2.0,
                                           spec.lambda_r > 0.0 ? spec.lambda_r : 1.0};
        task.diagnostics = core.diagnostics;
        task.selected_groups = model.selected_groups;
    }
    return model;
}

LinearModel fit_pooled(const TaskCollection& tasks, const RegularizerSpec& spec,
                       const SolveSettings& settings) {
    const TrialSet pooled = concatenate(tasks);
    return fbs_solve(pooled, spec, sensor_groups(pooled.layout), settings);
}

double mtl_objective(const TaskCollection& tasks, const MtlSpec& spec,
                     const Matrix& task_weights, const Vector& biases) {
    tasks.validate();
    spec.validate();
    const int m = tasks.task_count();
    const int d = tasks.dim();
    if (task_weights.rows() != d || task_weights.cols() != m || biases.size() != m) {
        throw std::invalid_argument("mtl objective: weight shape does not match tasks");
    }

    double value = 0.0;
    for (int t = 0; t < m; ++t) {
        value += sq_hinge_value(task_weights.col(t), biases[t],
                                tasks.tasks[static_cast<std::size_t>(t)]);
    }
    if (spec.lambda_r > 0.0) {
        const GroupPartition stacked_groups = build_mtl_groups(tasks.layout(), m);
        const Eigen::Map<const Vector> z(task_weights.data(), task_weights.size());
        const RegularizerSpec group_spec{RegKind::GroupLq, 2.0, spec.lambda_r};
        value += spec.lambda_r * regularizer_value(z, group_spec, stacked_groups);
    }
    value += similarity_value(task_weights, spec.lambda_s);
    return value;
}

}  // namespace gsvm
