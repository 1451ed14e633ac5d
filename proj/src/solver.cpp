#include "gsvm/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace gsvm {

void SolveSettings::validate() const {
    if (max_iterations < 1) {
        throw std::invalid_argument("settings: max_iterations must be >= 1");
    }
    if (!(rel_objective_tol > 0.0)) {
        throw std::invalid_argument("settings: tolerance must be positive");
    }
}

std::vector<int> nonzero_groups(const Vector& w, const GroupPartition& groups) {
    std::vector<int> selected;
    for (int g = 0; g < groups.size(); ++g) {
        for (int idx : groups.groups[static_cast<std::size_t>(g)].indices) {
            if (w[idx] != 0.0) {
                selected.push_back(g);
                break;
            }
        }
    }
    return selected;
}

double objective(const TrialSet& data, const RegularizerSpec& spec,
                 const GroupPartition& groups, const Vector& w, double b) {
    return sq_hinge_value(w, b, data) +
           spec.lambda * regularizer_value(w, spec, groups);
}

namespace detail {

CoreResult fbs_core(const SmoothPart& smooth,
                    const std::function<ProxResult(const Vector&, double)>& backward,
                    const std::function<double(const Vector&)>& penalty,
                    const SolveSettings& settings, Vector z0, Vector b0) {
    settings.validate();
    const double lipschitz = smooth.lipschitz();
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
        throw std::runtime_error("solver: invalid Lipschitz constant (non-finite data scale?)");
    }
    double gamma = 1.0 / lipschitz;

    CoreResult result;
    result.z = std::move(z0);
    result.biases = std::move(b0);

    Vector z_prev = result.z;
    Vector b_prev = result.biases;
    double momentum_t = 1.0;

    double obj = smooth.value(result.z, result.biases) + penalty(result.z);
    if (!std::isfinite(obj)) {
        throw std::runtime_error("solver: non-finite objective at the initial point");
    }
    FitDiagnostics& diag = result.diagnostics;
    diag.objective_trace.push_back(obj);
    diag.stop_reason = StopReason::MaxIterations;

    Vector grad_z(result.z.size());
    Vector grad_b(result.biases.size());

    for (int iter = 0; iter < settings.max_iterations; ++iter) {
        Vector point_z = result.z;
        Vector point_b = result.biases;
        if (settings.accelerated && iter > 0) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_t * momentum_t));
            const double weight = (momentum_t - 1.0) / t_next;
            momentum_t = t_next;
            point_z += weight * (result.z - z_prev);
            point_b += weight * (result.biases - b_prev);
        }

        smooth.grad(point_z, point_b, grad_z, grad_b);

        Vector next_z;
        Vector next_b;
        if (settings.step_mode == StepMode::FixedStep) {
            next_z = backward(point_z - gamma * grad_z, gamma).x;
            next_b = point_b - gamma * grad_b;
        } else {
            const double point_value = smooth.value(point_z, point_b);
            for (int halving = 0; halving < 60; ++halving) {
                next_z = backward(point_z - gamma * grad_z, gamma).x;
                next_b = point_b - gamma * grad_b;
                const Vector dz = next_z - point_z;
                const Vector db = next_b - point_b;
                const double quad = point_value + grad_z.dot(dz) + grad_b.dot(db) +
                                    (dz.squaredNorm() + db.squaredNorm()) / (2.0 * gamma);
                if (smooth.value(next_z, next_b) <= quad + 1e-12 * std::abs(quad)) break;
                gamma *= 0.5;
            }
        }

        const double next_obj = smooth.value(next_z, next_b) + penalty(next_z);
        if (!std::isfinite(next_obj)) {
            throw std::runtime_error("solver: objective diverged to a non-finite value");
        }
        if (settings.accelerated && next_obj > obj) {
            momentum_t = 1.0;  // restart momentum when the objective backtracks
        }

        z_prev = std::move(result.z);
        b_prev = std::move(result.biases);
        result.z = std::move(next_z);
        result.biases = std::move(next_b);

        diag.objective_trace.push_back(next_obj);
        const double scale = std::max(1.0, std::abs(obj));
        diag.max_trace_increase =
            std::max(diag.max_trace_increase, (next_obj - obj) / scale);
        const bool converged = std::abs(obj - next_obj) / std::max(1.0, obj) <
                               settings.rel_objective_tol;
        obj = next_obj;
        diag.iterations = iter + 1;
        if (converged) {
            diag.stop_reason = StopReason::Converged;
            break;
        }
    }
    return result;
}

}  // namespace detail

LinearModel fbs_solve(const TrialSet& data, const RegularizerSpec& spec,
                      const GroupPartition& groups, const SolveSettings& settings,
                      const Vector& w0, double b0) {
    spec.validate();
    groups.validate();
    if (groups.dim != data.dim()) {
        throw std::invalid_argument("solver: partition does not match data dimension");
    }

    Vector start = w0.size() == 0 ? Vector::Zero(data.dim()) : w0;
    if (start.size() != data.dim()) {
        throw std::invalid_argument("solver: w0 dimension does not match data");
    }
    if (!start.allFinite()) {
        throw std::invalid_argument("solver: w0 must be finite");
    }
    Vector bias0(1);
    bias0[0] = b0;

    const bool smooth_l2 = spec.kind == RegKind::L2;
    const SmoothPart smooth =
        SmoothPart::single_task(data, smooth_l2 ? spec.lambda : 0.0);

    std::function<ProxResult(const Vector&, double)> backward;
    std::function<double(const Vector&)> penalty;
    if (smooth_l2) {
        backward = [](const Vector& v, double) {
            ProxResult identity;
            identity.x = v;
            return identity;
        };
        penalty = [](const Vector&) { return 0.0; };
    } else {
        backward = [&spec, &groups](const Vector& v, double gamma) {
            return prox_step(v, gamma * spec.lambda, spec, groups);
        };
        penalty = [&spec, &groups](const Vector& z) {
            return spec.lambda * regularizer_value(z, spec, groups);
        };
    }

    detail::CoreResult core =
        detail::fbs_core(smooth, backward, penalty, settings, std::move(start), bias0);

    LinearModel model;
    model.w = std::move(core.z);
    model.b = core.biases[0];
    model.regularizer = spec;
    model.diagnostics = std::move(core.diagnostics);
    model.selected_groups = nonzero_groups(model.w, groups);
    return model;
}

LinearModel fit_adaptive(const TrialSet& data, double q, double lambda,
                         const GroupPartition& groups, const SolveSettings& settings,
                         const Vector& w0, double b0, LinearModel* stage_one_out) {
    RegularizerSpec stage_one_spec{RegKind::GroupLq, q, lambda};
    LinearModel stage_one = fbs_solve(data, stage_one_spec, groups, settings, w0, b0);

    const GroupPartition weighted = adaptive_weights(stage_one.w, groups, q);
    RegularizerSpec stage_two_spec{RegKind::AdaptiveGroupLq, q, lambda};
    LinearModel stage_two = fbs_solve(data, stage_two_spec, weighted, settings,
                                      stage_one.w, stage_one.b);
    if (stage_one_out != nullptr) *stage_one_out = std::move(stage_one);
    return stage_two;
}

}  // namespace gsvm
