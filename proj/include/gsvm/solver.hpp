#pragma once

#include <functional>
#include <vector>

#include "gsvm/groups.hpp"
#include "gsvm/prox.hpp"
#include "gsvm/regularizer.hpp"
#include "gsvm/smooth.hpp"
#include "gsvm/trial_set.hpp"

namespace gsvm {

enum class StepMode { FixedStep, Backtracking };
enum class StopReason { Converged, MaxIterations };

struct SolveSettings {
    int max_iterations = 10000;
    double rel_objective_tol = 1e-6;
    StepMode step_mode = StepMode::FixedStep;
    bool accelerated = false;  // momentum on the forward step; off for plain runs

    void validate() const;
};

struct FitDiagnostics {
    int iterations = 0;
    std::vector<double> objective_trace;  // objective at start, then per iteration
    StopReason stop_reason = StopReason::Converged;
    // Largest relative objective increase seen along the trace; exactly 0
    // for a clean descent run.
    double max_trace_increase = 0.0;

    double final_objective() const {
        return objective_trace.empty() ? 0.0 : objective_trace.back();
    }
};

struct LinearModel {
    Vector w;
    double b = 0.0;
    RegularizerSpec regularizer;
    FitDiagnostics diagnostics;
    std::vector<int> selected_groups;
};

/// Groups whose weight block is not exactly zero.
std::vector<int> nonzero_groups(const Vector& w, const GroupPartition& groups);

/// Full objective: squared hinge loss plus lambda * Omega(w).
double objective(const TrialSet& data, const RegularizerSpec& spec,
                 const GroupPartition& groups, const Vector& w, double b);

/// Forward-backward splitting on the single-task problem. The bias takes
/// plain gradient steps (never regularized). For the L2 spec the
/// regularizer joins the smooth part and the backward step is the identity.
LinearModel fbs_solve(const TrialSet& data, const RegularizerSpec& spec,
                      const GroupPartition& groups, const SolveSettings& settings,
                      const Vector& w0 = Vector(), double b0 = 0.0);

/// Two-stage adaptive fit: plain group-lq fit with unit weights, then a
/// refit with weights 1/||w*_g||_q (zero blocks eliminated), warm-started
/// from the first stage. Returns the stage-two model; stage_one_out, when
/// given, receives the stage-one model (useful for warm-start chains).
LinearModel fit_adaptive(const TrialSet& data, double q, double lambda,
                         const GroupPartition& groups, const SolveSettings& settings,
                         const Vector& w0 = Vector(), double b0 = 0.0,
                         LinearModel* stage_one_out = nullptr);

namespace detail {

struct CoreResult {
    Vector z;
    Vector biases;
    FitDiagnostics diagnostics;
};

/// Shared FBS loop over a stacked weight vector plus unregularized biases.
/// backward(v, gamma) must return the prox of the nonsmooth part at step
/// size gamma; penalty(z) its value (including any lambda factor).
CoreResult fbs_core(const SmoothPart& smooth,
                    const std::function<ProxResult(const Vector&, double)>& backward,
                    const std::function<double(const Vector&)>& penalty,
                    const SolveSettings& settings, Vector z0, Vector b0);

}  // namespace detail

}  // namespace gsvm
