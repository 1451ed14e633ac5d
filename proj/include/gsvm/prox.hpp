#pragma once

#include <Eigen/Core>
#include <cmath>

#include "gsvm/groups.hpp"
#include "gsvm/regularizer.hpp"
#include "gsvm/trial_set.hpp"

namespace gsvm {

/// Result of a proximal step. inner_iterations counts the iterative work
/// for the l1-lq case; the closed-form operators report zero.
struct ProxResult {
    Vector x;
    int inner_iterations = 0;
    bool converged = true;
};

inline double soft_threshold(double value, double threshold) {
    if (value > threshold) return value - threshold;
    if (value < -threshold) return value + threshold;
    return 0.0;
}

/// lq norm computed in the overflow-safe scaled form; valid for q >= 1
/// including very large q (used for dual norms).
template <typename Derived>
double lq_norm(const Eigen::MatrixBase<Derived>& x, double q) {
    const double peak = x.cwiseAbs().maxCoeff();
    if (peak == 0.0 || !(peak > 0.0)) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        acc += std::pow(std::abs(x[i]) / peak, q);
    }
    return peak * std::pow(acc, 1.0 / q);
}

/// Componentwise soft thresholding.
ProxResult prox_l1(const Vector& u, double tau);

/// Blockwise shrinkage: group g maps to 0 when ||u_g|| <= tau*beta_g and
/// to (1 - tau*beta_g/||u_g||) u_g otherwise. Eliminated groups map to 0.
ProxResult prox_group_l2(const Vector& u, double tau, const GroupPartition& groups);

/// Per-group prox of tau*beta_g*||.||_q for q in (1, 2]. Blocks are set
/// exactly to zero when the dual-norm condition ||u_g||_{q'} <= tau*beta_g
/// holds; otherwise a damped fixed-point iteration seeded from the block
/// shrinkage runs to tolerance 1e-10 (cap 1000), refined by a bisection
/// solve of the norm-parametrized stationarity system when the fixed
/// point stalls. q = 1 falls back to soft thresholding per group.
/// force_iterative routes q = 2 through the generic path (test hook).
ProxResult prox_group_lq(const Vector& u, double tau, const GroupPartition& groups,
                         double q, bool force_iterative = false);

/// Backward step for a regularizer spec at aggregate threshold tau
/// (already scaled by step size and lambda). L2 is smooth and handled in
/// the forward step, so its prox is the identity.
ProxResult prox_step(const Vector& u, double tau, const RegularizerSpec& spec,
                     const GroupPartition& groups);

/// Omega(w) without the lambda factor: sum_i |w_i| (L1),
/// sum_g beta_g ||w_g||_q (group kinds), 0.5 ||w||^2 (L2).
double regularizer_value(const Vector& w, const RegularizerSpec& spec,
                         const GroupPartition& groups);

/// Second-stage weights beta_g = 1 / ||w*_g||_q; groups with zero norm
/// are marked eliminated (held at zero afterwards).
GroupPartition adaptive_weights(const Vector& w_star, const GroupPartition& groups,
                                double q);

}  // namespace gsvm
