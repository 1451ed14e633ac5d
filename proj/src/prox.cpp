#include "gsvm/prox.hpp"

#include <stdexcept>

namespace gsvm {

namespace {

// The damped gradient fixed point handles the well-conditioned bulk; the
// scalar norm-parameter solve finishes stiff blocks (components heading to
// zero make the q-norm curvature blow up). Together they stay inside the
// 1000-iteration budget.
constexpr int kGradientPhaseCap = 80;
constexpr double kInnerTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-9;

void check_partition(const Vector& u, const GroupPartition& groups) {
    if (groups.dim != u.size()) {
        throw std::invalid_argument("prox: partition dimension does not match vector");
    }
}

double group_objective(const Vector& x, const Vector& u, double c, double q) {
    return 0.5 * (x - u).squaredNorm() + c * lq_norm(x, q);
}

// Gradient of ||x||_q for x != 0; components at zero get zero entries,
// which is the correct one-sided value for q > 1.
Vector lq_norm_grad(const Vector& x, double q) {
    const double norm = lq_norm(x, q);
    Vector grad = Vector::Zero(x.size());
    if (norm == 0.0) return grad;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] != 0.0) {
            const double scaled = std::abs(x[i]) / norm;
            grad[i] = (x[i] > 0.0 ? 1.0 : -1.0) * std::pow(scaled, q - 1.0);
        }
    }
    return grad;
}

// Root of v + a*v^(q-1) = target on [0, target], a > 0, 1 < q <= 2.
// Newton from the right end, safeguarded by bisection.
double solve_magnitude(double target, double a, double q) {
    double lo = 0.0;
    double hi = target;
    double v = target;
    for (int iter = 0; iter < 60; ++iter) {
        const double h = v + a * std::pow(v, q - 1.0) - target;
        if (h > 0.0) {
            hi = v;
        } else if (h < 0.0) {
            lo = v;
        } else {
            return v;
        }
        const double hp = 1.0 + a * (q - 1.0) * std::pow(v, q - 2.0);
        double next = v - h / hp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - v) <= 1e-15 * target) return next;
        v = next;
    }
    return v;
}

// Magnitudes for all components at a fixed norm parameter s.
void magnitudes_at(const Vector& u, double c, double q, double s, Vector& v) {
    const double a = c / s;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double absu = std::abs(u[i]);
        v[i] = absu > 0.0 ? solve_magnitude(absu, a, q) : 0.0;
    }
}

// Exact block solution through the norm parameter s = ||x||_q^(q-1):
// given s the stationarity system decouples into scalar equations, and
// s itself satisfies a monotone fixed point (the update map is increasing
// with a unique crossing, so iterates converge monotonically from either
// side). Bisection covers the slow-contraction corner.
Vector solve_block_exact(const Vector& u, double c, double q, double s_seed,
                         int& iterations) {
    const Eigen::Index n = u.size();
    const double s_cap = std::pow(lq_norm(u, q), q - 1.0);

    Vector v(n);
    auto norm_param = [&](double s) {
        magnitudes_at(u, c, q, s, v);
        return std::pow(lq_norm(v, q), q - 1.0);
    };

    double s = std::min(std::max(s_seed, 1e-300), s_cap);
    double lo = 0.0;
    double hi = s_cap;
    int iter = 0;
    for (; iter < 500; ++iter) {
        const double mapped = norm_param(s);
        if (mapped > s) {
            lo = std::max(lo, s);
        } else {
            hi = std::min(hi, s);
        }
        if (std::abs(mapped - s) <= 1e-14 * std::max(mapped, s) || mapped == 0.0) {
            s = mapped > 0.0 ? mapped : s;
            break;
        }
        s = std::min(std::max(mapped, lo), hi);
    }
    for (; iter < 700 && hi - lo > 1e-14 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (norm_param(mid) > mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        s = mid;
    }
    iterations += iter;
    magnitudes_at(u, c, q, s, v);

    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = u[i] >= 0.0 ? v[i] : -v[i];
    }
    return x;
}

// Prox of c*||.||_q on one group, q in (1, 2], assuming the zero test has
// been handled by the caller is NOT assumed: it is performed here.
Vector solve_block_lq(const Vector& u, double c, double q, int& iterations,
                      bool& converged) {
    const double dual_q = q / (q - 1.0);
    if (lq_norm(u, dual_q) <= c) {
        return Vector::Zero(u.size());
    }

    // Seed from the l2 shrinkage; it is nonzero whenever the zero test fails.
    const double u2 = u.norm();
    Vector x = (1.0 - c / u2) * u;

    double fx = group_objective(x, u, c, q);
    int iter = 0;
    for (; iter < kGradientPhaseCap; ++iter) {
        const Vector target = u - c * lq_norm_grad(x, q);
        const Vector step = target - x;
        Vector candidate = target;
        double fc = group_objective(candidate, u, c, q);
        double damping = 1.0;
        while (fc > fx && damping > 1e-14) {
            damping *= 0.5;
            candidate = x + damping * step;
            fc = group_objective(candidate, u, c, q);
        }
        if (fc > fx) break;
        const double moved = (candidate - x).lpNorm<Eigen::Infinity>();
        x = candidate;
        fx = fc;
        if (moved < kInnerTolerance) {
            ++iter;
            break;
        }
    }
    iterations += iter;

    const Vector residual = u - c * lq_norm_grad(x, q) - x;
    if (residual.lpNorm<Eigen::Infinity>() > kResidualTolerance) {
        const double s_seed = std::pow(std::max(lq_norm(x, q), 1e-300), q - 1.0);
        x = solve_block_exact(u, c, q, s_seed, iterations);
    }
    converged = true;
    return x;
}

}  // namespace

ProxResult prox_l1(const Vector& u, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("prox: tau must be positive");
    if (!u.allFinite()) throw std::invalid_argument("prox: input must be finite");
    ProxResult result;
    result.x.resize(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        result.x[i] = soft_threshold(u[i], tau);
    }
    return result;
}

ProxResult prox_group_l2(const Vector& u, double tau, const GroupPartition& groups) {
    if (!(tau > 0.0)) throw std::invalid_argument("prox: tau must be positive");
    check_partition(u, groups);
    ProxResult result;
    result.x = Vector::Zero(u.size());
    for (const Group& group : groups.groups) {
        if (group.eliminated) continue;
        const double threshold = tau * group.weight;
        if (group.indices.size() == 1) {
            const int idx = group.indices.front();
            result.x[idx] = soft_threshold(u[idx], threshold);
            continue;
        }
        double norm_sq = 0.0;
        for (int idx : group.indices) norm_sq += u[idx] * u[idx];
        const double norm = std::sqrt(norm_sq);
        if (norm > threshold) {
            const double scale = 1.0 - threshold / norm;
            for (int idx : group.indices) result.x[idx] = scale * u[idx];
        }
    }
    return result;
}

ProxResult prox_group_lq(const Vector& u, double tau, const GroupPartition& groups,
                         double q, bool force_iterative) {
    if (!(tau > 0.0)) throw std::invalid_argument("prox: tau must be positive");
    if (!(q >= 1.0 && q <= 2.0)) {
        throw std::invalid_argument("prox: q must lie in [1, 2]");
    }
    check_partition(u, groups);
    if (q == 2.0 && !force_iterative) return prox_group_l2(u, tau, groups);

    ProxResult result;
    result.x = Vector::Zero(u.size());
    for (const Group& group : groups.groups) {
        if (group.eliminated) continue;
        const double threshold = tau * group.weight;
        if (q == 1.0 || group.indices.size() == 1) {
            for (int idx : group.indices) {
                result.x[idx] = soft_threshold(u[idx], threshold);
            }
            continue;
        }
        Vector block(static_cast<Eigen::Index>(group.indices.size()));
        for (std::size_t k = 0; k < group.indices.size(); ++k) {
            block[static_cast<Eigen::Index>(k)] = u[group.indices[k]];
        }
        bool block_converged = true;
        const Vector solved =
            solve_block_lq(block, threshold, q, result.inner_iterations, block_converged);
        result.converged = result.converged && block_converged;
        for (std::size_t k = 0; k < group.indices.size(); ++k) {
            result.x[group.indices[k]] = solved[static_cast<Eigen::Index>(k)];
        }
    }
    return result;
}

ProxResult prox_step(const Vector& u, double tau, const RegularizerSpec& spec,
                     const GroupPartition& groups) {
    switch (spec.kind) {
        case RegKind::L2: {
            ProxResult identity;
            identity.x = u;
            return identity;
        }
        case RegKind::L1:
            return prox_l1(u, tau);
        case RegKind::GroupLq:
        case RegKind::AdaptiveGroupLq:
            return prox_group_lq(u, tau, groups, spec.q);
    }
    throw std::logic_error("prox: unhandled regularizer kind");
}

double regularizer_value(const Vector& w, const RegularizerSpec& spec,
                         const GroupPartition& groups) {
    switch (spec.kind) {
        case RegKind::L2:
            return 0.5 * w.squaredNorm();
        case RegKind::L1:
            return w.lpNorm<1>();
        case RegKind::GroupLq:
        case RegKind::AdaptiveGroupLq: {
            check_partition(w, groups);
            double acc = 0.0;
            for (const Group& group : groups.groups) {
                if (group.eliminated) continue;  // block is constrained to zero
                Vector block(static_cast<Eigen::Index>(group.indices.size()));
                for (std::size_t k = 0; k < group.indices.size(); ++k) {
                    block[static_cast<Eigen::Index>(k)] = w[group.indices[k]];
                }
                acc += group.weight * lq_norm(block, spec.q);
            }
            return acc;
        }
    }
    throw std::logic_error("regularizer: unhandled kind");
}

GroupPartition adaptive_weights(const Vector& w_star, const GroupPartition& groups,
                                double q) {
    check_partition(w_star, groups);
    GroupPartition out = groups;
    for (Group& group : out.groups) {
        Vector block(static_cast<Eigen::Index>(group.indices.size()));
        for (std::size_t k = 0; k < group.indices.size(); ++k) {
            block[static_cast<Eigen::Index>(k)] = w_star[group.indices[k]];
        }
        const double norm = lq_norm(block, q);
        if (norm > 0.0) {
            group.weight = 1.0 / norm;
            group.eliminated = false;
        } else {
            group.weight = 1.0;
            group.eliminated = true;
        }
    }
    return out;
}

}  // namespace gsvm
