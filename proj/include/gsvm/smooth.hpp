#pragma once

#include <Eigen/Core>

#include "gsvm/trial_set.hpp"

namespace gsvm {

/// Squared hinge loss: sum_i max(0, 1 - y_i (x_i.w + b))^2.
double sq_hinge_value(const Vector& w, double b, const TrialSet& data);

/// Gradient of the squared hinge loss with respect to (w, b).
void sq_hinge_grad(const Vector& w, double b, const TrialSet& data,
                   Vector& grad_w, double& grad_b);

/// Gradient Lipschitz constant 2 * sum_i ||x_i||^2, with the bias counted
/// as a constant-1 feature when include_bias is set (so a joint (w, b)
/// step at 1/L is valid).
double lipschitz_loss(const TrialSet& data, bool include_bias = true);

/// lambda_s * sum_t ||w_t - mean(w)||^2 over the columns of task_weights.
double similarity_value(const Matrix& task_weights, double lambda_s);

/// Gradient of the similarity term: column t is 2*lambda_s*(w_t - mean(w)).
Matrix similarity_grad(const Matrix& task_weights, double lambda_s);

/// Step-size constant for the joint multi-task objective:
/// max_t lipschitz_loss(task t) + 4*lambda_s.
double lipschitz_mtl(const TaskCollection& tasks, double lambda_s);

/// The smooth part f1 of a split objective, acting on a stacked weight
/// vector plus per-task biases. Exactly one configuration is active:
/// a single task (optionally with a smooth l2 term) or a task collection
/// with a similarity term.
class SmoothPart {
public:
    static SmoothPart single_task(const TrialSet& data, double l2_coeff = 0.0);
    static SmoothPart multi_task(const TaskCollection& tasks, double lambda_s);

    int dim() const { return dim_; }
    int bias_count() const { return bias_count_; }

    double value(const Vector& stacked, const Vector& biases) const;
    void grad(const Vector& stacked, const Vector& biases,
              Vector& grad_stacked, Vector& grad_biases) const;
    double lipschitz() const;

private:
    SmoothPart() = default;

    const TrialSet* data_ = nullptr;
    const TaskCollection* tasks_ = nullptr;
    double l2_coeff_ = 0.0;
    double lambda_s_ = 0.0;
    int dim_ = 0;
    int bias_count_ = 0;
};

}  // namespace gsvm
