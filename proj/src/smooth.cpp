#include "gsvm/smooth.hpp"

#include <stdexcept>

namespace gsvm {

namespace {

void check_dim(const Vector& w, const TrialSet& data) {
    if (w.size() != data.features.cols()) {
        throw std::invalid_argument("smooth: weight dimension does not match data");
    }
}

}  // namespace

double sq_hinge_value(const Vector& w, double b, const TrialSet& data) {
    check_dim(w, data);
    Vector scores = data.features * w;
    scores.array() += b;
    const Eigen::ArrayXd slack =
        (1.0 - data.labels.array() * scores.array()).max(0.0);
    return (slack * slack).sum();
}

void sq_hinge_grad(const Vector& w, double b, const TrialSet& data,
                   Vector& grad_w, double& grad_b) {
    check_dim(w, data);
    Vector scores = data.features * w;
    scores.array() += b;
    const Eigen::ArrayXd slack =
        (1.0 - data.labels.array() * scores.array()).max(0.0);
    const Vector coeff = (-2.0 * data.labels.array() * slack).matrix();
    grad_w.noalias() = data.features.transpose() * coeff;
    grad_b = coeff.sum();
}

double lipschitz_loss(const TrialSet& data, bool include_bias) {
    double total = 2.0 * data.features.squaredNorm();
    if (include_bias) total += 2.0 * static_cast<double>(data.n());
    return total;
}

double similarity_value(const Matrix& task_weights, double lambda_s) {
    const Vector mean = task_weights.rowwise().mean();
    double acc = 0.0;
    for (Eigen::Index t = 0; t < task_weights.cols(); ++t) {
        acc += (task_weights.col(t) - mean).squaredNorm();
    }
    return lambda_s * acc;
}

Matrix similarity_grad(const Matrix& task_weights, double lambda_s) {
    const Vector mean = task_weights.rowwise().mean();
    Matrix grad = 2.0 * lambda_s * (task_weights.colwise() - mean);
    return grad;
}

double lipschitz_mtl(const TaskCollection& tasks, double lambda_s) {
    double worst = 0.0;
    for (const TrialSet& task : tasks.tasks) {
        worst = std::max(worst, lipschitz_loss(task));
    }
    return worst + 4.0 * lambda_s;
}

SmoothPart SmoothPart::single_task(const TrialSet& data, double l2_coeff) {
    SmoothPart part;
    part.data_ = &data;
    part.l2_coeff_ = l2_coeff;
    part.dim_ = data.dim();
    part.bias_count_ = 1;
    return part;
}

SmoothPart SmoothPart::multi_task(const TaskCollection& tasks, double lambda_s) {
    SmoothPart part;
    part.tasks_ = &tasks;
    part.lambda_s_ = lambda_s;
    part.dim_ = tasks.dim() * tasks.task_count();
    part.bias_count_ = tasks.task_count();
    return part;
}

double SmoothPart::value(const Vector& stacked, const Vector& biases) const {
    if (data_ != nullptr) {
        double v = sq_hinge_value(stacked, biases[0], *data_);
        if (l2_coeff_ > 0.0) v += l2_coeff_ * 0.5 * stacked.squaredNorm();
        return v;
    }
    const int m = tasks_->task_count();
    const int d = tasks_->dim();
    double v = 0.0;
    for (int t = 0; t < m; ++t) {
        v += sq_hinge_value(stacked.segment(t * d, d), biases[t], tasks_->tasks[t]);
    }
    if (lambda_s_ > 0.0 && m > 1) {
        const Eigen::Map<const Matrix> weights(stacked.data(), d, m);
        v += similarity_value(weights, lambda_s_);
    }
    return v;
}

void SmoothPart::grad(const Vector& stacked, const Vector& biases,
                      Vector& grad_stacked, Vector& grad_biases) const {
    grad_stacked.resize(stacked.size());
    grad_biases.resize(biases.size());
    if (data_ != nullptr) {
        double gb = 0.0;
        sq_hinge_grad(stacked, biases[0], *data_, grad_stacked, gb);
        if (l2_coeff_ > 0.0) grad_stacked += l2_coeff_ * stacked;
        grad_biases[0] = gb;
        return;
    }
    const int m = tasks_->task_count();
    const int d = tasks_->dim();
    Vector gw(d);
    for (int t = 0; t < m; ++t) {
        double gb = 0.0;
        sq_hinge_grad(stacked.segment(t * d, d), biases[t], tasks_->tasks[t], gw, gb);
        grad_stacked.segment(t * d, d) = gw;
        grad_biases[t] = gb;
    }
    if (lambda_s_ > 0.0 && m > 1) {
        const Eigen::Map<const Matrix> weights(stacked.data(), d, m);
        const Matrix sim = similarity_grad(weights, lambda_s_);
        grad_stacked += Eigen::Map<const Vector>(sim.data(), sim.size());
    }
}

double SmoothPart::lipschitz() const {
    if (data_ != nullptr) {
        return lipschitz_loss(*data_) + l2_coeff_;
    }
    return lipschitz_mtl(*tasks_, lambda_s_);
}

}  // namespace gsvm
