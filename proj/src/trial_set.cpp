#include "gsvm/trial_set.hpp"

#include <cmath>
#include <stdexcept>

namespace gsvm {

void SensorLayout::validate() const {
    if (sensors < 1 || features_per_sensor < 1) {
        throw std::invalid_argument("layout: sensor and feature counts must be >= 1");
    }
    if (!sensor_names.empty() &&
        static_cast<int>(sensor_names.size()) != sensors) {
        throw std::invalid_argument("layout: sensor_names length must equal sensor count");
    }
}

void TrialSet::validate() const {
    layout.validate();
    if (features.rows() < 1) {
        throw std::invalid_argument("trial set: need at least one trial");
    }
    if (features.rows() != labels.size()) {
        throw std::invalid_argument("trial set: label count does not match trial count");
    }
    if (dim() != layout.dim()) {
        throw std::invalid_argument(
            "trial set: feature count " + std::to_string(dim()) +
            " does not match layout p*r = " + std::to_string(layout.dim()));
    }
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1.0 && labels[i] != -1.0) {
            throw std::invalid_argument("trial set: labels must be exactly -1 or +1");
        }
    }
    if (!features.allFinite()) {
        throw std::invalid_argument("trial set: features must be finite");
    }
}

TrialSet TrialSet::subset(const std::vector<int>& rows) const {
    TrialSet out;
    out.layout = layout;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
        out.labels[static_cast<Eigen::Index>(i)] = labels[rows[i]];
    }
    return out;
}

void TaskCollection::validate() const {
    if (tasks.empty()) {
        throw std::invalid_argument("task collection: need at least one task");
    }
    const SensorLayout& ref = tasks.front().layout;
    for (const TrialSet& task : tasks) {
        task.validate();
        if (task.layout.sensors != ref.sensors ||
            task.layout.features_per_sensor != ref.features_per_sensor) {
            throw std::invalid_argument("task collection: tasks must share one sensor layout");
        }
    }
}

TrialSet concatenate(const TaskCollection& tasks) {
    tasks.validate();
    Eigen::Index total = 0;
    for (const TrialSet& task : tasks.tasks) total += task.features.rows();

    TrialSet out;
    out.layout = tasks.layout();
    out.features.resize(total, tasks.dim());
    out.labels.resize(total);
    Eigen::Index row = 0;
    for (const TrialSet& task : tasks.tasks) {
        out.features.middleRows(row, task.features.rows()) = task.features;
        out.labels.segment(row, task.labels.size()) = task.labels;
        row += task.features.rows();
    }
    return out;
}

}  // namespace gsvm
