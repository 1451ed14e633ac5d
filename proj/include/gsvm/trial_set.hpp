#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gsvm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sensor-major feature layout: feature column j belongs to sensor
/// j / features_per_sensor.
struct SensorLayout {
    int sensors = 0;             // p
    int features_per_sensor = 0; // r
    std::vector<std::string> sensor_names;  // optional, length p when present

    int dim() const { return sensors * features_per_sensor; }
    int sensor_of(int column) const { return column / features_per_sensor; }

    void validate() const;
};

/// A set of labeled trials: features is n x d, labels are strictly +/-1.
struct TrialSet {
    Matrix features;
    Vector labels;
    SensorLayout layout;

    int n() const { return static_cast<int>(features.rows()); }
    int dim() const { return static_cast<int>(features.cols()); }

    void validate() const;

    TrialSet subset(const std::vector<int>& rows) const;
};

/// Per-subject trial sets sharing one layout.
struct TaskCollection {
    std::vector<TrialSet> tasks;

    int task_count() const { return static_cast<int>(tasks.size()); }
    int dim() const { return tasks.empty() ? 0 : tasks.front().dim(); }
    const SensorLayout& layout() const { return tasks.front().layout; }

    void validate() const;
};

/// Concatenates all tasks' trials into a single trial set.
TrialSet concatenate(const TaskCollection& tasks);

}  // namespace gsvm
