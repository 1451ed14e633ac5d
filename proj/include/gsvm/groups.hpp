#pragma once

#include <vector>

#include "gsvm/trial_set.hpp"

namespace gsvm {

/// One index group with its penalty weight. An eliminated group is
/// constrained to zero (the limit of an infinite weight, kept as an
/// explicit flag so no non-finite arithmetic is needed).
struct Group {
    std::vector<int> indices;
    double weight = 1.0;
    bool eliminated = false;
};

/// Disjoint, non-empty index groups covering {0..dim-1}.
struct GroupPartition {
    std::vector<Group> groups;
    int dim = 0;

    int size() const { return static_cast<int>(groups.size()); }
    void validate() const;
};

/// One group of r contiguous columns per sensor, unit weights.
GroupPartition sensor_groups(const SensorLayout& layout);

/// Groups over task-stacked coordinates (coordinate (t, j) maps to index
/// t*d + j): group g collects sensor g's columns from every task, giving
/// p groups of r*task_count indices.
GroupPartition build_mtl_groups(const SensorLayout& layout, int task_count);

}  // namespace gsvm
