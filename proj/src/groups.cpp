#include "gsvm/groups.hpp"

#include <cmath>
#include <stdexcept>

namespace gsvm {

void GroupPartition::validate() const {
    if (dim < 1) {
        throw std::invalid_argument("partition: ambient dimension must be >= 1");
    }
    std::vector<char> seen(static_cast<std::size_t>(dim), 0);
    for (const Group& g : groups) {
        if (g.indices.empty()) {
            throw std::invalid_argument("partition: groups must be non-empty");
        }
        if (!g.eliminated && !(g.weight > 0.0 && std::isfinite(g.weight))) {
            throw std::invalid_argument("partition: weights must be finite and positive");
        }
        for (int idx : g.indices) {
            if (idx < 0 || idx >= dim) {
                throw std::invalid_argument("partition: index out of range");
            }
            if (seen[static_cast<std::size_t>(idx)]) {
                throw std::invalid_argument("partition: groups must be disjoint");
            }
            seen[static_cast<std::size_t>(idx)] = 1;
        }
    }
    for (char s : seen) {
        if (!s) throw std::invalid_argument("partition: groups must cover every index");
    }
}

GroupPartition sensor_groups(const SensorLayout& layout) {
    layout.validate();
    GroupPartition part;
    part.dim = layout.dim();
    part.groups.resize(static_cast<std::size_t>(layout.sensors));
    for (int g = 0; g < layout.sensors; ++g) {
        Group& group = part.groups[static_cast<std::size_t>(g)];
        group.indices.reserve(static_cast<std::size_t>(layout.features_per_sensor));
        for (int j = 0; j < layout.features_per_sensor; ++j) {
            group.indices.push_back(g * layout.features_per_sensor + j);
        }
    }
    return part;
}

GroupPartition build_mtl_groups(const SensorLayout& layout, int task_count) {
    layout.validate();
    if (task_count < 1) {
        throw std::invalid_argument("mtl groups: task count must be >= 1");
    }
    const int d = layout.dim();
    GroupPartition part;
    part.dim = d * task_count;
    part.groups.resize(static_cast<std::size_t>(layout.sensors));
    for (int g = 0; g < layout.sensors; ++g) {
        Group& group = part.groups[static_cast<std::size_t>(g)];
        group.indices.reserve(
            static_cast<std::size_t>(layout.features_per_sensor * task_count));
        for (int t = 0; t < task_count; ++t) {
            for (int j = 0; j < layout.features_per_sensor; ++j) {
                group.indices.push_back(t * d + g * layout.features_per_sensor + j);
            }
        }
    }
    return part;
}

}  // namespace gsvm
