#pragma once

#include <stdexcept>
#include <string>

namespace gsvm {

enum class RegKind { L2, L1, GroupLq, AdaptiveGroupLq };

/// Regularizer choice with strength lambda; q is the inner norm exponent
/// for the group kinds.
struct RegularizerSpec {
    RegKind kind = RegKind::L2;
    double q = 2.0;
    double lambda = 1.0;

    bool grouped() const {
        return kind == RegKind::GroupLq || kind == RegKind::AdaptiveGroupLq;
    }

    void validate() const {
        if (!(lambda > 0.0)) {
            throw std::invalid_argument("regularizer: lambda must be positive");
        }
        if (grouped() && !(q >= 1.0 && q <= 2.0)) {
            throw std::invalid_argument("regularizer: q must lie in [1, 2]");
        }
    }
};

inline std::string reg_kind_name(RegKind kind) {
    switch (kind) {
        case RegKind::L2: return "l2";
        case RegKind::L1: return "l1";
        case RegKind::GroupLq: return "group_lq";
        case RegKind::AdaptiveGroupLq: return "adaptive_group_lq";
    }
    return "unknown";
}

inline RegKind reg_kind_from_name(const std::string& name) {
    if (name == "l2") return RegKind::L2;
    if (name == "l1") return RegKind::L1;
    if (name == "group_lq") return RegKind::GroupLq;
    if (name == "adaptive_group_lq") return RegKind::AdaptiveGroupLq;
    throw std::invalid_argument("regularizer: unknown kind '" + name + "'");
}

}  // namespace gsvm
