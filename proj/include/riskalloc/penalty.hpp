#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace riskalloc {

enum class PenaltyKind { absolute, power };

// Convex ruin-severity penalty g on the negative half line, g(0) = 0.
// `absolute` is g(x) = |x|; `power` is g(x) = |x|^p with p >= 1. The
// derivative uses the orientation of x -> g(x) for x < 0, so g'(x) = -1 for
// the absolute penalty; estimators inherit this sign.
struct PenaltyFn {
    PenaltyKind kind = PenaltyKind::absolute;
    double p = 1.0;

    static PenaltyFn absolute() { return {PenaltyKind::absolute, 1.0}; }
    static PenaltyFn power(double p) {
        if (!(p >= 1.0)) throw std::invalid_argument("power penalty needs p >= 1");
        return {PenaltyKind::power, p};
    }

    // g(x) for x <= 0.
    double severity(double x) const {
        double a = -x;
        return kind == PenaltyKind::absolute ? a : std::pow(a, p);
    }

    // g'(x) for x < 0; always <= 0.
    double derivative(double x) const {
        if (kind == PenaltyKind::absolute) return -1.0;
        return -p * std::pow(-x, p - 1.0);
    }

    bool one_homogeneous() const { return kind == PenaltyKind::absolute || p == 1.0; }

    std::string label() const {
        return kind == PenaltyKind::absolute ? "absolute" : "power(" + std::to_string(p) + ")";
    }
};

}  // namespace riskalloc
