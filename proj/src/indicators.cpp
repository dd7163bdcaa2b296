#include "riskalloc/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskalloc {

namespace {

void check_inputs(const SampleBatch& batch, const Allocation& alloc) {
    if (batch.n == 0) throw std::invalid_argument("indicator: empty batch");
    if (batch.d != alloc.size()) {
        throw std::invalid_argument("indicator: batch and allocation dimensions differ");
    }
}

inline bool in_event(IndicatorKind kind, double s, double u) {
    return kind == IndicatorKind::I ? s <= u : s >= u;
}

}  // namespace

IndicatorEstimate estimate_indicator(IndicatorKind kind, const SampleBatch& batch,
                                     const Allocation& alloc, const PenaltyFn& penalty) {
    check_inputs(batch, alloc);
    const std::size_t n = batch.n, d = batch.d;
    const double u = alloc.total;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double stat = 0.0;
        if (in_event(kind, batch.row_sums[r], u)) {
            const double* row = batch.data.data() + r * d;
            for (std::size_t k = 0; k < d; ++k) {
                if (row[k] > alloc.parts[k]) {
                    stat += penalty.severity(alloc.parts[k] - row[k]);
                }
            }
        }
        sum += stat;
        sumsq += stat * stat;
    }
    const double mean = sum / static_cast<double>(n);
    double se = 0.0;
    if (n > 1) {
        double var = (sumsq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
        se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return {mean, se, n, kind};
}

std::vector<double> estimate_subgradient(IndicatorKind kind, const SampleBatch& batch,
                                         const Allocation& alloc, const PenaltyFn& penalty) {
    check_inputs(batch, alloc);
    const std::size_t n = batch.n, d = batch.d;
    const double u = alloc.total;
    std::vector<double> grad(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        if (!in_event(kind, batch.row_sums[r], u)) continue;
        const double* row = batch.data.data() + r * d;
        for (std::size_t k = 0; k < d; ++k) {
            if (row[k] > alloc.parts[k]) {
                grad[k] += penalty.derivative(alloc.parts[k] - row[k]);
            }
        }
    }
    for (double& g : grad) g /= static_cast<double>(n);
    return grad;
}

ResidualDiagnostics optimality_residual(IndicatorKind kind, const SampleBatch& batch,
                                        const Allocation& alloc) {
    check_inputs(batch, alloc);
    const std::size_t n = batch.n, d = batch.d;
    const double u = alloc.total;
    std::vector<std::size_t> counts(d, 0);
    for (std::size_t r = 0; r < n; ++r) {
        if (!in_event(kind, batch.row_sums[r], u)) continue;
        const double* row = batch.data.data() + r * d;
        for (std::size_t k = 0; k < d; ++k) {
            if (row[k] > alloc.parts[k]) ++counts[k];
        }
    }
    ResidualDiagnostics out;
    out.exceed_probs.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        out.exceed_probs[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
    }
    auto [lo_it, hi_it] = std::minmax_element(out.exceed_probs.begin(), out.exceed_probs.end());
    const std::size_t lo = static_cast<std::size_t>(lo_it - out.exceed_probs.begin());
    const std::size_t hi = static_cast<std::size_t>(hi_it - out.exceed_probs.begin());
    out.max_spread = *hi_it - *lo_it;
    if (n > 1 && hi != lo) {
        // Same-batch difference of the two Bernoulli row indicators.
        std::size_t joint = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (!in_event(kind, batch.row_sums[r], u)) continue;
            const double* row = batch.data.data() + r * d;
            if (row[hi] > alloc.parts[hi] && row[lo] > alloc.parts[lo]) ++joint;
        }
        const double p_hi = out.exceed_probs[hi], p_lo = out.exceed_probs[lo];
        const double p_joint = static_cast<double>(joint) / static_cast<double>(n);
        double var = p_hi + p_lo - 2.0 * p_joint - (p_hi - p_lo) * (p_hi - p_lo);
        out.spread_std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return out;
}

SumIdentity indicator_sum_identity(const SampleBatch& batch, const Allocation& alloc,
                                   const PenaltyFn& penalty) {
    check_inputs(batch, alloc);
    const std::size_t n = batch.n, d = batch.d;
    const double u = alloc.total;
    SumIdentity out;
    double sum_i = 0.0, sum_j = 0.0, sum_all = 0.0;
    std::size_t kept = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const double s = batch.row_sums[r];
        if (s == u) {
            ++out.tie_rows;
            continue;
        }
        ++kept;
        double stat = 0.0;
        const double* row = batch.data.data() + r * d;
        for (std::size_t k = 0; k < d; ++k) {
            if (row[k] > alloc.parts[k]) {
                stat += penalty.severity(alloc.parts[k] - row[k]);
            }
        }
        sum_all += stat;
        if (s < u) {
            sum_i += stat;
        } else {
            sum_j += stat;
        }
    }
    if (kept > 0) {
        out.lhs = (sum_i + sum_j) / static_cast<double>(kept);
        out.rhs = sum_all / static_cast<double>(kept);
    }
    return out;
}

}  // namespace riskalloc
