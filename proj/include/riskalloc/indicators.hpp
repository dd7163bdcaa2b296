#pragma once

#include <cstddef>
#include <vector>

#include "riskalloc/allocation.hpp"
#include "riskalloc/penalty.hpp"
#include "riskalloc/risk_model.hpp"

namespace riskalloc {

// The two ruin-severity indicators. Both aggregate expected penalties of
// local ruins g(u_k - X_k) on {X_k > u_k}; they differ in the aggregate
// event: I restricts to rows with S <= u (group stays solvent), J to rows
// with S >= u (group insolvent). Ties S == u fall in both events.
enum class IndicatorKind { I, J };

struct IndicatorEstimate {
    double value = 0.0;      // sample mean of the row statistic, >= 0
    double std_error = 0.0;  // standard error of that mean
    std::size_t n = 0;
    IndicatorKind kind = IndicatorKind::I;
};

// Per-line empirical exceedance probabilities P(X_k > u_k, event) and their
// spread; at an interior optimum with the absolute penalty the spread is
// statistically indistinguishable from zero.
struct ResidualDiagnostics {
    std::vector<double> exceed_probs;
    double max_spread = 0.0;
    // CRN standard error of the spread: the sample s.e. of the row-indicator
    // difference between the argmax and argmin lines.
    double spread_std_error = 0.0;
};

struct SumIdentity {
    double lhs = 0.0;  // I + J over rows with S != u
    double rhs = 0.0;  // unconditioned penalty mean over the same rows
    std::size_t tie_rows = 0;
};

// Monte Carlo value of the indicator on a batch.
IndicatorEstimate estimate_indicator(IndicatorKind kind, const SampleBatch& batch,
                                     const Allocation& alloc, const PenaltyFn& penalty);

// Coordinate-varying part of the indicator gradient,
//   component k = mean of g'(u_k - X_k) 1{X_k > u_k} 1{event}.
// The density term shared by every coordinate is omitted: it cancels in the
// stationarity condition on the simplex, where only coordinate differences
// matter. Components are <= 0 with this sign convention; for the absolute
// penalty component k equals -P(X_k > u_k, event).
std::vector<double> estimate_subgradient(IndicatorKind kind, const SampleBatch& batch,
                                         const Allocation& alloc, const PenaltyFn& penalty);

// Stationarity diagnostics for the absolute penalty (probability form).
ResidualDiagnostics optimality_residual(IndicatorKind kind, const SampleBatch& batch,
                                        const Allocation& alloc);

// Partition identity: with rows tied at S == u excluded, the two indicator
// estimates add up to the unconditioned penalty mean, row by row.
SumIdentity indicator_sum_identity(const SampleBatch& batch, const Allocation& alloc,
                                   const PenaltyFn& penalty);

}  // namespace riskalloc
