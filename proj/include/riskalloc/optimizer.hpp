#pragma once

#include <cstdint>
#include <vector>

#include "riskalloc/allocation.hpp"
#include "riskalloc/indicators.hpp"
#include "riskalloc/penalty.hpp"
#include "riskalloc/risk_model.hpp"

namespace riskalloc {

enum class SolverChoice { mirror_kw, projected_sgd, grid_oracle, bivariate_bisection };
enum class GradientSource { analytic, finite_difference };

const char* solver_name(SolverChoice solver);
SolverChoice solver_from_name(const std::string& name);

// Schedules: step gamma_t = step_a / t^step_alpha (applied to the
// magnitude-normalized gradient in fraction space), finite-difference span
// c_t = fd_span_c * u / t^fd_span_beta (used only when gradients come from
// central differences instead of the analytic subgradient).
struct OptimizerConfig {
    std::size_t iterations = 600;
    double step_a = 0.5;
    double step_alpha = 0.51;
    double fd_span_c = 0.05;
    double fd_span_beta = 0.25;
    std::size_t batch_per_iter = 256;
    double averaging_window = 0.5;   // trailing fraction of iterates averaged
    double tolerance = -1.0;         // residual spread target; < 0 = auto (3 CRN s.e.)
    std::size_t eval_samples = 100000;
    GradientSource gradient = GradientSource::analytic;

    void validate() const;  // throws std::invalid_argument on schedule violations
};

struct TracePoint {
    std::size_t iteration = 0;
    std::vector<double> allocation;
    double step = 0.0;
    double indicator_estimate = 0.0;  // minibatch estimate at this iterate
};

struct AllocationResult {
    Allocation alloc;
    IndicatorEstimate indicator;    // on the evaluation batch
    ResidualDiagnostics residual;   // on the evaluation batch
    std::vector<TracePoint> trace;
    SolverChoice solver = SolverChoice::mirror_kw;
    bool boundary_optimum = false;
    double residual_threshold = 0.0;  // resolved tolerance for the spread
    bool residual_ok = true;
    bool tie = false;                 // grid oracle: several lattice minimizers
    std::size_t tie_count = 0;
    std::vector<std::vector<double>> tie_allocations;  // capped sample of ties
};

// Stochastic mirror descent with the negative-entropy map on the scaled
// simplex; gradients are analytic subgradients by default, or central
// differences on Kiefer-Wolfowitz spans. Iteration t consumes sample rows
// [eval_samples + (t-1)*batch, ...), so the evaluation rows [0, eval_samples)
// stay out of the optimization path.
AllocationResult mirror_descent_kw(const RiskModel& model, double u, IndicatorKind kind,
                                   const PenaltyFn& penalty, const OptimizerConfig& config,
                                   std::uint64_t seed);

// Same loop with a Euclidean projection step instead of the mirror map;
// cross-validates mirror_descent_kw.
AllocationResult projected_sgd(const RiskModel& model, double u, IndicatorKind kind,
                               const PenaltyFn& penalty, const OptimizerConfig& config,
                               std::uint64_t seed);

// Exhaustive lattice minimizer of the empirical indicator on a fixed batch.
// d <= 4 only; ties are broken to the lexicographically smallest allocation
// and reported.
AllocationResult grid_search_oracle(const SampleBatch& batch, double u, IndicatorKind kind,
                                    const PenaltyFn& penalty, double resolution);

// d = 2, absolute penalty: bisection on the monotone empirical residual
// r(v) = P(X_1 > v, event) - P(X_2 > u - v, event); bracket width 1e-6 u.
// A constant-sign residual yields the cheaper boundary, flagged.
AllocationResult solve_bivariate(const SampleBatch& batch, double u, IndicatorKind kind);

// u_k proportional to the column means of the batch.
Allocation proportional_baseline(const SampleBatch& batch, double u);

}  // namespace riskalloc
