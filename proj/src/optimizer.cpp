#include "riskalloc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riskalloc {

namespace {

constexpr double kFractionFloor = 1e-15;
constexpr double kBoundaryFraction = 1e-3;
constexpr std::size_t kTieCap = 32;

Allocation zero_allocation(std::size_t d) {
    return {std::vector<double>(d, 0.0), 0.0};
}

AllocationResult trivial_result(std::size_t d, IndicatorKind kind, SolverChoice solver) {
    AllocationResult out;
    out.alloc = zero_allocation(d);
    out.indicator.kind = kind;
    out.solver = solver;
    out.residual.exceed_probs.assign(d, 0.0);
    return out;
}

void finalize_with_eval(AllocationResult& result, const SampleBatch& eval, IndicatorKind kind,
                        const PenaltyFn& penalty, double tolerance) {
    result.indicator = estimate_indicator(kind, eval, result.alloc, penalty);
    result.residual = optimality_residual(kind, eval, result.alloc);
    result.residual_threshold =
        tolerance >= 0.0 ? tolerance : 3.0 * result.residual.spread_std_error;
    result.residual_ok = result.residual.max_spread <= result.residual_threshold;
    double min_part = *std::min_element(result.alloc.parts.begin(), result.alloc.parts.end());
    if (min_part <= kBoundaryFraction * result.alloc.total) result.boundary_optimum = true;
}

// Gradient of the empirical indicator at `alloc` on `batch`, either the
// analytic subgradient or central differences along the simplex tangent
// directions e_i - e_d (last component pinned to zero; only differences
// matter on the simplex).
std::vector<double> iteration_gradient(GradientSource source, IndicatorKind kind,
                                       const SampleBatch& batch, const Allocation& alloc,
                                       const PenaltyFn& penalty, double span) {
    if (source == GradientSource::analytic) {
        return estimate_subgradient(kind, batch, alloc, penalty);
    }
    const std::size_t d = alloc.size();
    const double u = alloc.total;
    std::vector<double> grad(d, 0.0);
    std::vector<double> point(d);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        point.assign(alloc.parts.begin(), alloc.parts.end());
        point[i] += span;
        point[d - 1] -= span;
        Allocation plus = simplex_project(point, u);
        point[i] -= 2.0 * span;
        point[d - 1] += 2.0 * span;
        Allocation minus = simplex_project(point, u);
        double f_plus = estimate_indicator(kind, batch, plus, penalty).value;
        double f_minus = estimate_indicator(kind, batch, minus, penalty).value;
        grad[i] = (f_plus - f_minus) / (2.0 * span);
    }
    return grad;
}

enum class StepRule { entropic, euclidean };

// Copy a wrapped-around slice of the CRN window into a minibatch.
SampleBatch window_slice(const SampleBatch& window, std::size_t first, std::size_t count) {
    SampleBatch out;
    out.n = count;
    out.d = window.d;
    out.seed = window.seed;
    out.model_digest = window.model_digest;
    out.data.resize(count * window.d);
    out.row_sums.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t src = (first + i) % window.n;
        std::copy_n(window.data.begin() + src * window.d, window.d,
                    out.data.begin() + i * window.d);
        out.row_sums[i] = window.row_sums[src];
    }
    return out;
}

AllocationResult stochastic_descent(StepRule rule, const RiskModel& model, double u,
                                    IndicatorKind kind, const PenaltyFn& penalty,
                                    const OptimizerConfig& config, std::uint64_t seed) {
    config.validate();
    if (model.dimension() < 2) {
        throw std::invalid_argument("stochastic solvers need at least two lines");
    }
    if (!(u >= 0.0)) throw std::invalid_argument("capital must be >= 0");
    const SolverChoice tag =
        rule == StepRule::entropic ? SolverChoice::mirror_kw : SolverChoice::projected_sgd;
    const std::size_t d = model.dimension();
    if (u == 0.0) return trivial_result(d, kind, tag);

    // Iteration minibatches cycle over the CRN window rows [0, eval_samples),
    // so residual diagnostics on that window measure how well the returned
    // point equalizes the probabilities the solver was actually driven by.
    // The reported indicator estimate comes from rows the optimizer never
    // touched.
    SampleBatch window = sample_rows(model, 0, config.eval_samples, seed);

    std::vector<double> fractions(d, 1.0 / static_cast<double>(d));
    std::vector<double> parts(d);
    std::vector<double> fraction_sum(d, 0.0);
    std::size_t averaged = 0;
    const std::size_t first_averaged =
        config.iterations -
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil(config.averaging_window *
                                               static_cast<double>(config.iterations))));
    double grad_scale = 0.0;

    AllocationResult result;
    result.solver = tag;
    result.trace.reserve(config.iterations);

    for (std::size_t t = 1; t <= config.iterations; ++t) {
        const std::size_t row_base = ((t - 1) * config.batch_per_iter) % window.n;
        SampleBatch batch = window_slice(window, row_base, config.batch_per_iter);

        for (std::size_t k = 0; k < d; ++k) parts[k] = u * fractions[k];
        Allocation iterate = make_allocation(parts, u);

        const double t_real = static_cast<double>(t);
        const double span = config.fd_span_c * u / std::pow(t_real, config.fd_span_beta);
        std::vector<double> grad =
            iteration_gradient(config.gradient, kind, batch, iterate, penalty, span);

        double magnitude = 0.0;
        for (double g : grad) magnitude = std::max(magnitude, std::abs(g));
        grad_scale = std::max(grad_scale, magnitude);

        double step = config.step_a / std::pow(t_real, config.step_alpha);
        if (grad_scale > 0.0) {
            if (rule == StepRule::entropic) {
                double norm = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    fractions[k] = std::max(fractions[k], kFractionFloor) *
                                   std::exp(-step * grad[k] / grad_scale);
                    norm += fractions[k];
                }
                for (double& f : fractions) f /= norm;
            } else {
                for (std::size_t k = 0; k < d; ++k) {
                    parts[k] = u * fractions[k] - step * u * (grad[k] / grad_scale);
                }
                Allocation projected = simplex_project(parts, u);
                for (std::size_t k = 0; k < d; ++k) fractions[k] = projected.parts[k] / u;
            }
        }

        for (std::size_t k = 0; k < d; ++k) parts[k] = u * fractions[k];
        Allocation moved = make_allocation(parts, u);
        result.trace.push_back(
            {t, moved.parts, step, estimate_indicator(kind, batch, moved, penalty).value});

        if (t > first_averaged) {
            for (std::size_t k = 0; k < d; ++k) fraction_sum[k] += fractions[k];
            ++averaged;
        }
    }

    for (std::size_t k = 0; k < d; ++k) {
        parts[k] = u * (fraction_sum[k] / static_cast<double>(averaged));
    }
    result.alloc = make_allocation(parts, u);

    // Residuals on the CRN window; value estimate on fresh rows.
    finalize_with_eval(result, window, kind, penalty, config.tolerance);
    SampleBatch fresh = sample_rows(model, config.eval_samples, config.eval_samples, seed);
    result.indicator = estimate_indicator(kind, fresh, result.alloc, penalty);
    return result;
}

}  // namespace

const char* solver_name(SolverChoice solver) {
    switch (solver) {
        case SolverChoice::mirror_kw: return "mirror_kw";
        case SolverChoice::projected_sgd: return "projected_sgd";
        case SolverChoice::grid_oracle: return "grid_oracle";
        case SolverChoice::bivariate_bisection: return "bivariate_bisection";
    }
    return "unknown";
}

SolverChoice solver_from_name(const std::string& name) {
    if (name == "mirror_kw") return SolverChoice::mirror_kw;
    if (name == "projected_sgd") return SolverChoice::projected_sgd;
    if (name == "grid_oracle") return SolverChoice::grid_oracle;
    if (name == "bivariate_bisection") return SolverChoice::bivariate_bisection;
    throw std::invalid_argument("unknown solver: " + name);
}

void OptimizerConfig::validate() const {
    if (iterations == 0) throw std::invalid_argument("config: iterations must be >= 1");
    if (batch_per_iter == 0) throw std::invalid_argument("config: batch_per_iter must be >= 1");
    if (eval_samples < 2) throw std::invalid_argument("config: eval_samples must be >= 2");
    if (!(step_a > 0.0)) throw std::invalid_argument("config: step_a must be > 0");
    if (!(step_alpha > 0.5 && step_alpha <= 1.0)) {
        throw std::invalid_argument("config: step_alpha must lie in (0.5, 1]");
    }
    if (!(fd_span_c > 0.0)) throw std::invalid_argument("config: fd_span_c must be > 0");
    if (!(fd_span_beta > 0.0 && fd_span_beta < step_alpha)) {
        throw std::invalid_argument("config: fd_span_beta must lie in (0, step_alpha)");
    }
    if (!(averaging_window > 0.0 && averaging_window <= 1.0)) {
        throw std::invalid_argument("config: averaging_window must lie in (0, 1]");
    }
}

AllocationResult mirror_descent_kw(const RiskModel& model, double u, IndicatorKind kind,
                                   const PenaltyFn& penalty, const OptimizerConfig& config,
                                   std::uint64_t seed) {
    return stochastic_descent(StepRule::entropic, model, u, kind, penalty, config, seed);
}

AllocationResult projected_sgd(const RiskModel& model, double u, IndicatorKind kind,
                               const PenaltyFn& penalty, const OptimizerConfig& config,
                               std::uint64_t seed) {
    return stochastic_descent(StepRule::euclidean, model, u, kind, penalty, config, seed);
}

AllocationResult grid_search_oracle(const SampleBatch& batch, double u, IndicatorKind kind,
                                    const PenaltyFn& penalty, double resolution) {
    const std::size_t d = batch.d;
    if (d > 4) {
        throw std::invalid_argument(
            "grid_search_oracle: refusing d > 4 (lattice size grows as (u/resolution)^(d-1))");
    }
    if (!(resolution > 0.0)) throw std::invalid_argument("grid_search_oracle: resolution must be > 0");
    if (!(u >= 0.0)) throw std::invalid_argument("grid_search_oracle: u must be >= 0");
    if (u == 0.0) {
        AllocationResult out = trivial_result(d, kind, SolverChoice::grid_oracle);
        finalize_with_eval(out, batch, kind, penalty, -1.0);
        return out;
    }

    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(u / resolution)));
    const double step = u / static_cast<double>(m);

    // Count lattice points C(m + d - 1, d - 1) before materializing them.
    double approx_points = 1.0;
    for (std::size_t j = 1; j < d; ++j) {
        approx_points *= static_cast<double>(m + j) / static_cast<double>(j);
    }
    if (approx_points > 2.0e7) {
        throw std::runtime_error("grid_search_oracle: lattice memory bound exceeded");
    }

    // Lexicographically ascending compositions of m into d parts.
    std::vector<std::vector<std::size_t>> points;
    points.reserve(static_cast<std::size_t>(approx_points) + 1);
    std::vector<std::size_t> comp(d, 0);
    for (;;) {
        std::size_t used = 0;
        for (std::size_t k = 0; k + 1 < d; ++k) used += comp[k];
        comp[d - 1] = m - used;
        points.push_back(comp);
        // Odometer over the first d-1 digits with digit sums <= m.
        std::size_t pos = d - 1;
        while (pos-- > 0) {
            ++comp[pos];
            std::size_t partial = 0;
            for (std::size_t k = 0; k + 1 < d; ++k) partial += comp[k];
            if (partial <= m) break;
            comp[pos] = 0;
            if (pos == 0) {
                pos = SIZE_MAX;
                break;
            }
        }
        if (pos == SIZE_MAX) break;
        if (d == 1) break;
    }

    auto lattice_alloc = [&](const std::vector<std::size_t>& c) {
        std::vector<double> parts(d);
        for (std::size_t k = 0; k < d; ++k) parts[k] = step * static_cast<double>(c[k]);
        return make_allocation(std::move(parts), u);
    };

    std::vector<double> values(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i) {
        values[static_cast<std::size_t>(i)] =
            estimate_indicator(kind, batch, lattice_alloc(points[static_cast<std::size_t>(i)]),
                               penalty)
                .value;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[best]) best = i;
    }

    AllocationResult out;
    out.solver = SolverChoice::grid_oracle;
    out.alloc = lattice_alloc(points[best]);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == values[best]) {
            ++out.tie_count;
            if (i != best && out.tie_allocations.size() < kTieCap) {
                out.tie_allocations.push_back(lattice_alloc(points[i]).parts);
            }
        }
    }
    out.tie = out.tie_count > 1;
    finalize_with_eval(out, batch, kind, penalty, -1.0);
    return out;
}

AllocationResult solve_bivariate(const SampleBatch& batch, double u, IndicatorKind kind) {
    if (batch.d != 2) throw std::invalid_argument("solve_bivariate: batch must have d = 2");
    if (!(u >= 0.0)) throw std::invalid_argument("solve_bivariate: u must be >= 0");
    const PenaltyFn penalty = PenaltyFn::absolute();
    if (u == 0.0) {
        AllocationResult out = trivial_result(2, kind, SolverChoice::bivariate_bisection);
        finalize_with_eval(out, batch, kind, penalty, -1.0);
        return out;
    }

    const std::size_t n = batch.n;
    auto residual_at = [&](double v) {
        std::size_t c1 = 0, c2 = 0;
        for (std::size_t r = 0; r < n; ++r) {
            const double s = batch.row_sums[r];
            const bool event = kind == IndicatorKind::I ? s <= u : s >= u;
            if (!event) continue;
            if (batch.at(r, 0) > v) ++c1;
            if (batch.at(r, 1) > u - v) ++c2;
        }
        return (static_cast<double>(c1) - static_cast<double>(c2)) / static_cast<double>(n);
    };

    AllocationResult out;
    out.solver = SolverChoice::bivariate_bisection;
    const double width = 1e-6 * u;
    double lo = 0.0, hi = u;
    double r_lo = residual_at(lo), r_hi = residual_at(hi);
    if (r_lo <= 0.0 || r_hi >= 0.0) {
        // Residual never changes sign: the optimum sits on a boundary.
        Allocation at_zero = make_allocation({0.0, u}, u);
        Allocation at_u = make_allocation({u, 0.0}, u);
        double f0 = estimate_indicator(kind, batch, at_zero, penalty).value;
        double fu = estimate_indicator(kind, batch, at_u, penalty).value;
        out.alloc = f0 <= fu ? at_zero : at_u;
        out.boundary_optimum = true;
    } else {
        while (hi - lo > width) {
            double mid = 0.5 * (lo + hi);
            if (residual_at(mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        double v = 0.5 * (lo + hi);
        out.alloc = make_allocation({v, u - v}, u);
    }
    finalize_with_eval(out, batch, kind, penalty, -1.0);
    return out;
}

Allocation proportional_baseline(const SampleBatch& batch, double u) {
    if (batch.n == 0) throw std::invalid_argument("proportional_baseline: empty batch");
    if (!(u >= 0.0)) throw std::invalid_argument("proportional_baseline: u must be >= 0");
    const std::size_t d = batch.d;
    std::vector<double> means(d, 0.0);
    for (std::size_t r = 0; r < batch.n; ++r) {
        for (std::size_t k = 0; k < d; ++k) means[k] += batch.at(r, k);
    }
    double total_mean = 0.0;
    for (double& m : means) {
        m /= static_cast<double>(batch.n);
        total_mean += m;
    }
    if (!(total_mean > 0.0)) {
        throw std::domain_error("proportional_baseline: total mean must be positive");
    }
    std::vector<double> parts(d);
    for (std::size_t k = 0; k < d; ++k) parts[k] = u * means[k] / total_mean;
    return make_allocation(std::move(parts), u);
}

}  // namespace riskalloc
