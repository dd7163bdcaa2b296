#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riskalloc/optimizer.hpp"

namespace riskalloc {

// Executable counterparts of the allocation coherence axioms and the
// companion desirable properties. Every check solves its allocation
// problem(s) under common random numbers (shared root seed, aligned column
// substreams) and reports an observed deviation against a threshold.
enum class Property {
    full_allocation,
    symmetry,
    riskless,
    subadditivity_empirical,
    comonotonic_additivity,
    positive_homogeneity,
    translation_invariance,
    continuity,
    monotonicity,
};

const char* property_name(Property property);
Property property_from_name(const std::string& name);

struct CaseParams {
    std::size_t line_i = 0;  // designated pair, symmetry/monotonicity
    std::size_t line_j = 1;
    double riskless_capital = 0.0;     // c
    double alpha = 1.0;                // homogeneity factor
    bool crn_mode = true;              // homogeneity: same seed (exact) vs fresh seed
    std::vector<double> shifts;        // translation
    std::vector<double> epsilons;      // continuity, decreasing positive
    std::size_t perturb_line = 0;      // continuity
    std::vector<std::size_t> subset;   // merge set, additivity / sub-additivity
};

struct PropertyCase {
    std::string id;
    Property property = Property::full_allocation;
    RiskModel model{{MarginalSpec::exponential(1.0)}, DependenceSpec::independent()};
    double u = 1.0;
    IndicatorKind kind = IndicatorKind::I;
    PenaltyFn penalty = PenaltyFn::absolute();
    SolverChoice solver = SolverChoice::grid_oracle;
    double tolerance = 0.02;         // allocation units, as a fraction of u
    std::uint64_t seed = 0;
    std::size_t sample_size = 100000;   // batch size for batch-based solvers
    double grid_resolution = 0.01;      // lattice pitch as a fraction of capital
    CaseParams params;
    bool evidence_only = false;  // reported, never gates the suite
};

struct PropertyReport {
    std::string case_id;
    Property property = Property::full_allocation;
    std::string model_digest;
    IndicatorKind kind = IndicatorKind::I;
    double observed_deviation = 0.0;
    double threshold = 0.0;
    bool passed = false;
    bool skipped = false;
    bool evidence_only = false;
    std::string skipped_reason;
    std::string details;
};

// Solver hook so the harness can be exercised against stubs; the default
// dispatches on PropertyCase::solver with the case's budget.
using SolveFn = std::function<Allocation(const RiskModel& model, double u, IndicatorKind kind,
                                         const PenaltyFn& penalty, SolverChoice solver,
                                         std::uint64_t seed, const PropertyCase& ctx)>;

Allocation default_solve(const RiskModel& model, double u, IndicatorKind kind,
                         const PenaltyFn& penalty, SolverChoice solver, std::uint64_t seed,
                         const PropertyCase& ctx);

PropertyReport check_full_allocation(const PropertyCase& c, const SolveFn& solve = default_solve);
PropertyReport check_symmetry(const PropertyCase& c, const SolveFn& solve = default_solve);
PropertyReport check_riskless(const PropertyCase& c, const SolveFn& solve = default_solve);
PropertyReport check_comonotonic_additivity(const PropertyCase& c,
                                            const SolveFn& solve = default_solve);
PropertyReport check_positive_homogeneity(const PropertyCase& c,
                                          const SolveFn& solve = default_solve);
PropertyReport check_translation_invariance(const PropertyCase& c,
                                            const SolveFn& solve = default_solve);
PropertyReport check_continuity(const PropertyCase& c, const SolveFn& solve = default_solve);
PropertyReport check_monotonicity(const PropertyCase& c, const SolveFn& solve = default_solve);
PropertyReport check_subadditivity_empirical(const PropertyCase& c,
                                             const SolveFn& solve = default_solve);

PropertyReport run_case(const PropertyCase& c, const SolveFn& solve = default_solve);

// Cases may run in parallel; each derives its randomness from its own seed,
// so the reports do not depend on scheduling.
std::vector<PropertyReport> run_suite(const std::vector<PropertyCase>& cases,
                                      const SolveFn& solve = default_solve);

// Versioned default scenario families; seeds derive from root_seed per case.
inline constexpr int kSuiteVersion = 1;
inline constexpr std::uint64_t kDefaultSuiteSeed = 20250901;
std::vector<PropertyCase> default_suite(std::uint64_t root_seed = kDefaultSuiteSeed);

// True when every non-skipped, non-evidence report passed.
bool suite_passed(const std::vector<PropertyReport>& reports);

}  // namespace riskalloc
