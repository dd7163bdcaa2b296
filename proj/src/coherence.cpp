#include "riskalloc/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "riskalloc/rng.hpp"

namespace riskalloc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_parts(const std::vector<double>& parts) {
    std::string out = "(";
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) out += ",";
        out += fmt(parts[k]);
    }
    return out + ")";
}

PropertyReport base_report(const PropertyCase& c) {
    PropertyReport r;
    r.case_id = c.id;
    r.property = c.property;
    r.model_digest = c.model.digest();
    r.kind = c.kind;
    r.threshold = c.tolerance;
    r.evidence_only = c.evidence_only;
    return r;
}

PropertyReport skipped(const PropertyCase& c, const std::string& reason) {
    PropertyReport r = base_report(c);
    r.skipped = true;
    r.skipped_reason = reason;
    return r;
}

double ulp_of(double x) {
    double base = std::max(std::abs(x), 1.0);
    return std::nextafter(base, std::numeric_limits<double>::infinity()) - base;
}

bool is_power_of_two(double x) {
    int exp = 0;
    return x > 0.0 && std::frexp(x, &exp) == 0.5;
}

// Append an always-c line after the existing ones; existing lines keep their
// column substreams, so draws stay aligned under the same seed.
RiskModel with_deterministic_line(const RiskModel& base, double c) {
    if (base.is_merged()) {
        throw std::invalid_argument("with_deterministic_line: merged models unsupported");
    }
    const std::size_t d = base.dimension();
    std::vector<MarginalSpec> marginals = base.marginals();
    marginals.push_back(MarginalSpec::deterministic(c));
    std::vector<double> shift = base.shift();
    shift.push_back(0.0);

    DependenceSpec dep = base.dependence();
    switch (dep.kind) {
        case DepKind::gaussian_copula: {
            std::vector<double> ext((d + 1) * (d + 1), 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) ext[i * (d + 1) + j] = dep.correlation[i * d + j];
            }
            ext[d * (d + 1) + d] = 1.0;
            dep.correlation = std::move(ext);
            break;
        }
        case DepKind::comonotonic_groups:
            dep.groups.push_back({d});
            break;
        default:
            break;  // constant line is unaffected by the copula draw
    }
    RiskModel out(std::move(marginals), std::move(dep), std::move(shift));
    // Rebuild per-line scales lost by reconstruction.
    for (std::size_t k = 0; k < d; ++k) {
        if (base.scale()[k] != 1.0) out = out.scaled_line(k, base.scale()[k]);
    }
    return out;
}

// First-order stochastic dominance X_i <=_st X_j, decided analytically per
// family on the transformed lines; nullopt when the pair is incomparable.
std::optional<bool> st_dominated(const RiskModel& model, std::size_t i, std::size_t j) {
    if (model.is_merged()) return std::nullopt;
    const MarginalSpec& a = model.marginals()[i];
    const MarginalSpec& b = model.marginals()[j];
    const double sa = model.scale()[i], sb = model.scale()[j];
    const double ha = model.shift()[i], hb = model.shift()[j];

    if (a.family == Family::deterministic) {
        double c = sa * a.p1 - ha;
        double lo_b = sb * b.support_lower() - hb;
        if (lo_b >= c) return true;
        return std::nullopt;
    }
    if (a.family != b.family) return std::nullopt;
    switch (a.family) {
        case Family::exponential: {
            // scale s, shift -h: rate becomes rate/s, support starts at -h.
            double ra = a.p1 / sa, rb = b.p1 / sb;
            if (-ha <= -hb && ra >= rb) return true;
            if (-hb <= -ha && rb >= ra) return false;
            return std::nullopt;
        }
        case Family::lognormal: {
            if (ha != 0.0 || hb != 0.0) return std::nullopt;
            double mua = a.p1 + std::log(sa), mub = b.p1 + std::log(sb);
            if (a.p2 == b.p2) return mua <= mub;
            return std::nullopt;
        }
        case Family::pareto: {
            if (ha != 0.0 || hb != 0.0) return std::nullopt;
            double sca = sa * a.p2, scb = sb * b.p2;
            if (a.p1 >= b.p1 && sca <= scb) return true;
            if (b.p1 >= a.p1 && scb <= sca) return false;
            return std::nullopt;
        }
        case Family::uniform: {
            double loa = sa * a.p1 - ha, hia = sa * a.p2 - ha;
            double lob = sb * b.p1 - hb, hib = sb * b.p2 - hb;
            if (loa <= lob && hia <= hib) return true;
            if (lob <= loa && hib <= hia) return false;
            return std::nullopt;
        }
        case Family::deterministic:
            break;
    }
    return std::nullopt;
}

}  // namespace

const char* property_name(Property property) {
    switch (property) {
        case Property::full_allocation: return "full_allocation";
        case Property::symmetry: return "symmetry";
        case Property::riskless: return "riskless";
        case Property::subadditivity_empirical: return "subadditivity_empirical";
        case Property::comonotonic_additivity: return "comonotonic_additivity";
        case Property::positive_homogeneity: return "positive_homogeneity";
        case Property::translation_invariance: return "translation_invariance";
        case Property::continuity: return "continuity";
        case Property::monotonicity: return "monotonicity";
    }
    return "unknown";
}

Property property_from_name(const std::string& name) {
    for (Property p :
         {Property::full_allocation, Property::symmetry, Property::riskless,
          Property::subadditivity_empirical, Property::comonotonic_additivity,
          Property::positive_homogeneity, Property::translation_invariance, Property::continuity,
          Property::monotonicity}) {
        if (name == property_name(p)) return p;
    }
    throw std::invalid_argument("unknown property: " + name);
}

Allocation default_solve(const RiskModel& model, double u, IndicatorKind kind,
                         const PenaltyFn& penalty, SolverChoice solver, std::uint64_t seed,
                         const PropertyCase& ctx) {
    switch (solver) {
        case SolverChoice::grid_oracle: {
            SampleBatch batch = sample(model, ctx.sample_size, seed);
            return grid_search_oracle(batch, u, kind, penalty, ctx.grid_resolution * u).alloc;
        }
        case SolverChoice::bivariate_bisection: {
            SampleBatch batch = sample(model, ctx.sample_size, seed);
            return solve_bivariate(batch, u, kind).alloc;
        }
        case SolverChoice::mirror_kw:
        case SolverChoice::projected_sgd: {
            OptimizerConfig config;
            config.eval_samples = ctx.sample_size;
            auto fn = solver == SolverChoice::mirror_kw ? mirror_descent_kw : projected_sgd;
            return fn(model, u, kind, penalty, config, seed).alloc;
        }
    }
    throw std::logic_error("unreachable");
}

PropertyReport check_full_allocation(const PropertyCase& c, const SolveFn& solve) {
    PropertyReport r = base_report(c);
    Allocation a = solve(c.model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    double sum = std::accumulate(a.parts.begin(), a.parts.end(), 0.0);
    r.observed_deviation = std::abs(sum - c.u);
    r.threshold = ulp_of(c.u);
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "allocation=" + fmt_parts(a.parts);
    return r;
}

PropertyReport check_symmetry(const PropertyCase& c, const SolveFn& solve) {
    const std::size_t i = c.params.line_i, j = c.params.line_j;
    if (!c.model.pair_exchangeable(i, j)) {
        return skipped(c, "lines are not exchangeable in the model");
    }
    PropertyReport r = base_report(c);
    Allocation a = solve(c.model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    r.observed_deviation = std::abs(a.parts[i] - a.parts[j]) / c.u;
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "allocation=" + fmt_parts(a.parts);
    return r;
}

PropertyReport check_riskless(const PropertyCase& c, const SolveFn& solve) {
    const double riskless = c.params.riskless_capital;
    if (!c.penalty.one_homogeneous()) {
        return skipped(c, "penalty is not 1-homogeneous");
    }
    if (!(riskless >= 0.0 && riskless < c.u)) {
        return skipped(c, "riskless capital outside [0, u) is untested");
    }
    PropertyReport r = base_report(c);
    const std::size_t d = c.model.dimension();
    RiskModel extended = with_deterministic_line(c.model, riskless);
    Allocation with_det = solve(extended, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    Allocation risky = solve(c.model, c.u - riskless, c.kind, c.penalty, c.solver, c.seed, c);
    double dev = std::abs(with_det.parts[d] - riskless);
    for (std::size_t k = 0; k < d; ++k) {
        dev = std::max(dev, std::abs(with_det.parts[k] - risky.parts[k]));
    }
    r.observed_deviation = dev / c.u;
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "with_deterministic=" + fmt_parts(with_det.parts) +
                " risky_only=" + fmt_parts(risky.parts) + " c=" + fmt(riskless) +
                " (deterministic line appended last)";
    return r;
}

PropertyReport check_comonotonic_additivity(const PropertyCase& c, const SolveFn& solve) {
    const auto& subset = c.params.subset;
    if (c.penalty.kind != PenaltyKind::absolute) {
        return skipped(c, "comonotonic additivity is stated for the absolute penalty");
    }
    if (subset.size() < 2) return skipped(c, "need at least two lines to merge");
    for (std::size_t a = 0; a < subset.size(); ++a) {
        for (std::size_t b = a + 1; b < subset.size(); ++b) {
            if (!c.model.pair_comonotonic(subset[a], subset[b])) {
                return skipped(c, "designated lines are not comonotonic in the model");
            }
        }
    }
    PropertyReport r = base_report(c);
    Allocation full = solve(c.model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    const std::size_t d = c.model.dimension();

    if (subset.size() == d) {
        // Merging every line leaves the one-line problem with the whole u.
        double sum = std::accumulate(full.parts.begin(), full.parts.end(), 0.0);
        r.observed_deviation = std::abs(c.u - sum) / c.u;
        r.passed = r.observed_deviation <= r.threshold;
        r.details = "full merge; allocation=" + fmt_parts(full.parts);
        return r;
    }

    RiskModel merged_model = merge_lines(c.model, subset);
    Allocation merged = solve(merged_model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    double dev = 0.0;
    for (std::size_t k = 0; k < merged_model.dimension(); ++k) {
        double expected = 0.0;
        for (std::size_t src : merged_model.line_map()[k]) expected += full.parts[src];
        dev = std::max(dev, std::abs(merged.parts[k] - expected));
    }
    r.observed_deviation = dev / c.u;
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "full=" + fmt_parts(full.parts) + " merged=" + fmt_parts(merged.parts);
    return r;
}

PropertyReport check_positive_homogeneity(const PropertyCase& c, const SolveFn& solve) {
    const double alpha = c.params.alpha;
    if (!c.penalty.one_homogeneous()) {
        return skipped(c, "penalty is not 1-homogeneous");
    }
    if (!(alpha > 0.0)) throw std::invalid_argument("homogeneity: alpha must be > 0");
    PropertyReport r = base_report(c);
    Allocation base = solve(c.model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    std::uint64_t scaled_seed = c.params.crn_mode ? c.seed : rng::derive(c.seed, 0x5eed);
    PropertyCase scaled_ctx = c;
    scaled_ctx.u = alpha * c.u;
    Allocation scaled =
        solve(c.model.scaled(alpha), alpha * c.u, c.kind, c.penalty, c.solver, scaled_seed,
              scaled_ctx);
    double dev = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k) {
        dev = std::max(dev, std::abs(scaled.parts[k] - alpha * base.parts[k]));
    }
    r.observed_deviation = dev / (alpha * c.u);
    // Doubling/halving under shared draws is exact in binary arithmetic, so
    // the CRN variant is held to ulp scale, not a statistical band.
    if (c.params.crn_mode && is_power_of_two(alpha)) {
        r.threshold = ulp_of(alpha * c.u);
    }
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "alpha=" + fmt(alpha) + (c.params.crn_mode ? " crn" : " fresh-seed") +
                " base=" + fmt_parts(base.parts) + " scaled=" + fmt_parts(scaled.parts);
    return r;
}

PropertyReport check_translation_invariance(const PropertyCase& c, const SolveFn& solve) {
    const auto& shifts = c.params.shifts;
    if (shifts.size() != c.model.dimension()) {
        throw std::invalid_argument("translation: shifts length must match dimension");
    }
    double shift_sum = std::accumulate(shifts.begin(), shifts.end(), 0.0);
    if (!(c.u + shift_sum >= 0.0)) {
        return skipped(c, "translated capital u + sum(a) is negative");
    }
    if (!c.model.support_covers(c.u + shift_sum)) {
        return skipped(c, "joint support does not cover [0, u + sum(a)]^2");
    }
    PropertyReport r = base_report(c);
    PropertyCase base_ctx = c;
    base_ctx.u = c.u + shift_sum;
    Allocation base =
        solve(c.model, c.u + shift_sum, c.kind, c.penalty, c.solver, c.seed, base_ctx);
    Allocation shifted = solve(c.model.shifted(shifts), c.u, c.kind, c.penalty, c.solver, c.seed, c);
    double dev = 0.0;
    for (std::size_t k = 0; k < shifted.size(); ++k) {
        dev = std::max(dev, std::abs(shifted.parts[k] - (base.parts[k] - shifts[k])));
    }
    r.observed_deviation = dev / c.u;
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "shifted=" + fmt_parts(shifted.parts) + " base_at_u_plus_a=" + fmt_parts(base.parts);
    if (!c.model.shifted(shifts).non_negative_support()) {
        r.details += " [shifted supports extend below zero]";
    }
    return r;
}

PropertyReport check_continuity(const PropertyCase& c, const SolveFn& solve) {
    const auto& eps = c.params.epsilons;
    if (eps.empty()) throw std::invalid_argument("continuity: need an epsilon sequence");
    for (std::size_t k = 0; k < eps.size(); ++k) {
        // Decreasing and non-negative; a trailing zero probes the exact identity.
        if (!(eps[k] >= 0.0) || (k + 1 < eps.size() && !(eps[k + 1] < eps[k]))) {
            throw std::invalid_argument("continuity: epsilons must be decreasing and >= 0");
        }
    }
    PropertyReport r = base_report(c);
    Allocation base = solve(c.model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    std::vector<double> distances;
    for (double e : eps) {
        RiskModel perturbed = c.model.scaled_line(c.params.perturb_line, 1.0 + e);
        Allocation moved = solve(perturbed, c.u, c.kind, c.penalty, c.solver, c.seed, c);
        double dist = 0.0;
        for (std::size_t k = 0; k < base.size(); ++k) {
            dist = std::max(dist, std::abs(moved.parts[k] - base.parts[k]));
        }
        distances.push_back(dist / c.u);
    }
    bool monotone_within_noise = true;
    for (std::size_t k = 0; k + 1 < distances.size(); ++k) {
        if (distances[k + 1] > distances[k] + c.tolerance) monotone_within_noise = false;
    }
    r.observed_deviation = distances.back();
    r.passed = r.observed_deviation <= r.threshold && monotone_within_noise;
    r.details = "distances=";
    for (double dgt : distances) r.details += fmt(dgt) + " ";
    r.details += monotone_within_noise ? "(non-increasing within noise)" : "(sequence increased)";
    return r;
}

PropertyReport check_monotonicity(const PropertyCase& c, const SolveFn& solve) {
    const std::size_t i = c.params.line_i, j = c.params.line_j;
    std::optional<bool> dominated = st_dominated(c.model, i, j);
    if (!dominated.has_value()) {
        return skipped(c, "designated pair is not stochastically ordered");
    }
    std::size_t lo = *dominated ? i : j;
    std::size_t hi = *dominated ? j : i;
    PropertyReport r = base_report(c);
    Allocation a = solve(c.model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    r.observed_deviation = std::max(0.0, a.parts[lo] - a.parts[hi]) / c.u;
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "allocation=" + fmt_parts(a.parts) + " expected parts[" + std::to_string(lo) +
                "] <= parts[" + std::to_string(hi) + "]";
    return r;
}

PropertyReport check_subadditivity_empirical(const PropertyCase& c, const SolveFn& solve) {
    const auto& subset = c.params.subset;
    if (subset.empty() || subset.size() >= c.model.dimension()) {
        throw std::invalid_argument("sub-additivity: subset must be a non-empty proper subset");
    }
    PropertyReport r = base_report(c);
    r.evidence_only = true;
    Allocation full = solve(c.model, c.u, c.kind, c.penalty, c.solver, c.seed, c);
    RiskModel merged_model = merge_lines(c.model, subset);
    Allocation merged = solve(merged_model, c.u, c.kind, c.penalty, c.solver, c.seed, c);

    double merged_share = 0.0;
    double full_share = 0.0;
    for (std::size_t k = 0; k < merged_model.dimension(); ++k) {
        if (merged_model.line_map()[k].size() == subset.size() &&
            merged_model.line_map()[k].front() ==
                *std::min_element(subset.begin(), subset.end())) {
            merged_share = merged.parts[k];
            for (std::size_t src : merged_model.line_map()[k]) full_share += full.parts[src];
        }
    }
    r.observed_deviation = std::max(0.0, merged_share - full_share) / c.u;
    r.passed = r.observed_deviation <= r.threshold;
    r.details = "merged_share=" + fmt(merged_share) + " sum_of_parts=" + fmt(full_share) +
                " (evidence only, never gates)";
    return r;
}

PropertyReport run_case(const PropertyCase& c, const SolveFn& solve) {
    switch (c.property) {
        case Property::full_allocation: return check_full_allocation(c, solve);
        case Property::symmetry: return check_symmetry(c, solve);
        case Property::riskless: return check_riskless(c, solve);
        case Property::subadditivity_empirical: return check_subadditivity_empirical(c, solve);
        case Property::comonotonic_additivity: return check_comonotonic_additivity(c, solve);
        case Property::positive_homogeneity: return check_positive_homogeneity(c, solve);
        case Property::translation_invariance: return check_translation_invariance(c, solve);
        case Property::continuity: return check_continuity(c, solve);
        case Property::monotonicity: return check_monotonicity(c, solve);
    }
    throw std::logic_error("unreachable");
}

std::vector<PropertyReport> run_suite(const std::vector<PropertyCase>& cases,
                                      const SolveFn& solve) {
    std::vector<PropertyReport> reports(cases.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cases.size()); ++i) {
        reports[static_cast<std::size_t>(i)] = run_case(cases[static_cast<std::size_t>(i)], solve);
    }
    return reports;
}

bool suite_passed(const std::vector<PropertyReport>& reports) {
    for (const auto& r : reports) {
        if (!r.skipped && !r.evidence_only && !r.passed) return false;
    }
    return true;
}

std::vector<PropertyCase> default_suite(std::uint64_t root_seed) {
    std::vector<PropertyCase> cases;
    std::uint64_t ordinal = 0;
    auto next_seed = [&] { return rng::derive(root_seed, ordinal++); };

    const auto exp1 = MarginalSpec::exponential(1.0);
    const auto exp2 = MarginalSpec::exponential(2.0);
    const auto exp_half = MarginalSpec::exponential(0.5);
    const auto logn = MarginalSpec::lognormal(0.0, 0.5);

    RiskModel iid_exp2(std::vector<MarginalSpec>{exp1, exp1}, DependenceSpec::independent());
    RiskModel iid_exp3(std::vector<MarginalSpec>{exp1, exp1, exp1}, DependenceSpec::independent());
    RiskModel hetero2(std::vector<MarginalSpec>{exp1, exp2}, DependenceSpec::independent());
    RiskModel clayton3(std::vector<MarginalSpec>{exp1, exp1, exp1}, DependenceSpec::clayton(2.0));
    RiskModel pair_gauss3(std::vector<MarginalSpec>{exp1, exp1, exp_half},
                          DependenceSpec::gaussian({1.0, 0.5, 0.3,  //
                                                    0.5, 1.0, 0.3,  //
                                                    0.3, 0.3, 1.0}));
    RiskModel iid_logn2(std::vector<MarginalSpec>{logn, logn}, DependenceSpec::independent());
    // Lines 1,2 comonotonic (identical), line 0 independent of them.
    RiskModel comono_pair3(std::vector<MarginalSpec>{exp1, exp1, exp1},
                           DependenceSpec::comonotonic_groups_of({{0}, {1, 2}}));
    // Line 1 = 2 * line 0 inside d = 3.
    RiskModel scaled_pair3(std::vector<MarginalSpec>{exp1, exp_half, exp1},
                           DependenceSpec::comonotonic_groups_of({{0, 1}, {2}}));
    RiskModel comono_pair2(std::vector<MarginalSpec>{exp1, exp_half}, DependenceSpec::comonotonic());

    auto add = [&](std::string id, Property property, RiskModel model, double u,
                   IndicatorKind kind, SolverChoice solver, CaseParams params,
                   bool evidence = false) {
        PropertyCase c;
        c.id = std::move(id);
        c.property = property;
        c.model = std::move(model);
        c.u = u;
        c.kind = kind;
        c.solver = solver;
        c.seed = next_seed();
        c.params = std::move(params);
        c.evidence_only = evidence;
        cases.push_back(std::move(c));
    };

    // Full allocation: exact by construction for every solver.
    add("FA1-mirror-exchangeable", Property::full_allocation, iid_exp3, 3.0, IndicatorKind::I,
        SolverChoice::mirror_kw, {});
    add("FA2-grid-heterogeneous", Property::full_allocation, hetero2, 2.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {});
    add("FA3-sgd-clayton", Property::full_allocation, clayton3, 4.0, IndicatorKind::J,
        SolverChoice::projected_sgd, {});

    // Symmetry.
    add("SY1-grid-iid3", Property::symmetry, iid_exp3, 3.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.line_i = 0, .line_j = 1});
    add("SY2-grid-pair-gaussian", Property::symmetry, pair_gauss3, 3.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.line_i = 0, .line_j = 1});
    add("SY3-bisect-iid-lognormal", Property::symmetry, iid_logn2, 3.0, IndicatorKind::J,
        SolverChoice::bivariate_bisection, {.line_i = 0, .line_j = 1});

    // Riskless allocation.
    add("RL1-grid-c1", Property::riskless, iid_exp2, 3.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.riskless_capital = 1.0});
    add("RL2-grid-c0", Property::riskless, iid_exp2, 3.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.riskless_capital = 0.0});
    add("RL3-grid-c-near-u", Property::riskless, iid_exp2, 2.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.riskless_capital = 1.8});
    {
        PropertyCase c;
        c.id = "RL4-power-penalty-skip";
        c.property = Property::riskless;
        c.model = iid_exp2;
        c.u = 3.0;
        c.kind = IndicatorKind::I;
        c.penalty = PenaltyFn::power(2.0);
        c.solver = SolverChoice::grid_oracle;
        c.seed = next_seed();
        c.params.riskless_capital = 1.0;
        cases.push_back(std::move(c));
    }

    // Comonotonic additivity.
    add("CA1-grid-equal-pair", Property::comonotonic_additivity, comono_pair3, 3.0,
        IndicatorKind::I, SolverChoice::grid_oracle, {.subset = {1, 2}});
    add("CA2-full-merge", Property::comonotonic_additivity, comono_pair2, 3.0, IndicatorKind::I,
        SolverChoice::bivariate_bisection, {.subset = {0, 1}});
    add("CA3-grid-scaled-pair", Property::comonotonic_additivity, scaled_pair3, 3.0,
        IndicatorKind::I, SolverChoice::grid_oracle, {.subset = {0, 1}});

    // Positive homogeneity.
    add("PH1-mirror-crn-alpha2", Property::positive_homogeneity, hetero2, 2.0, IndicatorKind::I,
        SolverChoice::mirror_kw, {.alpha = 2.0, .crn_mode = true});
    add("PH2-grid-crn-alpha-half", Property::positive_homogeneity, clayton3, 3.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.alpha = 0.5, .crn_mode = true});
    add("PH3-bisect-fresh-seed", Property::positive_homogeneity, hetero2, 2.0, IndicatorKind::I,
        SolverChoice::bivariate_bisection, {.alpha = 0.5, .crn_mode = false});

    // Translation invariance.
    add("TI1-identity", Property::translation_invariance, iid_exp2, 2.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.shifts = {0.0, 0.0}});
    add("TI2-grid-symmetric-shift", Property::translation_invariance, iid_exp2, 2.0,
        IndicatorKind::I, SolverChoice::grid_oracle, {.shifts = {0.5, 0.5}});
    add("TI3-bisect-single-shift", Property::translation_invariance, hetero2, 2.0,
        IndicatorKind::I, SolverChoice::bivariate_bisection, {.shifts = {0.5, 0.0}});

    // Continuity.
    add("CT1-bisect", Property::continuity, hetero2, 2.0, IndicatorKind::I,
        SolverChoice::bivariate_bisection,
        {.epsilons = {0.1, 0.05, 0.01}, .perturb_line = 0});
    add("CT2-grid-exchangeable", Property::continuity, iid_exp3, 3.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.epsilons = {0.1, 0.05, 0.01}, .perturb_line = 0});

    // Monotonicity.
    add("MO1-bisect-exp-rates", Property::monotonicity, RiskModel({exp2, exp1},
                                                                  DependenceSpec::independent()),
        2.0, IndicatorKind::I, SolverChoice::bivariate_bisection, {.line_i = 0, .line_j = 1});
    add("MO2-grid-identical", Property::monotonicity, iid_exp2, 2.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.line_i = 0, .line_j = 1});
    add("MO3-grid-det-vs-shifted-exp", Property::monotonicity,
        RiskModel({MarginalSpec::deterministic(1.0), exp1}, DependenceSpec::independent(),
                  {0.0, -1.0}),
        3.0, IndicatorKind::I, SolverChoice::grid_oracle, {.line_i = 0, .line_j = 1});
    add("MO4-grid-pareto-clayton", Property::monotonicity,
        RiskModel({MarginalSpec::pareto(3.0, 1.0), MarginalSpec::pareto(2.0, 1.0)},
                  DependenceSpec::clayton(2.0)),
        4.0, IndicatorKind::I, SolverChoice::grid_oracle, {.line_i = 0, .line_j = 1});

    // Sub-additivity: reported as evidence, never gating.
    add("SA1-comonotonic-boundary", Property::subadditivity_empirical, comono_pair3, 3.0,
        IndicatorKind::I, SolverChoice::grid_oracle, {.subset = {1, 2}}, true);
    add("SA2-independent-pair", Property::subadditivity_empirical, iid_exp3, 3.0,
        IndicatorKind::I, SolverChoice::grid_oracle, {.subset = {0, 1}}, true);
    add("SA3-singleton-noop", Property::subadditivity_empirical, iid_exp3, 3.0, IndicatorKind::I,
        SolverChoice::grid_oracle, {.subset = {1}}, true);
    add("SA4-heavy-tails", Property::subadditivity_empirical,
        RiskModel({MarginalSpec::pareto(1.5, 1.0), MarginalSpec::pareto(1.5, 1.0), exp1},
                  DependenceSpec::independent()),
        6.0, IndicatorKind::J, SolverChoice::grid_oracle, {.subset = {0, 1}}, true);

    return cases;
}

}  // namespace riskalloc
