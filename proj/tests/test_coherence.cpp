#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "riskalloc/coherence.hpp"

using namespace riskalloc;

namespace {

const MarginalSpec kExp1 = MarginalSpec::exponential(1.0);
const MarginalSpec kExp2 = MarginalSpec::exponential(2.0);

PropertyCase small_case(Property property, RiskModel model, double u, SolverChoice solver) {
    PropertyCase c;
    c.id = "unit";
    c.property = property;
    c.model = std::move(model);
    c.u = u;
    c.solver = solver;
    c.seed = 4321;
    c.sample_size = 30000;
    c.grid_resolution = 0.02;
    return c;
}

}  // namespace

TEST_CASE("full allocation holds to one ulp for every solver") {
    RiskModel model({kExp1, kExp2}, DependenceSpec::independent());
    for (auto solver : {SolverChoice::grid_oracle, SolverChoice::bivariate_bisection,
                        SolverChoice::mirror_kw, SolverChoice::projected_sgd}) {
        PropertyCase c = small_case(Property::full_allocation, model, 2.0, solver);
        PropertyReport r = check_full_allocation(c);
        CHECK_FALSE(r.skipped);
        CHECK(r.passed);
        CHECK(r.observed_deviation <= r.threshold);
    }
}

TEST_CASE("symmetry check skips when the designated pair is not exchangeable") {
    RiskModel model({kExp1, kExp2}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::symmetry, model, 2.0, SolverChoice::grid_oracle);
    c.params.line_i = 0;
    c.params.line_j = 1;
    PropertyReport r = check_symmetry(c);
    CHECK(r.skipped);
    CHECK(r.skipped_reason.find("exchangeable") != std::string::npos);
}

TEST_CASE("symmetry passes for an exchangeable pair") {
    RiskModel model({kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::symmetry, model, 2.0, SolverChoice::bivariate_bisection);
    PropertyReport r = check_symmetry(c);
    CHECK_FALSE(r.skipped);
    CHECK(r.passed);
}

TEST_CASE("riskless check skips for non 1-homogeneous penalties") {
    RiskModel model({kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::riskless, model, 3.0, SolverChoice::grid_oracle);
    c.penalty = PenaltyFn::power(2.0);
    c.params.riskless_capital = 1.0;
    PropertyReport r = check_riskless(c);
    CHECK(r.skipped);
    CHECK(r.skipped_reason.find("1-homogeneous") != std::string::npos);

    c.params.riskless_capital = -0.5;
    c.penalty = PenaltyFn::absolute();
    PropertyReport neg = check_riskless(c);
    CHECK(neg.skipped);  // negative riskless capital is flagged untested
}

TEST_CASE("riskless concatenation holds on a small grid case") {
    RiskModel model({kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::riskless, model, 3.0, SolverChoice::grid_oracle);
    c.params.riskless_capital = 1.0;
    PropertyReport r = check_riskless(c);
    CHECK_FALSE(r.skipped);
    CHECK(r.passed);
}

TEST_CASE("positive homogeneity is exact under common random numbers") {
    RiskModel model({kExp1, kExp2}, DependenceSpec::independent());
    for (auto solver : {SolverChoice::mirror_kw, SolverChoice::projected_sgd,
                        SolverChoice::grid_oracle, SolverChoice::bivariate_bisection}) {
        for (double alpha : {2.0, 0.5}) {
            PropertyCase c = small_case(Property::positive_homogeneity, model, 2.0, solver);
            c.params.alpha = alpha;
            c.params.crn_mode = true;
            PropertyReport r = check_positive_homogeneity(c);
            CHECK_FALSE(r.skipped);
            CHECK(r.observed_deviation == 0.0);
            CHECK(r.passed);
        }
    }
}

TEST_CASE("homogeneity with alpha = 1 is the identity") {
    RiskModel model({kExp1, kExp1}, DependenceSpec::clayton(2.0));
    PropertyCase c = small_case(Property::positive_homogeneity, model, 2.0,
                                SolverChoice::bivariate_bisection);
    c.params.alpha = 1.0;
    PropertyReport r = check_positive_homogeneity(c);
    CHECK(r.observed_deviation == 0.0);
}

TEST_CASE("homogeneity skips for the quadratic penalty") {
    RiskModel model({kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::positive_homogeneity, model, 2.0,
                                SolverChoice::grid_oracle);
    c.penalty = PenaltyFn::power(2.0);
    PropertyReport r = check_positive_homogeneity(c);
    CHECK(r.skipped);
}

TEST_CASE("translation invariance with zero shifts is exact") {
    RiskModel model({kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::translation_invariance, model, 2.0,
                                SolverChoice::grid_oracle);
    c.params.shifts = {0.0, 0.0};
    PropertyReport r = check_translation_invariance(c);
    CHECK_FALSE(r.skipped);
    CHECK(r.observed_deviation == 0.0);
}

TEST_CASE("translation invariance skips when the support condition fails") {
    RiskModel model({MarginalSpec::uniform(0.0, 1.0), kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::translation_invariance, model, 2.0,
                                SolverChoice::grid_oracle);
    c.params.shifts = {0.5, 0.5};
    PropertyReport r = check_translation_invariance(c);
    CHECK(r.skipped);
    CHECK(r.skipped_reason.find("support") != std::string::npos);
}

TEST_CASE("continuity distances shrink with the perturbation") {
    RiskModel model({kExp1, kExp2}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::continuity, model, 2.0,
                                SolverChoice::bivariate_bisection);
    c.params.epsilons = {0.2, 0.05, 0.0};
    c.params.perturb_line = 0;
    PropertyReport r = check_continuity(c);
    CHECK_FALSE(r.skipped);
    CHECK(r.passed);
    CHECK(r.observed_deviation == 0.0);  // trailing zero epsilon probes the identity
}

TEST_CASE("monotonicity orders capital by stochastic dominance and can skip") {
    RiskModel ordered({kExp2, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::monotonicity, ordered, 2.0,
                                SolverChoice::bivariate_bisection);
    PropertyReport r = check_monotonicity(c);
    CHECK_FALSE(r.skipped);
    CHECK(r.passed);

    RiskModel incomparable({MarginalSpec::lognormal(0.0, 0.5), kExp1},
                           DependenceSpec::independent());
    PropertyCase c2 = small_case(Property::monotonicity, incomparable, 2.0,
                                 SolverChoice::bivariate_bisection);
    PropertyReport r2 = check_monotonicity(c2);
    CHECK(r2.skipped);
}

TEST_CASE("comonotonic additivity skips without a comonotonic pair") {
    RiskModel model({kExp1, kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::comonotonic_additivity, model, 3.0,
                                SolverChoice::grid_oracle);
    c.params.subset = {0, 1};
    PropertyReport r = check_comonotonic_additivity(c);
    CHECK(r.skipped);
}

TEST_CASE("sub-additivity singleton merge is a no-op with zero deviation") {
    RiskModel model({kExp1, kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::subadditivity_empirical, model, 3.0,
                                SolverChoice::grid_oracle);
    c.params.subset = {1};
    PropertyReport r = check_subadditivity_empirical(c);
    CHECK(r.evidence_only);
    CHECK(r.observed_deviation == 0.0);
}

TEST_CASE("a broken solver makes the harness fail loudly") {
    RiskModel model({kExp1, kExp1}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::symmetry, model, 2.0, SolverChoice::grid_oracle);
    SolveFn broken = [](const RiskModel&, double u, IndicatorKind, const PenaltyFn&, SolverChoice,
                        std::uint64_t, const PropertyCase&) {
        return make_allocation({u, 0.0}, u);  // everything on line 1
    };
    std::vector<PropertyReport> reports = run_suite({c}, broken);
    REQUIRE(reports.size() == 1);
    CHECK_FALSE(reports[0].passed);
    CHECK_FALSE(suite_passed(reports));
}

TEST_CASE("suite verdict ignores skipped and evidence-only rows") {
    PropertyReport pass;
    pass.passed = true;
    PropertyReport skipped_row;
    skipped_row.skipped = true;
    skipped_row.passed = false;
    PropertyReport evidence;
    evidence.evidence_only = true;
    evidence.passed = false;
    CHECK(suite_passed({pass, skipped_row, evidence}));
    PropertyReport fail;
    fail.passed = false;
    CHECK_FALSE(suite_passed({pass, fail}));
}

TEST_CASE("default suite is versioned with at least twenty cases and every property") {
    std::vector<PropertyCase> cases = default_suite();
    CHECK(cases.size() >= 20);
    for (Property p :
         {Property::full_allocation, Property::symmetry, Property::riskless,
          Property::subadditivity_empirical, Property::comonotonic_additivity,
          Property::positive_homogeneity, Property::translation_invariance, Property::continuity,
          Property::monotonicity}) {
        bool found = false;
        for (const auto& c : cases) found = found || c.property == p;
        CHECK(found);
    }
    // Sub-additivity rows never gate.
    for (const auto& c : cases) {
        if (c.property == Property::subadditivity_empirical) CHECK(c.evidence_only);
    }
    // Seeds are distinct per case.
    for (std::size_t i = 0; i < cases.size(); ++i) {
        for (std::size_t j = i + 1; j < cases.size(); ++j) {
            CHECK(cases[i].seed != cases[j].seed);
        }
    }
}

TEST_CASE("property names round-trip") {
    for (Property p :
         {Property::full_allocation, Property::symmetry, Property::riskless,
          Property::subadditivity_empirical, Property::comonotonic_additivity,
          Property::positive_homogeneity, Property::translation_invariance, Property::continuity,
          Property::monotonicity}) {
        CHECK(property_from_name(property_name(p)) == p);
    }
    CHECK_THROWS_AS(property_from_name("nonsense"), std::invalid_argument);
}

TEST_CASE("rerunning a case with the same seed reproduces the report bit-exactly") {
    RiskModel model({kExp1, kExp2}, DependenceSpec::independent());
    PropertyCase c = small_case(Property::monotonicity, model, 2.0,
                                SolverChoice::bivariate_bisection);
    c.params.line_i = 1;
    c.params.line_j = 0;
    PropertyReport a = check_monotonicity(c);
    PropertyReport b = check_monotonicity(c);
    CHECK(a.observed_deviation == b.observed_deviation);
    CHECK(a.details == b.details);
}
