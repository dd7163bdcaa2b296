#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "riskalloc/indicators.hpp"
#include "riskalloc/rng.hpp"

using namespace riskalloc;

namespace {

const PenaltyFn kAbs = PenaltyFn::absolute();

SampleBatch two_row_batch() {
    return batch_from_rows({{3.0, 1.0}, {1.0, 3.0}});
}

Allocation alloc_of(std::vector<double> parts) {
    double total = 0.0;
    for (double v : parts) total += v;
    return make_allocation(std::move(parts), total);
}

// Random point on the capital simplex (normalized exponentials).
Allocation random_simplex_point(rng::Stream& s, std::size_t d, double u) {
    std::vector<double> e(d);
    double sum = 0.0;
    for (double& v : e) {
        v = -std::log(s.next_u01());
        sum += v;
    }
    for (double& v : e) v = u * v / sum;
    return make_allocation(std::move(e), u);
}

}  // namespace

TEST_CASE("estimator exactness on the hand-enumerated two-row batch") {
    // Rows (3,1) and (1,3), u = 4, allocation (2,2): each row contributes
    // (X1-2)^+ + (X2-2)^+ = 1 with S = 4 on both event boundaries.
    SampleBatch batch = two_row_batch();
    Allocation alloc = alloc_of({2.0, 2.0});
    IndicatorEstimate i = estimate_indicator(IndicatorKind::I, batch, alloc, kAbs);
    IndicatorEstimate j = estimate_indicator(IndicatorKind::J, batch, alloc, kAbs);
    CHECK(i.value == 1.0);
    CHECK(j.value == 1.0);
    CHECK(i.std_error == 0.0);  // both rows contribute identically
    CHECK(i.n == 2);
}

TEST_CASE("no local ruin events means a zero indicator") {
    SampleBatch batch = batch_from_rows({{0.2, 0.9}, {1.0, 0.3}, {0.5, 0.5}});
    Allocation alloc = alloc_of({5.0, 5.0});
    CHECK(estimate_indicator(IndicatorKind::I, batch, alloc, kAbs).value == 0.0);
    CHECK(estimate_indicator(IndicatorKind::J, batch, alloc, kAbs).value == 0.0);
}

TEST_CASE("zero capital reduces the insolvent-side indicator to the mean aggregate loss") {
    SampleBatch batch = batch_from_rows({{1.0, 2.0}, {0.5, 0.25}, {4.0, 0.0}});
    Allocation alloc = make_allocation({0.0, 0.0}, 0.0);
    double mean_s = (3.0 + 0.75 + 4.0) / 3.0;
    CHECK(estimate_indicator(IndicatorKind::J, batch, alloc, kAbs).value ==
          doctest::Approx(mean_s).epsilon(1e-15));
}

TEST_CASE("subgradient sign convention: minus the exceedance probability") {
    SampleBatch batch = two_row_batch();
    Allocation alloc = alloc_of({2.0, 2.0});
    // Coordinate 1: only row (3,1) has X1 > 2 with S <= 4, so probability 1/2.
    std::vector<double> g = estimate_subgradient(IndicatorKind::I, batch, alloc, kAbs);
    CHECK(g[0] == -0.5);
    CHECK(g[1] == -0.5);
}

TEST_CASE("an empty line dominates the subgradient when every loss is positive") {
    SampleBatch batch = batch_from_rows({{0.4, 1.1},
                                         {0.7, 0.2},
                                         {1.9, 0.8},
                                         {0.3, 0.5},
                                         {1.2, 0.9},
                                         {0.8, 1.4},
                                         {0.6, 0.1},
                                         {2.2, 0.7},
                                         {0.9, 1.0},
                                         {1.1, 0.6}});
    double u = 3.0;
    Allocation alloc = make_allocation({u, 0.0}, u);
    std::vector<double> g = estimate_subgradient(IndicatorKind::I, batch, alloc, kAbs);
    CHECK(std::abs(g[1]) > std::abs(g[0]));
}

TEST_CASE("optimality residual on hand-enumerated allocations") {
    SampleBatch batch = two_row_batch();
    ResidualDiagnostics at_center = optimality_residual(IndicatorKind::I, batch, alloc_of({2.0, 2.0}));
    CHECK(at_center.exceed_probs[0] == 0.5);
    CHECK(at_center.exceed_probs[1] == 0.5);
    CHECK(at_center.max_spread == 0.0);

    ResidualDiagnostics lopsided = optimality_residual(IndicatorKind::I, batch, alloc_of({4.0, 0.0}));
    CHECK(lopsided.exceed_probs[0] == 0.0);
    CHECK(lopsided.exceed_probs[1] == 1.0);
    CHECK(lopsided.max_spread == 1.0);
}

TEST_CASE("sum identity partitions the rows exactly") {
    SampleBatch batch = two_row_batch();  // both rows tie at S = u = 4
    SumIdentity tied = indicator_sum_identity(batch, alloc_of({2.0, 2.0}), kAbs);
    CHECK(tied.tie_rows == 2);
    CHECK(tied.lhs == 0.0);
    CHECK(tied.rhs == 0.0);

    SampleBatch spread = batch_from_rows({{3.0, 0.5}, {1.0, 2.0}, {0.2, 0.1}, {2.5, 2.5}});
    Allocation alloc = alloc_of({2.0, 2.0});
    SumIdentity id = indicator_sum_identity(spread, alloc, kAbs);
    CHECK(id.tie_rows == 0);
    CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-14));
    double i = estimate_indicator(IndicatorKind::I, spread, alloc, kAbs).value;
    double j = estimate_indicator(IndicatorKind::J, spread, alloc, kAbs).value;
    CHECK(id.lhs == doctest::Approx(i + j).epsilon(1e-14));

    Allocation zero = make_allocation({0.0, 0.0}, 0.0);
    SumIdentity at_zero = indicator_sum_identity(spread, zero, kAbs);
    CHECK(at_zero.rhs == doctest::Approx((3.5 + 3.0 + 0.3 + 5.0) / 4.0).epsilon(1e-15));
    CHECK(at_zero.lhs == doctest::Approx(at_zero.rhs).epsilon(1e-15));
}

TEST_CASE("sum identity holds to accumulation error on a sampled batch") {
    RiskModel model({MarginalSpec::exponential(1.0), MarginalSpec::lognormal(0.0, 0.5)},
                    DependenceSpec::clayton(1.5));
    SampleBatch batch = sample(model, 50000, 321);
    for (const PenaltyFn& pen : {kAbs, PenaltyFn::power(2.0)}) {
        SumIdentity id = indicator_sum_identity(batch, alloc_of({1.2, 0.8}), pen);
        CHECK(id.tie_rows == 0);
        CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-12));
    }
}

TEST_CASE("fixed-batch convexity of both indicators along random segments") {
    RiskModel model({MarginalSpec::exponential(1.0), MarginalSpec::exponential(2.0),
                     MarginalSpec::lognormal(0.0, 0.5)},
                    DependenceSpec::independent());
    SampleBatch batch = sample(model, 20000, 55);
    const double u = 3.0;
    rng::Stream s(rng::derive(4711, 0));
    for (int trial = 0; trial < 100; ++trial) {
        Allocation v = random_simplex_point(s, 3, u);
        Allocation w = random_simplex_point(s, 3, u);
        double lambda = s.next_u01();
        std::vector<double> mix(3);
        for (std::size_t k = 0; k < 3; ++k) {
            mix[k] = lambda * v.parts[k] + (1.0 - lambda) * w.parts[k];
        }
        Allocation m = make_allocation(mix, u);
        for (auto kind : {IndicatorKind::I, IndicatorKind::J}) {
            double fv = estimate_indicator(kind, batch, v, kAbs).value;
            double fw = estimate_indicator(kind, batch, w, kAbs).value;
            double fm = estimate_indicator(kind, batch, m, kAbs).value;
            CHECK(fm <= lambda * fv + (1.0 - lambda) * fw + 1e-12 * (1.0 + fv + fw));
            CHECK(fv >= 0.0);
            CHECK(fm >= 0.0);
        }
    }
}

TEST_CASE("gradient matches central differences exactly on a kink-free window") {
    // Data chosen so no sample value falls inside either differencing window.
    SampleBatch batch =
        batch_from_rows({{0.5, 5.5}, {2.5, 1.5}, {4.5, 3.5}, {2.25, 0.25}});
    const double u = 6.0;
    Allocation alloc = make_allocation({1.5, 4.5}, u);
    const double h = 0.5;

    for (const PenaltyFn& pen : {kAbs, PenaltyFn::power(2.0)}) {
        std::vector<double> g = estimate_subgradient(IndicatorKind::I, batch, alloc, pen);
        Allocation plus = make_allocation({1.5 + h, 4.5 - h}, u);
        Allocation minus = make_allocation({1.5 - h, 4.5 + h}, u);
        double fd = (estimate_indicator(IndicatorKind::I, batch, plus, pen).value -
                     estimate_indicator(IndicatorKind::I, batch, minus, pen).value) /
                    (2.0 * h);
        CHECK(fd == doctest::Approx(g[0] - g[1]).epsilon(1e-14));
    }
    // Frozen hand enumeration for the absolute penalty.
    std::vector<double> g = estimate_subgradient(IndicatorKind::I, batch, alloc, kAbs);
    CHECK(g[0] == -0.5);
    CHECK(g[1] == -0.25);
}

TEST_CASE("gradient matches central differences within 1e-2 on smooth sampled points") {
    RiskModel model({MarginalSpec::exponential(1.0), MarginalSpec::exponential(1.0)},
                    DependenceSpec::independent());
    SampleBatch batch = sample(model, 50000, 808);
    const double u = 2.0;
    Allocation alloc = make_allocation({1.5, 0.5}, u);
    const double h = 0.05 * u;
    for (const PenaltyFn& pen : {kAbs, PenaltyFn::power(2.0)}) {
        for (auto kind : {IndicatorKind::I, IndicatorKind::J}) {
            std::vector<double> g = estimate_subgradient(kind, batch, alloc, pen);
            Allocation plus = make_allocation({1.5 + h, 0.5 - h}, u);
            Allocation minus = make_allocation({1.5 - h, 0.5 + h}, u);
            double fd = (estimate_indicator(kind, batch, plus, pen).value -
                         estimate_indicator(kind, batch, minus, pen).value) /
                        (2.0 * h);
            double diff = g[0] - g[1];
            REQUIRE(std::abs(diff) > 1e-3);
            CHECK(std::abs(fd - diff) / std::abs(diff) <= 1e-2);
        }
    }
}

TEST_CASE("bivariate residual probabilities are monotone with a single crossing") {
    RiskModel model({MarginalSpec::exponential(1.0), MarginalSpec::exponential(2.0)},
                    DependenceSpec::independent());
    SampleBatch batch = sample(model, 20000, 66);
    const double u = 2.0;
    double prev_p1 = 1.0, prev_p2 = 0.0;
    int sign_changes = 0;
    double prev_diff_sign = 1.0;
    for (int step = 0; step <= 200; ++step) {
        double v = u * step / 200.0;
        ResidualDiagnostics r =
            optimality_residual(IndicatorKind::I, batch, make_allocation({v, u - v}, u));
        CHECK(r.exceed_probs[0] <= prev_p1 + 1e-15);
        CHECK(r.exceed_probs[1] >= prev_p2 - 1e-15);
        prev_p1 = r.exceed_probs[0];
        prev_p2 = r.exceed_probs[1];
        double diff = r.exceed_probs[0] - r.exceed_probs[1];
        if (diff != 0.0) {
            double sgn = diff > 0 ? 1.0 : -1.0;
            if (sgn != prev_diff_sign && step > 0) ++sign_changes;
            prev_diff_sign = sgn;
        }
    }
    CHECK(sign_changes <= 1);
}

TEST_CASE("estimators reject malformed inputs") {
    SampleBatch batch = two_row_batch();
    Allocation bad_dim = alloc_of({1.0, 1.0, 1.0});
    CHECK_THROWS_AS(estimate_indicator(IndicatorKind::I, batch, bad_dim, kAbs),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_subgradient(IndicatorKind::J, batch, bad_dim, kAbs),
                    std::invalid_argument);
    CHECK_THROWS_AS(optimality_residual(IndicatorKind::I, batch, bad_dim), std::invalid_argument);
    SampleBatch empty;
    empty.d = 2;
    CHECK_THROWS_AS(estimate_indicator(IndicatorKind::I, empty, alloc_of({1.0, 1.0}), kAbs),
                    std::invalid_argument);
}

TEST_CASE("power penalty needs p at least one") {
    CHECK_THROWS_AS(PenaltyFn::power(0.5), std::invalid_argument);
    CHECK(PenaltyFn::power(1.0).one_homogeneous());
    CHECK_FALSE(PenaltyFn::power(2.0).one_homogeneous());
}
