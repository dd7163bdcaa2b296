#pragma once

#include <string>

namespace riskalloc {

enum class Family { exponential, lognormal, pareto, uniform, deterministic };

// One business line's loss distribution. All families are supported on the
// non-negative half line; Pareto requires shape > 1 so the mean exists.
struct MarginalSpec {
    Family family = Family::exponential;
    double p1 = 1.0;  // rate | mu | shape | lo | c
    double p2 = 0.0;  // -    | sigma | scale | hi | -

    static MarginalSpec exponential(double rate);
    static MarginalSpec lognormal(double mu, double sigma);
    static MarginalSpec pareto(double shape, double scale);
    static MarginalSpec uniform(double lo, double hi);
    static MarginalSpec deterministic(double c);

    double mean() const;
    double support_lower() const;
    std::string describe() const;

    bool operator==(const MarginalSpec&) const = default;
};

// F^{-1}(p) for p in (0,1); throws std::domain_error outside.
double marginal_quantile(const MarginalSpec& spec, double p);

}  // namespace riskalloc
