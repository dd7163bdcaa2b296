#include "riskalloc/marginal.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "riskalloc/rng.hpp"

namespace riskalloc {

MarginalSpec MarginalSpec::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    return {Family::exponential, rate, 0.0};
}

MarginalSpec MarginalSpec::lognormal(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("lognormal: sigma must be > 0");
    return {Family::lognormal, mu, sigma};
}

MarginalSpec MarginalSpec::pareto(double shape, double scale) {
    if (!(shape > 1.0)) throw std::invalid_argument("pareto: shape must be > 1");
    if (!(scale > 0.0)) throw std::invalid_argument("pareto: scale must be > 0");
    return {Family::pareto, shape, scale};
}

MarginalSpec MarginalSpec::uniform(double lo, double hi) {
    if (!(lo >= 0.0)) throw std::invalid_argument("uniform: lo must be >= 0");
    if (!(hi > lo)) throw std::invalid_argument("uniform: hi must be > lo");
    return {Family::uniform, lo, hi};
}

MarginalSpec MarginalSpec::deterministic(double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("deterministic: c must be >= 0");
    return {Family::deterministic, c, 0.0};
}

double MarginalSpec::mean() const {
    switch (family) {
        case Family::exponential: return 1.0 / p1;
        case Family::lognormal: return std::exp(p1 + 0.5 * p2 * p2);
        case Family::pareto: return p1 * p2 / (p1 - 1.0);
        case Family::uniform: return 0.5 * (p1 + p2);
        case Family::deterministic: return p1;
    }
    throw std::logic_error("unreachable");
}

double MarginalSpec::support_lower() const {
    switch (family) {
        case Family::exponential: return 0.0;
        case Family::lognormal: return 0.0;
        case Family::pareto: return p2;
        case Family::uniform: return p1;
        case Family::deterministic: return p1;
    }
    throw std::logic_error("unreachable");
}

std::string MarginalSpec::describe() const {
    char buf[96];
    switch (family) {
        case Family::exponential: std::snprintf(buf, sizeof buf, "exponential(%.17g)", p1); break;
        case Family::lognormal: std::snprintf(buf, sizeof buf, "lognormal(%.17g,%.17g)", p1, p2); break;
        case Family::pareto: std::snprintf(buf, sizeof buf, "pareto(%.17g,%.17g)", p1, p2); break;
        case Family::uniform: std::snprintf(buf, sizeof buf, "uniform(%.17g,%.17g)", p1, p2); break;
        case Family::deterministic: std::snprintf(buf, sizeof buf, "deterministic(%.17g)", p1); break;
    }
    return buf;
}

double marginal_quantile(const MarginalSpec& spec, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("marginal_quantile: p must lie in (0,1)");
    }
    switch (spec.family) {
        case Family::exponential:
            return -std::log1p(-p) / spec.p1;
        case Family::lognormal:
            return std::exp(spec.p1 + spec.p2 * rng::normal_quantile(p));
        case Family::pareto:
            return spec.p2 * std::pow(1.0 - p, -1.0 / spec.p1);
        case Family::uniform:
            return spec.p1 + p * (spec.p2 - spec.p1);
        case Family::deterministic:
            return spec.p1;
    }
    throw std::logic_error("unreachable");
}

}  // namespace riskalloc
