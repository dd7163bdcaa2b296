#include "riskalloc/dependence.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace riskalloc {

DependenceSpec DependenceSpec::independent() {
    return {DepKind::independent, {}, 0.0, {}};
}

DependenceSpec DependenceSpec::gaussian(std::vector<double> correlation_row_major) {
    DependenceSpec spec;
    spec.kind = DepKind::gaussian_copula;
    spec.correlation = std::move(correlation_row_major);
    return spec;
}

DependenceSpec DependenceSpec::clayton(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("clayton: theta must be > 0");
    DependenceSpec spec;
    spec.kind = DepKind::clayton_copula;
    spec.theta = theta;
    return spec;
}

DependenceSpec DependenceSpec::comonotonic() {
    DependenceSpec spec;
    spec.kind = DepKind::comonotonic;
    return spec;
}

DependenceSpec DependenceSpec::comonotonic_groups_of(std::vector<std::vector<std::size_t>> groups) {
    DependenceSpec spec;
    spec.kind = DepKind::comonotonic_groups;
    spec.groups = std::move(groups);
    return spec;
}

std::string DependenceSpec::describe() const {
    switch (kind) {
        case DepKind::independent: return "independent";
        case DepKind::gaussian_copula: {
            std::string out = "gaussian[";
            char buf[32];
            for (double v : correlation) {
                std::snprintf(buf, sizeof buf, "%.17g,", v);
                out += buf;
            }
            out += "]";
            return out;
        }
        case DepKind::clayton_copula: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "clayton(%.17g)", theta);
            return buf;
        }
        case DepKind::comonotonic: return "comonotonic";
        case DepKind::comonotonic_groups: {
            std::string out = "comonotonic_groups[";
            for (const auto& g : groups) {
                out += "(";
                for (std::size_t i : g) out += std::to_string(i) + ",";
                out += ")";
            }
            out += "]";
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<double> correlation_cholesky(const std::vector<double>& corr, std::size_t d) {
    if (corr.size() != d * d) {
        throw std::invalid_argument("correlation matrix must be d x d");
    }
    const double tol = 1e-12;
    for (std::size_t i = 0; i < d; ++i) {
        if (std::abs(corr[i * d + i] - 1.0) > tol) {
            throw std::invalid_argument("correlation matrix must have unit diagonal");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(corr[i * d + j] - corr[j * d + i]) > tol) {
                throw std::invalid_argument("correlation matrix must be symmetric");
            }
        }
    }
    std::vector<double> l(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < j; ++k) sum += l[i * d + k] * l[j * d + k];
            if (i == j) {
                double diag = corr[i * d + i] - sum;
                if (!(diag > tol)) {
                    throw std::invalid_argument("correlation matrix is not positive definite");
                }
                l[i * d + i] = std::sqrt(diag);
            } else {
                l[i * d + j] = (corr[i * d + j] - sum) / l[j * d + j];
            }
        }
    }
    return l;
}

}  // namespace riskalloc
