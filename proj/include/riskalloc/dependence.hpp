#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace riskalloc {

enum class DepKind {
    independent,
    gaussian_copula,
    clayton_copula,
    comonotonic,
    comonotonic_groups,
};

// Dependence structure of the loss vector. Parameters are validated against
// the model dimension when a RiskModel is constructed.
struct DependenceSpec {
    DepKind kind = DepKind::independent;
    std::vector<double> correlation;  // row-major d x d, gaussian_copula only
    double theta = 0.0;               // clayton_copula only
    std::vector<std::vector<std::size_t>> groups;  // comonotonic_groups only

    static DependenceSpec independent();
    static DependenceSpec gaussian(std::vector<double> correlation_row_major);
    static DependenceSpec clayton(double theta);
    static DependenceSpec comonotonic();
    static DependenceSpec comonotonic_groups_of(std::vector<std::vector<std::size_t>> groups);

    std::string describe() const;
};

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Throws std::invalid_argument when the matrix is not symmetric, not
// unit-diagonal, or not positive definite. No nearest-PSD repair is applied.
std::vector<double> correlation_cholesky(const std::vector<double>& corr, std::size_t d);

}  // namespace riskalloc
