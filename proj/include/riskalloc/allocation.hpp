#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riskalloc {

// A point on the capital simplex: non-negative parts summing to `total`.
struct Allocation {
    std::vector<double> parts;
    double total = 0.0;

    std::size_t size() const { return parts.size(); }
    double fraction(std::size_t k) const;  // parts[k]/total, NaN when total == 0
    std::vector<double> fractions() const;
};

// Build an allocation, clamping sub-ulp negatives and nudging the largest
// part so the sum lands exactly on `total`. Rejects inputs whose sum is
// materially off.
Allocation make_allocation(std::vector<double> parts, double total);

// Euclidean projection onto { v >= 0, sum v = u }. Total map: any finite
// input is accepted; idempotent on points already in the set.
Allocation simplex_project(std::span<const double> point, double u);

}  // namespace riskalloc
