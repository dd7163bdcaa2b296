#include "riskalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace riskalloc {

double Allocation::fraction(std::size_t k) const {
    return parts[k] / total;
}

std::vector<double> Allocation::fractions() const {
    std::vector<double> out(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) out[k] = fraction(k);
    return out;
}

Allocation make_allocation(std::vector<double> parts, double total) {
    if (parts.empty()) throw std::invalid_argument("allocation needs at least one part");
    if (!(total >= 0.0)) throw std::invalid_argument("allocation total must be >= 0");
    const double slack = 1e-9 * std::max(1.0, total);
    double sum = 0.0;
    for (double& v : parts) {
        if (v < 0.0) {
            if (v < -slack) throw std::invalid_argument("allocation part is negative");
            v = 0.0;
        }
        sum += v;
    }
    if (std::abs(sum - total) > slack * static_cast<double>(parts.size())) {
        throw std::invalid_argument("allocation parts do not sum to total");
    }
    // Push the rounding residue into a part where it registers, until the sum
    // is exact or stops moving (then it is within one ulp of the total).
    for (int pass = 0; pass < 8; ++pass) {
        sum = std::accumulate(parts.begin(), parts.end(), 0.0);
        double residue = total - sum;
        if (residue == 0.0) break;
        bool moved = false;
        auto apply = [&](double& part) {
            double next = part + residue;
            if (next != part && next >= 0.0) {
                part = next;
                moved = true;
            }
        };
        apply(*std::max_element(parts.begin(), parts.end()));
        if (!moved) {
            for (double& part : parts) {
                apply(part);
                if (moved) break;
            }
        }
        if (!moved) break;
    }
    return {std::move(parts), total};
}

Allocation simplex_project(std::span<const double> point, double u) {
    const std::size_t d = point.size();
    if (d == 0) throw std::invalid_argument("simplex_project: empty point");
    if (!(u >= 0.0)) throw std::invalid_argument("simplex_project: u must be >= 0");
    if (u == 0.0) return {std::vector<double>(d, 0.0), 0.0};

    // Sort-based threshold rule: keep coordinates above theta, zero the rest.
    std::vector<double> sorted(point.begin(), point.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumsum = 0.0;
    double theta = 0.0;
    std::size_t support = 0;
    for (std::size_t j = 0; j < d; ++j) {
        cumsum += sorted[j];
        double candidate = (cumsum - u) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) {
            theta = candidate;
            support = j + 1;
        } else {
            break;
        }
    }
    if (support == 0) {
        // Degenerate inputs (all -inf-ish); fall back to equal split.
        return make_allocation(std::vector<double>(d, u / static_cast<double>(d)), u);
    }
    std::vector<double> out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = std::max(point[k] - theta, 0.0);
    return make_allocation(std::move(out), u);
}

}  // namespace riskalloc
