#pragma once

#include <cstdint>

// Counter-style random streams built on the splitmix64 finalizer.
//
// Every consumer derives its own stream from (root seed, tag, indices), so
// sampling a given row/column never depends on how many draws other rows or
// columns consumed. This is what makes block-parallel sampling bit-identical
// to serial sampling and keeps common-random-number comparisons aligned when
// a model gains, loses or rescales a line.

namespace riskalloc::rng {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fold one index into a stream state. Odd multiplier keeps distinct indices
// on distinct orbits.
inline std::uint64_t derive(std::uint64_t state, std::uint64_t index) {
    return mix64(state + kGolden * (2 * index + 1));
}

// Sequential generator over a derived state.
class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform in the open interval (0,1); never returns 0 or 1, so quantile
    // transforms stay finite.
    double next_u01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via inverse-CDF (fixed one-draw consumption).
    double next_normal();

    // Gamma(shape, 1) by Marsaglia-Tsang squeeze; variable consumption, which
    // is safe because each caller owns its stream.
    double next_gamma(double shape);

private:
    std::uint64_t state_;
};

// Inverse standard normal CDF. Rational initial guess refined by one Halley
// step against erfc, accurate to ~1e-15 over (0,1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace riskalloc::rng
