#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "riskalloc/dependence.hpp"
#include "riskalloc/marginal.hpp"

namespace riskalloc {

struct SampleBatch;

// A d-line loss model: marginals coupled by a dependence structure, with an
// optional per-line affine transform scale_k * X_k - shift_k. Merged models
// (sums of lines) keep a handle to their parent and are sampled by sampling
// the parent and adding columns, so merged samples are row-consistent with
// the parent batch under the same seed.
class RiskModel {
public:
    RiskModel(std::vector<MarginalSpec> marginals, DependenceSpec dependence,
              std::vector<double> shift = {});

    std::size_t dimension() const { return d_; }
    const std::vector<MarginalSpec>& marginals() const { return marginals_; }
    const DependenceSpec& dependence() const { return dependence_; }
    const std::vector<double>& scale() const { return scale_; }
    const std::vector<double>& shift() const { return shift_; }
    bool is_merged() const { return parent_ != nullptr; }
    const std::vector<std::vector<std::size_t>>& line_map() const { return line_map_; }

    // True when every line's support stays within [0, inf) after the affine
    // transform. Shifted models may violate this; they stay usable but the
    // flag travels with them so property checks can report it.
    bool non_negative_support() const;

    // True when the joint support of each (X_k, S) contains [0, u]^2, the
    // sufficient condition for a unique interior optimum with continuous
    // marginals. Merged models report the parent's status.
    bool support_covers(double u) const;

    // Joint law invariant under any permutation of the lines.
    bool is_exchangeable() const;
    // Joint law invariant under swapping lines i and j.
    bool pair_exchangeable(std::size_t i, std::size_t j) const;
    // Lines i and j are non-decreasing transforms of one driver.
    bool pair_comonotonic(std::size_t i, std::size_t j) const;

    // Stable 64-bit content hash, hex-encoded.
    std::string digest() const;

    // alpha * X (all lines), exact under common random numbers.
    RiskModel scaled(double alpha) const;
    // Multiply one line by `factor` (continuity perturbations).
    RiskModel scaled_line(std::size_t line, double factor) const;
    // X_k - a_k on top of any existing shift.
    RiskModel shifted(const std::vector<double>& a) const;

    friend RiskModel merge_lines(const RiskModel& model, const std::vector<std::size_t>& index_set);
    friend SampleBatch sample_rows(const RiskModel& model, std::size_t first_row, std::size_t n,
                                   std::uint64_t seed);

private:
    RiskModel() = default;
    void validate() const;
    void describe_into(std::string& out) const;

    std::size_t d_ = 0;
    std::vector<MarginalSpec> marginals_;
    DependenceSpec dependence_;
    std::vector<double> scale_;
    std::vector<double> shift_;
    std::vector<double> cholesky_;  // cached factor, gaussian_copula only

    std::shared_ptr<const RiskModel> parent_;
    std::vector<std::vector<std::size_t>> line_map_;  // merged line -> parent lines
};

// n i.i.d. draws of the loss vector with full seed provenance.
struct SampleBatch {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> data;      // row-major n x d
    std::vector<double> row_sums;  // S per row, summed left to right
    std::uint64_t seed = 0;
    std::string model_digest;
    std::size_t rejected_rows = 0;

    double at(std::size_t row, std::size_t col) const { return data[row * d + col]; }
};

// Rows [0, n) of the model's sample stream.
SampleBatch sample(const RiskModel& model, std::size_t n, std::uint64_t seed);

// Rows [first_row, first_row + n): the same rows regardless of how the work
// is blocked, which lets optimizers consume disjoint slices of one stream.
SampleBatch sample_rows(const RiskModel& model, std::size_t first_row, std::size_t n,
                        std::uint64_t seed);

// New model whose extra line is the sum over index_set (0-based); remaining
// lines keep their order. index_set must be a non-empty proper subset.
RiskModel merge_lines(const RiskModel& model, const std::vector<std::size_t>& index_set);

// Assemble a batch from explicit rows (tests, hand enumerations).
SampleBatch batch_from_rows(const std::vector<std::vector<double>>& rows);

// Columnar CSV persistence: header sample_id,x1,...,xd plus a JSON sidecar
// (path + ".meta.json") carrying seed, model digest, n and rejections.
void write_batch_csv(const SampleBatch& batch, const std::string& path);

}  // namespace riskalloc
