#include "riskalloc/risk_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "riskalloc/rng.hpp"

namespace riskalloc {

namespace {

// Stream tags: columns draw from (seed, kColumnTag, row, col, attempt),
// shared dependence drivers from (seed, kDependenceTag, row, key, attempt).
constexpr std::uint64_t kColumnTag = 1;
constexpr std::uint64_t kDependenceTag = 2;
constexpr int kMaxRowAttempts = 64;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

rng::Stream column_stream(std::uint64_t seed, std::uint64_t row, std::uint64_t col,
                          std::uint64_t attempt) {
    std::uint64_t s = rng::derive(seed, kColumnTag);
    s = rng::derive(s, row);
    s = rng::derive(s, col);
    return rng::Stream(rng::derive(s, attempt));
}

rng::Stream dependence_stream(std::uint64_t seed, std::uint64_t row, std::uint64_t key,
                              std::uint64_t attempt) {
    std::uint64_t s = rng::derive(seed, kDependenceTag);
    s = rng::derive(s, row);
    s = rng::derive(s, key);
    return rng::Stream(rng::derive(s, attempt));
}

// Copula uniforms for one row, in (0,1).
void row_uniforms(const DependenceSpec& dep, const std::vector<double>& chol,
                  std::uint64_t seed, std::uint64_t row, std::uint64_t attempt,
                  std::vector<double>& u) {
    const std::size_t d = u.size();
    switch (dep.kind) {
        case DepKind::independent: {
            for (std::size_t k = 0; k < d; ++k) {
                u[k] = column_stream(seed, row, k, attempt).next_u01();
            }
            break;
        }
        case DepKind::gaussian_copula: {
            std::vector<double> z(d);
            for (std::size_t k = 0; k < d; ++k) {
                z[k] = rng::normal_quantile(column_stream(seed, row, k, attempt).next_u01());
            }
            for (std::size_t k = d; k-- > 0;) {
                double y = 0.0;
                for (std::size_t j = 0; j <= k; ++j) y += chol[k * d + j] * z[j];
                u[k] = rng::normal_cdf(y);
            }
            break;
        }
        case DepKind::clayton_copula: {
            auto frailty_stream = dependence_stream(seed, row, 0, attempt);
            double v = frailty_stream.next_gamma(1.0 / dep.theta);
            for (std::size_t k = 0; k < d; ++k) {
                double e = -std::log(column_stream(seed, row, k, attempt).next_u01());
                u[k] = std::exp(-std::log1p(e / v) / dep.theta);
            }
            break;
        }
        case DepKind::comonotonic: {
            double y = dependence_stream(seed, row, 0, attempt).next_u01();
            std::fill(u.begin(), u.end(), y);
            break;
        }
        case DepKind::comonotonic_groups: {
            for (const auto& group : dep.groups) {
                std::size_t key = 1 + *std::min_element(group.begin(), group.end());
                double y = dependence_stream(seed, row, key, attempt).next_u01();
                for (std::size_t k : group) u[k] = y;
            }
            break;
        }
    }
    const double lo = 0x1.0p-60, hi = 1.0 - 0x1.0p-53;
    for (double& x : u) x = std::clamp(x, lo, hi);
}

}  // namespace

RiskModel::RiskModel(std::vector<MarginalSpec> marginals, DependenceSpec dependence,
                     std::vector<double> shift)
    : d_(marginals.size()),
      marginals_(std::move(marginals)),
      dependence_(std::move(dependence)),
      scale_(d_, 1.0),
      shift_(std::move(shift)) {
    if (shift_.empty()) shift_.assign(d_, 0.0);
    validate();
    if (dependence_.kind == DepKind::gaussian_copula) {
        cholesky_ = correlation_cholesky(dependence_.correlation, d_);
    }
}

void RiskModel::validate() const {
    if (d_ == 0) throw std::invalid_argument("model needs at least one line");
    if (shift_.size() != d_) throw std::invalid_argument("shift length must equal dimension");
    if (scale_.size() != d_) throw std::invalid_argument("scale length must equal dimension");
    for (double s : scale_) {
        if (!(s > 0.0)) throw std::invalid_argument("line scale must be > 0");
    }
    switch (dependence_.kind) {
        case DepKind::gaussian_copula:
            if (dependence_.correlation.size() != d_ * d_) {
                throw std::invalid_argument("correlation matrix must be d x d");
            }
            break;
        case DepKind::clayton_copula:
            if (!(dependence_.theta > 0.0)) throw std::invalid_argument("clayton: theta must be > 0");
            break;
        case DepKind::comonotonic_groups: {
            std::vector<int> seen(d_, 0);
            for (const auto& g : dependence_.groups) {
                if (g.empty()) throw std::invalid_argument("comonotonic group may not be empty");
                for (std::size_t k : g) {
                    if (k >= d_) throw std::invalid_argument("comonotonic group index out of range");
                    if (seen[k]++) throw std::invalid_argument("comonotonic groups must partition the lines");
                }
            }
            for (int s : seen) {
                if (!s) throw std::invalid_argument("comonotonic groups must cover every line");
            }
            break;
        }
        default:
            break;
    }
}

bool RiskModel::non_negative_support() const {
    if (parent_) return parent_->non_negative_support();
    for (std::size_t k = 0; k < d_; ++k) {
        if (scale_[k] * marginals_[k].support_lower() - shift_[k] < 0.0) return false;
    }
    return true;
}

bool RiskModel::support_covers(double u) const {
    if (parent_) return parent_->support_covers(u);
    for (std::size_t k = 0; k < d_; ++k) {
        if (marginals_[k].family == Family::deterministic) return false;
        double lo = scale_[k] * marginals_[k].support_lower() - shift_[k];
        if (lo > 0.0) return false;
        if (marginals_[k].family == Family::uniform) {
            double hi = scale_[k] * marginals_[k].p2 - shift_[k];
            if (hi < u) return false;
        }
    }
    return true;
}

bool RiskModel::is_exchangeable() const {
    if (parent_) return false;
    for (std::size_t k = 1; k < d_; ++k) {
        if (!(marginals_[k] == marginals_[0])) return false;
        if (scale_[k] != scale_[0] || shift_[k] != shift_[0]) return false;
    }
    switch (dependence_.kind) {
        case DepKind::independent:
        case DepKind::clayton_copula:
        case DepKind::comonotonic:
            return true;
        case DepKind::gaussian_copula: {
            double off = d_ > 1 ? dependence_.correlation[1] : 0.0;
            for (std::size_t i = 0; i < d_; ++i) {
                for (std::size_t j = 0; j < d_; ++j) {
                    double want = i == j ? 1.0 : off;
                    if (dependence_.correlation[i * d_ + j] != want) return false;
                }
            }
            return true;
        }
        case DepKind::comonotonic_groups:
            return dependence_.groups.size() == 1 || dependence_.groups.size() == d_;
    }
    return false;
}

bool RiskModel::pair_exchangeable(std::size_t i, std::size_t j) const {
    if (parent_ || i >= d_ || j >= d_ || i == j) return false;
    if (!(marginals_[i] == marginals_[j])) return false;
    if (scale_[i] != scale_[j] || shift_[i] != shift_[j]) return false;
    switch (dependence_.kind) {
        case DepKind::independent:
        case DepKind::clayton_copula:
        case DepKind::comonotonic:
            return true;
        case DepKind::gaussian_copula: {
            const auto& c = dependence_.correlation;
            if (c[i * d_ + j] != c[j * d_ + i]) return false;
            for (std::size_t k = 0; k < d_; ++k) {
                if (k == i || k == j) continue;
                if (c[i * d_ + k] != c[j * d_ + k]) return false;
            }
            return true;
        }
        case DepKind::comonotonic_groups: {
            auto group_of = [&](std::size_t k) {
                for (std::size_t g = 0; g < dependence_.groups.size(); ++g) {
                    for (std::size_t m : dependence_.groups[g]) {
                        if (m == k) return g;
                    }
                }
                return dependence_.groups.size();
            };
            std::size_t gi = group_of(i), gj = group_of(j);
            if (gi == gj) return true;
            return dependence_.groups[gi].size() == 1 && dependence_.groups[gj].size() == 1;
        }
    }
    return false;
}

bool RiskModel::pair_comonotonic(std::size_t i, std::size_t j) const {
    if (parent_ || i >= d_ || j >= d_ || i == j) return false;
    switch (dependence_.kind) {
        case DepKind::comonotonic:
            return true;
        case DepKind::comonotonic_groups:
            for (const auto& g : dependence_.groups) {
                bool has_i = std::find(g.begin(), g.end(), i) != g.end();
                bool has_j = std::find(g.begin(), g.end(), j) != g.end();
                if (has_i && has_j) return true;
                if (has_i || has_j) return false;
            }
            return false;
        default:
            return false;
    }
}

void RiskModel::describe_into(std::string& out) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "d=%zu;", d_);
    out += buf;
    if (parent_) {
        out += "merge[";
        for (const auto& lines : line_map_) {
            out += "(";
            for (std::size_t k : lines) out += std::to_string(k) + ",";
            out += ")";
        }
        out += "]of{";
        parent_->describe_into(out);
        out += "}";
        return;
    }
    for (std::size_t k = 0; k < d_; ++k) {
        out += marginals_[k].describe();
        std::snprintf(buf, sizeof buf, "*%.17g-%.17g;", scale_[k], shift_[k]);
        out += buf;
    }
    out += dependence_.describe();
}

std::string RiskModel::digest() const {
    std::string desc;
    describe_into(desc);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(desc)));
    return buf;
}

RiskModel RiskModel::scaled(double alpha) const {
    if (!(alpha > 0.0)) throw std::invalid_argument("scaled: alpha must be > 0");
    RiskModel out = *this;
    if (parent_) {
        out.parent_ = std::make_shared<RiskModel>(parent_->scaled(alpha));
        return out;
    }
    for (std::size_t k = 0; k < d_; ++k) {
        out.scale_[k] *= alpha;
        out.shift_[k] *= alpha;
    }
    return out;
}

RiskModel RiskModel::scaled_line(std::size_t line, double factor) const {
    if (parent_) throw std::invalid_argument("scaled_line: not supported on merged models");
    if (line >= d_) throw std::invalid_argument("scaled_line: index out of range");
    if (!(factor > 0.0)) throw std::invalid_argument("scaled_line: factor must be > 0");
    RiskModel out = *this;
    out.scale_[line] *= factor;
    out.shift_[line] *= factor;
    return out;
}

RiskModel RiskModel::shifted(const std::vector<double>& a) const {
    if (parent_) throw std::invalid_argument("shifted: not supported on merged models");
    if (a.size() != d_) throw std::invalid_argument("shifted: length mismatch");
    RiskModel out = *this;
    for (std::size_t k = 0; k < d_; ++k) out.shift_[k] += a[k];
    return out;
}

RiskModel merge_lines(const RiskModel& model, const std::vector<std::size_t>& index_set) {
    if (index_set.empty()) throw std::invalid_argument("merge_lines: index set may not be empty");
    const std::size_t d = model.dimension();
    std::vector<bool> merged(d, false);
    for (std::size_t k : index_set) {
        if (k >= d) throw std::invalid_argument("merge_lines: index out of range");
        merged[k] = true;
    }
    std::size_t count = 0;
    for (bool b : merged) count += b;
    if (count == d) throw std::invalid_argument("merge_lines: index set must be a proper subset");

    RiskModel out;
    out.parent_ = std::make_shared<RiskModel>(model);
    std::vector<std::size_t> merged_sorted;
    for (std::size_t k = 0; k < d; ++k) {
        if (merged[k]) merged_sorted.push_back(k);
    }
    // Merged line takes the slot of its smallest member; others keep order.
    for (std::size_t k = 0; k < d; ++k) {
        if (!merged[k]) {
            out.line_map_.push_back({k});
        } else if (k == merged_sorted.front()) {
            out.line_map_.push_back(merged_sorted);
        }
    }
    out.d_ = out.line_map_.size();
    out.scale_.assign(out.d_, 1.0);
    out.shift_.assign(out.d_, 0.0);
    return out;
}

SampleBatch sample(const RiskModel& model, std::size_t n, std::uint64_t seed) {
    return sample_rows(model, 0, n, seed);
}

SampleBatch sample_rows(const RiskModel& model, std::size_t first_row, std::size_t n,
                        std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample: n must be >= 1");

    if (model.parent_) {
        SampleBatch base = sample_rows(*model.parent_, first_row, n, seed);
        SampleBatch out;
        out.n = n;
        out.d = model.d_;
        out.seed = seed;
        out.model_digest = model.digest();
        out.rejected_rows = base.rejected_rows;
        out.data.resize(n * model.d_);
        out.row_sums.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (std::size_t k = 0; k < model.d_; ++k) {
                double v = 0.0;
                for (std::size_t src : model.line_map_[k]) v += base.at(r, src);
                out.data[r * model.d_ + k] = v;
                s += v;
            }
            out.row_sums[r] = s;
        }
        return out;
    }

    const std::size_t d = model.d_;
    SampleBatch out;
    out.n = n;
    out.d = d;
    out.seed = seed;
    out.model_digest = model.digest();
    out.data.resize(n * d);
    out.row_sums.resize(n);

    std::size_t rejected = 0;
    std::vector<double> u(d);
    for (std::size_t r = 0; r < n; ++r) {
        const std::uint64_t row_id = first_row + r;
        bool ok = false;
        for (int attempt = 0; attempt < kMaxRowAttempts && !ok; ++attempt) {
            row_uniforms(model.dependence_, model.cholesky_, seed, row_id,
                         static_cast<std::uint64_t>(attempt), u);
            double s = 0.0;
            ok = true;
            for (std::size_t k = 0; k < d; ++k) {
                double x = model.scale_[k] * marginal_quantile(model.marginals_[k], u[k]) -
                           model.shift_[k];
                if (!std::isfinite(x)) {
                    ok = false;
                    break;
                }
                out.data[r * d + k] = x;
                s += x;
            }
            if (ok && !std::isfinite(s)) ok = false;
            if (ok) {
                out.row_sums[r] = s;
            } else {
                ++rejected;
            }
        }
        if (!ok) throw std::runtime_error("sample: row rejected too many times (overflowing tails)");
    }
    out.rejected_rows = rejected;
    return out;
}

SampleBatch batch_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("batch_from_rows: need at least one row");
    SampleBatch out;
    out.n = rows.size();
    out.d = rows.front().size();
    out.model_digest = "explicit";
    out.data.reserve(out.n * out.d);
    out.row_sums.reserve(out.n);
    for (const auto& row : rows) {
        if (row.size() != out.d) throw std::invalid_argument("batch_from_rows: ragged rows");
        double s = 0.0;
        for (double v : row) {
            out.data.push_back(v);
            s += v;
        }
        out.row_sums.push_back(s);
    }
    return out;
}

void write_batch_csv(const SampleBatch& batch, const std::string& path) {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot open " + path);
    csv << "sample_id";
    for (std::size_t k = 1; k <= batch.d; ++k) csv << ",x" << k;
    csv << "\n";
    char buf[32];
    for (std::size_t r = 0; r < batch.n; ++r) {
        csv << r;
        for (std::size_t k = 0; k < batch.d; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", batch.at(r, k));
            csv << ',' << buf;
        }
        csv << "\n";
    }
    std::ofstream meta(path + ".meta.json");
    if (!meta) throw std::runtime_error("cannot open " + path + ".meta.json");
    meta << "{\n  \"seed\": " << batch.seed << ",\n  \"model_digest\": \"" << batch.model_digest
         << "\",\n  \"n\": " << batch.n << ",\n  \"rejected_rows\": " << batch.rejected_rows
         << "\n}\n";
}

}  // namespace riskalloc
