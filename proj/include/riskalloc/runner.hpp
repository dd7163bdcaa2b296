#pragma once

#include <optional>
#include <string>

#include "riskalloc/coherence.hpp"
#include "riskalloc/scenario.hpp"

namespace riskalloc {

// Exit-code contract: 0 ok, 1 error, 2 converged-with-flags (boundary
// optimum or residual spread above tolerance), 3 property failures.
enum ExitCode { kExitOk = 0, kExitError = 1, kExitFlagged = 2, kExitPropertyFailures = 3 };

struct RunConfig {
    enum class Command { allocate, coherence, compare };
    Command command = Command::allocate;
    std::string scenario_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> solver_override;
    std::optional<double> resolution_override;
    std::optional<std::string> property_filter;  // coherence only
    int threads = 0;                             // 0 = machine default
    bool quiet = false;
};

// Each runner writes its artifacts atomically (temp files renamed on
// success); a failed run leaves no partial outputs.
int run_allocate(const RunConfig& config);
int run_coherence(const RunConfig& config);
int run_compare(const RunConfig& config);

// Gating rule shared with run_coherence: skipped and evidence-only rows never
// gate; any other failure maps to kExitPropertyFailures.
int coherence_exit_code(const std::vector<PropertyReport>& reports);

// Dispatch on config.command, mapping exceptions to kExitError.
int run(const RunConfig& config);

}  // namespace riskalloc
