#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskalloc/optimizer.hpp"

namespace riskalloc {

// One experiment, read from a flat JSON scenario file. Unknown keys anywhere
// in the file are hard errors; validation failures name the offending field.
struct Scenario {
    RiskModel model{{MarginalSpec::exponential(1.0)}, DependenceSpec::independent()};
    std::vector<std::string> line_names;
    double capital = 0.0;
    IndicatorKind kind = IndicatorKind::I;
    PenaltyFn penalty = PenaltyFn::absolute();
    SolverChoice solver = SolverChoice::mirror_kw;
    OptimizerConfig config;
    double grid_resolution = 0.01;  // fraction of capital, batch solvers
    std::size_t samples = 100000;   // batch size for batch solvers / compare
    std::uint64_t seed = 42;
};

Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);  // same, from a buffer

const char* indicator_label(IndicatorKind kind);

}  // namespace riskalloc
