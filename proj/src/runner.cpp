#include "riskalloc/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riskalloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Staged output set: everything goes to temp files first and is renamed into
// place only when the whole run succeeded.
class OutputSet {
public:
    explicit OutputSet(const std::string& dir) : dir_(dir) {
        fs::create_directories(dir_);
    }
    ~OutputSet() {
        for (const auto& tmp : staged_) {
            std::error_code ec;
            fs::remove(tmp, ec);
        }
    }
    std::ofstream stage(const std::string& filename) {
        fs::path tmp = dir_ / (filename + ".tmp");
        staged_.push_back(tmp);
        finals_.push_back(dir_ / filename);
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        return out;
    }
    void commit() {
        for (std::size_t i = 0; i < staged_.size(); ++i) {
            fs::rename(staged_[i], finals_[i]);
        }
        staged_.clear();
        finals_.clear();
    }

private:
    fs::path dir_;
    std::vector<fs::path> staged_;
    std::vector<fs::path> finals_;
};

void apply_threads(const RunConfig& config) {
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#else
    (void)config;
#endif
}

Scenario load_scenario(const RunConfig& config) {
    if (config.scenario_path.empty()) {
        throw std::invalid_argument("a scenario file is required (--scenario)");
    }
    Scenario scenario = parse_scenario(config.scenario_path);
    if (config.seed_override) scenario.seed = *config.seed_override;
    if (config.solver_override) scenario.solver = solver_from_name(*config.solver_override);
    if (config.resolution_override) {
        if (!(*config.resolution_override > 0.0)) {
            throw std::invalid_argument("--resolution must be > 0");
        }
        scenario.grid_resolution = *config.resolution_override;
    }
    return scenario;
}

AllocationResult solve_scenario(const Scenario& s, IndicatorKind kind) {
    switch (s.solver) {
        case SolverChoice::mirror_kw:
            return mirror_descent_kw(s.model, s.capital, kind, s.penalty, s.config, s.seed);
        case SolverChoice::projected_sgd:
            return projected_sgd(s.model, s.capital, kind, s.penalty, s.config, s.seed);
        case SolverChoice::grid_oracle: {
            SampleBatch batch = sample(s.model, s.samples, s.seed);
            return grid_search_oracle(batch, s.capital, kind, s.penalty,
                                      s.grid_resolution * std::max(s.capital, 1e-300));
        }
        case SolverChoice::bivariate_bisection: {
            SampleBatch batch = sample(s.model, s.samples, s.seed);
            return solve_bivariate(batch, s.capital, kind);
        }
    }
    throw std::logic_error("unreachable");
}

json estimate_record(const Scenario& s, const AllocationResult& result) {
    // Flat estimate record: kind, value, std_error, n, allocation, penalty,
    // model_digest, seed.
    json rec;
    rec["kind"] = indicator_label(result.indicator.kind);
    rec["value"] = result.indicator.value;
    rec["std_error"] = result.indicator.std_error;
    rec["n"] = result.indicator.n;
    rec["allocation"] = result.alloc.parts;
    rec["penalty"] = s.penalty.label();
    rec["model_digest"] = s.model.digest();
    rec["seed"] = s.seed;
    return rec;
}

}  // namespace

int run_allocate(const RunConfig& config) {
    apply_threads(config);
    Scenario scenario = load_scenario(config);
    AllocationResult result = solve_scenario(scenario, scenario.kind);

    OutputSet out(config.output_dir);

    {
        std::ofstream alloc_csv = out.stage("allocation.csv");
        alloc_csv << "line,share,fraction\n";
        for (std::size_t k = 0; k < result.alloc.size(); ++k) {
            double frac = scenario.capital > 0.0 ? result.alloc.fraction(k) : 0.0;
            alloc_csv << scenario.line_names[k] << ',' << num(result.alloc.parts[k]) << ','
                      << num(frac) << "\n";
        }
    }
    {
        std::ofstream trace_csv = out.stage("trace.csv");
        trace_csv << "iter";
        for (std::size_t k = 1; k <= result.alloc.size(); ++k) trace_csv << ",u_" << k;
        trace_csv << ",step,indicator_estimate\n";
        for (const auto& point : result.trace) {
            trace_csv << point.iteration;
            for (double v : point.allocation) trace_csv << ',' << num(v);
            trace_csv << ',' << num(point.step) << ',' << num(point.indicator_estimate) << "\n";
        }
    }
    {
        json diag;
        diag["estimate"] = estimate_record(scenario, result);
        diag["solver"] = solver_name(result.solver);
        diag["residual"] = {{"exceed_probs", result.residual.exceed_probs},
                            {"max_spread", result.residual.max_spread},
                            {"spread_std_error", result.residual.spread_std_error},
                            {"threshold", result.residual_threshold},
                            {"within_tolerance", result.residual_ok}};
        diag["boundary_optimum"] = result.boundary_optimum;
        diag["tie"] = result.tie;
        diag["non_negative_support"] = scenario.model.non_negative_support();
        diag["config"] = {{"iterations", scenario.config.iterations},
                          {"batch", scenario.config.batch_per_iter},
                          {"step_a", scenario.config.step_a},
                          {"step_alpha", scenario.config.step_alpha},
                          {"averaging", scenario.config.averaging_window},
                          {"eval_samples", scenario.config.eval_samples},
                          {"samples", scenario.samples},
                          {"resolution", scenario.grid_resolution}};
        std::ofstream diag_json = out.stage("diagnostics.json");
        diag_json << diag.dump(2) << "\n";
    }
    out.commit();

    const bool flagged = result.boundary_optimum || !result.residual_ok;
    if (!config.quiet) {
        std::cout << "allocation:";
        for (double v : result.alloc.parts) std::cout << ' ' << num(v);
        std::cout << "\nindicator " << indicator_label(scenario.kind) << " = "
                  << num(result.indicator.value) << " (se " << num(result.indicator.std_error)
                  << "), residual spread " << num(result.residual.max_spread)
                  << (flagged ? " [flagged]" : "") << "\n";
    }
    return flagged ? kExitFlagged : kExitOk;
}

int run_coherence(const RunConfig& config) {
    apply_threads(config);
    std::uint64_t seed = config.seed_override.value_or(kDefaultSuiteSeed);
    std::vector<PropertyCase> cases = default_suite(seed);
    if (config.property_filter) {
        Property wanted = property_from_name(*config.property_filter);
        std::vector<PropertyCase> filtered;
        for (auto& c : cases) {
            if (c.property == wanted) filtered.push_back(std::move(c));
        }
        cases = std::move(filtered);
    }
    std::vector<PropertyReport> reports = run_suite(cases);

    OutputSet out(config.output_dir);
    {
        std::ofstream csv = out.stage("coherence.csv");
        csv << "property,model_digest,kind,deviation,threshold,passed,skipped_reason\n";
        for (const auto& r : reports) {
            csv << property_name(r.property) << ',' << r.model_digest << ','
                << indicator_label(r.kind) << ',' << num(r.observed_deviation) << ','
                << num(r.threshold) << ',' << (r.passed ? "true" : "false") << ','
                << r.skipped_reason << "\n";
        }
    }
    {
        json bundle;
        bundle["suite_version"] = kSuiteVersion;
        bundle["seed"] = seed;
        json rows = json::array();
        for (const auto& r : reports) {
            rows.push_back({{"case", r.case_id},
                            {"property", property_name(r.property)},
                            {"model_digest", r.model_digest},
                            {"kind", indicator_label(r.kind)},
                            {"deviation", r.observed_deviation},
                            {"threshold", r.threshold},
                            {"passed", r.passed},
                            {"skipped", r.skipped},
                            {"skipped_reason", r.skipped_reason},
                            {"evidence_only", r.evidence_only},
                            {"details", r.details}});
        }
        bundle["reports"] = rows;
        std::ofstream js = out.stage("coherence.json");
        js << bundle.dump(2) << "\n";
    }
    out.commit();

    std::size_t failures = 0;
    for (const auto& r : reports) {
        if (r.skipped) {
            if (!config.quiet) {
                std::cout << "SKIP " << r.case_id << " (" << r.skipped_reason << ")\n";
            }
            continue;
        }
        if (r.evidence_only) {
            if (!config.quiet) {
                std::cout << "evidence " << r.case_id << " deviation " << num(r.observed_deviation)
                          << "\n";
            }
            continue;
        }
        if (!r.passed) {
            ++failures;
            std::cout << "FAIL " << r.case_id << " deviation " << num(r.observed_deviation)
                      << " > threshold " << num(r.threshold) << "\n";
        } else if (!config.quiet) {
            std::cout << "pass " << r.case_id << "\n";
        }
    }
    if (!config.quiet) {
        std::cout << reports.size() << " cases, " << failures << " failures\n";
    }
    return coherence_exit_code(reports);
}

int coherence_exit_code(const std::vector<PropertyReport>& reports) {
    return suite_passed(reports) ? kExitOk : kExitPropertyFailures;
}

int run_compare(const RunConfig& config) {
    apply_threads(config);
    Scenario scenario = load_scenario(config);
    SampleBatch shared = sample(scenario.model, scenario.samples, scenario.seed);

    Allocation optimal_i = solve_scenario(scenario, IndicatorKind::I).alloc;
    Allocation optimal_j = solve_scenario(scenario, IndicatorKind::J).alloc;
    Allocation proportional = proportional_baseline(shared, scenario.capital);

    struct Row {
        std::string method;
        Allocation alloc;
    };
    std::vector<Row> rows = {{"optimal_I", optimal_i},
                             {"optimal_J", optimal_j},
                             {"proportional", proportional}};

    OutputSet out(config.output_dir);
    {
        std::ofstream csv = out.stage("compare.csv");
        csv << "method";
        for (const auto& name : scenario.line_names) csv << ',' << name;
        csv << ",I_value,I_std_error,J_value,J_std_error\n";
        for (const auto& row : rows) {
            IndicatorEstimate ei =
                estimate_indicator(IndicatorKind::I, shared, row.alloc, scenario.penalty);
            IndicatorEstimate ej =
                estimate_indicator(IndicatorKind::J, shared, row.alloc, scenario.penalty);
            csv << row.method;
            for (double v : row.alloc.parts) csv << ',' << num(v);
            csv << ',' << num(ei.value) << ',' << num(ei.std_error) << ',' << num(ej.value) << ','
                << num(ej.std_error) << "\n";
        }
    }
    {
        json diag;
        diag["seed"] = scenario.seed;
        diag["model_digest"] = scenario.model.digest();
        diag["samples"] = shared.n;
        diag["solver"] = solver_name(scenario.solver);
        std::ofstream js = out.stage("compare.json");
        js << diag.dump(2) << "\n";
    }
    out.commit();
    if (!config.quiet) {
        std::cout << "compare: wrote compare.csv for " << rows.size() << " methods\n";
    }
    return kExitOk;
}

int run(const RunConfig& config) {
    try {
        switch (config.command) {
            case RunConfig::Command::allocate: return run_allocate(config);
            case RunConfig::Command::coherence: return run_coherence(config);
            case RunConfig::Command::compare: return run_compare(config);
        }
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace riskalloc
