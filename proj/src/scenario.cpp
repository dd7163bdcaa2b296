#include "riskalloc/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace riskalloc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("scenario: " + field + ": " + why);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            fail(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
        }
    }
}

double need_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) fail(where + "." + key, "number required");
    return obj[key].get<double>();
}

MarginalSpec parse_marginal(const json& line, std::size_t index, std::string& name) {
    const std::string where = "marginals[" + std::to_string(index) + "]";
    reject_unknown_keys(line, {"name", "family", "params", "shift"}, where);
    if (!line.contains("family") || !line["family"].is_string()) fail(where + ".family", "required");
    name = line.value("name", "line" + std::to_string(index + 1));
    const std::string family = line["family"].get<std::string>();
    json params = line.value("params", json::object());

    if (family == "exponential") {
        reject_unknown_keys(params, {"rate"}, where);
        double rate = need_number(params, "rate", where);
        if (!(rate > 0.0)) fail(where + ".rate", "must be > 0");
        return MarginalSpec::exponential(rate);
    }
    if (family == "lognormal") {
        reject_unknown_keys(params, {"mu", "sigma"}, where);
        double mu = need_number(params, "mu", where);
        double sigma = need_number(params, "sigma", where);
        if (!(sigma > 0.0)) fail(where + ".sigma", "must be > 0");
        return MarginalSpec::lognormal(mu, sigma);
    }
    if (family == "pareto") {
        reject_unknown_keys(params, {"shape", "scale"}, where);
        double shape = need_number(params, "shape", where);
        double scale = need_number(params, "scale", where);
        if (!(shape > 1.0)) fail(where + ".shape", "must be > 1 so the mean exists");
        if (!(scale > 0.0)) fail(where + ".scale", "must be > 0");
        return MarginalSpec::pareto(shape, scale);
    }
    if (family == "uniform") {
        reject_unknown_keys(params, {"lo", "hi"}, where);
        double lo = need_number(params, "lo", where);
        double hi = need_number(params, "hi", where);
        if (!(lo >= 0.0)) fail(where + ".lo", "must be >= 0");
        if (!(hi > lo)) fail(where + ".hi", "must be > lo");
        return MarginalSpec::uniform(lo, hi);
    }
    if (family == "deterministic") {
        reject_unknown_keys(params, {"c"}, where);
        double c = need_number(params, "c", where);
        if (!(c >= 0.0)) fail(where + ".c", "must be >= 0");
        return MarginalSpec::deterministic(c);
    }
    fail(where + ".family", "unknown family '" + family + "'");
}

DependenceSpec parse_dependence(const json& dep, std::size_t d) {
    reject_unknown_keys(dep, {"kind", "correlation", "theta", "groups"}, "dependence");
    const std::string kind = dep.value("kind", "independent");
    if (kind == "independent") {
        return DependenceSpec::independent();
    }
    if (kind == "gaussian_copula") {
        if (!dep.contains("correlation") || !dep["correlation"].is_array()) {
            fail("dependence.correlation", "d x d matrix required");
        }
        std::vector<double> corr;
        for (const auto& row : dep["correlation"]) {
            if (!row.is_array() || row.size() != d) {
                fail("dependence.correlation", "rows must have length d");
            }
            for (const auto& v : row) corr.push_back(v.get<double>());
        }
        if (corr.size() != d * d) fail("dependence.correlation", "must have d rows");
        return DependenceSpec::gaussian(std::move(corr));
    }
    if (kind == "clayton_copula") {
        double theta = need_number(dep, "theta", "dependence");
        if (!(theta > 0.0)) fail("dependence.theta", "must be > 0");
        return DependenceSpec::clayton(theta);
    }
    if (kind == "comonotonic") {
        return DependenceSpec::comonotonic();
    }
    if (kind == "comonotonic_groups") {
        if (!dep.contains("groups") || !dep["groups"].is_array()) {
            fail("dependence.groups", "list of 1-based line groups required");
        }
        std::vector<std::vector<std::size_t>> groups;
        for (const auto& g : dep["groups"]) {
            std::vector<std::size_t> group;
            for (const auto& v : g) {
                auto line = v.get<long long>();
                if (line < 1 || static_cast<std::size_t>(line) > d) {
                    fail("dependence.groups", "line indices are 1-based up to d");
                }
                group.push_back(static_cast<std::size_t>(line - 1));
            }
            groups.push_back(std::move(group));
        }
        return DependenceSpec::comonotonic_groups_of(std::move(groups));
    }
    fail("dependence.kind", "unknown kind '" + kind + "'");
}

}  // namespace

const char* indicator_label(IndicatorKind kind) {
    return kind == IndicatorKind::I ? "I" : "J";
}

Scenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario: parse error: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("scenario: top level must be an object");
    reject_unknown_keys(doc,
                        {"lines", "dependence", "capital", "indicator", "penalty", "solver", "seed"},
                        "");

    if (!doc.contains("lines") || !doc["lines"].is_array() || doc["lines"].empty()) {
        fail("lines", "non-empty list required");
    }
    std::vector<MarginalSpec> marginals;
    std::vector<double> shifts;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < doc["lines"].size(); ++i) {
        std::string name;
        marginals.push_back(parse_marginal(doc["lines"][i], i, name));
        names.push_back(std::move(name));
        shifts.push_back(doc["lines"][i].value("shift", 0.0));
    }
    const std::size_t d = marginals.size();
    DependenceSpec dependence = doc.contains("dependence")
                                    ? parse_dependence(doc["dependence"], d)
                                    : DependenceSpec::independent();

    Scenario out;
    out.model = RiskModel(std::move(marginals), std::move(dependence), std::move(shifts));
    out.line_names = std::move(names);

    if (!doc.contains("capital") || !doc["capital"].is_number()) fail("capital", "number required");
    out.capital = doc["capital"].get<double>();
    if (!(out.capital >= 0.0)) fail("capital", "must be >= 0");

    const std::string indicator = doc.value("indicator", "I");
    if (indicator == "I") {
        out.kind = IndicatorKind::I;
    } else if (indicator == "J") {
        out.kind = IndicatorKind::J;
    } else {
        fail("indicator", "must be 'I' or 'J'");
    }

    if (doc.contains("penalty")) {
        const json& pen = doc["penalty"];
        reject_unknown_keys(pen, {"kind", "p"}, "penalty");
        const std::string kind = pen.value("kind", "absolute");
        if (kind == "absolute") {
            out.penalty = PenaltyFn::absolute();
        } else if (kind == "power") {
            double p = need_number(pen, "p", "penalty");
            if (!(p >= 1.0)) fail("penalty.p", "must be >= 1");
            out.penalty = PenaltyFn::power(p);
        } else {
            fail("penalty.kind", "must be 'absolute' or 'power'");
        }
    }

    if (doc.contains("solver")) {
        const json& sol = doc["solver"];
        reject_unknown_keys(sol,
                            {"name", "iterations", "batch", "step_a", "step_alpha", "averaging",
                             "eval_samples", "resolution", "samples", "tolerance"},
                            "solver");
        if (sol.contains("name")) {
            try {
                out.solver = solver_from_name(sol["name"].get<std::string>());
            } catch (const std::exception& e) {
                fail("solver.name", e.what());
            }
        }
        if (sol.contains("iterations")) out.config.iterations = sol["iterations"].get<std::size_t>();
        if (sol.contains("batch")) out.config.batch_per_iter = sol["batch"].get<std::size_t>();
        if (sol.contains("step_a")) out.config.step_a = sol["step_a"].get<double>();
        if (sol.contains("step_alpha")) out.config.step_alpha = sol["step_alpha"].get<double>();
        if (sol.contains("averaging")) out.config.averaging_window = sol["averaging"].get<double>();
        if (sol.contains("eval_samples")) out.config.eval_samples = sol["eval_samples"].get<std::size_t>();
        if (sol.contains("tolerance")) out.config.tolerance = sol["tolerance"].get<double>();
        if (sol.contains("resolution")) {
            out.grid_resolution = sol["resolution"].get<double>();
            if (!(out.grid_resolution > 0.0)) fail("solver.resolution", "must be > 0");
        }
        if (sol.contains("samples")) {
            out.samples = sol["samples"].get<std::size_t>();
            if (out.samples == 0) fail("solver.samples", "must be >= 1");
        }
        try {
            out.config.validate();
        } catch (const std::exception& e) {
            fail("solver", e.what());
        }
    }

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned()) {
            fail("seed", "integer required");
        }
        out.seed = doc["seed"].get<std::uint64_t>();
    }
    return out;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

}  // namespace riskalloc
