#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <json.hpp>

#include "fpl/expression.hpp"

namespace fpl::cli {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config '" + path + "': top level must be an object");
    return j;
}

ScalarOperator operator_from_json(const json& spec) {
    if (!spec.is_object()) throw ConfigError("operator spec must be an object");
    try {
        std::optional<std::pair<double, double>> domain;
        if (spec.contains("domain")) {
            const auto& d = spec.at("domain");
            if (!d.is_array() || d.size() != 2)
                throw ConfigError("operator domain must be [lo, hi]");
            domain = {d[0].get<double>(), d[1].get<double>()};
        }
        if (spec.contains("catalog")) {
            ScalarOperator op = catalog_lookup(spec.at("catalog").get<std::string>());
            if (domain) op = with_domain(op, domain->first, domain->second);
            return op;
        }
        if (spec.contains("expr")) {
            if (!domain) throw ConfigError("expression operators need a domain");
            const std::string text = spec.at("expr").get<std::string>();
            expr::NodePtr ast;
            try {
                ast = expr::parse(text);
            } catch (const expr::ParseError& e) {
                throw ConfigError("operator expression '" + text + "': " + e.what() +
                                  " (byte " + std::to_string(e.offset) + ")");
            }
            const std::string name =
                spec.contains("name") ? spec.at("name").get<std::string>() : text;
            return make_operator(name, domain->first, domain->second,
                                 [ast](double x) { return expr::eval(*ast, x); });
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("operator spec: ") + e.what());
    }
    throw ConfigError("operator spec needs either 'catalog' or 'expr'");
}

namespace {

ControlSequence sequence_from_json(const json& spec, const char* which) {
    if (!spec.is_object())
        throw ConfigError(std::string("control sequence '") + which + "' must be an object");
    try {
        if (spec.contains("constant"))
            return ControlSequence::constant(spec.at("constant").get<double>());
        if (spec.contains("reciprocal"))
            return ControlSequence::reciprocal(spec.at("reciprocal").get<double>());
        if (spec.contains("list"))
            return ControlSequence::explicit_list(spec.at("list").get<std::vector<double>>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("control sequence '") + which + "': " + e.what());
    }
    throw ConfigError(std::string("control sequence '") + which +
                      "' needs 'constant', 'reciprocal' or 'list'");
}

}  // namespace

ControlSequences control_from_json(const json* spec) {
    ControlSequences ctrl;
    if (!spec) return ctrl;
    if (!spec->is_object()) throw ConfigError("'control' must be an object");
    if (spec->contains("a")) ctrl.a = sequence_from_json(spec->at("a"), "a");
    if (spec->contains("c")) ctrl.c = sequence_from_json(spec->at("c"), "c");
    if (spec->contains("d")) ctrl.d = sequence_from_json(spec->at("d"), "d");
    return ctrl;
}

StopRule stop_from_json(const json* spec, const StopRule& defaults) {
    StopRule stop = defaults;
    if (!spec) return stop;
    if (!spec->is_object()) throw ConfigError("'stop' must be an object");
    try {
        if (spec->contains("max_iters")) stop.max_iters = spec->at("max_iters").get<int>();
        if (spec->contains("step_tol")) stop.step_tol = spec->at("step_tol").get<double>();
        if (spec->contains("target")) {
            const auto& t = spec->at("target");
            stop.target = {t.at("value").get<double>(), t.at("tol").get<double>()};
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("'stop': ") + e.what());
    }
    if (stop.max_iters < 1) throw ConfigError("'stop.max_iters' must be >= 1");
    if (stop.step_tol < 0.0) throw ConfigError("'stop.step_tol' must be >= 0");
    return stop;
}

int default_grid_points() {
    const char* env = std::getenv("FPL_GRID_POINTS");
    if (!env || !*env) return 100001;
    int value = 0;
    const char* end = env + std::string_view(env).size();
    const auto res = std::from_chars(env, end, value);
    if (res.ec != std::errc{} || res.ptr != end || value < 2)
        throw ConfigError(std::string("FPL_GRID_POINTS='") + env +
                          "' is not an integer >= 2");
    return value;
}

}  // namespace fpl::cli
