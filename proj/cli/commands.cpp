#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "fpl/analysis.hpp"
#include "fpl/datadep.hpp"
#include "fpl/expression.hpp"
#include "fpl/ivp.hpp"
#include "fpl/operator_core.hpp"
#include "fpl/schemes.hpp"
#include "fpl/stability.hpp"
#include "report.hpp"

namespace fpl::cli {

using nlohmann::json;

Format format_from_name(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "md") return Format::md;
    if (name == "both") return Format::both;
    throw ConfigError("unknown format '" + name + "' (expected csv, md or both)");
}

namespace {

namespace fs = std::filesystem;

bool wants_csv(Format f) { return f != Format::md; }
bool wants_md(Format f) { return f != Format::csv; }

fs::path ensure_out_dir(const std::string& out_dir) {
    fs::path p = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + p.string() +
                          "': " + ec.message());
    return p;
}

const json* maybe(const json& cfg, const char* key) {
    auto it = cfg.find(key);
    return it == cfg.end() ? nullptr : &*it;
}

double require_number(const json& cfg, const char* key) {
    const json* v = maybe(cfg, key);
    if (!v || !v->is_number())
        throw ConfigError(std::string("'") + key + "' must be a number");
    return v->get<double>();
}

int require_count(const json& cfg, const char* key, int min_value, int fallback) {
    const json* v = maybe(cfg, key);
    if (!v) {
        if (fallback >= min_value) return fallback;
        throw ConfigError(std::string("'") + key + "' is required");
    }
    if (!v->is_number_integer())
        throw ConfigError(std::string("'") + key + "' must be an integer");
    const auto n = v->get<long long>();
    if (n < min_value)
        throw ConfigError(std::string("'") + key + "' must be >= " +
                          std::to_string(min_value));
    return static_cast<int>(n);
}

SchemeId scheme_from_json(const json& v, const char* key) {
    if (!v.is_string())
        throw ConfigError(std::string("'") + key + "' must be a scheme name");
    try {
        return scheme_from_name(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("'") + key + "': " + e.what());
    }
}

std::vector<SchemeId> schemes_from_json(const json& cfg, const char* key) {
    const json* v = maybe(cfg, key);
    if (!v || !v->is_array() || v->empty())
        throw ConfigError(std::string("'") + key +
                          "' must be a non-empty array of scheme names");
    std::vector<SchemeId> out;
    for (const auto& item : *v) out.push_back(scheme_from_json(item, key));
    return out;
}

ScalarOperator operator_field(const json& cfg, const char* key) {
    const json* v = maybe(cfg, key);
    if (!v) throw ConfigError(std::string("'") + key + "' is required");
    return operator_from_json(*v);
}

double start_inside(const ScalarOperator& op, const json& cfg, const char* key) {
    const double s0 = require_number(cfg, key);
    if (!op.contains(s0))
        throw ConfigError(std::string("'") + key + "' = " + format_full(s0) +
                          " lies outside [" + format_full(op.lo) + ", " +
                          format_full(op.hi) + "]");
    return s0;
}

void emit(const fs::path& out, const std::string& stem, Format fmt,
          const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& csv_rows,
          const std::vector<std::vector<std::string>>& md_rows) {
    if (wants_csv(fmt)) write_file((out / (stem + ".csv")).string(), csv_document(header, csv_rows));
    if (wants_md(fmt)) write_file((out / (stem + ".md")).string(), md_table(header, md_rows));
}

template <typename Fn>
auto numeric_phase(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const NumericError&) {
        throw;
    } catch (const std::exception& e) {
        throw NumericError(e.what());
    }
}

// ---------------------------------------------------------------- table ----

struct TableSpec {
    ScalarOperator op;
    std::vector<SchemeId> schemes;
    double s0 = 0.0;
    ControlSequences ctrl;
    int iterations = 0;
};

TableSpec parse_table(const json& cfg) {
    TableSpec spec{operator_field(cfg, "operator"),
                   schemes_from_json(cfg, "schemes"),
                   0.0,
                   control_from_json(maybe(cfg, "control")),
                   require_count(cfg, "iterations", 1, -1)};
    spec.s0 = start_inside(spec.op, cfg, "s0");
    return spec;
}

int cmd_table(const json& cfg, const fs::path& out, Format fmt) {
    const TableSpec spec = parse_table(cfg);
    return numeric_phase([&] {
        StopRule stop;
        stop.max_iters = spec.iterations;
        stop.step_tol = 0.0;  // run every scheme the full row count
        std::vector<IterationTrace> traces;
        for (SchemeId id : spec.schemes)
            traces.push_back(run(id, spec.op, spec.s0, spec.ctrl, stop));

        std::vector<std::string> header{"iteration"};
        for (SchemeId id : spec.schemes) header.emplace_back(scheme_name(id));
        std::vector<std::vector<std::string>> csv_rows, md_rows;
        for (int m = 0; m <= spec.iterations; ++m) {
            std::vector<std::string> full{std::to_string(m)}, six{std::to_string(m)};
            for (const auto& tr : traces) {
                full.push_back(format_full(tr.iterates.at(m)));
                six.push_back(format_fixed6(tr.iterates.at(m)));
            }
            csv_rows.push_back(std::move(full));
            md_rows.push_back(std::move(six));
        }
        emit(out, "table", fmt, header, csv_rows, md_rows);
        return 0;
    });
}

// -------------------------------------------------------------- compare ----

struct CompareSpec {
    ScalarOperator op;
    SchemeId baseline = SchemeId::at;
    std::vector<SchemeId> against;
    double s0 = 0.0;
    ControlSequences ctrl;
    StopRule stop;
};

CompareSpec parse_compare(const json& cfg) {
    CompareSpec spec;
    spec.op = operator_field(cfg, "operator");
    const json* base = maybe(cfg, "baseline");
    if (!base) throw ConfigError("'baseline' is required");
    spec.baseline = scheme_from_json(*base, "baseline");
    spec.against = schemes_from_json(cfg, "against");
    spec.s0 = start_inside(spec.op, cfg, "s0");
    spec.ctrl = control_from_json(maybe(cfg, "control"));
    StopRule defaults;
    defaults.max_iters = 200;
    spec.stop = stop_from_json(maybe(cfg, "stop"), defaults);
    return spec;
}

int cmd_compare(const json& cfg, const fs::path& out, Format fmt) {
    const CompareSpec spec = parse_compare(cfg);
    return numeric_phase([&] {
        // Ratio tails probe error floors near 1e-16, so the reference fixed
        // point has to be machine-accurate.
        const double s_star = oracle_fixed_point(spec.op, 1e-15).value;
        const IterationTrace base = run(spec.baseline, spec.op, spec.s0, spec.ctrl, spec.stop);

        std::vector<std::string> names;
        std::vector<RateComparison> comparisons;
        size_t longest = 0;
        for (SchemeId id : spec.against) {
            const IterationTrace other = run(id, spec.op, spec.s0, spec.ctrl, spec.stop);
            comparisons.push_back(compare_rates(base, other, s_star));
            names.emplace_back(scheme_name(id));
            longest = std::max(longest, comparisons.back().ratios.size());
        }

        std::vector<std::string> ratio_header{"m"};
        for (const auto& n : names) ratio_header.push_back(n);
        std::vector<std::vector<std::string>> ratio_rows;
        for (size_t m = 0; m < longest; ++m) {
            std::vector<std::string> row{std::to_string(m)};
            for (const auto& c : comparisons)
                row.push_back(m < c.ratios.size() ? format_full(c.ratios[m])
                                                  : std::string());
            ratio_rows.push_back(std::move(row));
        }
        if (wants_csv(fmt))
            write_file((out / "compare_ratios.csv").string(),
                       csv_document(ratio_header, ratio_rows));

        std::vector<std::string> verdict_header{"scheme", "verdict"};
        std::vector<std::vector<std::string>> verdict_rows;
        for (size_t i = 0; i < names.size(); ++i)
            verdict_rows.push_back({names[i], verdict_name(comparisons[i].verdict)});
        if (wants_csv(fmt))
            write_file((out / "compare_verdicts.csv").string(),
                       csv_document(verdict_header, verdict_rows));
        if (wants_md(fmt)) {
            std::string doc = "baseline: " + std::string(scheme_name(spec.baseline)) +
                              "\n\n" + md_table(verdict_header, verdict_rows);
            write_file((out / "compare.md").string(), doc);
        }
        return 0;
    });
}

// ------------------------------------------------------------ stability ----

const char* pert_kind_name(PerturbationModel::Kind k) {
    switch (k) {
        case PerturbationModel::Kind::zero: return "zero";
        case PerturbationModel::Kind::summable_power: return "summable_power";
        case PerturbationModel::Kind::nonsummable_constant: return "nonsummable_constant";
        case PerturbationModel::Kind::explicit_list: return "explicit_list";
    }
    return "?";
}

PerturbationModel::SignRule sign_rule_from_json(const json& spec) {
    const json* v = maybe(spec, "signs");
    if (!v) return PerturbationModel::SignRule::alternating;
    if (v->is_string()) {
        const std::string s = v->get<std::string>();
        if (s == "alternating") return PerturbationModel::SignRule::alternating;
        if (s == "always_positive") return PerturbationModel::SignRule::always_positive;
    }
    throw ConfigError("'signs' must be 'alternating' or 'always_positive'");
}

PerturbationModel perturbation_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string())
        throw ConfigError("each perturbation needs a string 'kind'");
    const std::string kind = spec.at("kind").get<std::string>();
    const auto sign = sign_rule_from_json(spec);
    try {
        if (kind == "zero") return PerturbationModel::zero();
        if (kind == "summable_power")
            return PerturbationModel::summable_power(require_number(spec, "c"),
                                                     require_number(spec, "p"), sign);
        if (kind == "nonsummable_constant")
            return PerturbationModel::nonsummable_constant(require_number(spec, "c"), sign);
        if (kind == "explicit_list") {
            const json* v = maybe(spec, "values");
            if (!v || !v->is_array())
                throw ConfigError("'explicit_list' needs an array 'values'");
            return PerturbationModel::explicit_list(v->get<std::vector<double>>(), sign);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("perturbation '") + kind + "': " + e.what());
    }
    throw ConfigError("unknown perturbation kind '" + kind + "'");
}

struct StabilitySpec {
    ScalarOperator op;
    SchemeId scheme = SchemeId::at;
    double r0 = 0.0;
    ControlSequences ctrl;
    int m_max = 200;
    std::vector<PerturbationModel> models;
    std::vector<std::string> labels;
};

StabilitySpec parse_stability(const json& cfg) {
    StabilitySpec spec;
    spec.op = operator_field(cfg, "operator");
    const json* sch = maybe(cfg, "scheme");
    if (!sch) throw ConfigError("'scheme' is required");
    spec.scheme = scheme_from_json(*sch, "scheme");
    spec.r0 = start_inside(spec.op, cfg, "r0");
    spec.ctrl = control_from_json(maybe(cfg, "control"));
    spec.m_max = require_count(cfg, "m_max", 1, 200);
    const json* perts = maybe(cfg, "perturbations");
    if (!perts || !perts->is_array() || perts->empty())
        throw ConfigError("'perturbations' must be a non-empty array");
    for (size_t i = 0; i < perts->size(); ++i) {
        spec.models.push_back(perturbation_from_json(perts->at(i)));
        spec.labels.push_back(std::to_string(i) + ":" +
                              pert_kind_name(spec.models.back().kind));
    }
    return spec;
}

int cmd_stability(const json& cfg, const fs::path& out, Format fmt) {
    const StabilitySpec spec = parse_stability(cfg);
    return numeric_phase([&] {
        const auto reports =
            stability_sweep(spec.scheme, spec.op, spec.models, spec.r0, spec.ctrl, spec.m_max);

        if (wants_csv(fmt)) {
            std::vector<std::string> header{"model", "m", "gamma", "partial_sum", "gap"};
            std::vector<std::vector<std::string>> rows;
            for (size_t i = 0; i < reports.size(); ++i) {
                const auto& rep = reports[i];
                for (size_t m = 0; m < rep.gamma.size(); ++m)
                    rows.push_back({spec.labels[i], std::to_string(m),
                                    format_full(rep.gamma[m]),
                                    format_full(rep.gamma_partial_sums[m]),
                                    format_full(std::abs(rep.r[m + 1] - rep.s_star))});
            }
            write_file((out / "stability.csv").string(), csv_document(header, rows));
        }
        if (wants_md(fmt)) {
            std::vector<std::string> header{"model", "converged", "classified_summable",
                                            "final_gap"};
            std::vector<std::vector<std::string>> rows;
            for (size_t i = 0; i < reports.size(); ++i)
                rows.push_back({spec.labels[i], reports[i].converged ? "true" : "false",
                                reports[i].classified_summable ? "true" : "false",
                                format_full(reports[i].final_gap)});
            write_file((out / "stability.md").string(), md_table(header, rows));
        }
        return 0;
    });
}

// -------------------------------------------------------------- datadep ----

struct DatadepSpec {
    ScalarOperator R, F;
    double zeta = 0.5, L = 0.0;
    int cert_grid = 0, epsilon_grid = 0;
    std::optional<double> epsilon;
    double v0 = 0.0;
    ControlSequences ctrl;
    StopRule stop;
};

DatadepSpec parse_datadep(const json& cfg) {
    DatadepSpec spec;
    spec.R = operator_field(cfg, "operator");
    spec.F = operator_field(cfg, "approximation");
    spec.zeta = require_number(cfg, "zeta");
    spec.L = require_number(cfg, "L");
    if (!(spec.zeta > 0.0 && spec.zeta < 1.0))
        throw ConfigError("'zeta' must lie in (0, 1)");
    if (spec.L < 0.0) throw ConfigError("'L' must be >= 0");
    spec.cert_grid = require_count(cfg, "cert_grid", 2, default_grid_points());
    spec.epsilon_grid = require_count(cfg, "epsilon_grid", 2, 1000001);
    if (const json* e = maybe(cfg, "epsilon")) {
        if (!e->is_number()) throw ConfigError("'epsilon' must be a number");
        spec.epsilon = e->get<double>();
    }
    spec.v0 = require_number(cfg, "v0");
    if (!maybe(cfg, "control")) {
        spec.ctrl.a = ControlSequence::constant(0.5);
    } else {
        spec.ctrl = control_from_json(maybe(cfg, "control"));
    }
    StopRule defaults;
    defaults.max_iters = 200;
    defaults.step_tol = 1e-14;
    spec.stop = stop_from_json(maybe(cfg, "stop"), defaults);
    return spec;
}

int cmd_datadep(const json& cfg, const fs::path& out, Format fmt) {
    const DatadepSpec spec = parse_datadep(cfg);
    return numeric_phase([&] {
        const ApproximatePair pair =
            make_approximate_pair(spec.R, spec.F, spec.zeta, spec.L, spec.cert_grid,
                                  spec.epsilon_grid, spec.epsilon);
        const DataDepReport rep = verify_bound(pair);
        const IterationTrace trace = run_approx(pair, spec.v0, spec.ctrl, spec.stop);

        const std::vector<std::string> header{"epsilon", "zeta",   "L",
                                              "bound",   "s_star", "t_star",
                                              "distance", "holds"};
        const std::vector<std::string> full{
            format_full(pair.epsilon),  format_full(pair.zeta),
            format_full(pair.L),        format_full(rep.bound),
            format_full(rep.s_star),    format_full(rep.t_star),
            format_full(rep.distance),  rep.holds ? "true" : "false"};
        const std::vector<std::string> six{
            format_fixed6(pair.epsilon), format_fixed6(pair.zeta),
            format_fixed6(pair.L),       format_fixed6(rep.bound),
            format_fixed6(rep.s_star),   format_fixed6(rep.t_star),
            format_fixed6(rep.distance), rep.holds ? "true" : "false"};
        if (wants_csv(fmt)) {
            write_file((out / "datadep.csv").string(), csv_document(header, {full}));
            std::vector<std::vector<std::string>> trace_rows;
            for (size_t m = 0; m < trace.iterates.size(); ++m)
                trace_rows.push_back({std::to_string(m), format_full(trace.iterates[m])});
            write_file((out / "datadep_trace.csv").string(),
                       csv_document({"m", "v"}, trace_rows));
        }
        if (wants_md(fmt))
            write_file((out / "datadep.md").string(), md_table(header, {six}));

        if (!rep.holds)
            throw NumericError("fixed-point distance " + format_full(rep.distance) +
                               " exceeds the bound " + format_full(rep.bound));
        return 0;
    });
}

// ------------------------------------------------------------------ ivp ----

struct NamedIvp {
    IVPProblem prob;
    std::function<double(double)> reference;
};

NamedIvp make_ivp_problem(const std::string& name) {
    if (name == "decay") {
        // y' + y = 0, y(0) = 1 on [0, 1/2]; solution e^{-t}
        IVPProblem p;
        p.n = 1;
        p.rhs = [](double, const std::vector<double>& y) { return y[0]; };
        p.lipschitz = {1.0};
        p.kernel = [](double, double) { return 1.0; };
        p.initial_values = {1.0};
        p.a = 0.0;
        p.b = 0.5;
        return {std::move(p), [](double t) { return std::exp(-t); }};
    }
    if (name == "harmonic") {
        // y'' + y = 0, y(0) = 0, y'(0) = 1 on [0, 0.9]; solution sin(t)
        IVPProblem p;
        p.n = 2;
        p.rhs = [](double, const std::vector<double>& y) { return y[0]; };
        p.lipschitz = {1.0, 0.0};
        p.kernel = [](double t, double s) { return t - s; };
        p.initial_values = {0.0, 1.0};
        p.a = 0.0;
        p.b = 0.9;
        return {std::move(p), [](double t) { return std::sin(t); }};
    }
    throw ConfigError("unknown ivp problem '" + name +
                      "' (expected 'decay' or 'harmonic')");
}

struct IvpSpec {
    NamedIvp named;
    int nodes = 2001;
    ControlSequences ctrl;
    StopRule stop;
};

IvpSpec parse_ivp(const json& cfg) {
    IvpSpec spec;
    const json* prob = maybe(cfg, "problem");
    if (!prob || !prob->is_string())
        throw ConfigError("'problem' must be 'decay' or 'harmonic'");
    spec.named = make_ivp_problem(prob->get<std::string>());
    spec.nodes = require_count(cfg, "nodes", 4, 2001);
    if (!maybe(cfg, "control")) {
        spec.ctrl.a = ControlSequence::constant(0.5);
    } else {
        spec.ctrl = control_from_json(maybe(cfg, "control"));
    }
    StopRule defaults;
    defaults.max_iters = 60;
    defaults.step_tol = 1e-10;
    spec.stop = stop_from_json(maybe(cfg, "stop"), defaults);
    return spec;
}

int cmd_ivp(const json& cfg, const fs::path& out, Format fmt) {
    IvpSpec spec = parse_ivp(cfg);
    return numeric_phase([&] {
        const IvpSolution sol =
            solve_via_at(spec.named.prob, spec.ctrl, spec.stop, spec.nodes);
        const GridFunction& y = sol.solution;

        double sup_error = 0.0;
        std::vector<std::vector<std::string>> rows;
        rows.reserve(y.n_nodes);
        for (int i = 0; i < y.n_nodes; ++i) {
            const double t = y.node(i);
            const double ref = spec.named.reference(t);
            const double err = std::abs(y.values[i] - ref);
            sup_error = std::max(sup_error, err);
            rows.push_back({format_full(t), format_full(y.values[i]),
                            format_full(ref), format_full(err)});
        }
        if (wants_csv(fmt))
            write_file((out / "ivp.csv").string(),
                       csv_document({"t", "y", "reference", "abs_error"}, rows));
        if (wants_md(fmt)) {
            const std::vector<std::string> header{"alpha", "nodes", "iterations",
                                                  "sup_error", "last_step_norm"};
            const std::vector<std::string> row{
                format_full(sol.alpha), std::to_string(y.n_nodes),
                std::to_string(sol.step_norms.size()), format_full(sup_error),
                sol.step_norms.empty() ? std::string()
                                       : format_full(sol.step_norms.back())};
            write_file((out / "ivp.md").string(), md_table(header, {row}));
        }
        return 0;
    });
}

}  // namespace

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, Format fmt) {
    const json cfg = load_json(config_path);
    if (const json* declared = maybe(cfg, "command")) {
        if (!declared->is_string() || declared->get<std::string>() != command)
            throw ConfigError("config declares command '" +
                              (declared->is_string() ? declared->get<std::string>()
                                                     : std::string("?")) +
                              "' but '" + command + "' was invoked");
    }
    const fs::path out = ensure_out_dir(out_dir);
    if (command == "table") return cmd_table(cfg, out, fmt);
    if (command == "compare") return cmd_compare(cfg, out, fmt);
    if (command == "stability") return cmd_stability(cfg, out, fmt);
    if (command == "datadep") return cmd_datadep(cfg, out, fmt);
    if (command == "ivp") return cmd_ivp(cfg, out, fmt);
    throw ConfigError("unknown command '" + command + "'");
}

int run_eval(const std::string& expr_text, double at) {
    expr::NodePtr ast;
    try {
        ast = expr::parse(expr_text);
    } catch (const expr::ParseError& e) {
        throw ConfigError("expression at byte " + std::to_string(e.offset) + ": " +
                          e.what());
    }
    double value = 0.0;
    try {
        value = expr::eval(*ast, at);
    } catch (const std::exception& e) {
        throw NumericError(e.what());
    }
    std::cout << format_full(value) << "\n";
    return 0;
}

}  // namespace fpl::cli
