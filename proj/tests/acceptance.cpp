// Acceptance gate: one line per criterion, exit 0 only when all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "fpl/analysis.hpp"
#include "fpl/datadep.hpp"
#include "fpl/expression.hpp"
#include "fpl/ivp.hpp"
#include "fpl/operator_core.hpp"
#include "fpl/schemes.hpp"
#include "fpl/stability.hpp"

using namespace fpl;

namespace {

namespace fs = std::filesystem;

ControlSequences all_half() {
    ControlSequences ctrl;
    ctrl.a = ControlSequence::constant(0.5);
    ctrl.c = ControlSequence::constant(0.5);
    ctrl.d = ControlSequence::constant(0.5);
    return ctrl;
}

const SchemeId kAllSchemes[] = {SchemeId::picard, SchemeId::mann, SchemeId::ishikawa,
                                SchemeId::s,      SchemeId::normal_s, SchemeId::varat,
                                SchemeId::fstar,  SchemeId::at};

IterationTrace fixed_run(SchemeId id, const ScalarOperator& op, double s0, int iters) {
    StopRule stop;
    stop.max_iters = iters;
    stop.step_tol = 0.0;
    return run(id, op, s0, all_half(), stop);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---- 1: reference picard column ----------------------------------------

Outcome picard_reference_column() {
    const auto op = catalog_lookup("cos_half");
    const auto t0 = std::chrono::steady_clock::now();
    const auto trace = fixed_run(SchemeId::picard, op, 1.658950, 9);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();

    const double expected[9] = {0.675263, 0.943542, 0.890765, 0.902446, 0.899914,
                                0.900466, 0.900346, 0.900372, 0.900366};
    double worst = 0.0;
    for (int m = 1; m <= 9; ++m)
        worst = std::max(worst, std::fabs(trace.iterates[m] - expected[m - 1]));

    char buf[160];
    std::snprintf(buf, sizeof buf, "max column deviation %.2e (tol 1.5e-6), %.3f ms",
                  worst, ms);
    return {worst <= 1.5e-6 && ms < 10.0, buf};
}

// ---- 2: common limit for every scheme ----------------------------------

Outcome common_limit() {
    const auto op = catalog_lookup("cos_half");
    int worst_hit = -1;
    for (SchemeId id : kAllSchemes) {
        const int budget = (id == SchemeId::mann) ? 300 : 60;
        const auto trace = fixed_run(id, op, 1.658950, budget);
        int hit = -1;
        for (int m = 0; m < static_cast<int>(trace.iterates.size()); ++m) {
            if (std::fabs(trace.iterates[m] - 0.900367) <= 5e-6) {
                hit = m;
                break;
            }
        }
        const bool settled = std::fabs(trace.iterates.back() - 0.900367) <= 5e-6;
        if (hit < 0 || !settled)
            return {false, std::string("scheme ") + scheme_name(id) +
                               " misses the common limit in its budget"};
        worst_hit = std::max(worst_hit, hit);
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "all eight schemes reach 0.900367 +/- 5e-6; latest first hit m=%d",
                  worst_hit);
    return {true, buf};
}

// ---- 3: cubic envelope of the averaged two-step scheme ------------------

Outcome cubic_envelope() {
    const auto op = catalog_lookup("cos_half");
    const double s_star = oracle_fixed_point(op, 1e-15).value;
    const auto trace = fixed_run(SchemeId::at, op, 1.658950, 20);

    const auto env = envelope(SchemeId::at, 0.5, std::fabs(1.658950 - s_star), 20);
    const auto rep = envelope_check(trace, env, s_star);
    if (!rep.pass) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "envelope exceeded by %.2e at m=%d",
                      rep.max_excess, rep.worst_index);
        return {false, buf};
    }

    double worst_factor = 0.0;
    for (size_t m = 0; m + 1 < trace.iterates.size(); ++m) {
        const double em = std::fabs(trace.iterates[m] - s_star);
        if (em <= 1e-13) continue;
        worst_factor =
            std::max(worst_factor, std::fabs(trace.iterates[m + 1] - s_star) / em);
    }
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "envelope excess %.2e (slack 1e-12), worst per-step factor %.2e (cap 0.125)",
                  rep.max_excess, worst_factor);
    return {rep.pass && worst_factor <= 0.125, buf};
}

// ---- 4: auxiliary point bound -------------------------------------------

Outcome auxiliary_bound() {
    const auto op = catalog_lookup("cos_half");
    const double s_star = oracle_fixed_point(op, 1e-15).value;
    const auto trace = fixed_run(SchemeId::at, op, 1.658950, 20);

    double worst = -1.0;
    for (size_t m = 0; m < trace.auxiliaries.size(); ++m) {
        if (!trace.auxiliaries[m].b) return {false, "missing auxiliary point"};
        const double eb = std::fabs(*trace.auxiliaries[m].b - s_star);
        const double es = std::fabs(trace.iterates[m] - s_star);
        worst = std::max(worst, eb - 0.25 * es);
    }
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "max(|b_m - s*| - 0.25|s_m - s*|) = %.2e (slack 1e-12)", worst);
    return {worst <= 1e-12, buf};
}

// ---- 5: rate ordering ----------------------------------------------------

Outcome rate_ordering() {
    const auto op = catalog_lookup("cos_half");
    const double s_star = oracle_fixed_point(op, 1e-15).value;
    StopRule stop;  // default: step_tol 1e-12 ends runs at the error floor
    const auto base = run(SchemeId::at, op, 1.658950, all_half(), stop);

    for (SchemeId id : {SchemeId::picard, SchemeId::mann, SchemeId::ishikawa,
                        SchemeId::s, SchemeId::normal_s, SchemeId::varat,
                        SchemeId::fstar}) {
        const auto other = run(id, op, 1.658950, all_half(), stop);
        const auto cmp = compare_rates(base, other, s_star);
        if (cmp.verdict != RateVerdict::a_faster)
            return {false, std::string("verdict vs ") + scheme_name(id) + " is " +
                               verdict_name(cmp.verdict)};
    }

    // envelope-ratio indices in exact arithmetic at zeta = 1/2
    const auto first_below = [](double zeta, int k, double tol) {
        for (int m = 0;; ++m)
            if (std::pow(zeta, k * (m + 1)) < tol) return m;
    };
    const int vs_picard = first_below(0.5, 2, 1e-3);
    const int vs_fstar = first_below(0.5, 1, 1e-3);
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "seven a_faster verdicts; envelope ratios drop below 1e-3 at m=%d and m=%d",
                  vs_picard, vs_fstar);
    return {vs_picard == 4 && vs_fstar == 9, buf};
}

// ---- 6: perturbation stability -------------------------------------------

Outcome perturbation_stability() {
    const auto op = catalog_lookup("cos_half");
    ControlSequences ctrl;
    ctrl.a = ControlSequence::constant(0.5);

    const auto summable = perturbed_run(SchemeId::at, op, 1.658950, ctrl,
                                        PerturbationModel::summable_power(0.1, 2.0), 200);
    const auto constant = perturbed_run(SchemeId::at, op, 1.658950, ctrl,
                                        PerturbationModel::nonsummable_constant(0.1), 200);

    double min_tail_gap = 1e9;
    for (int m = 150; m < 200; ++m)
        min_tail_gap = std::min(min_tail_gap, std::fabs(constant.r[m + 1] - constant.s_star));

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "summable gap %.2e (tol 1e-4); constant-injection tail gap %.2e (floor 1e-3)",
                  summable.final_gap, min_tail_gap);
    return {summable.final_gap <= 1e-4 && summable.converged && min_tail_gap > 1e-3, buf};
}

// ---- 7: approximate-operator bound ----------------------------------------

Outcome approximate_operator_bound() {
    const auto R = with_domain(catalog_lookup("cos_half"), 0.0, 1.0);
    const auto F = catalog_lookup("poly_approx");
    const auto pair = make_approximate_pair(R, F, 0.5, 0.0, 10001, 1000001);
    const auto rep = verify_bound(pair);

    const double bound_at_quoted_eps = datadep_bound(0.124978, 0.5);
    const bool ok = std::fabs(pair.epsilon - 0.124978) <= 1e-4 &&
                    std::fabs(bound_at_quoted_eps - 1.562225) <= 1e-9 &&
                    std::fabs(rep.s_star - 0.9003665) <= 1e-6 &&
                    std::fabs(rep.t_star - 0.82930) <= 1e-4 && rep.holds;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "eps %.6f, bound %.6f, s* %.7f, t* %.5f, distance %.4f <= bound: %s",
                  pair.epsilon, bound_at_quoted_eps, rep.s_star, rep.t_star,
                  rep.distance, rep.holds ? "yes" : "no");
    return {ok, buf};
}

// ---- 8: piecewise operator -------------------------------------------------

Outcome piecewise_operator() {
    const auto hj = catalog_lookup("halving_jump");

    const auto weak = certify(hj, CertificateKind::weak_10, 0.5, 1.0 / 3.0, 1001);
    if (!weak.certified) return {false, "weak certificate not established"};

    for (double zeta : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999, 0.999999}) {
        if (certify(hj, CertificateKind::zeta_contraction, zeta, 0.0, 1001).certified)
            return {false, "plain contraction certificate unexpectedly holds"};
    }

    const auto trace = fixed_run(SchemeId::at, hj, 0.9, 30);
    const double final_gap = std::fabs(trace.iterates.back());
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "weak certificate defect %.1e; plain contraction always fails; |s_30| = %.2e",
                  weak.max_defect, final_gap);
    return {final_gap <= 1e-10, buf};
}

// ---- 9: integral-equation solves -------------------------------------------

IVPProblem decay_problem() {
    IVPProblem p;
    p.n = 1;
    p.rhs = [](double, const std::vector<double>& y) { return y[0]; };
    p.lipschitz = {1.0};
    p.kernel = [](double, double) { return 1.0; };
    p.initial_values = {1.0};
    p.a = 0.0;
    p.b = 0.5;
    return p;
}

IVPProblem harmonic_problem() {
    IVPProblem p;
    p.n = 2;
    p.rhs = [](double, const std::vector<double>& y) { return y[0]; };
    p.lipschitz = {1.0, 0.0};
    p.kernel = [](double t, double s) { return t - s; };
    p.initial_values = {0.0, 1.0};
    p.a = 0.0;
    p.b = 0.9;
    return p;
}

double solution_sup_error(const GridFunction& y, const std::function<double(double)>& ref) {
    double worst = 0.0;
    for (int i = 0; i < y.n_nodes; ++i)
        worst = std::max(worst, std::fabs(y.values[i] - ref(y.node(i))));
    return worst;
}

Outcome integral_equation_solves() {
    ControlSequences ctrl;
    ctrl.a = ControlSequence::constant(0.5);
    StopRule stop;
    stop.max_iters = 60;
    stop.step_tol = 1e-10;

    const auto exp_ref = [](double t) { return std::exp(-t); };
    const auto fine = solve_via_at(decay_problem(), ctrl, stop, 2001);
    const auto coarse = solve_via_at(decay_problem(), ctrl, stop, 1001);
    const double e_fine = solution_sup_error(fine.solution, exp_ref);
    const double e_coarse = solution_sup_error(coarse.solution, exp_ref);

    const auto harm = solve_via_at(harmonic_problem(), ctrl, stop, 2001);
    const double e_harm =
        solution_sup_error(harm.solution, [](double t) { return std::sin(t); });

    const bool ok = e_fine <= 1e-5 && fine.alpha < 1.0 && harm.alpha < 1.0 &&
                    e_coarse / e_fine >= 3.0 && e_harm <= 1e-4;
    char buf[180];
    std::snprintf(buf, sizeof buf,
                  "decay sup-error %.2e (alpha %.2f), mesh-halving ratio %.2f, sine sup-error %.2e",
                  e_fine, fine.alpha, e_coarse / e_fine, e_harm);
    return {ok, buf};
}

// ---- 10: property suites -----------------------------------------------------

Outcome property_suites() {
    // stationarity across the catalog
    for (const auto& name : catalog_names()) {
        const auto op = catalog_lookup(name);
        const double s_star = oracle_fixed_point(op, 1e-15).value;
        for (SchemeId id : kAllSchemes) {
            const auto trace = fixed_run(id, op, s_star, 3);
            for (double v : trace.iterates)
                if (std::fabs(v - s_star) > 1e-12)
                    return {false, std::string("scheme ") + scheme_name(id) +
                                       " drifts off the fixed point of " + name};
        }
    }

    // zero perturbation is bit-equivalent to the clean run
    const struct {
        const char* op;
        double s0;
    } starts[] = {{"cos_half", 1.5}, {"halving_jump", 0.9}, {"poly_approx", 0.2}};
    ControlSequences ctrl;
    ctrl.a = ControlSequence::constant(0.5);
    for (const auto& st : starts) {
        const auto op = catalog_lookup(st.op);
        const auto clean = fixed_run(SchemeId::at, op, st.s0, 50);
        const auto rep =
            perturbed_run(SchemeId::at, op, st.s0, ctrl, PerturbationModel::zero(), 50);
        for (size_t m = 0; m < rep.r.size(); ++m)
            if (rep.r[m] != clean.iterates[m])
                return {false, std::string("zero-perturbation drift on ") + st.op};
    }

    // parser round-trip
    for (const char* src :
         {"x", "-x^2", "cos(x/2)", "1-(2-3)", "x/2/3", "2^3^x", "abs(-x)",
          "sqrt(x+1)", "0.5*x^4-x*2+1e-3", "-cos(x)^2"}) {
        const auto first = expr::parse(src);
        const auto second = expr::parse(expr::to_string(*first));
        if (!expr::equal(*first, *second))
            return {false, std::string("round-trip changes '") + src + "'"};
    }

    // byte-identical CSV reruns across the catalog
    const fs::path dir = fs::temp_directory_path() / "fpl_acceptance_csv";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const struct {
        const char* op;
        double s0;
    } tables[] = {{"cos_half", 1.658950}, {"halving_jump", 0.9}, {"poly_approx", 0.2}};
    for (const auto& tb : tables) {
        const fs::path cfg_path = dir / (std::string(tb.op) + ".json");
        {
            std::ofstream cfg(cfg_path, std::ios::binary);
            cfg << "{\n  \"command\": \"table\",\n  \"operator\": {\"catalog\": \""
                << tb.op << "\"},\n  \"schemes\": [\"picard\", \"mann\", \"ishikawa\", "
                << "\"s\", \"normal_s\", \"varat\", \"fstar\", \"at\"],\n  \"s0\": "
                << tb.s0 << ",\n  \"control\": {\"a\": {\"constant\": 0.5}, "
                << "\"c\": {\"constant\": 0.5}, \"d\": {\"constant\": 0.5}},\n"
                << "  \"iterations\": 9\n}\n";
        }
        const fs::path out1 = dir / (std::string(tb.op) + "_1");
        const fs::path out2 = dir / (std::string(tb.op) + "_2");
        fpl::cli::run_command("table", cfg_path.string(), out1.string(),
                              fpl::cli::Format::csv);
        fpl::cli::run_command("table", cfg_path.string(), out2.string(),
                              fpl::cli::Format::csv);
        if (slurp(out1 / "table.csv") != slurp(out2 / "table.csv") ||
            slurp(out1 / "table.csv").empty())
            return {false, std::string("rerun differs for ") + tb.op};
    }

    return {true,
            "stationarity, zero-perturbation equivalence, parser round-trip, rerun identity"};
}

}  // namespace

int main() {
    const struct {
        const char* label;
        std::function<Outcome()> check;
    } criteria[] = {
        {"reference column", picard_reference_column},
        {"common limit", common_limit},
        {"cubic envelope", cubic_envelope},
        {"auxiliary bound", auxiliary_bound},
        {"rate ordering", rate_ordering},
        {"perturbation stability", perturbation_stability},
        {"approximate-operator bound", approximate_operator_bound},
        {"piecewise operator", piecewise_operator},
        {"integral-equation solves", integral_equation_solves},
        {"property suites", property_suites},
    };

    int passed = 0;
    int id = 0;
    for (const auto& c : criteria) {
        ++id;
        Outcome out;
        try {
            out = c.check();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %s  %-27s %s\n", id, out.pass ? "PASS" : "FAIL",
                    c.label, out.detail.c_str());
        if (out.pass) ++passed;
    }
    std::printf("acceptance: %d/10 criteria pass\n", passed);
    return passed == 10 ? 0 : 1;
}
