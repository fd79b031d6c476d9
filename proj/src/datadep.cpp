#include "fpl/datadep.hpp"

#include <cmath>
#include <stdexcept>

namespace fpl {

ApproximatePair make_approximate_pair(const ScalarOperator& R, const ScalarOperator& F,
                                      double zeta, double L, int cert_grid_points,
                                      int epsilon_grid_points,
                                      std::optional<double> epsilon_override) {
    auto cert = certify(R, CertificateKind::weak_11, zeta, L, cert_grid_points);
    if (!cert.certified)
        throw std::invalid_argument("approximate pair: '" + R.name +
                                    "' failed weak-contraction certification at zeta = " +
                                    std::to_string(zeta) + ", L = " + std::to_string(L) +
                                    " (defect " + std::to_string(cert.max_defect) + ")");
    const double grid_eps = sup_distance(R, F, cert_grid_points);
    double epsilon;
    if (epsilon_override) {
        epsilon = *epsilon_override;
        if (epsilon < grid_eps - 1e-12)
            throw std::invalid_argument(
                "approximate pair: supplied epsilon " + std::to_string(epsilon) +
                " is below the measured grid distance " + std::to_string(grid_eps));
    } else {
        epsilon = sup_distance(R, F, epsilon_grid_points);
    }
    return ApproximatePair{R, F, epsilon, zeta, L, cert};
}

namespace {

double checked_a(const ControlSequence& a, int m) {
    const double v = a.at(m);
    if (v < 0.5)
        throw std::invalid_argument("run_approx: a_" + std::to_string(m) + " = " +
                                    std::to_string(v) + " violates a_m >= 1/2");
    return v;
}

}  // namespace

IterationTrace run_approx(const ApproximatePair& pair, double v0,
                          const ControlSequences& ctrl, const StopRule& stop) {
    if (!ctrl.a) throw std::invalid_argument("run_approx: control sequence a required");

    double start = v0;
    if (!pair.F.contains(v0)) {
        start = pair.F.map(v0);  // the formula extends beyond the interval
        if (!pair.F.contains(start))
            throw std::domain_error("run_approx: v0 = " + std::to_string(v0) +
                                    " cannot be mapped into the domain of '" +
                                    pair.F.name + "' by one application");
    }

    // The recursion is the two-step averaging scheme with F in place of R,
    // so the runner is reused verbatim; only the a_m >= 1/2 precondition is
    // layered on top. Because the floor check happens before stepping, the
    // produced trace is bit-identical to running the scheme directly.
    IterationTrace trace;
    trace.scheme = SchemeId::at;
    trace.operator_name = pair.F.name;
    trace.s0 = start;
    trace.iterates.push_back(start);
    trace.stop_reason = StopReason::max_iters;
    if (stop.max_iters < 1) throw std::invalid_argument("run_approx: max_iters must be >= 1");
    if (stop.step_tol < 0.0) throw std::invalid_argument("run_approx: step_tol must be >= 0");

    for (int m = 0; m < stop.max_iters; ++m) {
        const double v_m = trace.iterates.back();
        if (stop.target && std::fabs(v_m - stop.target->first) <= stop.target->second) {
            trace.stop_reason = StopReason::target_tol;
            return trace;
        }
        checked_a(*ctrl.a, m);
        auto [next, g] = at_step(pair.F, v_m, m, ctrl);
        StepAux aux;
        aux.b = g;
        trace.iterates.push_back(next);
        trace.auxiliaries.push_back(aux);
        if (stop.step_tol > 0.0 && std::fabs(next - v_m) < stop.step_tol) {
            trace.stop_reason = StopReason::step_tol;
            return trace;
        }
    }
    return trace;
}

double datadep_bound(double epsilon, double zeta) {
    if (epsilon < 0.0) throw std::invalid_argument("datadep_bound: epsilon must be >= 0");
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::invalid_argument("datadep_bound: zeta must lie in (0,1)");
    return (5.0 * epsilon + 2.0 * zeta * epsilon + zeta * zeta * epsilon) / (1.0 - zeta);
}

DataDepReport verify_bound(const ApproximatePair& pair) {
    DataDepReport report;
    report.s_star = oracle_fixed_point(pair.R, 1e-12).value;
    report.t_star = oracle_fixed_point(pair.F, 1e-12).value;
    report.distance = std::fabs(report.s_star - report.t_star);
    report.bound = datadep_bound(pair.epsilon, pair.zeta);
    report.holds = report.distance <= report.bound + 1e-12;
    return report;
}

}  // namespace fpl
