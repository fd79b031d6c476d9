#pragma once

#include <optional>

#include "fpl/schemes.hpp"

namespace fpl {

/// An operator R together with an approximation F on the same interval,
/// the sup-distance epsilon between them, and contraction constants
/// (zeta, L) certified for R.
struct ApproximatePair {
    ScalarOperator R;
    ScalarOperator F;
    double epsilon = 0.0;
    double zeta = 0.5;
    double L = 0.0;
    ContractionCertificate cert;
};

/// Builds the pair, certifying R at (zeta, L) on cert_grid_points and
/// measuring epsilon on epsilon_grid_points (or taking the supplied
/// override, which must dominate the measured grid distance).
ApproximatePair make_approximate_pair(const ScalarOperator& R, const ScalarOperator& F,
                                      double zeta, double L, int cert_grid_points,
                                      int epsilon_grid_points,
                                      std::optional<double> epsilon_override = {});

/// The two-step averaging recursion driven by F instead of R:
///   g_m     = 1/2 [F^2((1 - a_m) v_m + a_m F v_m) + F^2 v_m]
///   v_{m+1} = F((1 - a_m) g_m + a_m F g_m)
/// Requires a_m >= 1/2 at every used index. A v0 outside F's interval is
/// mapped into it by one application of F's formula; if that fails the run
/// is rejected.
IterationTrace run_approx(const ApproximatePair& pair, double v0,
                          const ControlSequences& ctrl, const StopRule& stop);

/// (5e + 2*zeta*e + zeta^2*e) / (1 - zeta)
double datadep_bound(double epsilon, double zeta);

struct DataDepReport {
    double s_star = 0.0;   // fixed point of R, bisection
    double t_star = 0.0;   // fixed point of F, bisection
    double distance = 0.0; // |s_star - t_star|
    double bound = 0.0;
    bool holds = false;    // distance <= bound + 1e-12
};

/// Checks the fixed-point distance bound with both fixed points taken from
/// the bisection oracle, never from an iteration run, so the check cannot
/// be circular.
DataDepReport verify_bound(const ApproximatePair& pair);

}  // namespace fpl
