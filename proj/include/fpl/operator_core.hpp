#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fpl {

/// A named self-map R on a closed interval [lo, hi].
///
/// Construction through make_operator verifies the self-map property on a
/// dense sample grid; a map that leaves the interval (beyond a 1e-12 slack)
/// is rejected up front rather than failing mid-iteration.
struct ScalarOperator {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> map;

    double operator()(double t) const { return map(t); }

    bool contains(double t, double slack = 1e-12) const {
        return t >= lo - slack && t <= hi + slack;
    }
};

ScalarOperator make_operator(std::string name, double lo, double hi,
                             std::function<double(double)> map,
                             int check_points = 4097);

/// Rebinds an operator to a sub- or super-interval, re-running the self-map
/// check there.
ScalarOperator with_domain(const ScalarOperator& op, double lo, double hi);

enum class CertificateKind { zeta_contraction, weak_10, weak_11 };

/// Result of a grid search for contraction constants.
///
/// max_defect is the most-violated inequality slack (LHS - RHS) over all
/// checked pairs; at or below 1e-12 the certificate counts as established.
/// Grid certificates are numerical evidence, not proofs.
struct ContractionCertificate {
    CertificateKind kind;
    double zeta = 0.0;
    double L = 0.0;
    int grid_points = 0;
    double max_defect = 0.0;
    bool certified = false;
};

/// Checks the chosen contraction inequality on every ordered grid pair
/// (p, q) with p > q:
///
///   zeta_contraction:  |Rp - Rq| <= zeta|p - q|
///   weak_10:           |Rp - Rq| <= zeta|p - q| + L|q - Rp|
///   weak_11:           |Rp - Rq| <= zeta|p - q| + L|p - Rp|
ContractionCertificate certify(const ScalarOperator& op, CertificateKind kind,
                               double zeta, double L, int grid_points);

/// Max over a uniform grid of |R(t) - F(t)|; a lower bound on the true sup
/// that is non-decreasing under nested grid refinement.
double sup_distance(const ScalarOperator& opR, const ScalarOperator& opF,
                    int grid_points);

enum class FixedPointMethod { bisection, fixed_tolerance_iteration };

struct FixedPointEstimate {
    double value = 0.0;
    double residual = 0.0;  // |R(value) - value|
    FixedPointMethod method = FixedPointMethod::bisection;
    double tol = 0.0;
};

/// Reference fixed point by bisection on R(t) - t, independent of any
/// iteration scheme. Scans for a sign change, falling back to an endpoint
/// fixed point; throws when neither exists.
FixedPointEstimate oracle_fixed_point(const ScalarOperator& op, double tol);

/// Fixed point by plain repeated application of R until the step falls
/// below tol. Provided as a cross-check against the bisection oracle.
FixedPointEstimate fixed_point_by_iteration(const ScalarOperator& op,
                                            double tol, int max_iters);

/// Built-in operators used throughout the experiments.
ScalarOperator cos_half();      // cos(t/2) on [0, pi]
ScalarOperator halving_jump();  // t/2 for t < 1, 1/4 at t = 1, on [0, 1]
ScalarOperator poly_approx();   // 1 - 0.25 t^2 + 0.0026 t^4 on [0, 1]

const std::vector<std::string>& catalog_names();
ScalarOperator catalog_lookup(const std::string& name);

}  // namespace fpl
