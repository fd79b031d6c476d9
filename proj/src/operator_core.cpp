#include "fpl/operator_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fpl {

namespace {

void check_self_map(const ScalarOperator& op, int check_points) {
    if (!(op.lo < op.hi))
        throw std::invalid_argument("operator '" + op.name +
                                    "': degenerate domain [" +
                                    std::to_string(op.lo) + ", " +
                                    std::to_string(op.hi) + "]");
    if (check_points < 2) throw std::invalid_argument("check_points must be >= 2");
    const double h = (op.hi - op.lo) / (check_points - 1);
    for (int i = 0; i < check_points; ++i) {
        const double t = (i == check_points - 1) ? op.hi : op.lo + i * h;
        const double v = op.map(t);
        if (!std::isfinite(v))
            throw std::invalid_argument("operator '" + op.name +
                                        "': non-finite value at t = " +
                                        std::to_string(t));
        if (!op.contains(v))
            throw std::invalid_argument("operator '" + op.name +
                                        "': map(" + std::to_string(t) + ") = " +
                                        std::to_string(v) +
                                        " escapes the domain");
    }
}

}  // namespace

ScalarOperator make_operator(std::string name, double lo, double hi,
                             std::function<double(double)> map,
                             int check_points) {
    ScalarOperator op{std::move(name), lo, hi, std::move(map)};
    check_self_map(op, check_points);
    return op;
}

ScalarOperator with_domain(const ScalarOperator& op, double lo, double hi) {
    return make_operator(op.name, lo, hi, op.map);
}

ContractionCertificate certify(const ScalarOperator& op, CertificateKind kind,
                               double zeta, double L, int grid_points) {
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::invalid_argument("certify: zeta must lie in (0,1)");
    if (L < 0.0) throw std::invalid_argument("certify: L must be >= 0");
    if (grid_points < 2) throw std::invalid_argument("certify: grid_points must be >= 2");
    if (!(op.lo < op.hi))
        throw std::invalid_argument("certify: degenerate domain for '" + op.name + "'");

    const int n = grid_points;
    const double h = (op.hi - op.lo) / (n - 1);
    std::vector<double> t(n), r(n);
    for (int i = 0; i < n; ++i) {
        t[i] = (i == n - 1) ? op.hi : op.lo + i * h;
        r[i] = op.map(t[i]);
        if (!std::isfinite(r[i]))
            throw std::invalid_argument("certify: non-finite map value at t = " +
                                        std::to_string(t[i]));
    }

    // Ordered pairs (p, q) with p > q; the inequalities are not symmetric in
    // their L terms, so the pair orientation is part of the definition.
    double max_defect = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) {
        const double p = t[i], rp = r[i];
        const double weak11_term = L * std::fabs(p - rp);
        for (int j = 0; j < i; ++j) {
            const double lhs = std::fabs(rp - r[j]);
            double rhs = zeta * (p - t[j]);
            switch (kind) {
                case CertificateKind::zeta_contraction: break;
                case CertificateKind::weak_10: rhs += L * std::fabs(t[j] - rp); break;
                case CertificateKind::weak_11: rhs += weak11_term; break;
            }
            const double defect = lhs - rhs;
            if (defect > max_defect) max_defect = defect;
        }
    }

    ContractionCertificate cert{kind, zeta, L, grid_points, max_defect,
                                max_defect <= 1e-12};
    return cert;
}

double sup_distance(const ScalarOperator& opR, const ScalarOperator& opF,
                    int grid_points) {
    if (opR.lo != opF.lo || opR.hi != opF.hi)
        throw std::invalid_argument("sup_distance: mismatched domains ('" +
                                    opR.name + "' vs '" + opF.name + "')");
    if (grid_points < 2) throw std::invalid_argument("sup_distance: grid_points must be >= 2");
    const int n = grid_points;
    const double h = (opR.hi - opR.lo) / (n - 1);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = (i == n - 1) ? opR.hi : opR.lo + i * h;
        const double d = std::fabs(opR.map(t) - opF.map(t));
        if (d > worst) worst = d;
    }
    return worst;
}

FixedPointEstimate oracle_fixed_point(const ScalarOperator& op, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("oracle_fixed_point: tol must be > 0");
    const auto g = [&op](double t) { return op.map(t) - t; };

    // Scan subintervals for a strict sign change of g, then bisect. A scan
    // point where g vanishes exactly is already the answer.
    const int scan = 1024;
    double lo = op.lo, hi = op.hi;
    double prev = op.lo;
    double glo = g(prev);
    if (glo == 0.0) return FixedPointEstimate{prev, 0.0, FixedPointMethod::bisection, tol};
    bool bracketed = false;
    for (int i = 1; i <= scan; ++i) {
        const double x = (i == scan) ? op.hi : op.lo + i * (op.hi - op.lo) / scan;
        const double gx = g(x);
        if (gx == 0.0) return FixedPointEstimate{x, 0.0, FixedPointMethod::bisection, tol};
        if ((glo < 0.0) != (gx < 0.0)) {
            lo = prev;
            hi = x;
            bracketed = true;
            break;
        }
        prev = x;
        glo = gx;
    }

    if (!bracketed) {
        // A fixed point may still sit at an endpoint (e.g. a jump map fixing lo).
        for (double e : {op.lo, op.hi}) {
            if (std::fabs(g(e)) <= tol)
                return FixedPointEstimate{e, std::fabs(g(e)),
                                          FixedPointMethod::bisection, tol};
        }
        throw std::runtime_error("oracle_fixed_point: no bracketed fixed point for '" +
                                 op.name + "'");
    }

    double flo = g(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at floating resolution
        const double fm = g(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((flo > 0.0) == (fm > 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    const double v = 0.5 * (lo + hi);
    const double residual = std::fabs(g(v));
    // A jump across the diagonal brackets like a root but never settles:
    // the residual stays O(jump size) instead of O(tol).
    if (residual > std::max(1e-6, 1e3 * tol))
        throw std::runtime_error("oracle_fixed_point: '" + op.name +
                                 "' crosses the diagonal without a fixed point");
    return FixedPointEstimate{v, residual, FixedPointMethod::bisection, tol};
}

FixedPointEstimate fixed_point_by_iteration(const ScalarOperator& op,
                                            double tol, int max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("fixed_point_by_iteration: tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("fixed_point_by_iteration: max_iters must be >= 1");
    double s = 0.5 * (op.lo + op.hi);
    for (int m = 0; m < max_iters; ++m) {
        const double next = op.map(s);
        if (std::fabs(next - s) < tol) {
            const double r = std::fabs(op.map(next) - next);
            return FixedPointEstimate{next, r,
                                      FixedPointMethod::fixed_tolerance_iteration, tol};
        }
        s = next;
    }
    throw std::runtime_error("fixed_point_by_iteration: no convergence for '" +
                             op.name + "' within " + std::to_string(max_iters) +
                             " iterations");
}

ScalarOperator cos_half() {
    return make_operator("cos_half", 0.0, std::numbers::pi,
                         [](double t) { return std::cos(0.5 * t); });
}

ScalarOperator halving_jump() {
    return make_operator("halving_jump", 0.0, 1.0,
                         [](double t) { return t < 1.0 ? 0.5 * t : 0.25; });
}

ScalarOperator poly_approx() {
    return make_operator("poly_approx", 0.0, 1.0, [](double t) {
        const double t2 = t * t;
        return 1.0 - 0.25 * t2 + 0.0026 * t2 * t2;
    });
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"cos_half", "halving_jump",
                                                "poly_approx"};
    return names;
}

ScalarOperator catalog_lookup(const std::string& name) {
    if (name == "cos_half") return cos_half();
    if (name == "halving_jump") return halving_jump();
    if (name == "poly_approx") return poly_approx();
    throw std::invalid_argument("unknown catalog operator '" + name + "'");
}

}  // namespace fpl
