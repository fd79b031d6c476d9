#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fpl/schemes.hpp"

namespace fpl {

/// A sampled element of C^n[a,b] on a uniform grid. Derivatives come from
/// second-order central differences with first-order one-sided stencils at
/// the endpoints.
struct GridFunction {
    double a = 0.0;
    double b = 1.0;
    int n_nodes = 2;
    Eigen::ArrayXd values;
    int deriv_order_max = 0;

    double h() const { return (b - a) / (n_nodes - 1); }
    double node(int i) const { return (i == n_nodes - 1) ? b : a + i * h(); }
    Eigen::ArrayXd derivative(int order) const;

    static GridFunction sample(const std::function<double(double)>& fn, double a,
                               double b, int n_nodes, int deriv_order_max);
    static GridFunction from_values(Eigen::ArrayXd values, double a, double b,
                                    int deriv_order_max);
};

/// Max over derivative orders 0..deriv_order_max of the grid sup of
/// |x^(i) - y^(i)|.
double deriv_sup_norm(const GridFunction& x, const GridFunction& y);

/// Order-n initial value problem y^(n)(t) + f(t, y, y', ..., y^(n-1)) = 0
/// with y^(i)(a) = init[i], recast as a Volterra integral equation
///   y(t) = P(t) - Integral[a..t] K(t,s) f(s, y(s), ..., y^(n-1)(s)) ds
/// where P is the polynomial matching the initial data. lipschitz[i] bounds
/// |f(..., u_i, ...) - f(..., v_i, ...)| / |u_i - v_i|.
struct IVPProblem {
    int n = 1;
    std::function<double(double, const std::vector<double>&)> rhs;
    std::vector<double> lipschitz;       // a_1 ... a_n
    std::function<double(double, double)> kernel;  // K(t, s)
    std::vector<double> initial_values;  // p_0 ... p_{n-1}
    double a = 0.0;
    double b = 1.0;

    double initial_polynomial(double t) const;
};

/// One application of the integral operator via composite trapezoid on the
/// grid restricted to s <= t.
GridFunction apply_integral_op(const IVPProblem& prob, const GridFunction& y);

/// Contraction budget alpha = (b - a) * M * sum(lipschitz), with
/// M = max_i sup |d^i K / dt^i| over the s <= t region; alpha < 1 certifies
/// the operator contracts on the derivative-aware norm.
struct ContractionBudget {
    std::vector<double> M_i;
    double M = 0.0;
    double alpha = 0.0;
};

ContractionBudget estimate_alpha(const IVPProblem& prob, int grid_points);

struct IvpSolution {
    GridFunction solution;
    std::vector<double> step_norms;  // deriv_sup_norm between consecutive iterates
    double alpha = 0.0;
};

/// Solves the integral equation by the two-step averaging recursion acting
/// nodewise on grid functions. Refuses when the contraction budget is >= 1;
/// raises when the step norm fails to fall below stop.step_tol within
/// stop.max_iters.
IvpSolution solve_via_at(const IVPProblem& prob, const ControlSequences& ctrl,
                         const StopRule& stop, int n_nodes);

}  // namespace fpl
