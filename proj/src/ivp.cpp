#include "fpl/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpl {

namespace {

void validate_grid(double a, double b, int n_nodes, int deriv_order_max) {
    if (!(a < b)) throw std::invalid_argument("grid function: need a < b");
    if (n_nodes < 2) throw std::invalid_argument("grid function: need n_nodes >= 2");
    if (deriv_order_max < 0)
        throw std::invalid_argument("grid function: deriv_order_max must be >= 0");
    if (n_nodes <= 2 * deriv_order_max + 1)
        throw std::invalid_argument("grid function: n_nodes too small for derivative order " +
                                    std::to_string(deriv_order_max));
}

Eigen::ArrayXd diff_once(const Eigen::ArrayXd& v, double h) {
    const Eigen::Index n = v.size();
    Eigen::ArrayXd d(n);
    d(0) = (v(1) - v(0)) / h;
    d(n - 1) = (v(n - 1) - v(n - 2)) / h;
    for (Eigen::Index i = 1; i + 1 < n; ++i) d(i) = (v(i + 1) - v(i - 1)) / (2.0 * h);
    return d;
}

}  // namespace

Eigen::ArrayXd GridFunction::derivative(int order) const {
    if (order < 0 || order > deriv_order_max)
        throw std::invalid_argument("grid function: derivative order " +
                                    std::to_string(order) + " out of range");
    Eigen::ArrayXd d = values;
    for (int k = 0; k < order; ++k) d = diff_once(d, h());
    return d;
}

GridFunction GridFunction::sample(const std::function<double(double)>& fn, double a,
                                  double b, int n_nodes, int deriv_order_max) {
    validate_grid(a, b, n_nodes, deriv_order_max);
    GridFunction g;
    g.a = a;
    g.b = b;
    g.n_nodes = n_nodes;
    g.deriv_order_max = deriv_order_max;
    g.values.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double v = fn(g.node(i));
        if (!std::isfinite(v))
            throw std::invalid_argument("grid function: non-finite sample at t = " +
                                        std::to_string(g.node(i)));
        g.values(i) = v;
    }
    return g;
}

GridFunction GridFunction::from_values(Eigen::ArrayXd values, double a, double b,
                                       int deriv_order_max) {
    const int n_nodes = static_cast<int>(values.size());
    validate_grid(a, b, n_nodes, deriv_order_max);
    GridFunction g;
    g.a = a;
    g.b = b;
    g.n_nodes = n_nodes;
    g.deriv_order_max = deriv_order_max;
    g.values = std::move(values);
    return g;
}

double deriv_sup_norm(const GridFunction& x, const GridFunction& y) {
    if (x.a != y.a || x.b != y.b || x.n_nodes != y.n_nodes ||
        x.deriv_order_max != y.deriv_order_max)
        throw std::invalid_argument("norm: grid mismatch");
    double worst = 0.0;
    for (int order = 0; order <= x.deriv_order_max; ++order) {
        const double s = (x.derivative(order) - y.derivative(order)).abs().maxCoeff();
        if (s > worst) worst = s;
    }
    return worst;
}

double IVPProblem::initial_polynomial(double t) const {
    // p_0 + p_1 (t-a) + p_2 (t-a)^2/2! + ...
    double acc = 0.0;
    double term = 1.0;
    for (int i = 0; i < n; ++i) {
        acc += initial_values[i] * term;
        term *= (t - a) / (i + 1);
    }
    return acc;
}

namespace {

void validate_problem(const IVPProblem& prob) {
    if (prob.n < 1) throw std::invalid_argument("ivp: order must be >= 1");
    if (!(prob.a < prob.b)) throw std::invalid_argument("ivp: need a < b");
    if (static_cast<int>(prob.lipschitz.size()) != prob.n)
        throw std::invalid_argument("ivp: lipschitz list must have n entries");
    if (static_cast<int>(prob.initial_values.size()) != prob.n)
        throw std::invalid_argument("ivp: initial_values must have n entries");
    for (double l : prob.lipschitz)
        if (l < 0.0) throw std::invalid_argument("ivp: lipschitz constants must be >= 0");
    if (!prob.rhs || !prob.kernel) throw std::invalid_argument("ivp: rhs and kernel required");
}

}  // namespace

GridFunction apply_integral_op(const IVPProblem& prob, const GridFunction& y) {
    validate_problem(prob);
    if (y.a != prob.a || y.b != prob.b)
        throw std::invalid_argument("ivp: grid function interval mismatch");
    if (y.deriv_order_max != prob.n - 1)
        throw std::invalid_argument("ivp: grid function must carry derivatives up to n-1");

    const int n = y.n_nodes;
    const double h = y.h();

    // f(s_j, y(s_j), ..., y^(n-1)(s_j)) is independent of the outer node,
    // so evaluate it once per grid point.
    std::vector<Eigen::ArrayXd> derivs;
    derivs.reserve(prob.n);
    for (int order = 0; order < prob.n; ++order) derivs.push_back(y.derivative(order));

    Eigen::ArrayXd f(n);
    std::vector<double> args(prob.n);
    for (int j = 0; j < n; ++j) {
        for (int order = 0; order < prob.n; ++order) args[order] = derivs[order](j);
        const double v = prob.rhs(y.node(j), args);
        if (!std::isfinite(v))
            throw std::runtime_error("ivp: non-finite rhs value at s = " +
                                     std::to_string(y.node(j)));
        f(j) = v;
    }

    Eigen::ArrayXd out(n);
    for (int i = 0; i < n; ++i) {
        const double t = y.node(i);
        double integral = 0.0;
        for (int j = 1; j <= i; ++j) {
            const double lo = prob.kernel(t, y.node(j - 1)) * f(j - 1);
            const double hi = prob.kernel(t, y.node(j)) * f(j);
            integral += 0.5 * h * (lo + hi);
        }
        out(i) = prob.initial_polynomial(t) - integral;
    }
    return GridFunction::from_values(std::move(out), y.a, y.b, y.deriv_order_max);
}

ContractionBudget estimate_alpha(const IVPProblem& prob, int grid_points) {
    validate_problem(prob);
    if (grid_points < 2) throw std::invalid_argument("estimate_alpha: grid_points must be >= 2");
    const int n = grid_points;
    const double h = (prob.b - prob.a) / (n - 1);
    const auto node = [&](int i) { return (i == n - 1) ? prob.b : prob.a + i * h; };

    // Kernel t-derivative sups over the s <= t triangle, i-th derivative by
    // repeated first differences in t along each fixed s.
    ContractionBudget budget;
    for (int order = 0; order < prob.n; ++order) {
        double sup = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = node(j);
            // column of K(t_i, s) for t_i >= s
            std::vector<double> col;
            col.reserve(n - j);
            for (int i = j; i < n; ++i) {
                const double v = prob.kernel(node(i), s);
                if (!std::isfinite(v))
                    throw std::runtime_error("estimate_alpha: non-finite kernel at t = " +
                                             std::to_string(node(i)));
                col.push_back(v);
            }
            for (int k = 0; k < order; ++k) {
                if (col.size() < 2) { col.assign(1, 0.0); break; }
                std::vector<double> d(col.size());
                d[0] = (col[1] - col[0]) / h;
                d[col.size() - 1] = (col[col.size() - 1] - col[col.size() - 2]) / h;
                for (size_t i = 1; i + 1 < col.size(); ++i)
                    d[i] = (col[i + 1] - col[i - 1]) / (2.0 * h);
                col = std::move(d);
            }
            for (double v : col) sup = std::max(sup, std::fabs(v));
        }
        budget.M_i.push_back(sup);
    }

    budget.M = 0.0;
    for (double m : budget.M_i) budget.M = std::max(budget.M, m);
    double lipschitz_sum = 0.0;
    for (double l : prob.lipschitz) lipschitz_sum += l;
    budget.alpha = (prob.b - prob.a) * budget.M * lipschitz_sum;
    return budget;
}

IvpSolution solve_via_at(const IVPProblem& prob, const ControlSequences& ctrl,
                         const StopRule& stop, int n_nodes) {
    validate_problem(prob);
    if (!ctrl.a) throw std::invalid_argument("solve_via_at: control sequence a required");
    if (stop.max_iters < 1) throw std::invalid_argument("solve_via_at: max_iters must be >= 1");
    if (!(stop.step_tol > 0.0))
        throw std::invalid_argument("solve_via_at: a positive step_tol is required");

    const auto budget = estimate_alpha(prob, std::min(n_nodes, 2001));
    if (budget.alpha >= 1.0)
        throw std::runtime_error("solve_via_at: contraction budget alpha = " +
                                 std::to_string(budget.alpha) +
                                 " is not below 1; no unique solution is certified");

    const int dmax = prob.n - 1;
    GridFunction y = GridFunction::sample([&](double t) { return prob.initial_polynomial(t); },
                                          prob.a, prob.b, n_nodes, dmax);

    const auto combine = [&](const GridFunction& p, const GridFunction& q, double w) {
        return GridFunction::from_values((1.0 - w) * p.values + w * q.values, prob.a,
                                         prob.b, dmax);
    };

    IvpSolution result;
    result.alpha = budget.alpha;
    for (int m = 0; m < stop.max_iters; ++m) {
        const double a = ctrl.a->at(m);
        const GridFunction ry = apply_integral_op(prob, y);
        const GridFunction u = combine(y, ry, a);
        const GridFunction rry = apply_integral_op(prob, ry);
        const GridFunction rru = apply_integral_op(prob, apply_integral_op(prob, u));
        const GridFunction b = GridFunction::from_values(
            0.5 * rry.values + 0.5 * rru.values, prob.a, prob.b, dmax);
        const GridFunction rb = apply_integral_op(prob, b);
        const GridFunction next = apply_integral_op(prob, combine(b, rb, a));

        const double step = deriv_sup_norm(next, y);
        result.step_norms.push_back(step);
        y = next;
        if (step < stop.step_tol) {
            result.solution = y;
            return result;
        }
    }
    throw std::runtime_error("solve_via_at: no convergence within " +
                             std::to_string(stop.max_iters) +
                             " iterations; last step norm " +
                             std::to_string(result.step_norms.back()));
}

}  // namespace fpl
