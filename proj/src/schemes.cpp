#include "fpl/schemes.hpp"

#include <cmath>
#include <stdexcept>

namespace fpl {

const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::picard: return "picard";
        case SchemeId::mann: return "mann";
        case SchemeId::ishikawa: return "ishikawa";
        case SchemeId::s: return "s";
        case SchemeId::normal_s: return "normal_s";
        case SchemeId::varat: return "varat";
        case SchemeId::fstar: return "fstar";
        case SchemeId::at: return "at";
    }
    return "?";
}

SchemeId scheme_from_name(const std::string& name) {
    for (SchemeId id : {SchemeId::picard, SchemeId::mann, SchemeId::ishikawa,
                        SchemeId::s, SchemeId::normal_s, SchemeId::varat,
                        SchemeId::fstar, SchemeId::at})
        if (name == scheme_name(id)) return id;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

ControlSequence ControlSequence::constant(double v) {
    if (!(v > 0.0 && v < 1.0))
        throw std::invalid_argument("control sequence: constant value " +
                                    std::to_string(v) + " outside (0,1)");
    ControlSequence c;
    c.rep_ = Rep::constant;
    c.param_ = v;
    return c;
}

ControlSequence ControlSequence::reciprocal(double k) {
    if (!(k > 1.0))
        throw std::invalid_argument("control sequence: reciprocal offset must be > 1 "
                                    "so 1/(m+k) stays below 1");
    ControlSequence c;
    c.rep_ = Rep::reciprocal;
    c.param_ = k;
    return c;
}

ControlSequence ControlSequence::explicit_list(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("control sequence: explicit list is empty");
    for (double v : values)
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument("control sequence: list entry " +
                                        std::to_string(v) + " outside (0,1)");
    ControlSequence c;
    c.rep_ = Rep::list;
    c.list_ = std::move(values);
    return c;
}

double ControlSequence::at(int m) const {
    if (m < 0) throw std::out_of_range("control sequence index must be >= 0");
    switch (rep_) {
        case Rep::constant: return param_;
        case Rep::reciprocal: return 1.0 / (m + param_);
        case Rep::list:
            if (static_cast<size_t>(m) >= list_.size())
                throw std::out_of_range("control sequence list exhausted at index " +
                                        std::to_string(m));
            return list_[m];
    }
    return param_;
}

namespace {

const ControlSequence& require(const std::optional<ControlSequence>& seq,
                               const char* which, SchemeId scheme) {
    if (!seq)
        throw std::invalid_argument(std::string("scheme '") + scheme_name(scheme) +
                                    "' requires control sequence " + which);
    return *seq;
}

double checked(const ScalarOperator& op, double v, SchemeId scheme, int m,
               const char* what) {
    if (!op.contains(v))
        throw std::domain_error(std::string("scheme '") + scheme_name(scheme) +
                                "' step " + std::to_string(m) + ": " + what + " = " +
                                std::to_string(v) + " escapes domain [" +
                                std::to_string(op.lo) + ", " + std::to_string(op.hi) + "]");
    return v;
}

}  // namespace

std::pair<double, StepAux> step_classic(SchemeId scheme, const ScalarOperator& op,
                                        double s_m, int m,
                                        const ControlSequences& ctrl) {
    if (scheme == SchemeId::at)
        throw std::invalid_argument("step_classic does not handle the at scheme");
    checked(op, s_m, scheme, m, "s_m");
    StepAux aux;
    double next = 0.0;
    switch (scheme) {
        case SchemeId::picard: {
            next = op(s_m);
            break;
        }
        case SchemeId::mann: {
            const double a = require(ctrl.a, "a", scheme).at(m);
            next = (1.0 - a) * s_m + a * op(s_m);
            break;
        }
        case SchemeId::ishikawa: {
            const double a = require(ctrl.a, "a", scheme).at(m);
            const double d = require(ctrl.d, "d", scheme).at(m);
            const double b = checked(op, (1.0 - d) * s_m + d * op(s_m), scheme, m, "b_m");
            aux.b = b;
            next = (1.0 - a) * s_m + a * op(b);
            break;
        }
        case SchemeId::s: {
            const double a = require(ctrl.a, "a", scheme).at(m);
            const double d = require(ctrl.d, "d", scheme).at(m);
            const double b = checked(op, (1.0 - d) * s_m + d * op(s_m), scheme, m, "b_m");
            aux.b = b;
            next = (1.0 - a) * op(s_m) + a * op(b);
            break;
        }
        case SchemeId::normal_s: {
            const double a = require(ctrl.a, "a", scheme).at(m);
            next = op(checked(op, (1.0 - a) * s_m + a * op(s_m), scheme, m, "inner point"));
            break;
        }
        case SchemeId::varat: {
            const double a = require(ctrl.a, "a", scheme).at(m);
            const double c = require(ctrl.c, "c", scheme).at(m);
            const double d = require(ctrl.d, "d", scheme).at(m);
            const double b = checked(op, (1.0 - d) * s_m + d * op(s_m), scheme, m, "b_m");
            const double t = checked(op, (1.0 - c) * s_m + c * b, scheme, m, "t_m");
            aux.b = b;
            aux.t = t;
            next = (1.0 - a) * op(t) + a * op(b);
            break;
        }
        case SchemeId::fstar: {
            const double a = require(ctrl.a, "a", scheme).at(m);
            const double b = checked(
                op, op(checked(op, (1.0 - a) * s_m + a * op(s_m), scheme, m, "inner point")),
                scheme, m, "b_m");
            aux.b = b;
            next = op(b);
            break;
        }
        case SchemeId::at:
            break;  // unreachable
    }
    checked(op, next, scheme, m, "s_{m+1}");
    return {next, aux};
}

std::pair<double, double> at_step(const ScalarOperator& op, double s_m, int m,
                                  const ControlSequences& ctrl) {
    constexpr SchemeId scheme = SchemeId::at;
    checked(op, s_m, scheme, m, "s_m");
    const double a = require(ctrl.a, "a", scheme).at(m);
    const double rs = op(s_m);
    const double u = checked(op, (1.0 - a) * s_m + a * rs, scheme, m, "inner point");
    const double b = checked(op, 0.5 * op(rs) + 0.5 * op(op(u)), scheme, m, "b_m");
    const double w = checked(op, (1.0 - a) * b + a * op(b), scheme, m, "combined point");
    const double next = checked(op, op(w), scheme, m, "s_{m+1}");
    return {next, b};
}

IterationTrace run(SchemeId scheme, const ScalarOperator& op, double s0,
                   const ControlSequences& ctrl, const StopRule& stop) {
    if (stop.max_iters < 1) throw std::invalid_argument("run: max_iters must be >= 1");
    if (stop.step_tol < 0.0) throw std::invalid_argument("run: step_tol must be >= 0");
    if (!op.contains(s0))
        throw std::domain_error("run: s0 = " + std::to_string(s0) +
                                " outside domain of '" + op.name + "'");

    IterationTrace trace;
    trace.scheme = scheme;
    trace.operator_name = op.name;
    trace.s0 = s0;
    trace.iterates.push_back(s0);
    trace.stop_reason = StopReason::max_iters;

    for (int m = 0; m < stop.max_iters; ++m) {
        const double s_m = trace.iterates.back();
        if (stop.target && std::fabs(s_m - stop.target->first) <= stop.target->second) {
            trace.stop_reason = StopReason::target_tol;
            return trace;
        }
        double next;
        StepAux aux;
        if (scheme == SchemeId::at) {
            auto [n, b] = at_step(op, s_m, m, ctrl);
            next = n;
            aux.b = b;
        } else {
            std::tie(next, aux) = step_classic(scheme, op, s_m, m, ctrl);
        }
        trace.iterates.push_back(next);
        trace.auxiliaries.push_back(aux);
        if (stop.step_tol > 0.0 && std::fabs(next - s_m) < stop.step_tol) {
            trace.stop_reason = StopReason::step_tol;
            return trace;
        }
    }
    return trace;
}

}  // namespace fpl
