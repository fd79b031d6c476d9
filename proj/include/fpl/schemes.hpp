#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpl/operator_core.hpp"

namespace fpl {

enum class SchemeId { picard, mann, ishikawa, s, normal_s, varat, fstar, at };

const char* scheme_name(SchemeId id);
SchemeId scheme_from_name(const std::string& name);

/// One control sequence m -> value in (0,1). Values are validated at
/// generation time; an explicit list that runs out of entries raises.
class ControlSequence {
  public:
    static ControlSequence constant(double v);
    static ControlSequence reciprocal(double k);  // m -> 1/(m + k), k > 1
    static ControlSequence explicit_list(std::vector<double> values);

    double at(int m) const;

  private:
    enum class Rep { constant, reciprocal, list };
    Rep rep_ = Rep::constant;
    double param_ = 0.5;
    std::vector<double> list_;
};

/// The a/c/d sequences of the iteration schemes. Each scheme requires a
/// subset: Picard none; Mann, normal-S, F*, AT use a; Ishikawa and S use
/// a, d; Varat uses a, c, d. The runner validates presence.
struct ControlSequences {
    std::optional<ControlSequence> a, c, d;
};

struct StopRule {
    int max_iters = 1000;
    double step_tol = 1e-12;  // 0 disables the step criterion
    std::optional<std::pair<double, double>> target;  // (s_star, tol)
};

enum class StopReason { max_iters, step_tol, target_tol };

/// Auxiliary points computed inside a step (the b_m of Ishikawa/S/Varat/F*/AT
/// and the t_m of Varat), recorded so bound checks on them are possible.
struct StepAux {
    std::optional<double> b, t;
};

struct IterationTrace {
    SchemeId scheme;
    std::string operator_name;
    double s0 = 0.0;
    std::vector<double> iterates;     // s_0 ... s_M
    std::vector<StepAux> auxiliaries; // size iterates.size() - 1
    StopReason stop_reason = StopReason::max_iters;
};

/// One step of any scheme except AT, exactly per its defining equation.
std::pair<double, StepAux> step_classic(SchemeId scheme, const ScalarOperator& op,
                                        double s_m, int m,
                                        const ControlSequences& ctrl);

/// One step of the two-step averaging scheme:
///   b_m     = 1/2 R^2(s_m) + 1/2 R^2((1 - a_m) s_m + a_m R s_m)
///   s_{m+1} = R((1 - a_m) b_m + a_m R b_m)
std::pair<double, double> at_step(const ScalarOperator& op, double s_m, int m,
                                  const ControlSequences& ctrl);

IterationTrace run(SchemeId scheme, const ScalarOperator& op, double s0,
                   const ControlSequences& ctrl, const StopRule& stop);

}  // namespace fpl
