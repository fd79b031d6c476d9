#pragma once

#include <vector>

#include "fpl/schemes.hpp"

namespace fpl {

/// Magnitude schedule for injected perturbations. gamma(m) is always >= 0;
/// the sign rule decides the direction of the injection.
struct PerturbationModel {
    enum class Kind { zero, summable_power, nonsummable_constant, explicit_list };
    enum class SignRule { alternating, always_positive };

    Kind kind = Kind::zero;
    double c = 0.0;
    double p = 2.0;                // exponent for summable_power: c / (m+1)^p
    std::vector<double> list;
    SignRule sign = SignRule::alternating;

    static PerturbationModel zero();
    static PerturbationModel summable_power(double c, double p,
                                            SignRule sign = SignRule::alternating);
    static PerturbationModel nonsummable_constant(double c,
                                                  SignRule sign = SignRule::alternating);
    static PerturbationModel explicit_list(std::vector<double> values,
                                           SignRule sign = SignRule::alternating);

    double gamma(int m) const;
    double signed_gamma(int m) const;
};

struct StabilityReport {
    SchemeId scheme;
    double s_star = 0.0;
    std::vector<double> gamma;               // realized magnitudes, post-clamp
    std::vector<double> gamma_partial_sums;
    std::vector<double> r;                   // perturbed iterates, r[0] = r0
    double final_gap = 0.0;                  // |r_M - s_star|
    bool converged = false;                  // final_gap < 1e-4
    bool classified_summable = false;
};

/// Runs r_{m+1} = clamp(step(R, r_m) + sign_m * gamma_m). Clamping to the
/// domain can shrink an injection; the recorded gamma is always the realized
/// |r_{m+1} - step(R, r_m)| so the report stays exact. Convergence is judged
/// against the bisection oracle with tolerance 1e-4.
StabilityReport perturbed_run(SchemeId scheme, const ScalarOperator& op, double r0,
                              const ControlSequences& ctrl,
                              const PerturbationModel& pert, int m_max);

std::vector<StabilityReport> stability_sweep(SchemeId scheme, const ScalarOperator& op,
                                             const std::vector<PerturbationModel>& models,
                                             double r0, const ControlSequences& ctrl,
                                             int m_max);

}  // namespace fpl
