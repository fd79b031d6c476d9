#include "fpl/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpl {

PerturbationModel PerturbationModel::zero() { return PerturbationModel{}; }

PerturbationModel PerturbationModel::summable_power(double c, double p, SignRule sign) {
    if (c < 0.0) throw std::invalid_argument("perturbation: c must be >= 0");
    if (!(p > 1.0)) throw std::invalid_argument("perturbation: summable power needs p > 1");
    PerturbationModel m;
    m.kind = Kind::summable_power;
    m.c = c;
    m.p = p;
    m.sign = sign;
    return m;
}

PerturbationModel PerturbationModel::nonsummable_constant(double c, SignRule sign) {
    if (c < 0.0) throw std::invalid_argument("perturbation: c must be >= 0");
    PerturbationModel m;
    m.kind = Kind::nonsummable_constant;
    m.c = c;
    m.sign = sign;
    return m;
}

PerturbationModel PerturbationModel::explicit_list(std::vector<double> values,
                                                   SignRule sign) {
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("perturbation: list entries must be >= 0");
    PerturbationModel m;
    m.kind = Kind::explicit_list;
    m.list = std::move(values);
    m.sign = sign;
    return m;
}

double PerturbationModel::gamma(int m) const {
    if (m < 0) throw std::out_of_range("perturbation index must be >= 0");
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::summable_power: return c / std::pow(m + 1.0, p);
        case Kind::nonsummable_constant: return c;
        case Kind::explicit_list:
            if (static_cast<size_t>(m) >= list.size())
                throw std::out_of_range("perturbation list exhausted at index " +
                                        std::to_string(m));
            return list[m];
    }
    return 0.0;
}

double PerturbationModel::signed_gamma(int m) const {
    const double g = gamma(m);
    if (sign == SignRule::always_positive) return g;
    return (m % 2 == 0) ? g : -g;
}

StabilityReport perturbed_run(SchemeId scheme, const ScalarOperator& op, double r0,
                              const ControlSequences& ctrl,
                              const PerturbationModel& pert, int m_max) {
    if (m_max < 1) throw std::invalid_argument("perturbed_run: m_max must be >= 1");
    if (!op.contains(r0))
        throw std::domain_error("perturbed_run: r0 = " + std::to_string(r0) +
                                " outside domain of '" + op.name + "'");

    StabilityReport report;
    report.scheme = scheme;
    report.s_star = oracle_fixed_point(op, 1e-12).value;
    report.r.reserve(m_max + 1);
    report.r.push_back(r0);

    double sum = 0.0;
    for (int m = 0; m < m_max; ++m) {
        const double r_m = report.r.back();
        double exact;
        if (scheme == SchemeId::at) exact = at_step(op, r_m, m, ctrl).first;
        else exact = step_classic(scheme, op, r_m, m, ctrl).first;
        const double proposed = exact + pert.signed_gamma(m);
        const double r_next = std::clamp(proposed, op.lo, op.hi);
        report.r.push_back(r_next);
        const double realized = std::fabs(r_next - exact);
        report.gamma.push_back(realized);
        sum += realized;
        report.gamma_partial_sums.push_back(sum);
    }

    report.final_gap = std::fabs(report.r.back() - report.s_star);
    report.converged = report.final_gap < 1e-4;

    switch (pert.kind) {
        case PerturbationModel::Kind::zero:
        case PerturbationModel::Kind::summable_power:
            report.classified_summable = true;
            break;
        case PerturbationModel::Kind::nonsummable_constant:
            report.classified_summable = false;
            break;
        case PerturbationModel::Kind::explicit_list: {
            // Numerically Cauchy: the scheduled increments over the last
            // quarter of the run have all shrunk below 1e-12.
            bool cauchy = true;
            for (int m = (3 * m_max) / 4; m < m_max; ++m)
                if (pert.gamma(m) >= 1e-12) { cauchy = false; break; }
            report.classified_summable = cauchy;
            break;
        }
    }
    return report;
}

std::vector<StabilityReport> stability_sweep(SchemeId scheme, const ScalarOperator& op,
                                             const std::vector<PerturbationModel>& models,
                                             double r0, const ControlSequences& ctrl,
                                             int m_max) {
    if (models.empty()) throw std::invalid_argument("stability_sweep: no perturbation models");
    std::vector<StabilityReport> out;
    out.reserve(models.size());
    for (const auto& pert : models)
        out.push_back(perturbed_run(scheme, op, r0, ctrl, pert, m_max));
    return out;
}

}  // namespace fpl
