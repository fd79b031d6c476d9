#include "fpl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpl {

const char* verdict_name(RateVerdict v) {
    switch (v) {
        case RateVerdict::a_faster: return "a_faster";
        case RateVerdict::same_rate: return "same_rate";
        case RateVerdict::b_faster: return "b_faster";
        case RateVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<double> error_sequence(const IterationTrace& trace, double s_star) {
    if (!std::isfinite(s_star))
        throw std::invalid_argument("error_sequence: s_star must be finite");
    std::vector<double> e;
    e.reserve(trace.iterates.size());
    for (double s : trace.iterates) e.push_back(std::fabs(s - s_star));
    return e;
}

ErrorEnvelope envelope(SchemeId scheme, double zeta, double initial_gap, int m_max) {
    if (!(zeta > 0.0 && zeta < 1.0))
        throw std::invalid_argument("envelope: zeta must lie in (0,1)");
    if (initial_gap < 0.0)
        throw std::invalid_argument("envelope: initial_gap must be >= 0");
    if (m_max < 0) throw std::invalid_argument("envelope: m_max must be >= 0");
    int k;
    switch (scheme) {
        case SchemeId::picard:
        case SchemeId::normal_s:
        case SchemeId::varat: k = 1; break;
        case SchemeId::fstar: k = 2; break;
        case SchemeId::at: k = 3; break;
        default:
            throw std::invalid_argument(std::string("envelope unavailable for scheme '") +
                                        scheme_name(scheme) + "'");
    }
    ErrorEnvelope env{scheme, zeta, k, initial_gap, {}};
    env.values.reserve(m_max + 1);
    for (int j = 0; j <= m_max; ++j)
        env.values.push_back(std::pow(zeta, static_cast<double>(k) * (j + 1)) * initial_gap);
    return env;
}

EnvelopeReport envelope_check(const IterationTrace& trace, const ErrorEnvelope& env,
                              double s_star) {
    if (env.scheme != trace.scheme)
        throw std::invalid_argument("envelope_check: scheme mismatch");
    if (trace.iterates.size() < 2)
        throw std::invalid_argument("envelope_check: trace shorter than 2");
    const auto errors = error_sequence(trace, s_star);
    EnvelopeReport report;
    report.max_excess = -std::numeric_limits<double>::infinity();
    const size_t last = std::min(errors.size() - 1, env.values.size());
    for (size_t m = 1; m <= last; ++m) {
        const double excess = errors[m] - env.values[m - 1];
        if (excess > report.max_excess) {
            report.max_excess = excess;
            report.worst_index = static_cast<int>(m);
        }
    }
    report.pass = report.max_excess <= 1e-12;
    return report;
}

namespace {

// Ratios e_a[m] / e_b[m] until the denominator drops to the 1e-15 floor.
std::vector<double> ratio_sequence(const std::vector<double>& ea,
                                   const std::vector<double>& eb) {
    std::vector<double> ratios;
    const size_t n = std::min(ea.size(), eb.size());
    for (size_t m = 0; m < n; ++m) {
        if (eb[m] <= 1e-15) break;
        ratios.push_back(ea[m] / eb[m]);
    }
    return ratios;
}

bool trends_to_zero(const std::vector<double>& r) {
    if (r.size() < 3) return false;
    const size_t n = r.size();
    return r.back() < 0.01 && r[n - 3] >= r[n - 2] && r[n - 2] >= r[n - 1];
}

}  // namespace

RateComparison compare_rates(const IterationTrace& trace_a,
                             const IterationTrace& trace_b, double s_star) {
    if (trace_a.iterates.size() < 3 || trace_b.iterates.size() < 3)
        throw std::invalid_argument("compare_rates: traces need at least 3 iterates");
    const auto ea = error_sequence(trace_a, s_star);
    const auto eb = error_sequence(trace_b, s_star);

    RateComparison cmp;
    cmp.ratios = ratio_sequence(ea, eb);
    if (cmp.ratios.size() < 3) {
        cmp.verdict = RateVerdict::inconclusive;
        return cmp;
    }
    if (trends_to_zero(cmp.ratios)) {
        cmp.verdict = RateVerdict::a_faster;
        return cmp;
    }
    bool banded = true;
    for (double r : cmp.ratios)
        if (r < 0.1 || r > 10.0) { banded = false; break; }
    if (banded) {
        cmp.verdict = RateVerdict::same_rate;
        return cmp;
    }
    cmp.verdict = trends_to_zero(ratio_sequence(eb, ea)) ? RateVerdict::b_faster
                                                         : RateVerdict::inconclusive;
    return cmp;
}

bool check_lemma_recursion(const std::vector<double>& u,
                           const std::vector<double>& v, double s) {
    if (!(s >= 0.0 && s < 1.0))
        throw std::invalid_argument("check_lemma_recursion: s must lie in [0,1)");
    if (u.size() < 2)
        throw std::invalid_argument("check_lemma_recursion: u needs at least 2 entries");
    if (v.size() + 1 < u.size())
        throw std::invalid_argument("check_lemma_recursion: v too short for u");
    for (double x : u)
        if (x < 0.0) throw std::invalid_argument("check_lemma_recursion: negative entry in u");
    for (double x : v)
        if (x < 0.0) throw std::invalid_argument("check_lemma_recursion: negative entry in v");
    for (size_t m = 0; m + 1 < u.size(); ++m)
        if (u[m + 1] > s * u[m] + v[m] + 1e-12) return false;
    return true;
}

}  // namespace fpl
