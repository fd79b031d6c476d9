#pragma once

#include <vector>

#include "fpl/schemes.hpp"

namespace fpl {

/// Theoretical bound sequence zeta^{k(m+1)} * initial_gap. The exponent
/// multiplier k is fixed per scheme: 1 for Picard, normal-S and Varat, 2 for
/// F*, 3 for AT. No bound exists for Mann, Ishikawa or S.
struct ErrorEnvelope {
    SchemeId scheme;
    double zeta = 0.5;
    int k = 1;
    double initial_gap = 0.0;
    std::vector<double> values;  // values[j] = zeta^{k(j+1)} * initial_gap
};

std::vector<double> error_sequence(const IterationTrace& trace, double s_star);

ErrorEnvelope envelope(SchemeId scheme, double zeta, double initial_gap, int m_max);

struct EnvelopeReport {
    double max_excess = 0.0;  // max over m of error[m] - values[m-1]
    int worst_index = 0;
    bool pass = false;        // max_excess <= 1e-12
};

/// Compares the empirical error of a run against its theoretical envelope:
/// error[m] is tested against values[m-1], the bound after m steps. The
/// 1e-12 allowance absorbs the double-precision floor that an exactly
/// converged iterate sits on while the envelope keeps shrinking.
EnvelopeReport envelope_check(const IterationTrace& trace, const ErrorEnvelope& env,
                              double s_star);

enum class RateVerdict { a_faster, same_rate, b_faster, inconclusive };

const char* verdict_name(RateVerdict v);

struct RateComparison {
    std::vector<double> ratios;  // |a_m - s*| / |b_m - s*| while denominator > 1e-15
    RateVerdict verdict = RateVerdict::inconclusive;
};

/// Ratio-of-errors comparison. a_faster when the ratio sequence trends to
/// zero: last valid ratio below 0.01 and ratios non-increasing over the
/// final three valid indices. same_rate when every ratio stays inside
/// [0.1, 10]. b_faster by the symmetric rule on swapped traces.
RateComparison compare_rates(const IterationTrace& trace_a,
                             const IterationTrace& trace_b, double s_star);

/// True when u[m+1] <= s * u[m] + v[m] + 1e-12 holds at every index,
/// the recursion shape used by the stability arguments. v needs at least
/// u.size() - 1 entries.
bool check_lemma_recursion(const std::vector<double>& u,
                           const std::vector<double>& v, double s);

}  // namespace fpl
