#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpl/analysis.hpp"
#include "fpl/operator_core.hpp"

using namespace fpl;

namespace {

ControlSequences all_half() {
    ControlSequences ctrl;
    ctrl.a = ControlSequence::constant(0.5);
    ctrl.c = ControlSequence::constant(0.5);
    ctrl.d = ControlSequence::constant(0.5);
    return ctrl;
}

IterationTrace run_for(SchemeId id, double s0, int iters) {
    StopRule stop;
    stop.max_iters = iters;
    stop.step_tol = 0.0;
    return run(id, catalog_lookup("cos_half"), s0, all_half(), stop);
}

}  // namespace

TEST_CASE("error_sequence is the absolute gap to the fixed point") {
    IterationTrace tr;
    tr.iterates = {1.0, 0.5, 0.25};
    const auto e = error_sequence(tr, 0.25);
    REQUIRE(e.size() == 3);
    CHECK(e[0] == 0.75);
    CHECK(e[1] == 0.25);
    CHECK(e[2] == 0.0);
}

TEST_CASE("envelope exponents per scheme") {
    CHECK(envelope(SchemeId::picard, 0.5, 1.0, 3).k == 1);
    CHECK(envelope(SchemeId::normal_s, 0.5, 1.0, 3).k == 1);
    CHECK(envelope(SchemeId::varat, 0.5, 1.0, 3).k == 1);
    CHECK(envelope(SchemeId::fstar, 0.5, 1.0, 3).k == 2);
    CHECK(envelope(SchemeId::at, 0.5, 1.0, 3).k == 3);

    const auto env = envelope(SchemeId::at, 0.5, 2.0, 3);
    REQUIRE(env.values.size() == 4);  // bounds for errors after 1..m_max+1 steps
    CHECK(env.values[0] == doctest::Approx(0.125 * 2.0).epsilon(1e-15));
    CHECK(env.values[2] == doctest::Approx(std::pow(0.5, 9) * 2.0).epsilon(1e-15));

    CHECK_THROWS_AS(envelope(SchemeId::mann, 0.5, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(envelope(SchemeId::ishikawa, 0.5, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(envelope(SchemeId::s, 0.5, 1.0, 3), std::invalid_argument);
}

TEST_CASE("envelopes order the schemes at every index") {
    const auto p = envelope(SchemeId::picard, 0.5, 1.0, 10);
    const auto f = envelope(SchemeId::fstar, 0.5, 1.0, 10);
    const auto a = envelope(SchemeId::at, 0.5, 1.0, 10);
    for (size_t j = 0; j < 10; ++j) {
        CHECK(a.values[j] < f.values[j]);
        CHECK(f.values[j] < p.values[j]);
    }
}

TEST_CASE("real runs stay inside their envelopes") {
    const auto op = catalog_lookup("cos_half");
    const double s_star = oracle_fixed_point(op, 1e-14).value;
    const double s0 = 1.658950;
    const double gap0 = std::fabs(s0 - s_star);

    for (SchemeId id : {SchemeId::picard, SchemeId::normal_s, SchemeId::varat,
                        SchemeId::fstar, SchemeId::at}) {
        const auto trace = run_for(id, s0, 20);
        const auto env = envelope(id, 0.5, gap0, 20);
        const auto report = envelope_check(trace, env, s_star);
        CHECK(report.pass);
        CHECK(report.max_excess <= 1e-12);
    }
}

TEST_CASE("a run violating its envelope is flagged") {
    const auto op = catalog_lookup("cos_half");
    const double s_star = oracle_fixed_point(op, 1e-14).value;
    const auto picard = run_for(SchemeId::picard, 1.658950, 10);
    // zeta = 0.1 shrinks faster than the map actually contracts
    const auto env = envelope(SchemeId::picard, 0.1, std::fabs(1.658950 - s_star), 10);
    const auto report = envelope_check(picard, env, s_star);
    CHECK_FALSE(report.pass);
    CHECK(report.max_excess > 0.01);
    CHECK(report.worst_index >= 1);

    IterationTrace wrong;
    wrong.scheme = SchemeId::at;
    wrong.iterates = picard.iterates;
    CHECK_THROWS_AS(envelope_check(wrong, env, s_star), std::invalid_argument);
}

TEST_CASE("identical traces compare as same_rate") {
    const auto a = run_for(SchemeId::picard, 1.5, 20);
    const double s_star = oracle_fixed_point(catalog_lookup("cos_half"), 1e-14).value;
    const auto cmp = compare_rates(a, a, s_star);
    CHECK(cmp.verdict == RateVerdict::same_rate);
    for (double r : cmp.ratios) CHECK(r == 1.0);
}

TEST_CASE("rate comparison is antisymmetric for separated schemes") {
    const double s_star = oracle_fixed_point(catalog_lookup("cos_half"), 1e-14).value;
    StopRule stop;  // default step_tol keeps traces off the error floor
    const auto op = catalog_lookup("cos_half");
    const auto at = run(SchemeId::at, op, 1.658950, all_half(), stop);
    const auto picard = run(SchemeId::picard, op, 1.658950, all_half(), stop);

    CHECK(compare_rates(at, picard, s_star).verdict == RateVerdict::a_faster);
    CHECK(compare_rates(picard, at, s_star).verdict == RateVerdict::b_faster);
}

TEST_CASE("degenerate comparisons are inconclusive") {
    const auto op = make_operator("half", 0.0, 1.0, [](double t) { return t / 2.0; });
    StopRule stop;
    stop.max_iters = 10;
    stop.step_tol = 0.0;
    ControlSequences ctrl = all_half();
    const auto moving = run(SchemeId::picard, op, 1.0, ctrl, stop);
    const auto parked = run(SchemeId::picard, op, 0.0, ctrl, stop);  // at the fixed point
    CHECK(compare_rates(moving, parked, 0.0).verdict == RateVerdict::inconclusive);

    IterationTrace tiny;
    tiny.iterates = {1.0, 0.5};
    CHECK_THROWS_AS(compare_rates(tiny, moving, 0.0), std::invalid_argument);
}

TEST_CASE("lemma recursion check") {
    CHECK(check_lemma_recursion({1.0, 0.5}, {0.0}, 0.5));
    CHECK(check_lemma_recursion({1.0, 0.6}, {0.1}, 0.5));
    CHECK_FALSE(check_lemma_recursion({1.0, 0.7}, {0.05}, 0.5));
    // v may carry one entry per step and no more are needed
    CHECK(check_lemma_recursion({1.0, 1.0, 1.0}, {0.5, 0.5}, 0.5));

    CHECK_THROWS_AS(check_lemma_recursion({1.0, 0.5}, {0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(check_lemma_recursion({1.0}, {}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(check_lemma_recursion({1.0, 0.5, 0.25}, {0.0}, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_lemma_recursion({1.0, -0.5}, {0.0}, 0.5), std::invalid_argument);
}
