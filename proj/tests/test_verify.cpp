#include <doctest.h>

#include "pflow/solver.hpp"
#include "pflow/verify.hpp"

#include <cmath>
#include <stdexcept>
#include <cstring>
#include <sstream>

using namespace pflow;

namespace {

double bump(Vec2 x, double radius = 1.0) {
    const double s2 = (x[0] * x[0] + x[1] * x[1]) / (radius * radius);
    return s2 >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - s2));
}

} // namespace

TEST_SUITE_BEGIN("verify");

TEST_CASE("identical specs give exactly zero violation, deterministically") {
    Grid g(2, {-2, -2}, {2, 2}, {33, 33});
    ScalarField b = ScalarField::sample(g, [](Vec2 x) { return bump(x); });
    ProblemSpec spec = ProblemSpec::truncated_cauchy(b, 0.0);
    SolverConfig cfg(g, PdeParams(3.0, 1e-2), 0.05);

    ComparisonReport r1 = check_comparison(spec, spec, cfg, 1e-6);
    CHECK(r1.max_violation == 0.0);
    CHECK(r1.passed);

    ComparisonReport r2 = check_comparison(spec, spec, cfg, 1e-6);
    CHECK(std::memcmp(&r1.max_violation, &r2.max_violation, sizeof(double)) == 0);
    CHECK(r1.node == r2.node);
    CHECK(r1.time == r2.time);

    CHECK(check_sup_contraction(spec, spec, cfg) == 0.0);
}

TEST_CASE("additive shifts cost nothing: violation and excess are exact zeros") {
    // Data in [1, 2) keep the +0.5 shift exactly representable end to end.
    Grid g(2, {-2, -2}, {2, 2}, {41, 41});
    ScalarField g1 = ScalarField::sample(
        g, [](Vec2 x) { return 1.0 + 0.4 * bump(x); });
    ScalarField g2 = ScalarField::sample(
        g, [](Vec2 x) { return (1.0 + 0.4 * bump(x)) + 0.5; });
    ProblemSpec s1 = ProblemSpec::truncated_cauchy(g1, 1.0);
    ProblemSpec s2 = ProblemSpec::truncated_cauchy(g2, 1.5);
    SolverConfig cfg(g, PdeParams(3.0, 1e-2), 0.1);

    ComparisonReport report = check_comparison(s1, s2, cfg, 0.0);
    CHECK(report.max_violation == 0.0);
    CHECK(report.passed);

    CHECK(check_sup_contraction(s1, s2, cfg) == 0.0);
    CHECK(check_sup_contraction(s1, s2, cfg,
                                ContractionMode::parabolic_boundary) == 0.0);
}

TEST_CASE("comparison rejects unordered data") {
    Grid g(2, {-2, -2}, {2, 2}, {17, 17});
    ScalarField lo = ScalarField::sample(g, [](Vec2 x) { return bump(x); });
    ScalarField hi = ScalarField::sample(g, [](Vec2 x) { return 0.5 * bump(x); });
    ProblemSpec s1 = ProblemSpec::truncated_cauchy(lo, 0.0);
    ProblemSpec s2 = ProblemSpec::truncated_cauchy(hi, 0.0);
    SolverConfig cfg(g, PdeParams(2.0, 1e-2), 0.05);
    CHECK_THROWS_AS(check_comparison(s1, s2, cfg, 1e-6), std::invalid_argument);
}

TEST_CASE("ordered bump pair stays ordered within the empirical envelope") {
    Grid g(2, {-4, -4}, {4, 4}, {81, 81});
    ScalarField g1 = ScalarField::sample(g, [](Vec2 x) { return 0.6 * bump(x); });
    ScalarField g2 = ScalarField::sample(
        g, [](Vec2 x) { return 0.6 * bump(x) + 0.3 * bump(x, 2.0); });
    ProblemSpec s1 = ProblemSpec::truncated_cauchy(g1, 0.0);
    ProblemSpec s2 = ProblemSpec::truncated_cauchy(g2, 0.0);
    SolverConfig cfg(g, PdeParams(3.0, 1e-2), 0.25);

    const double osc = g2.oscillation();
    ComparisonReport report = check_comparison(s1, s2, cfg, 1e-6 * osc);
    CHECK(report.passed);

    // mirrored check: negated data in reversed roles give the same report
    ScalarField n1 = ScalarField::sample(
        g, [](Vec2 x) { return -(0.6 * bump(x) + 0.3 * bump(x, 2.0)); });
    ScalarField n2 = ScalarField::sample(g, [](Vec2 x) { return -0.6 * bump(x); });
    ProblemSpec m1 = ProblemSpec::truncated_cauchy(n1, 0.0);
    ProblemSpec m2 = ProblemSpec::truncated_cauchy(n2, 0.0);
    ComparisonReport mirrored = check_comparison(m1, m2, cfg, 1e-6 * osc);
    CHECK(mirrored.max_violation == report.max_violation);
    CHECK(mirrored.time == report.time);
}

TEST_CASE("sup contraction for two distinct bumps") {
    Grid g(2, {-4, -4}, {4, 4}, {81, 81});
    ScalarField g1 = ScalarField::sample(g, [](Vec2 x) { return bump(x); });
    ScalarField g2 = ScalarField::sample(
        g, [](Vec2 x) { return 0.7 * bump({x[0] - 0.5, x[1]}); });
    ProblemSpec s1 = ProblemSpec::truncated_cauchy(g1, 0.0);
    ProblemSpec s2 = ProblemSpec::truncated_cauchy(g2, 0.0);
    SolverConfig cfg(g, PdeParams(1.5, 1e-2), 0.25);

    double sup0 = 0.0;
    for (std::size_t m = 0; m < g.node_count(); ++m)
        sup0 = std::max(sup0, std::abs(g1[m] - g2[m]));

    CHECK(check_sup_contraction(s1, s2, cfg) <= 1e-6 * sup0);

    Grid other(2, {-4, -4}, {4, 4}, {41, 41});
    ProblemSpec s3 = ProblemSpec::truncated_cauchy(
        ScalarField::sample(other, [](Vec2 x) { return bump(x); }), 0.0);
    CHECK_THROWS_AS(check_sup_contraction(s1, s3, cfg), std::invalid_argument);
}

TEST_CASE("tychonoff domination checks") {
    Grid g(2, {-4, -4}, {4, 4}, {81, 81});
    ScalarField b = ScalarField::sample(g, [](Vec2 x) { return bump(x); });
    ProblemSpec spec = ProblemSpec::truncated_cauchy(b, 0.0);
    SolverConfig cfg(g, PdeParams(2.5, 1e-2), 0.25);
    const double osc = b.oscillation();

    // huge mu dominates trivially
    BarrierArgs huge{{0, 0}, 0.0, 1e6, 1.0, 0.1};
    ComparisonReport r0 = check_tychonoff_domination(spec, cfg, huge, 1e-6 * osc);
    CHECK(r0.max_violation == 0.0);

    // mu = 0 with K = max g reduces to the maximum principle
    BarrierArgs maxp{{0, 0}, b.max_value(), 0.0, 1.0, 0.1};
    ComparisonReport r1 = check_tychonoff_domination(spec, cfg, maxp, 1e-6 * osc);
    CHECK(r1.passed);

    // genuine Gaussian barrier with 4a(p-1)(T+eps_t) < 1
    BarrierArgs gauss{{0, 0}, b.max_value(), 0.5, 1.0, 0.1};
    ComparisonReport r2 = check_tychonoff_domination(spec, cfg, gauss, 1e-6 * osc);
    CHECK(r2.passed);

    // a barrier below the datum violates the precondition
    BarrierArgs low{{0, 0}, -10.0, 1e-8, 1.0, 0.1};
    CHECK_THROWS_AS(check_tychonoff_domination(spec, cfg, low, 1e-6),
                    std::invalid_argument);
}

TEST_CASE("order report bookkeeping") {
    OrderReport good = make_order_report({0.2, 0.1}, {4e-2, 1e-2});
    CHECK(good.observed_order == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(good.monotone);

    OrderReport bad = make_order_report({0.4, 0.2, 0.1}, {1e-2, 2e-2, 0.5e-2});
    CHECK_FALSE(bad.monotone);
    CHECK(bad.observed_order == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_order_report({0.1}, {1e-2}), std::invalid_argument);
}

TEST_CASE("order study on its own sample has zero error") {
    OrderStudyConfig cfg;
    cfg.p = 2.0;
    cfg.box_lo = {-2.0, -2.0};
    cfg.box_hi = {2.0, 2.0};
    cfg.t_start = 1.0;
    cfg.t_end = 1.0; // no stepping: the reference is compared with itself
    OrderReport report = estimate_order(cfg, {0.2, 0.1});
    CHECK(report.errors[0] == 0.0);
    CHECK(report.errors[1] == 0.0);
}

TEST_CASE("report CSV carries the documented columns") {
    std::ostringstream out;
    write_report_csv(out, {{"demo_check", "p=2", 1.5e-7, 1e-6, true}});
    const std::string text = out.str();
    CHECK(text.rfind("check,parameter_set,violation,tolerance,passed\n", 0) == 0);
    CHECK(text.find("demo_check,p=2,") != std::string::npos);
    CHECK(text.find(",true") != std::string::npos);
}

TEST_SUITE_END();
