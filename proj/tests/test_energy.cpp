#include <doctest.h>

#include "pflow/energy.hpp"
#include "pflow/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace pflow;

namespace {

ScalarField bump_field(const Grid& g, double time = 0.0) {
    return ScalarField::sample(
        g,
        [&](Vec2 x) {
            const double r2 = x[0] * x[0] + (g.dim() == 2 ? x[1] * x[1] : 0.0);
            return r2 >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - r2));
        },
        time);
}

} // namespace

TEST_SUITE_BEGIN("energy");

TEST_CASE("trace validation") {
    EnergyTrace trace{"demo", {}};
    trace.append(0.0, 1.0);
    CHECK_THROWS_AS(trace.append(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(trace.append(1.0, -0.5), std::invalid_argument);
    trace.append(1.0, 0.5);
    CHECK(trace.size() == 2);
}

TEST_CASE("interior quadrature weights sum to the box measure") {
    for (int counts : {3, 4, 11}) {
        Grid g(2, {0, 0}, {1, 2}, {counts, counts});
        double total = 0.0;
        for (std::size_t m = 0; m < g.node_count(); ++m)
            total += quadrature_weight(g, g.unflat(m));
        CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("regularized energy of a constant field is eps^p * area") {
    Grid g(2, {0, 0}, {1, 1}, {21, 21});
    ScalarField u = ScalarField::constant(g, 4.2);
    CHECK(regularized_energy(u, PdeParams(2.0, 0.1)) ==
          doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("unit-slope fields have unit energy") {
    // u = x on [0,1], p = 3, eps -> 0 limit
    Grid g1(1, {0, 0}, {1, 0}, {11, 1});
    ScalarField ux1 = ScalarField::sample(g1, [](Vec2 x) { return x[0]; });
    CHECK(regularized_energy(ux1, PdeParams(3.0, 1e-12)) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // p_energy of u = x equals the domain measure on any grid
    for (int counts : {3, 7, 40}) {
        Grid g(2, {0, 0}, {1, 1}, {counts, counts});
        ScalarField ux = ScalarField::sample(g, [](Vec2 x) { return x[0]; });
        for (double p : {1.0, 2.0, 3.5})
            CHECK(p_energy(ux, p) == doctest::Approx(1.0).epsilon(1e-12));
    }

    Grid g(2, {0, 0}, {1, 1}, {9, 9});
    CHECK(p_energy(ScalarField::constant(g, 3.0), 2.0) == 0.0);
}

TEST_CASE("struwe energy of a tilted plane matches the Gaussian mass") {
    // |Du| = 1 and the kernel mass inside a wide box is 1, so E = (T-t).
    Grid g(2, {-8, -8}, {8, 8}, {161, 161});
    for (double tau : {0.5, 1.0}) {
        const double T = 2.0;
        ScalarField u = ScalarField::sample(g, [](Vec2 x) { return x[0]; }, T - tau);
        CHECK(struwe_energy(u, {0, 0}, T, 2.0) ==
              doctest::Approx(tau).epsilon(1e-4));
    }

    ScalarField c = ScalarField::constant(g, 1.0, 0.5);
    CHECK(struwe_energy(c, {0, 0}, 2.0, 3.0) == 0.0);
    CHECK_THROWS_AS(struwe_energy(c, {0, 0}, 0.5, 2.0), std::domain_error);
}

TEST_CASE("r-profile reverses a trace by r = sqrt(T - t)") {
    const double T = 2.0;
    EnergyTrace trace{"struwe_energy", {}};
    trace.append(T - 1.0, 0.7);
    trace.append(T - 0.25, 0.3);

    const auto profile = struwe_r_profile(trace, T);
    REQUIRE(profile.size() == 2);
    CHECK(profile[0].first == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(profile[0].second == 0.3);
    CHECK(profile[1].first == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(profile[1].second == 0.7);

    // order reversal: non-increasing E(t) gives non-decreasing I(r)
    EnergyTrace mono{"struwe_energy", {}};
    for (int k = 0; k < 10; ++k) mono.append(0.1 * k, 1.0 / (1.0 + k));
    const auto prof = struwe_r_profile(mono, T);
    for (std::size_t k = 0; k + 1 < prof.size(); ++k) {
        CHECK(prof[k].first < prof[k + 1].first);
        CHECK(prof[k].second <= prof[k + 1].second);
    }

    RunResult empty{ScalarField::constant(Grid(1, {0, 0}, {1, 0}, {3, 1}), 0.0),
                    {}, 0, {}};
    CHECK_THROWS_AS(struwe_r_profile(empty, T), std::invalid_argument);
}

TEST_CASE("discrete dissipation matches the energy decrement") {
    // (F(t+dt) - F(t))/dt against -p * integral of
    // (eps^2+|Du|^2)^{p/2-1} (u_t)^2, with u_t the discrete operator.
    Grid g(2, {-4, -4}, {4, 4}, {81, 81});
    const PdeParams params(2.5, 1e-2);
    ProblemSpec problem = ProblemSpec::truncated_cauchy(bump_field(g), 0.0);

    // One shared state, pre-smoothed so the spatial quadrature error sits
    // well below the O(dt) term being measured.
    SolverConfig warm(g, params, 0.1);
    const ScalarField u = solve(problem, warm).final;
    const ProblemSpec from_u = ProblemSpec::truncated_cauchy(u, 0.0);

    const auto mismatch = [&](double dt_fraction) {
        const double dt = cfl_dt(g, params, 1.0) * dt_fraction;
        SolverConfig one = SolverConfig::with_dt(g, params, dt, u.time() + dt, 1);
        ScalarField next = step_explicit(u, from_u, one);

        const double dF =
            (regularized_energy(next, params) - regularized_energy(u, params)) / dt;

        double rhs = 0.0;
        for (std::size_t m = 0; m < g.node_count(); ++m) {
            const NodeIndex n = g.unflat(m);
            if (!g.is_interior(n)) continue;
            const Vec2 grad = gradient_central(u, n);
            const double s2 = grad[0] * grad[0] + grad[1] * grad[1];
            const double ut = apply_operator(u, params, n);
            rhs += quadrature_weight(g, n) *
                   std::pow(params.eps * params.eps + s2, 0.5 * params.p - 1.0) *
                   ut * ut;
        }
        rhs *= -params.p;
        return std::abs(dF - rhs) / std::abs(rhs);
    };

    const double m4 = mismatch(0.25);
    const double m8 = mismatch(0.125);
    CHECK(m4 <= 0.10);
    CHECK(m8 < m4);
}


TEST_CASE("trace CSV format") {
    EnergyTrace trace{"demo", {}};
    trace.append(0.0, 1.0);
    trace.append(0.5, 0.25);
    std::ostringstream out;
    write_trace_csv(out, trace);
    CHECK(out.str() == "# demo\nt,value\n0,1\n0.5,0.25\n");

    EnergyTrace late{"struwe_energy", {}};
    late.append(2.5, 1.0);
    CHECK_THROWS_AS(struwe_r_profile(late, 2.0), std::domain_error);
}

TEST_SUITE_END();
