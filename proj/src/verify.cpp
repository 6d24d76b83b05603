#include "pflow/verify.hpp"

#include "pflow/errors.hpp"
#include "pflow/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace pflow {

namespace {

void require_shared_grid(const ProblemSpec& spec1, const ProblemSpec& spec2) {
    if (spec1.grid() != spec2.grid())
        throw std::invalid_argument("checks need both problems on the same grid");
}

// Runs both problems in lockstep and invokes visit(t, u1, u2) at every
// sample time, including the initial and final states.
template <typename Visitor>
void co_evolve(const ProblemSpec& spec1, const ProblemSpec& spec2,
               const SolverConfig& cfg, Visitor&& visit) {
    const Grid& g = spec1.grid();
    const double t0 = spec1.initial().time();
    if (spec2.initial().time() != t0)
        throw std::invalid_argument("co-evolution needs matching initial times");
    if (cfg.t_end < t0)
        throw std::invalid_argument("t_end precedes the initial time");

    std::vector<double> u1 = spec1.initial().values();
    std::vector<double> u2 = spec2.initial().values();
    std::vector<double> n1 = spec1.boundary_values();
    std::vector<double> n2 = spec2.boundary_values();

    visit(t0, u1, u2);
    const double duration = cfg.t_end - t0;
    long step = 0;
    bool visited = true;
    while (true) {
        const double remaining = duration - step * cfg.dt;
        if (remaining <= cfg.dt * 1e-12) break;
        const double dt = std::min(cfg.dt, remaining);
        const double t = t0 + step * cfg.dt;
        detail::advance_interior(g, cfg.params, dt, u1, n1, step, t);
        detail::advance_interior(g, cfg.params, dt, u2, n2, step, t);
        u1.swap(n1);
        u2.swap(n2);
        ++step;
        visited = false;
        if (step % cfg.record_every == 0) {
            visit(std::min(t0 + step * cfg.dt, cfg.t_end), u1, u2);
            visited = true;
        }
    }
    if (!visited && step > 0) visit(cfg.t_end, u1, u2);
}

// Single-problem variant of the same sampling loop.
template <typename Visitor>
void evolve(const ProblemSpec& spec, const SolverConfig& cfg, Visitor&& visit) {
    const Grid& g = spec.grid();
    const double t0 = spec.initial().time();
    std::vector<double> u = spec.initial().values();
    std::vector<double> next = spec.boundary_values();

    visit(t0, u);
    const double duration = cfg.t_end - t0;
    long step = 0;
    bool visited = true;
    while (true) {
        const double remaining = duration - step * cfg.dt;
        if (remaining <= cfg.dt * 1e-12) break;
        const double dt = std::min(cfg.dt, remaining);
        detail::advance_interior(g, cfg.params, dt, u, next, step, t0 + step * cfg.dt);
        u.swap(next);
        ++step;
        visited = false;
        if (step % cfg.record_every == 0) {
            visit(std::min(t0 + step * cfg.dt, cfg.t_end), u);
            visited = true;
        }
    }
    if (!visited && step > 0) visit(cfg.t_end, u);
}

} // namespace

OrderReport make_order_report(std::vector<double> hs, std::vector<double> errors) {
    if (hs.size() != errors.size() || hs.size() < 2)
        throw std::invalid_argument("order report needs >= 2 matching levels");
    OrderReport report;
    report.hs = std::move(hs);
    report.errors = std::move(errors);
    double order = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = 0; k + 1 < report.errors.size(); ++k) {
        if (!(report.errors[k + 1] < report.errors[k])) report.monotone = false;
        const double q = std::log(report.errors[k] / report.errors[k + 1]) /
                         std::log(report.hs[k] / report.hs[k + 1]);
        if (!std::isnan(q)) {
            order = std::min(order, q);
            any = true;
        }
    }
    report.observed_order = any ? order : 0.0;
    return report;
}

ComparisonReport check_comparison(const ProblemSpec& spec1, const ProblemSpec& spec2,
                                  const SolverConfig& cfg, double tolerance) {
    require_shared_grid(spec1, spec2);
    const Grid& g = spec1.grid();
    for (std::size_t m = 0; m < g.node_count(); ++m)
        if (spec1.initial()[m] > spec2.initial()[m])
            throw std::invalid_argument("check_comparison: data are not ordered at "
                                        "the initial time");
    for (std::size_t m = 0; m < g.node_count(); ++m)
        if (g.is_boundary(g.unflat(m)) &&
            spec1.boundary_value(m) > spec2.boundary_value(m))
            throw std::invalid_argument("check_comparison: boundary data are not "
                                        "ordered");

    ComparisonReport report;
    report.tolerance = tolerance;
    co_evolve(spec1, spec2, cfg,
              [&](double t, const std::vector<double>& u1,
                  const std::vector<double>& u2) {
                  for (std::size_t m = 0; m < u1.size(); ++m) {
                      const NodeIndex n = g.unflat(m);
                      if (!g.is_interior(n)) continue;
                      const double excess = u1[m] - u2[m];
                      if (excess > report.max_violation) {
                          report.max_violation = excess;
                          report.node = n;
                          report.time = t;
                      }
                  }
              });
    report.passed = report.max_violation <= tolerance;
    return report;
}

double check_sup_contraction(const ProblemSpec& spec1, const ProblemSpec& spec2,
                             const SolverConfig& cfg, ContractionMode mode) {
    require_shared_grid(spec1, spec2);
    const Grid& g = spec1.grid();

    double base = 0.0;
    for (std::size_t m = 0; m < g.node_count(); ++m)
        base = std::max(base, std::abs(spec1.initial()[m] - spec2.initial()[m]));
    if (mode == ContractionMode::parabolic_boundary)
        for (std::size_t m = 0; m < g.node_count(); ++m)
            if (g.is_boundary(g.unflat(m)))
                base = std::max(base, std::abs(spec1.boundary_value(m) -
                                               spec2.boundary_value(m)));

    double excess = 0.0;
    co_evolve(spec1, spec2, cfg,
              [&](double, const std::vector<double>& u1,
                  const std::vector<double>& u2) {
                  double sup = 0.0;
                  for (std::size_t m = 0; m < u1.size(); ++m)
                      sup = std::max(sup, std::abs(u1[m] - u2[m]));
                  excess = std::max(excess, sup - base);
              });
    return std::max(excess, 0.0);
}

ComparisonReport check_tychonoff_domination(const ProblemSpec& spec,
                                            const SolverConfig& cfg,
                                            const BarrierArgs& barrier,
                                            double tolerance) {
    const Grid& g = spec.grid();
    const int n = g.dim();
    const double p = cfg.params.p;
    const double t0 = spec.initial().time();

    const auto barrier_at = [&](NodeIndex node, double t) {
        return tychonoff_barrier(g.position(node), t, barrier.y, barrier.K,
                                 barrier.mu, barrier.T, barrier.eps_t, p, n);
    };

    for (std::size_t m = 0; m < g.node_count(); ++m) {
        const NodeIndex node = g.unflat(m);
        if (spec.initial()[m] > barrier_at(node, t0))
            throw std::invalid_argument(
                "check_tychonoff_domination: barrier does not dominate the datum");
    }
    // Lateral boundary for the whole horizon; the Dirichlet data are static.
    for (double t : {t0, cfg.t_end})
        for (std::size_t m = 0; m < g.node_count(); ++m) {
            const NodeIndex node = g.unflat(m);
            if (g.is_boundary(node) && spec.boundary_value(m) > barrier_at(node, t))
                throw std::invalid_argument(
                    "check_tychonoff_domination: barrier does not dominate the "
                    "boundary data");
        }

    ComparisonReport report;
    report.tolerance = tolerance;
    evolve(spec, cfg, [&](double t, const std::vector<double>& u) {
        for (std::size_t m = 0; m < u.size(); ++m) {
            const NodeIndex node = g.unflat(m);
            if (!g.is_interior(node)) continue;
            const double excess = u[m] - barrier_at(node, t);
            if (excess > report.max_violation) {
                report.max_violation = excess;
                report.node = node;
                report.time = t;
            }
        }
    });
    report.passed = report.max_violation <= tolerance;
    return report;
}

namespace {

Grid study_grid(const OrderStudyConfig& cfg, double h, double* h_actual) {
    std::array<int, 2> counts{3, 3};
    for (int k = 0; k < cfg.dim; ++k) {
        const double extent = cfg.box_hi[k] - cfg.box_lo[k];
        counts[k] = static_cast<int>(std::lround(extent / h)) + 1;
    }
    Grid grid(cfg.dim, cfg.box_lo, cfg.box_hi, counts);
    if (h_actual) *h_actual = grid.spacing(0);
    return grid;
}

bool in_inner_half_box(const OrderStudyConfig& cfg, Vec2 x) {
    for (int k = 0; k < cfg.dim; ++k) {
        const double c = 0.5 * (cfg.box_lo[k] + cfg.box_hi[k]);
        const double quarter = 0.25 * (cfg.box_hi[k] - cfg.box_lo[k]);
        if (std::abs(x[k] - c) > quarter + 1e-12) return false;
    }
    return true;
}

} // namespace

OrderReport estimate_order(const OrderStudyConfig& cfg,
                           const std::vector<double>& h_list) {
    if (h_list.size() < 2)
        throw std::invalid_argument("estimate_order needs >= 2 grid levels");
    const SelfSimilarParams exact_params(cfg.p, cfg.dim);

    std::vector<double> hs, errors;
    for (double h : h_list) {
        double h_actual = h;
        Grid grid = study_grid(cfg, h, &h_actual);
        ScalarField initial = ScalarField::sample(
            grid,
            [&](Vec2 x) { return self_similar_exact(x, cfg.t_start, exact_params); },
            cfg.t_start);
        ProblemSpec spec = ProblemSpec::cauchy_dirichlet(std::move(initial));
        SolverConfig run_cfg(grid, PdeParams(cfg.p, cfg.eps), cfg.t_end, cfg.safety,
                             1 << 20);
        RunResult result = solve(spec, run_cfg);

        double err = 0.0;
        for (std::size_t m = 0; m < grid.node_count(); ++m) {
            const Vec2 x = grid.position(grid.unflat(m));
            if (!in_inner_half_box(cfg, x)) continue;
            err = std::max(err, std::abs(result.final[m] - self_similar_exact(
                                                               x, cfg.t_end,
                                                               exact_params)));
        }
        hs.push_back(h_actual);
        errors.push_back(err);
    }
    return make_order_report(std::move(hs), std::move(errors));
}

double operator_residual_sup(const OrderStudyConfig& cfg, double h, double t,
                             double exclude_radius) {
    const SelfSimilarParams exact_params(cfg.p, cfg.dim);
    Grid grid = study_grid(cfg, h, nullptr);
    ScalarField field = ScalarField::sample(
        grid, [&](Vec2 x) { return self_similar_exact(x, t, exact_params); }, t);
    const PdeParams params(cfg.p, cfg.eps);

    double sup = 0.0;
    for (std::size_t m = 0; m < grid.node_count(); ++m) {
        const NodeIndex n = grid.unflat(m);
        if (!grid.is_interior(n)) continue;
        const Vec2 x = grid.position(n);
        const double r2 = x[0] * x[0] + (cfg.dim == 2 ? x[1] * x[1] : 0.0);
        if (r2 < exclude_radius * exclude_radius) continue;
        const double residual =
            detail::operator_at(field, params, n) - self_similar_dt(x, t, exact_params);
        sup = std::max(sup, std::abs(residual));
    }
    return sup;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << "check,parameter_set,violation,tolerance,passed\n";
    for (const ReportRow& r : rows)
        out << r.check << ',' << r.parameter_set << ',' << format_double(r.violation)
            << ',' << format_double(r.tolerance) << ','
            << (r.passed ? "true" : "false") << '\n';
}

} // namespace pflow
