#include "pflow/solver.hpp"

#include "pflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pflow {

namespace {

std::vector<double> boundary_from_field(const ScalarField& field) {
    const Grid& g = field.grid();
    std::vector<double> b(g.node_count(), 0.0);
    for (std::size_t m = 0; m < b.size(); ++m)
        if (g.is_boundary(g.unflat(m))) b[m] = field[m];
    return b;
}

} // namespace

ProblemSpec::ProblemSpec(ProblemKind kind, ScalarField initial,
                         std::vector<double> boundary)
    : kind_(kind), initial_(std::move(initial)), boundary_(std::move(boundary)) {}

ProblemSpec ProblemSpec::truncated_cauchy(ScalarField initial, double far_field) {
    const Grid& g = initial.grid();
    for (std::size_t m = 0; m < g.node_count(); ++m)
        if (g.is_boundary(g.unflat(m)) && initial[m] != far_field)
            throw std::invalid_argument(
                "truncated Cauchy problem: initial datum must equal the far-field "
                "constant on every boundary node");
    std::vector<double> b(g.node_count(), far_field);
    return ProblemSpec(ProblemKind::cauchy_truncated, std::move(initial), std::move(b));
}

ProblemSpec ProblemSpec::cauchy_dirichlet(ScalarField initial) {
    std::vector<double> b = boundary_from_field(initial);
    return ProblemSpec(ProblemKind::cauchy_dirichlet, std::move(initial), std::move(b));
}

ProblemSpec ProblemSpec::cauchy_dirichlet(ScalarField initial,
                                          std::vector<double> boundary_values) {
    const Grid& g = initial.grid();
    if (boundary_values.size() != g.node_count())
        throw std::invalid_argument("boundary value array length mismatch");
    for (std::size_t m = 0; m < boundary_values.size(); ++m)
        if (g.is_boundary(g.unflat(m)) && boundary_values[m] != initial[m])
            throw std::invalid_argument(
                "Cauchy-Dirichlet problem: boundary values must match the initial "
                "datum on boundary nodes");
    return ProblemSpec(ProblemKind::cauchy_dirichlet, std::move(initial),
                       std::move(boundary_values));
}

SolverConfig::SolverConfig(const Grid& grid, PdeParams params_, double t_end_,
                           double safety, int record_every_)
    : params(params_), dt(cfl_dt(grid, params_, safety)), t_end(t_end_),
      record_every(record_every_) {
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
}

SolverConfig SolverConfig::with_dt(const Grid& grid, PdeParams params, double dt,
                                   double t_end, int record_every) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (dt > cfl_dt(grid, params, 1.0) * (1.0 + 1e-12))
        throw std::invalid_argument("dt violates the CFL bound " +
                                    format_double(cfl_dt(grid, params, 1.0)));
    SolverConfig cfg(grid, params, t_end, 1.0, record_every);
    cfg.dt = dt;
    return cfg;
}

const EnergyTrace* RunResult::find_trace(const std::string& name) const {
    for (const EnergyTrace& t : traces)
        if (t.name == name) return &t;
    return nullptr;
}

namespace detail {

double advance_interior(const Grid& g, const PdeParams& params, double dt,
                        const std::vector<double>& u, std::vector<double>& out,
                        long step, double time) {
    double max_op = 0.0;
    const double* ud = u.data();
    if (g.dim() == 1) {
        const double hx = g.spacing(0);
        for (std::size_t m = 1; m + 1 < g.node_count(); ++m) {
            const double L = detail::operator_kernel_1d(ud, m, hx, params.p, params.eps);
            const double v = u[m] + dt * L;
            if (!std::isfinite(v))
                throw InstabilityError("instability at step " + std::to_string(step) +
                                       ", t=" + format_double(time) + ", node (" +
                                       std::to_string(m) + ")");
            if (std::abs(L) > max_op) max_op = std::abs(L);
            out[m] = v;
        }
        return max_op;
    }
    const std::size_t sx = static_cast<std::size_t>(g.count(1));
    const double hx = g.spacing(0), hy = g.spacing(1);
    for (int i = 1; i < g.count(0) - 1; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * sx;
        for (int j = 1; j < g.count(1) - 1; ++j) {
            const std::size_t m = row + j;
            const double L =
                detail::operator_kernel_2d(ud, m, sx, hx, hy, params.p, params.eps);
            const double v = u[m] + dt * L;
            if (!std::isfinite(v))
                throw InstabilityError("instability at step " + std::to_string(step) +
                                       ", t=" + format_double(time) + ", node (" +
                                       std::to_string(i) + "," + std::to_string(j) +
                                       ")");
            if (std::abs(L) > max_op) max_op = std::abs(L);
            out[m] = v;
        }
    }
    return max_op;
}

} // namespace detail

namespace {

double sup_gradient_raw(const Grid& g, const std::vector<double>& u) {
    double sup2 = 0.0;
    if (g.dim() == 1) {
        const double inv2h = 1.0 / (2.0 * g.spacing(0));
        for (std::size_t m = 1; m + 1 < g.node_count(); ++m) {
            const double gx = (u[m + 1] - u[m - 1]) * inv2h;
            sup2 = std::max(sup2, gx * gx);
        }
    } else {
        const std::size_t sx = static_cast<std::size_t>(g.count(1));
        const double inv2hx = 1.0 / (2.0 * g.spacing(0));
        const double inv2hy = 1.0 / (2.0 * g.spacing(1));
        for (int i = 1; i < g.count(0) - 1; ++i)
            for (int j = 1; j < g.count(1) - 1; ++j) {
                const std::size_t m = static_cast<std::size_t>(i) * sx + j;
                const double gx = (u[m + sx] - u[m - sx]) * inv2hx;
                const double gy = (u[m + 1] - u[m - 1]) * inv2hy;
                sup2 = std::max(sup2, gx * gx + gy * gy);
            }
    }
    return std::sqrt(sup2);
}

} // namespace

double sup_gradient(const ScalarField& field) {
    return sup_gradient_raw(field.grid(), field.values());
}

ScalarField step_explicit(const ScalarField& field, const ProblemSpec& spec,
                          const SolverConfig& cfg) {
    if (field.grid() != spec.grid())
        throw std::invalid_argument("step_explicit: field grid does not match spec");
    std::vector<double> out = spec.boundary_values();
    detail::advance_interior(spec.grid(), cfg.params, cfg.dt, field.values(), out, 0,
                             field.time());
    return ScalarField(spec.grid(), std::move(out), field.time() + cfg.dt);
}

RunResult solve(const ProblemSpec& spec, const SolverConfig& cfg,
                const std::vector<Monitor>& monitors) {
    const Grid& g = spec.grid();
    const double t0 = spec.initial().time();
    if (cfg.t_end < t0)
        throw std::invalid_argument("solve: t_end precedes the initial time");

    RunResult result{spec.initial(), {}, 0, {}};
    result.sup_gradient_trace.name = "sup_gradient";
    for (const Monitor& m : monitors) {
        EnergyTrace trace;
        trace.name = m.name;
        result.traces.push_back(std::move(trace));
    }

    std::vector<double> u = spec.initial().values();
    std::vector<double> next = spec.boundary_values();

    const auto sample = [&](double t) {
        const double sup_grad = sup_gradient_raw(g, u);
        if (!std::isfinite(sup_grad))
            throw InstabilityError("instability detected while sampling at t=" +
                                   format_double(t));
        ScalarField f(g, u, t);
        for (std::size_t k = 0; k < monitors.size(); ++k) {
            const double value = monitors[k].evaluate(f);
            if (!std::isfinite(value))
                throw InstabilityError("monitor '" + monitors[k].name +
                                       "' produced a non-finite value at t=" +
                                       format_double(t));
            result.traces[k].append(t, value);
        }
        result.sup_gradient_trace.append(t, sup_grad);
    };

    sample(t0);

    const double duration = cfg.t_end - t0;
    long step = 0;
    bool sampled = true;
    while (true) {
        const double t = t0 + step * cfg.dt;
        const double remaining = duration - step * cfg.dt;
        if (remaining <= cfg.dt * 1e-12) break;
        const double dt = std::min(cfg.dt, remaining);
        detail::advance_interior(g, cfg.params, dt, u, next, step, t);
        u.swap(next);
        ++step;
        sampled = false;
        if (step % cfg.record_every == 0) {
            sample(std::min(t0 + step * cfg.dt, cfg.t_end));
            sampled = true;
        }
    }
    if (!sampled && step > 0) sample(cfg.t_end);

    result.step_count = step;
    result.final = ScalarField(g, std::move(u), step == 0 ? t0 : cfg.t_end);
    return result;
}

ScalarField solve_to_steady(const ProblemSpec& spec, const SolverConfig& cfg,
                            double tol, long max_steps) {
    if (spec.kind() != ProblemKind::cauchy_dirichlet)
        throw std::invalid_argument("solve_to_steady needs a Cauchy-Dirichlet problem");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");

    const Grid& g = spec.grid();
    const double t0 = spec.initial().time();
    std::vector<double> u = spec.initial().values();
    std::vector<double> next = spec.boundary_values();

    double residual = 0.0;
    for (long step = 0; step < max_steps; ++step) {
        residual = detail::advance_interior(g, cfg.params, cfg.dt, u, next, step,
                                            t0 + step * cfg.dt);
        if (residual < tol)
            return ScalarField(g, std::move(u), t0 + step * cfg.dt);
        u.swap(next);
    }
    throw ConvergenceError("solve_to_steady: residual " + format_double(residual) +
                               " after " + std::to_string(max_steps) + " steps",
                           {residual});
}

namespace {

double face_coefficient(double dn, double dt, double p, double eps) {
    const double s2 = eps * eps + dn * dn + dt * dt;
    return std::pow(s2, 0.5 * p - 1.0);
}

// Divergence-form residual and face coefficients for the current iterate.
// Face arrays: cx indexed by (i, j) = face between nodes (i, j), (i+1, j);
// cy by face between (i, j), (i, j+1).
void compute_face_coefficients(const Grid& g, const std::vector<double>& v,
                               double p, double eps, std::vector<double>& cx,
                               std::vector<double>& cy) {
    if (g.dim() == 1) {
        const double hx = g.spacing(0);
        for (int i = 0; i + 1 < g.count(0); ++i)
            cx[i] = face_coefficient((v[i + 1] - v[i]) / hx, 0.0, p, eps);
        return;
    }
    const int nx = g.count(0), ny = g.count(1);
    const std::size_t sx = static_cast<std::size_t>(ny);
    const double hx = g.spacing(0), hy = g.spacing(1);
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 1; j < ny - 1; ++j) {
            const std::size_t m = static_cast<std::size_t>(i) * sx + j;
            const double dn = (v[m + sx] - v[m]) / hx;
            const double dtan = 0.5 * ((v[m + 1] - v[m - 1]) / (2.0 * hy) +
                                       (v[m + sx + 1] - v[m + sx - 1]) / (2.0 * hy));
            cx[m] = face_coefficient(dn, dtan, p, eps);
        }
    for (int i = 1; i < nx - 1; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            const std::size_t m = static_cast<std::size_t>(i) * sx + j;
            const double dn = (v[m + 1] - v[m]) / hy;
            const double dtan = 0.5 * ((v[m + sx] - v[m - sx]) / (2.0 * hx) +
                                       (v[m + sx + 1] - v[m - sx + 1]) / (2.0 * hx));
            cy[m] = face_coefficient(dn, dtan, p, eps);
        }
}

double divergence_residual(const Grid& g, const std::vector<double>& v,
                           const std::vector<double>& cx,
                           const std::vector<double>& cy) {
    double res = 0.0;
    if (g.dim() == 1) {
        const double ih2 = 1.0 / (g.spacing(0) * g.spacing(0));
        for (int i = 1; i + 1 < g.count(0); ++i) {
            const double r =
                (cx[i] * (v[i + 1] - v[i]) - cx[i - 1] * (v[i] - v[i - 1])) * ih2;
            if (!(std::abs(r) <= res)) res = std::abs(r); // NaN-propagating max
        }
        return res;
    }
    const int nx = g.count(0), ny = g.count(1);
    const std::size_t sx = static_cast<std::size_t>(ny);
    const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (int i = 1; i < nx - 1; ++i)
        for (int j = 1; j < ny - 1; ++j) {
            const std::size_t m = static_cast<std::size_t>(i) * sx + j;
            const double r =
                (cx[m] * (v[m + sx] - v[m]) - cx[m - sx] * (v[m] - v[m - sx])) * ihx2 +
                (cy[m] * (v[m + 1] - v[m]) - cy[m - 1] * (v[m] - v[m - 1])) * ihy2;
            if (!(std::abs(r) <= res)) res = std::abs(r); // NaN-propagating max
        }
    return res;
}

} // namespace

ScalarField p_laplace_relax(const ProblemSpec& spec, const PdeParams& params,
                            double tol, long max_sweeps) {
    if (spec.kind() != ProblemKind::cauchy_dirichlet)
        throw std::invalid_argument("p_laplace_relax needs a Cauchy-Dirichlet problem");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");

    const Grid& g = spec.grid();
    std::vector<double> v = spec.initial().values();
    std::vector<double> cx(g.node_count(), 0.0), cy(g.node_count(), 0.0);

    // Nonlinear Gauss-Seidel: each node visit takes one Newton step of the
    // local flux-balance equation, using the true flux slope
    // phi'(s) = q^{p/2-2} (q + (p-2) s^2), q = eps^2 + |Dv|_face^2.
    // A frozen-coefficient update would be over-relaxed by about (p-1) on
    // slope-dominated faces, which diverges for p > 2. Over-relaxation is
    // applied only in the sub-quadratic regime where the frozen slope is
    // conservative.
    const int nmax = std::max(g.count(0), g.dim() == 2 ? g.count(1) : 3);
    const double omega =
        params.p <= 2.0
            ? (nmax >= 32 ? 2.0 / (1.0 + std::sin(3.14159265358979323846 / nmax))
                          : 1.5)
            : 1.0;
    const double e2 = params.eps * params.eps;
    const double pm2 = params.p - 2.0;
    const double half_pm2 = 0.5 * params.p - 2.0;

    // flux c(s)*s and slope phi'(s) at a face with normal slope s and
    // tangential slope tan
    const auto face = [&](double s, double tan, double& flux, double& slope) {
        const double q = e2 + s * s + tan * tan;
        const double qe = std::pow(q, half_pm2); // q^{p/2-2}
        flux = qe * q * s;                       // q^{p/2-1} * s
        slope = qe * (q + pm2 * s * s);
    };

    const int check_every = 20;
    std::vector<double> history;
    long sweeps = 0;
    while (sweeps < max_sweeps) {
        compute_face_coefficients(g, v, params.p, params.eps, cx, cy);
        const double res = divergence_residual(g, v, cx, cy);
        history.push_back(res);
        if (!std::isfinite(res)) break;
        if (res < tol) return ScalarField(g, std::move(v), spec.initial().time());

        for (int s = 0; s < check_every && sweeps < max_sweeps; ++s, ++sweeps) {
            if (g.dim() == 1) {
                const double hx = g.spacing(0);
                for (int i = 1; i + 1 < g.count(0); ++i) {
                    double fe, de, fw, dw;
                    face((v[i + 1] - v[i]) / hx, 0.0, fe, de);
                    face((v[i] - v[i - 1]) / hx, 0.0, fw, dw);
                    const double r = (fe - fw) / hx;
                    const double diag = (de + dw) / (hx * hx);
                    v[i] += omega * r / diag;
                }
            } else {
                const int nx = g.count(0), ny = g.count(1);
                const std::size_t sxs = static_cast<std::size_t>(ny);
                const double hx = g.spacing(0), hy = g.spacing(1);
                for (int i = 1; i < nx - 1; ++i)
                    for (int j = 1; j < ny - 1; ++j) {
                        const std::size_t m = static_cast<std::size_t>(i) * sxs + j;
                        const double ty_c = (v[m + 1] - v[m - 1]) / (2.0 * hy);
                        const double tx_c = (v[m + sxs] - v[m - sxs]) / (2.0 * hx);
                        const double ty_e = (v[m + sxs + 1] - v[m + sxs - 1]) / (2.0 * hy);
                        const double ty_w = (v[m - sxs + 1] - v[m - sxs - 1]) / (2.0 * hy);
                        const double tx_n = (v[m + 1 + sxs] - v[m + 1 - sxs]) / (2.0 * hx);
                        const double tx_s = (v[m - 1 + sxs] - v[m - 1 - sxs]) / (2.0 * hx);
                        double fe, de, fw, dw, fn, dn, fs, ds;
                        face((v[m + sxs] - v[m]) / hx, 0.5 * (ty_c + ty_e), fe, de);
                        face((v[m] - v[m - sxs]) / hx, 0.5 * (ty_c + ty_w), fw, dw);
                        face((v[m + 1] - v[m]) / hy, 0.5 * (tx_c + tx_n), fn, dn);
                        face((v[m] - v[m - 1]) / hy, 0.5 * (tx_c + tx_s), fs, ds);
                        const double r = (fe - fw) / hx + (fn - fs) / hy;
                        const double diag =
                            (de + dw) / (hx * hx) + (dn + ds) / (hy * hy);
                        v[m] += omega * r / diag;
                    }
            }
        }
    }
    const std::string message = "p_laplace_relax: residual " +
                                format_double(history.back()) + " after " +
                                std::to_string(max_sweeps) + " sweeps";
    throw ConvergenceError(message, std::move(history));
}

std::vector<std::pair<double, RunResult>>
sweep_p(const ProblemSpec& spec, const std::vector<double>& p_list, double eps,
        double t_end, const std::vector<Monitor>& monitors, double safety,
        int record_every) {
    if (p_list.empty()) throw std::invalid_argument("sweep_p: empty p list");
    for (std::size_t k = 0; k < p_list.size(); ++k) {
        if (!(p_list[k] > 1.0))
            throw std::invalid_argument("sweep_p: every p must be > 1");
        if (k > 0 && !(p_list[k] < p_list[k - 1]))
            throw std::invalid_argument("sweep_p: p list must be strictly decreasing");
    }
    std::vector<std::pair<double, RunResult>> results;
    results.reserve(p_list.size());
    for (double p : p_list) {
        SolverConfig cfg(spec.grid(), PdeParams(p, eps), t_end, safety, record_every);
        results.emplace_back(p, solve(spec, cfg, monitors));
    }
    return results;
}

double extract_zero_level_radius(const ScalarField& field) {
    const Grid& g = field.grid();
    const double xc = 0.5 * (g.lo(0) + g.hi(0));
    const int ic = static_cast<int>(std::lround((xc - g.lo(0)) / g.spacing(0)));
    const int jc = g.dim() == 2
                       ? static_cast<int>(std::lround(
                             (0.5 * (g.lo(1) + g.hi(1)) - g.lo(1)) / g.spacing(1)))
                       : 0;

    const double center = field.at({ic, jc});
    const bool negative = center < 0.0;
    for (int i = ic; i + 1 < g.count(0); ++i) {
        const double a = field.at({i, jc});
        const double b = field.at({i + 1, jc});
        if ((negative && b >= 0.0) || (!negative && b <= 0.0)) {
            const double xa = g.coord(0, i);
            const double frac = a == b ? 0.0 : a / (a - b);
            return xa + frac * g.spacing(0) - xc;
        }
    }
    throw std::runtime_error(
        "extract_zero_level_radius: no sign change along the positive x-axis");
}

} // namespace pflow
