#include "pflow/energy.hpp"

#include "pflow/exact.hpp"
#include "pflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace pflow {

void EnergyTrace::append(double t, double value) {
    if (!samples.empty() && !(t > samples.back().first))
        throw std::invalid_argument("trace '" + name +
                                    "': time stamps must strictly increase");
    if (!std::isfinite(value) || value < 0.0)
        throw std::invalid_argument("trace '" + name + "': value must be finite, >= 0");
    samples.emplace_back(t, value);
}

void write_trace_csv(std::ostream& out, const EnergyTrace& trace) {
    out << "# " << trace.name << '\n';
    out << "t,value\n";
    for (const auto& [t, v] : trace.samples)
        out << format_double(t) << ',' << format_double(v) << '\n';
}

void write_trace_csv_file(const std::string& path, const EnergyTrace& trace,
                          const std::string& extra_header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    if (!extra_header.empty()) out << "# " << extra_header << '\n';
    write_trace_csv(out, trace);
}

namespace {

// Per-axis trapezoid weight with the boundary mass lumped onto the adjacent
// interior node, so the interior weights sum to the axis extent.
double axis_weight(const Grid& g, int axis, int i) {
    const double h = g.spacing(axis);
    const int last = g.count(axis) - 1;
    double w = h;
    if (i == 1) w += 0.5 * h;
    if (i == last - 1) w += 0.5 * h;
    return w;
}

template <typename Integrand>
double integrate_interior(const ScalarField& field, Integrand&& f) {
    const Grid& g = field.grid();
    double total = 0.0;
    if (g.dim() == 1) {
        for (int i = 1; i < g.count(0) - 1; ++i)
            total += axis_weight(g, 0, i) * f(NodeIndex{i, 0});
    } else {
        for (int i = 1; i < g.count(0) - 1; ++i) {
            const double wx = axis_weight(g, 0, i);
            double row = 0.0;
            for (int j = 1; j < g.count(1) - 1; ++j)
                row += axis_weight(g, 1, j) * f(NodeIndex{i, j});
            total += wx * row;
        }
    }
    return total;
}

} // namespace

double quadrature_weight(const Grid& grid, NodeIndex node) {
    if (!grid.is_interior(node)) return 0.0;
    double w = axis_weight(grid, 0, node[0]);
    if (grid.dim() == 2) w *= axis_weight(grid, 1, node[1]);
    return w;
}

double regularized_energy(const ScalarField& field, const PdeParams& params) {
    const double e2 = params.eps * params.eps;
    const double half_p = 0.5 * params.p;
    return integrate_interior(field, [&](NodeIndex n) {
        const Vec2 g = gradient_central(field, n);
        const double s2 = g[0] * g[0] + g[1] * g[1];
        return std::pow(e2 + s2, half_p);
    });
}

double p_energy(const ScalarField& field, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("p_energy: p must be >= 1");
    const double half_p = 0.5 * p;
    return integrate_interior(field, [&](NodeIndex n) {
        const Vec2 g = gradient_central(field, n);
        const double s2 = g[0] * g[0] + g[1] * g[1];
        return s2 == 0.0 ? 0.0 : std::pow(s2, half_p);
    });
}

double struwe_energy(const ScalarField& field, Vec2 x0, double T, double p) {
    const double tau = T - field.time();
    if (!(tau > 0.0))
        throw std::domain_error("struwe_energy: field time must be < T");
    const int dim = field.grid().dim();
    const double half_p = 0.5 * p;
    const double integral = integrate_interior(field, [&](NodeIndex n) {
        const Vec2 g = gradient_central(field, n);
        const double s2 = g[0] * g[0] + g[1] * g[1];
        const double dup = s2 == 0.0 ? 0.0 : std::pow(s2, half_p);
        return dup * heat_kernel(x0, field.grid().position(n), tau, dim);
    });
    return std::pow(tau, half_p) * integral;
}

std::vector<std::pair<double, double>> struwe_r_profile(const EnergyTrace& trace,
                                                        double T) {
    if (trace.samples.empty())
        throw std::invalid_argument("struwe_r_profile: empty trace");
    std::vector<std::pair<double, double>> out;
    out.reserve(trace.samples.size());
    for (auto it = trace.samples.rbegin(); it != trace.samples.rend(); ++it) {
        const double tau = T - it->first;
        if (!(tau > 0.0))
            throw std::domain_error("struwe_r_profile: trace sample at t >= T");
        out.emplace_back(std::sqrt(tau), it->second);
    }
    return out;
}

std::vector<std::pair<double, double>> struwe_r_profile(const RunResult& run,
                                                        double T) {
    for (const EnergyTrace& trace : run.traces)
        if (trace.name.rfind("struwe", 0) == 0) return struwe_r_profile(trace, T);
    throw std::invalid_argument("struwe_r_profile: run has no struwe trace");
}

} // namespace pflow
