#ifndef PFLOW_ENERGY_HPP
#define PFLOW_ENERGY_HPP

#include "pflow/grid.hpp"
#include "pflow/operator.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pflow {

struct RunResult;

/// Ordered (time, value) samples of an energy functional along a solve.
/// Time stamps strictly increase; values are finite and >= 0.
struct EnergyTrace {
    std::string name;
    std::vector<std::pair<double, double>> samples;

    void append(double t, double value);
    std::size_t size() const { return samples.size(); }
};

void write_trace_csv(std::ostream& out, const EnergyTrace& trace);
void write_trace_csv_file(const std::string& path, const EnergyTrace& trace,
                          const std::string& extra_header = "");

/// Trapezoid quadrature weight of an interior node. Boundary nodes carry
/// no gradient, so their trapezoid mass is lumped onto the adjacent
/// interior nodes; the weights sum to the full box measure. All energy
/// reductions run in a fixed sequential node order.
double quadrature_weight(const Grid& grid, NodeIndex node);

/// Integral of (eps^2 + |Du|^2)^(p/2), central-difference gradients,
/// trapezoid rule. Non-increasing along a solve.
double regularized_energy(const ScalarField& field, const PdeParams& params);

/// Integral of |Du|^p, same quadrature. Non-increasing along a solve.
double p_energy(const ScalarField& field, double p);

/// Backward-kernel-weighted energy
///   (T-t)^(p/2) * integral of |Du|^p G(x0, y, T-t) dy,
/// non-increasing in t on [0, T). Requires field.time < T.
double struwe_energy(const ScalarField& field, Vec2 x0, double T, double p);

/// Reparametrizes a struwe_energy trace by r = sqrt(T-t); samples are
/// returned in increasing-r order and are non-decreasing when the trace is
/// non-increasing.
std::vector<std::pair<double, double>> struwe_r_profile(const EnergyTrace& trace,
                                                        double T);

/// Same, looking up the struwe trace recorded in a run. Throws when the run
/// has no such trace.
std::vector<std::pair<double, double>> struwe_r_profile(const RunResult& run,
                                                        double T);

} // namespace pflow

#endif
