#ifndef PFLOW_CONFIG_HPP
#define PFLOW_CONFIG_HPP

#include "pflow/grid.hpp"

#include <map>
#include <string>
#include <vector>

namespace pflow {

enum class Experiment {
    solve,
    verify,
    sweep_p,
    steady,
    energy_suite,
    order_study,
};

Experiment experiment_from_name(const std::string& name);
std::string experiment_name(Experiment e);

/// Validated description of one batch run. Defaults: safety 0.9,
/// record_every 10, eps 1e-2, bump datum on [-4,4]^2 with h = 0.05.
struct RunManifest {
    Experiment experiment = Experiment::solve;

    std::string datum = "bump";
    int dim = 2;
    double box_lo = -4.0;
    double box_hi = 4.0;
    int counts = 161;
    std::string kind = "truncated"; // or "dirichlet"
    double far_field = 0.0;

    double p = 2.0;
    double eps = 1e-2;
    double dt = 0.0; // 0 = CFL default
    double t_end = 0.5;
    int record_every = 10;
    double safety = 0.9;

    double steady_tol = 1e-8;         // steady experiment
    std::vector<double> p_list;       // sweep-p experiment
    std::vector<double> h_list;       // order-study experiment
    double struwe_T = 2.0;            // energy-suite experiment

    /// Canonical key=value serialization (sorted keys, full precision).
    std::string canonical_text() const;
    /// FNV-1a hash of canonical_text, printed as 16 hex digits.
    std::string hash() const;

    Grid make_grid() const;
};

/// Parses a line-oriented key=value document ('#' comments, blank lines
/// allowed). Unknown keys and malformed numbers are rejected with the line
/// number; constraints are validated after overrides are applied.
RunManifest parse_config(const std::string& text,
                         const std::vector<std::string>& overrides = {},
                         Experiment experiment = Experiment::solve);

/// Constraint validation (p >= 1, eps > 0, counts >= 3, CFL, ...).
void validate_manifest(const RunManifest& manifest);

} // namespace pflow

#endif
