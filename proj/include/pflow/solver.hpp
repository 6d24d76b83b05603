#ifndef PFLOW_SOLVER_HPP
#define PFLOW_SOLVER_HPP

#include "pflow/energy.hpp"
#include "pflow/grid.hpp"
#include "pflow/operator.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pflow {

enum class ProblemKind {
    cauchy_truncated, // whole-space problem truncated to a box; the datum's
                      // far-field constant is imposed as Dirichlet data
    cauchy_dirichlet, // bounded domain, time-independent boundary values
};

/// Initial datum, boundary data and domain for one run.
/// For cauchy_truncated the initial datum must equal the far-field constant
/// on every boundary node; for cauchy_dirichlet the boundary values must
/// match the initial datum there (compatibility).
class ProblemSpec {
public:
    static ProblemSpec truncated_cauchy(ScalarField initial, double far_field);
    static ProblemSpec cauchy_dirichlet(ScalarField initial);
    static ProblemSpec cauchy_dirichlet(ScalarField initial,
                                        std::vector<double> boundary_values);

    ProblemKind kind() const { return kind_; }
    const Grid& grid() const { return initial_.grid(); }
    const ScalarField& initial() const { return initial_; }
    /// Dirichlet value at a boundary node (entries at interior nodes unused).
    double boundary_value(std::size_t flat) const { return boundary_[flat]; }
    const std::vector<double>& boundary_values() const { return boundary_; }

private:
    ProblemSpec(ProblemKind kind, ScalarField initial, std::vector<double> boundary);

    ProblemKind kind_;
    ScalarField initial_;
    std::vector<double> boundary_;
};

/// Time step, horizon and sampling cadence of a run. dt must satisfy the
/// CFL bound of the grid; violating configs are rejected at construction.
struct SolverConfig {
    PdeParams params;
    double dt;
    double t_end;
    int record_every;

    SolverConfig(const Grid& grid, PdeParams params, double t_end,
                 double safety = 0.9, int record_every = 10);
    /// Explicit time step (still checked against the CFL bound).
    static SolverConfig with_dt(const Grid& grid, PdeParams params, double dt,
                                double t_end, int record_every);
};

/// A named field functional sampled along a solve.
struct Monitor {
    std::string name;
    std::function<double(const ScalarField&)> evaluate;
};

struct RunResult {
    ScalarField final;
    std::vector<EnergyTrace> traces;
    long step_count = 0;
    EnergyTrace sup_gradient_trace; // sup-norm of the discrete gradient

    const EnergyTrace* find_trace(const std::string& name) const;
};

/// One forward-Euler step: interior nodes advance by u + dt*apply_operator,
/// boundary nodes keep their Dirichlet/far-field values. Throws
/// InstabilityError naming the first non-finite node.
ScalarField step_explicit(const ScalarField& field, const ProblemSpec& spec,
                          const SolverConfig& cfg);

/// Marches to cfg.t_end (the last step is shortened to land exactly),
/// sampling the monitors and the sup gradient every record_every steps,
/// always including the initial and final states. Stepping is
/// double-buffered (each step reads only the previous level) and monitors
/// reduce in a fixed sequential order, so traces are bit-reproducible.
RunResult solve(const ProblemSpec& spec, const SolverConfig& cfg,
                const std::vector<Monitor>& monitors = {});

/// Marches until sup-node |apply_operator| < tol and returns the steady
/// field. Throws ConvergenceError past max_steps.
ScalarField solve_to_steady(const ProblemSpec& spec, const SolverConfig& cfg,
                            double tol, long max_steps = 10'000'000);

/// Steady solve of div((eps^2+|Dv|^2)^(p/2-1) Dv) = 0 with the spec's
/// Dirichlet values by nonlinear relaxation sweeps on a divergence-form
/// face-coefficient scheme; a discretization independent of the time
/// marcher. Throws ConvergenceError with the residual history past the cap.
ScalarField p_laplace_relax(const ProblemSpec& spec, const PdeParams& params,
                            double tol, long max_sweeps = 200'000);

/// Runs solve for each p against the shared grid/datum and returns results
/// keyed by p. p_list must be strictly decreasing with every entry > 1.
std::vector<std::pair<double, RunResult>>
sweep_p(const ProblemSpec& spec, const std::vector<double>& p_list, double eps,
        double t_end, const std::vector<Monitor>& monitors = {},
        double safety = 0.9, int record_every = 10);

/// Radius of the zero level set along the positive x-axis from the domain
/// center, located by linear interpolation of the first sign change.
double extract_zero_level_radius(const ScalarField& field);

/// sup over interior nodes of |gradient_central| (Euclidean norm).
double sup_gradient(const ScalarField& field);

namespace detail {

/// Forward-Euler update of all interior nodes of u into out; boundary
/// entries of out must already hold the Dirichlet values. Returns the max
/// |operator| seen. Throws InstabilityError on a non-finite result, naming
/// the node, step and time.
double advance_interior(const Grid& grid, const PdeParams& params, double dt,
                        const std::vector<double>& u, std::vector<double>& out,
                        long step, double time);

} // namespace detail

} // namespace pflow

#endif
