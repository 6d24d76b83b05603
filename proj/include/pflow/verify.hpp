#ifndef PFLOW_VERIFY_HPP
#define PFLOW_VERIFY_HPP

#include "pflow/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pflow {

/// Outcome of one ordering check: the worst violation, where it happened,
/// and the pass/fail verdict against the tolerance.
struct ComparisonReport {
    double max_violation = 0.0;
    NodeIndex node{0, 0};
    double time = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

/// Per-level errors of a refinement study and the observed order
/// (minimum over successive log ratios). `monotone` flags whether the
/// error sequence decreased throughout.
struct OrderReport {
    std::vector<double> hs;
    std::vector<double> errors;
    double observed_order = 0.0;
    bool monotone = true;
};

OrderReport make_order_report(std::vector<double> hs, std::vector<double> errors);

/// Co-evolves two problems whose data are ordered on the parabolic boundary
/// and reports sup (u1 - u2)^+ over interior nodes and sample times.
/// Rejects pairs whose data are not ordered.
ComparisonReport check_comparison(const ProblemSpec& spec1, const ProblemSpec& spec2,
                                  const SolverConfig& cfg, double tolerance);

enum class ContractionMode {
    initial_data,       // excess over sup |g1 - g2| at t = 0
    parabolic_boundary, // excess over sup |g1 - g2| on the parabolic boundary
};

/// Co-evolves both problems and returns
///   sup_t [ sup_x |u1 - u2|(t)  -  sup |g1 - g2| ]^+ .
double check_sup_contraction(const ProblemSpec& spec1, const ProblemSpec& spec2,
                             const SolverConfig& cfg,
                             ContractionMode mode = ContractionMode::initial_data);

struct BarrierArgs {
    Vec2 y{0.0, 0.0};
    double K = 0.0;
    double mu = 1.0;
    double T = 1.0;
    double eps_t = 0.1;
};

/// Evolves the problem and reports sup (u - barrier)^+ against the
/// closed-form Gaussian-growth supersolution. The barrier must dominate the
/// datum on the parabolic boundary (validated numerically).
ComparisonReport check_tychonoff_domination(const ProblemSpec& spec,
                                            const SolverConfig& cfg,
                                            const BarrierArgs& barrier,
                                            double tolerance);

/// Refinement study of the forward solve against the self-similar closed
/// form: initialize at its t = 1 sample, solve to t_end, measure sup error
/// on the inner half-box.
struct OrderStudyConfig {
    double p = 2.0;
    double eps = 1e-8;
    int dim = 2;
    Vec2 box_lo{-6.0, -6.0};
    Vec2 box_hi{6.0, 6.0};
    double t_start = 1.0;
    double t_end = 1.25;
    double safety = 0.9;
};

OrderReport estimate_order(const OrderStudyConfig& cfg, const std::vector<double>& h_list);

/// Sup over interior nodes of |apply_operator - exact d/dt| for the
/// self-similar sample at time t, skipping nodes with |x| < exclude_radius.
double operator_residual_sup(const OrderStudyConfig& cfg, double h, double t,
                             double exclude_radius);

/// One row of the harness report CSV (check, parameter-set, violation,
/// tolerance, passed).
struct ReportRow {
    std::string check;
    std::string parameter_set;
    double violation = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);

} // namespace pflow

#endif
