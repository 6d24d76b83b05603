#ifndef PFLOW_OPERATOR_HPP
#define PFLOW_OPERATOR_HPP

#include "pflow/grid.hpp"

#include <cstddef>
#include <stdexcept>

namespace pflow {

/// Exponent p >= 1 and regularization eps > 0. The solver never runs the
/// unregularized singular operator; the singular limit is probed by
/// eps-sweeps only.
struct PdeParams {
    double p;
    double eps;

    PdeParams(double p_, double eps_);
};

/// Regularized diffusion coefficients
///   a_ij(s) = delta_ij + (p-2) s_i s_j / (eps^2 + |s|^2),
/// defined for every s including 0. Eigenvalues lie in
/// [min(1, p-1), max(1, p-1)].
Mat2 coefficient_matrix(Vec2 sigma, int dim, const PdeParams& params);

namespace detail {

// Pointwise operator kernels on raw storage; m must index an interior node.
// All stencils are written in neighbor-difference form so the result is
// invariant, bit for bit, under an exactly representable constant shift of
// the field.

inline double operator_kernel_1d(const double* u, std::size_t m, double hx,
                                 double p, double eps) {
    const double gx = (u[m + 1] - u[m - 1]) / (2.0 * hx);
    const double hxx = ((u[m + 1] - u[m]) - (u[m] - u[m - 1])) / (hx * hx);
    const double w = (p - 2.0) / (eps * eps + gx * gx);
    return (1.0 + w * gx * gx) * hxx;
}

inline double operator_kernel_2d(const double* u, std::size_t m, std::size_t sx,
                                 double hx, double hy, double p, double eps) {
    const double gx = (u[m + sx] - u[m - sx]) / (2.0 * hx);
    const double gy = (u[m + 1] - u[m - 1]) / (2.0 * hy);
    const double hxx = ((u[m + sx] - u[m]) - (u[m] - u[m - sx])) / (hx * hx);
    const double hyy = ((u[m + 1] - u[m]) - (u[m] - u[m - 1])) / (hy * hy);
    const double hxy =
        ((u[m + sx + 1] - u[m + sx - 1]) - (u[m - sx + 1] - u[m - sx - 1])) /
        (4.0 * hx * hy);
    const double w = (p - 2.0) / (eps * eps + gx * gx + gy * gy);
    return (1.0 + w * gx * gx) * hxx + (1.0 + w * gy * gy) * hyy +
           2.0 * w * gx * gy * hxy;
}

inline double operator_at(const ScalarField& field, const PdeParams& params,
                          NodeIndex node) {
    const Grid& g = field.grid();
    const double* u = field.values().data();
    const std::size_t m = g.flat(node);
    if (g.dim() == 1)
        return operator_kernel_1d(u, m, g.spacing(0), params.p, params.eps);
    return operator_kernel_2d(u, m, static_cast<std::size_t>(g.count(1)),
                              g.spacing(0), g.spacing(1), params.p, params.eps);
}

} // namespace detail

/// Pointwise spatial operator sum_ij a_ij(grad u) * hess_ij(u) with central
/// stencils, i.e. the right-hand side of u_t = a_ij(Du) u_ij.
double apply_operator(const ScalarField& field, const PdeParams& params, NodeIndex node);

/// Stable explicit step: safety * min_k(h_k^2) / (2 n max(1, p-1)).
double cfl_dt(const Grid& grid, const PdeParams& params, double safety);

} // namespace pflow

#endif
