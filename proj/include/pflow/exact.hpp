#ifndef PFLOW_EXACT_HPP
#define PFLOW_EXACT_HPP

#include "pflow/grid.hpp"

namespace pflow {

/// Parameters of the self-similar solution t^(-alpha) exp(-|x|^2/(4(p-1)t)).
/// alpha = (n+p-2)/(2(p-1)) is always recomputed from (n, p).
struct SelfSimilarParams {
    double p; // > 1
    int n;    // 1 or 2

    SelfSimilarParams(double p_, int n_);
    double alpha() const { return (n + p - 2.0) / (2.0 * (p - 1.0)); }
};

/// The explicit solution t^(-alpha) exp(-|x|^2 / (4(p-1)t)), t > 0.
double self_similar_exact(Vec2 x, double t, const SelfSimilarParams& params);

/// Analytic time derivative of self_similar_exact (reference for operator
/// residual studies; cross-checked against a central time difference).
double self_similar_dt(Vec2 x, double t, const SelfSimilarParams& params);

/// Gauss-Weierstrass kernel (4 pi t)^(-n/2) exp(-|x-y|^2/(4t)), t > 0.
double heat_kernel(Vec2 x, Vec2 y, double t, int n);

/// Gaussian-growth supersolution
///   K + mu (T+eps_t-t)^(-(n+p-2)/(2p-2)) exp(|x-y|^2 / (4(p-1)(T+eps_t-t))),
/// defined for t < T + eps_t.
double tychonoff_barrier(Vec2 x, double t, Vec2 y, double K, double mu, double T,
                         double eps_t, double p, int n);

/// Radius sqrt(r0^2 - 2(n-1)t) of a sphere shrinking by mean curvature,
/// valid before the extinction time r0^2 / (2(n-1)).
double shrinking_sphere_radius(double r0, double t, int n);

} // namespace pflow

#endif
