#include "pflow/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pflow {

namespace {

double norm2(Vec2 x, int n) {
    double s = x[0] * x[0];
    if (n == 2) s += x[1] * x[1];
    return s;
}

} // namespace

SelfSimilarParams::SelfSimilarParams(double p_, int n_) : p(p_), n(n_) {
    if (!(p > 1.0)) throw std::invalid_argument("self-similar solution needs p > 1");
    if (n != 1 && n != 2) throw std::invalid_argument("dimension must be 1 or 2");
}

double self_similar_exact(Vec2 x, double t, const SelfSimilarParams& params) {
    if (!(t > 0.0)) throw std::domain_error("self_similar_exact: t must be > 0");
    const double r2 = norm2(x, params.n);
    return std::pow(t, -params.alpha()) * std::exp(-r2 / (4.0 * (params.p - 1.0) * t));
}

double self_similar_dt(Vec2 x, double t, const SelfSimilarParams& params) {
    if (!(t > 0.0)) throw std::domain_error("self_similar_dt: t must be > 0");
    const double r2 = norm2(x, params.n);
    const double a = params.alpha();
    return self_similar_exact(x, t, params) *
           (-a / t + r2 / (4.0 * (params.p - 1.0) * t * t));
}

double heat_kernel(Vec2 x, Vec2 y, double t, int n) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
    const Vec2 d{x[0] - y[0], x[1] - y[1]};
    const double r2 = norm2(d, n);
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-r2 / (4.0 * t));
}

double tychonoff_barrier(Vec2 x, double t, Vec2 y, double K, double mu, double T,
                         double eps_t, double p, int n) {
    if (!(p > 1.0)) throw std::invalid_argument("tychonoff_barrier needs p > 1");
    if (!(eps_t > 0.0)) throw std::invalid_argument("tychonoff_barrier needs eps_t > 0");
    const double tau = T + eps_t - t;
    if (!(tau > 0.0))
        throw std::domain_error("tychonoff_barrier: t must be < T + eps_t");
    const Vec2 d{x[0] - y[0], x[1] - y[1]};
    const double r2 = norm2(d, n);
    const double beta = (n + p - 2.0) / (2.0 * p - 2.0);
    return K + mu * std::pow(tau, -beta) * std::exp(r2 / (4.0 * (p - 1.0) * tau));
}

double shrinking_sphere_radius(double r0, double t, int n) {
    if (!(r0 > 0.0)) throw std::invalid_argument("shrinking_sphere_radius: r0 > 0");
    if (n < 2) throw std::invalid_argument("shrinking_sphere_radius: n >= 2");
    const double r2 = r0 * r0 - 2.0 * (n - 1) * t;
    if (!(r2 >= 0.0))
        throw std::domain_error("shrinking_sphere_radius: t is past extinction");
    return std::sqrt(r2);
}

} // namespace pflow
