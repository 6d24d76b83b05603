#include "pflow/operator.hpp"

#include "pflow/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace pflow {

PdeParams::PdeParams(double p_, double eps_) : p(p_), eps(eps_) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
}

Mat2 coefficient_matrix(Vec2 sigma, int dim, const PdeParams& params) {
    double s2 = sigma[0] * sigma[0];
    if (dim == 2) s2 += sigma[1] * sigma[1];
    const double w = (params.p - 2.0) / (params.eps * params.eps + s2);

    Mat2 a{{{0.0, 0.0}, {0.0, 0.0}}};
    a[0][0] = 1.0 + w * sigma[0] * sigma[0];
    if (dim == 2) {
        a[1][1] = 1.0 + w * sigma[1] * sigma[1];
        a[0][1] = w * sigma[0] * sigma[1];
        a[1][0] = a[0][1];
    }
    return a;
}

double apply_operator(const ScalarField& field, const PdeParams& params,
                      NodeIndex node) {
    if (!field.grid().is_interior(node))
        throw StencilError("apply_operator: node (" + std::to_string(node[0]) + "," +
                           std::to_string(node[1]) + ") is not interior");
    return detail::operator_at(field, params, node);
}

double cfl_dt(const Grid& grid, const PdeParams& params, double safety) {
    if (!(safety > 0.0) || safety > 1.0)
        throw std::invalid_argument("safety must lie in (0, 1]");
    const double hmin = grid.min_spacing();
    const double lam = std::max(1.0, params.p - 1.0);
    return safety * hmin * hmin / (2.0 * grid.dim() * lam);
}

} // namespace pflow
