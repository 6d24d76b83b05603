#include "pflow/datum.hpp"

#include "pflow/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace pflow {

namespace {

double radius(Vec2 x, int dim) {
    return std::sqrt(x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0));
}

} // namespace

bool is_known_datum(const std::string& name) {
    return name == "bump" || name == "cone" || name == "saddle" || name == "gp";
}

std::function<double(Vec2)> make_datum(const std::string& name, int dim, double p) {
    if (name == "bump") {
        return [dim](Vec2 x) {
            const double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
            if (r2 >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - r2));
        };
    }
    if (name == "cone") {
        return [dim](Vec2 x) { return radius(x, dim) - 1.0; };
    }
    if (name == "saddle") {
        if (dim != 2) throw std::invalid_argument("saddle datum needs dim = 2");
        return [](Vec2 x) { return x[0] * x[0] - x[1] * x[1]; };
    }
    if (name == "gp") {
        SelfSimilarParams params(p, dim);
        return [params](Vec2 x) { return self_similar_exact(x, 1.0, params); };
    }
    throw std::invalid_argument("unknown datum '" + name +
                                "' (known: bump, cone, saddle, gp)");
}

} // namespace pflow
