#ifndef PFLOW_DATUM_HPP
#define PFLOW_DATUM_HPP

#include "pflow/grid.hpp"

#include <functional>
#include <string>

namespace pflow {

/// Built-in initial data, all reproducible from the name alone:
///   bump   - smooth, compactly supported: exp(1 - 1/(1-|x|^2)) inside the
///            unit ball, exactly 0 outside
///   cone   - Lipschitz radial |x| - 1 (zero level set at radius 1)
///   saddle - x^2 - y^2 (2-d only)
///   gp     - the self-similar solution sampled at t = 1 (needs p > 1)
std::function<double(Vec2)> make_datum(const std::string& name, int dim, double p);

bool is_known_datum(const std::string& name);

} // namespace pflow

#endif
