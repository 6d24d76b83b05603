#ifndef PFLOW_ERRORS_HPP
#define PFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace pflow {

/// Stencil evaluation requested at a node without full neighbor support.
class StencilError : public std::out_of_range {
public:
    explicit StencilError(const std::string& what) : std::out_of_range(what) {}
};

/// Time stepping produced a non-finite value.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver exhausted its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residual_history(std::move(residuals)) {}
    std::vector<double> residual_history;
};

/// Config text rejected; line is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                      : what),
          line_number(line) {}
    int line_number;
};

} // namespace pflow

#endif
