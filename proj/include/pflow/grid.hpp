#ifndef PFLOW_GRID_HPP
#define PFLOW_GRID_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pflow {

// Node multi-index. For 1-d grids the second component is ignored (kept 0).
using NodeIndex = std::array<int, 2>;

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Uniform Cartesian lattice over a rectangular box, dimension 1 or 2.
/// Node coordinate on axis k is lo[k] + i*h[k]; counts >= 3 per axis so
/// every interior node has a full central stencil.
class Grid {
public:
    Grid(int dim, Vec2 lo, Vec2 hi, std::array<int, 2> counts);

    int dim() const { return dim_; }
    double lo(int axis) const { return lo_[axis]; }
    double hi(int axis) const { return hi_[axis]; }
    int count(int axis) const { return counts_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    double min_spacing() const;

    std::size_t node_count() const { return total_; }

    // Row-major, last axis fastest.
    std::size_t flat(NodeIndex n) const {
        return dim_ == 1 ? static_cast<std::size_t>(n[0])
                         : static_cast<std::size_t>(n[0]) * counts_[1] + n[1];
    }
    NodeIndex unflat(std::size_t f) const {
        if (dim_ == 1) return {static_cast<int>(f), 0};
        return {static_cast<int>(f / counts_[1]), static_cast<int>(f % counts_[1])};
    }

    double coord(int axis, int i) const { return lo_[axis] + i * h_[axis]; }
    Vec2 position(NodeIndex n) const {
        return {coord(0, n[0]), dim_ == 2 ? coord(1, n[1]) : 0.0};
    }

    bool contains(NodeIndex n) const;
    bool is_interior(NodeIndex n) const;
    bool is_boundary(NodeIndex n) const { return contains(n) && !is_interior(n); }

    bool same_box(const Grid& other, double tol = 0.0) const;

    bool operator==(const Grid& other) const = default;

private:
    int dim_;
    Vec2 lo_, hi_;
    std::array<int, 2> counts_;
    Vec2 h_;
    std::size_t total_;
};

/// Node-indexed real values u(., t) on a Grid at a fixed time.
/// Values are finite after any public operation; length equals node count.
class ScalarField {
public:
    ScalarField(Grid grid, std::vector<double> values, double time);

    /// Fills values by evaluating f at node positions.
    template <typename F>
    static ScalarField sample(const Grid& grid, F&& f, double time = 0.0) {
        std::vector<double> v(grid.node_count());
        for (std::size_t m = 0; m < v.size(); ++m)
            v[m] = f(grid.position(grid.unflat(m)));
        return ScalarField(grid, std::move(v), time);
    }

    static ScalarField constant(const Grid& grid, double value, double time = 0.0);

    const Grid& grid() const { return grid_; }
    double time() const { return time_; }
    const std::vector<double>& values() const { return values_; }

    double at(NodeIndex n) const { return values_[grid_.flat(n)]; }
    double operator[](std::size_t f) const { return values_[f]; }

    double max_abs() const;
    double min_value() const;
    double max_value() const;
    /// max - min of the stored values.
    double oscillation() const { return max_value() - min_value(); }

private:
    Grid grid_;
    std::vector<double> values_;
    double time_;
};

/// Central difference gradient at an interior node, component k equal to
/// (u(n+e_k) - u(n-e_k)) / (2 h_k). Throws StencilError on boundary nodes.
Vec2 gradient_central(const ScalarField& field, NodeIndex node);

/// Central second differences: 3-point on the diagonal, 4-point cross stencil
/// off-diagonal. The returned matrix is exactly symmetric.
Mat2 hessian_central(const ScalarField& field, NodeIndex node);

/// Multilinear interpolation of the field onto a grid covering the same box.
ScalarField resample(const ScalarField& field, const Grid& finer);

/// Text snapshot: "# grid n lo... hi... counts... time" then one value per
/// line, row-major, 17 significant digits (round-trips doubles exactly).
void write_snapshot(std::ostream& out, const ScalarField& field);
void write_snapshot_file(const std::string& path, const ScalarField& field,
                         const std::string& extra_header = "");
ScalarField read_snapshot(std::istream& in);
ScalarField read_snapshot_file(const std::string& path);

/// Full-precision decimal formatting used by all text outputs.
std::string format_double(double v);

} // namespace pflow

#endif
