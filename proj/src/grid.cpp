#include "pflow/grid.hpp"

#include "pflow/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Grid::Grid(int dim, Vec2 lo, Vec2 hi, std::array<int, 2> counts)
    : dim_(dim), lo_(lo), hi_(hi), counts_(counts) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("grid dimension must be 1 or 2");
    if (dim == 1) {
        lo_[1] = hi_[1] = 0.0;
        counts_[1] = 1;
    }
    total_ = 1;
    for (int k = 0; k < dim_; ++k) {
        if (counts_[k] < 3)
            throw std::invalid_argument("grid needs at least 3 nodes per axis");
        if (!(hi_[k] > lo_[k]))
            throw std::invalid_argument("grid box must have positive extent");
        h_[k] = (hi_[k] - lo_[k]) / (counts_[k] - 1);
        total_ *= static_cast<std::size_t>(counts_[k]);
    }
    if (dim_ == 1) h_[1] = 0.0;
}

double Grid::min_spacing() const {
    double m = h_[0];
    if (dim_ == 2 && h_[1] < m) m = h_[1];
    return m;
}

bool Grid::contains(NodeIndex n) const {
    for (int k = 0; k < dim_; ++k)
        if (n[k] < 0 || n[k] >= counts_[k]) return false;
    return true;
}

bool Grid::is_interior(NodeIndex n) const {
    for (int k = 0; k < dim_; ++k)
        if (n[k] < 1 || n[k] >= counts_[k] - 1) return false;
    return true;
}

bool Grid::same_box(const Grid& other, double tol) const {
    if (dim_ != other.dim_) return false;
    for (int k = 0; k < dim_; ++k)
        if (std::abs(lo_[k] - other.lo_[k]) > tol ||
            std::abs(hi_[k] - other.hi_[k]) > tol)
            return false;
    return true;
}

ScalarField::ScalarField(Grid grid, std::vector<double> values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
    if (values_.size() != grid_.node_count())
        throw std::invalid_argument("field length does not match grid node count");
    if (!(time_ >= 0.0))
        throw std::invalid_argument("field time must be >= 0");
    for (std::size_t m = 0; m < values_.size(); ++m)
        if (!std::isfinite(values_[m]))
            throw std::invalid_argument("non-finite field value at flat index " +
                                        std::to_string(m));
}

ScalarField ScalarField::constant(const Grid& grid, double value, double time) {
    return ScalarField(grid, std::vector<double>(grid.node_count(), value), time);
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_)
        if (std::abs(v) > m) m = std::abs(v);
    return m;
}

double ScalarField::min_value() const {
    double m = values_[0];
    for (double v : values_)
        if (v < m) m = v;
    return m;
}

double ScalarField::max_value() const {
    double m = values_[0];
    for (double v : values_)
        if (v > m) m = v;
    return m;
}

namespace {

void require_interior(const Grid& grid, NodeIndex node, const char* op) {
    if (!grid.is_interior(node))
        throw StencilError(std::string(op) + ": node (" + std::to_string(node[0]) +
                           "," + std::to_string(node[1]) +
                           ") has no full central stencil");
}

} // namespace

Vec2 gradient_central(const ScalarField& field, NodeIndex node) {
    const Grid& g = field.grid();
    require_interior(g, node, "gradient_central");
    const std::vector<double>& u = field.values();
    const std::size_t m = g.flat(node);
    const std::size_t sx = g.dim() == 1 ? 1 : static_cast<std::size_t>(g.count(1));

    Vec2 grad{0.0, 0.0};
    grad[0] = (u[m + sx] - u[m - sx]) / (2.0 * g.spacing(0));
    if (g.dim() == 2) grad[1] = (u[m + 1] - u[m - 1]) / (2.0 * g.spacing(1));
    return grad;
}

Mat2 hessian_central(const ScalarField& field, NodeIndex node) {
    const Grid& g = field.grid();
    require_interior(g, node, "hessian_central");
    const std::vector<double>& u = field.values();
    const std::size_t m = g.flat(node);
    const std::size_t sx = g.dim() == 1 ? 1 : static_cast<std::size_t>(g.count(1));

    Mat2 h{{{0.0, 0.0}, {0.0, 0.0}}};
    // Second differences as differences of differences; this keeps the
    // stencil exactly invariant under representable constant shifts.
    h[0][0] = ((u[m + sx] - u[m]) - (u[m] - u[m - sx])) /
              (g.spacing(0) * g.spacing(0));
    if (g.dim() == 2) {
        h[1][1] = ((u[m + 1] - u[m]) - (u[m] - u[m - 1])) /
                  (g.spacing(1) * g.spacing(1));
        const double cross = ((u[m + sx + 1] - u[m + sx - 1]) -
                              (u[m - sx + 1] - u[m - sx - 1])) /
                             (4.0 * g.spacing(0) * g.spacing(1));
        h[0][1] = cross;
        h[1][0] = cross;
    }
    return h;
}

ScalarField resample(const ScalarField& field, const Grid& finer) {
    const Grid& src = field.grid();
    if (!src.same_box(finer, 1e-12 * (src.hi(0) - src.lo(0))))
        throw std::invalid_argument("resample: target grid covers a different box");

    if (finer == src)
        return ScalarField(finer, field.values(), field.time());

    const std::vector<double>& u = field.values();
    std::vector<double> out(finer.node_count());
    for (std::size_t m = 0; m < out.size(); ++m) {
        const NodeIndex n = finer.unflat(m);
        // Locate the source cell per axis and clamp so boundary nodes of the
        // target never index past the source lattice.
        int cell[2] = {0, 0};
        double frac[2] = {0.0, 0.0};
        for (int k = 0; k < src.dim(); ++k) {
            const double s = (finer.coord(k, n[k]) - src.lo(k)) / src.spacing(k);
            int c = static_cast<int>(std::floor(s));
            if (c < 0) c = 0;
            if (c > src.count(k) - 2) c = src.count(k) - 2;
            cell[k] = c;
            frac[k] = s - c;
        }
        if (src.dim() == 1) {
            const double a = u[src.flat({cell[0], 0})];
            const double b = u[src.flat({cell[0] + 1, 0})];
            out[m] = a + frac[0] * (b - a);
        } else {
            const double a00 = u[src.flat({cell[0], cell[1]})];
            const double a01 = u[src.flat({cell[0], cell[1] + 1})];
            const double a10 = u[src.flat({cell[0] + 1, cell[1]})];
            const double a11 = u[src.flat({cell[0] + 1, cell[1] + 1})];
            const double lo = a00 + frac[1] * (a01 - a00);
            const double hi = a10 + frac[1] * (a11 - a10);
            out[m] = lo + frac[0] * (hi - lo);
        }
    }
    return ScalarField(finer, std::move(out), field.time());
}

void write_snapshot(std::ostream& out, const ScalarField& field) {
    const Grid& g = field.grid();
    out << "# grid " << g.dim();
    for (int k = 0; k < g.dim(); ++k) out << ' ' << format_double(g.lo(k));
    for (int k = 0; k < g.dim(); ++k) out << ' ' << format_double(g.hi(k));
    for (int k = 0; k < g.dim(); ++k) out << ' ' << g.count(k);
    out << ' ' << format_double(field.time()) << '\n';
    for (double v : field.values()) out << format_double(v) << '\n';
}

void write_snapshot_file(const std::string& path, const ScalarField& field,
                         const std::string& extra_header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    if (!extra_header.empty()) out << "# " << extra_header << '\n';
    write_snapshot(out, field);
}

ScalarField read_snapshot(std::istream& in) {
    std::string line;
    // Skip leading comment lines (e.g. a manifest header) until "# grid".
    while (std::getline(in, line)) {
        if (line.rfind("# grid", 0) == 0) break;
        if (!line.empty() && line[0] != '#')
            throw std::runtime_error("snapshot: missing '# grid' header line");
    }
    if (line.rfind("# grid", 0) != 0)
        throw std::runtime_error("snapshot: missing '# grid' header line");

    std::istringstream header(line.substr(6));
    int dim = 0;
    if (!(header >> dim) || (dim != 1 && dim != 2))
        throw std::runtime_error("snapshot: bad dimension");
    Vec2 lo{0, 0}, hi{0, 0};
    std::array<int, 2> counts{1, 1};
    for (int k = 0; k < dim; ++k) header >> lo[k];
    for (int k = 0; k < dim; ++k) header >> hi[k];
    for (int k = 0; k < dim; ++k) header >> counts[k];
    double time = 0.0;
    if (!(header >> time)) throw std::runtime_error("snapshot: truncated header");

    Grid grid(dim, lo, hi, counts);
    std::vector<double> values;
    values.reserve(grid.node_count());
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        values.push_back(std::stod(line));
    }
    if (values.size() != grid.node_count())
        throw std::runtime_error("snapshot: expected " +
                                 std::to_string(grid.node_count()) + " values, got " +
                                 std::to_string(values.size()));
    return ScalarField(grid, std::move(values), time);
}

ScalarField read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_snapshot(in);
}

} // namespace pflow
