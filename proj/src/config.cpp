#include "pflow/config.hpp"

#include "pflow/errors.hpp"
#include "pflow/datum.hpp"
#include "pflow/operator.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pflow {

Experiment experiment_from_name(const std::string& name) {
    if (name == "solve") return Experiment::solve;
    if (name == "verify") return Experiment::verify;
    if (name == "sweep-p") return Experiment::sweep_p;
    if (name == "steady") return Experiment::steady;
    if (name == "energy-suite") return Experiment::energy_suite;
    if (name == "order-study") return Experiment::order_study;
    throw ParseError("unknown experiment '" + name +
                     "' (known: solve, verify, sweep-p, steady, energy-suite, "
                     "order-study)");
}

std::string experiment_name(Experiment e) {
    switch (e) {
    case Experiment::solve: return "solve";
    case Experiment::verify: return "verify";
    case Experiment::sweep_p: return "sweep-p";
    case Experiment::steady: return "steady";
    case Experiment::energy_suite: return "energy-suite";
    case Experiment::order_study: return "order-study";
    }
    return "?";
}

namespace {

double parse_number(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + value + "'", line);
    }
}

int parse_int(const std::string& value, int line) {
    const double v = parse_number(value, line);
    if (v != std::floor(v)) throw ParseError("expected an integer, got '" + value + "'", line);
    return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& value, int line) {
    std::vector<double> out;
    std::istringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ','))
        out.push_back(parse_number(item, line));
    if (out.empty()) throw ParseError("empty list", line);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

void apply_key(RunManifest& m, const std::string& key, const std::string& value,
               int line) {
    if (key == "datum") {
        if (!is_known_datum(value))
            throw ParseError("unknown datum '" + value + "'", line);
        m.datum = value;
    } else if (key == "dim") {
        m.dim = parse_int(value, line);
    } else if (key == "box_lo") {
        m.box_lo = parse_number(value, line);
    } else if (key == "box_hi") {
        m.box_hi = parse_number(value, line);
    } else if (key == "counts") {
        m.counts = parse_int(value, line);
    } else if (key == "kind") {
        if (value != "truncated" && value != "dirichlet")
            throw ParseError("kind must be 'truncated' or 'dirichlet'", line);
        m.kind = value;
    } else if (key == "far_field") {
        m.far_field = parse_number(value, line);
    } else if (key == "p") {
        m.p = parse_number(value, line);
    } else if (key == "eps") {
        m.eps = parse_number(value, line);
    } else if (key == "dt") {
        m.dt = parse_number(value, line);
    } else if (key == "t_end") {
        m.t_end = parse_number(value, line);
    } else if (key == "record_every") {
        m.record_every = parse_int(value, line);
    } else if (key == "safety") {
        m.safety = parse_number(value, line);
    } else if (key == "steady_tol") {
        m.steady_tol = parse_number(value, line);
    } else if (key == "p_list") {
        m.p_list = parse_list(value, line);
    } else if (key == "h_list") {
        m.h_list = parse_list(value, line);
    } else if (key == "struwe_T") {
        m.struwe_T = parse_number(value, line);
    } else {
        throw ParseError("unknown key '" + key + "'", line);
    }
}

std::string list_text(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ',';
        out += format_double(v[k]);
    }
    return out;
}

} // namespace

std::string RunManifest::canonical_text() const {
    std::ostringstream out;
    out << "box_hi=" << format_double(box_hi) << '\n'
        << "box_lo=" << format_double(box_lo) << '\n'
        << "counts=" << counts << '\n'
        << "datum=" << datum << '\n'
        << "dim=" << dim << '\n'
        << "dt=" << format_double(dt) << '\n'
        << "eps=" << format_double(eps) << '\n'
        << "experiment=" << experiment_name(experiment) << '\n'
        << "far_field=" << format_double(far_field) << '\n'
        << "h_list=" << list_text(h_list) << '\n'
        << "kind=" << kind << '\n'
        << "p=" << format_double(p) << '\n'
        << "p_list=" << list_text(p_list) << '\n'
        << "record_every=" << record_every << '\n'
        << "safety=" << format_double(safety) << '\n'
        << "steady_tol=" << format_double(steady_tol) << '\n'
        << "struwe_T=" << format_double(struwe_T) << '\n'
        << "t_end=" << format_double(t_end) << '\n';
    return out.str();
}

std::string RunManifest::hash() const {
    // FNV-1a, 64 bit.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Grid RunManifest::make_grid() const {
    return Grid(dim, {box_lo, box_lo}, {box_hi, box_hi}, {counts, counts});
}

RunManifest parse_config(const std::string& text,
                         const std::vector<std::string>& overrides,
                         Experiment experiment) {
    RunManifest manifest;
    manifest.experiment = experiment;

    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value", line_number);
        apply_key(manifest, trim(stripped.substr(0, eq)),
                  trim(stripped.substr(eq + 1)), line_number);
    }
    for (const std::string& override_text : overrides) {
        const std::size_t eq = override_text.find('=');
        if (eq == std::string::npos)
            throw ParseError("override '" + override_text + "' is not key=value");
        apply_key(manifest, trim(override_text.substr(0, eq)),
                  trim(override_text.substr(eq + 1)), 0);
    }
    validate_manifest(manifest);
    return manifest;
}

void validate_manifest(const RunManifest& m) {
    if (m.dim != 1 && m.dim != 2) throw ParseError("dim must be 1 or 2");
    if (!(m.p >= 1.0)) throw ParseError("p must be >= 1");
    if (!(m.eps > 0.0)) throw ParseError("eps must be > 0");
    if (m.counts < 3) throw ParseError("counts must be >= 3");
    if (!(m.box_hi > m.box_lo)) throw ParseError("box_hi must exceed box_lo");
    if (!(m.t_end >= 0.0)) throw ParseError("t_end must be >= 0");
    if (m.record_every < 1) throw ParseError("record_every must be >= 1");
    if (!(m.safety > 0.0) || m.safety > 1.0)
        throw ParseError("safety must lie in (0, 1]");
    if (!(m.steady_tol > 0.0)) throw ParseError("steady_tol must be > 0");
    if (m.datum == "gp" && !(m.p > 1.0))
        throw ParseError("gp datum needs p > 1");
    if (m.datum == "saddle" && m.dim != 2)
        throw ParseError("saddle datum needs dim = 2");

    const Grid grid = m.make_grid();
    if (m.dt != 0.0) {
        const double bound = cfl_dt(grid, PdeParams(m.p, m.eps), 1.0);
        if (!(m.dt > 0.0)) throw ParseError("dt must be > 0");
        if (m.dt > bound * (1.0 + 1e-12))
            throw ParseError("dt=" + format_double(m.dt) + " violates the CFL bound " +
                             format_double(bound));
    }
    if (m.experiment == Experiment::sweep_p) {
        if (m.p_list.empty()) throw ParseError("sweep-p needs p_list");
        for (std::size_t k = 0; k < m.p_list.size(); ++k) {
            if (!(m.p_list[k] > 1.0)) throw ParseError("p_list entries must be > 1");
            if (k > 0 && !(m.p_list[k] < m.p_list[k - 1]))
                throw ParseError("p_list must be strictly decreasing");
        }
    }
    if (m.experiment == Experiment::order_study) {
        if (m.h_list.size() < 2) throw ParseError("order-study needs h_list with >= 2 levels");
        for (double h : m.h_list)
            if (!(h > 0.0)) throw ParseError("h_list entries must be > 0");
    }
    if (m.experiment == Experiment::energy_suite && !(m.struwe_T > m.t_end))
        throw ParseError("struwe_T must exceed t_end");
}

} // namespace pflow
