#include "lqft/io.hpp"

#include "lqft/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lqft::io {

namespace {

std::vector<std::vector<double>> read_columns(const std::filesystem::path& path, std::size_t ncol) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::schema, "cannot open " + path.string());
    std::vector<std::vector<double>> cols(ncol);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (row.empty() && lineno == 1) continue;  // header
        if (row.size() != ncol) {
            if (lineno == 1 && cols[0].empty()) continue;
            fail(ErrorKind::schema, path.string() + ":" + std::to_string(lineno) + ": expected " +
                                        std::to_string(ncol) + " numeric columns");
        }
        for (std::size_t c = 0; c < ncol; ++c) cols[c].push_back(row[c]);
    }
    return cols;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

} // namespace

Tabulated1D read_potential_csv(const std::filesystem::path& path, bool hard_walls) {
    auto c = read_columns(path, 2);
    return Tabulated1D{std::move(c[0]), std::move(c[1]), hard_walls};
}

StaticCurved1D read_curved_csv(const std::filesystem::path& path, bool hard_walls) {
    auto c = read_columns(path, 4);
    return StaticCurved1D{std::move(c[0]), std::move(c[1]), std::move(c[2]), std::move(c[3]), hard_walls};
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out), ErrorKind::schema, "cannot write " + tmp.string());
        out << content;
        out.flush();
        require(static_cast<bool>(out), ErrorKind::schema, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

json modes_json(const ModeBasis& basis) {
    json modes = json::array();
    for (const auto& m : basis.modes) modes.push_back({{"index", m.index}, {"omega", m.omega}});
    return {{"potential", basis.potential.name()}, {"mass", basis.potential.mass}, {"truncation", basis.truncation},
            {"modes", modes}};
}

std::string profiles_csv(const ModeBasis& basis, std::size_t points) {
    require(!basis.modes.empty(), ErrorKind::invalid_parameter, "empty basis");
    const Mode& first = basis.modes.front();
    const std::size_t D = first.dimension();
    std::vector<double> xs;
    if (const auto* g = std::get_if<GridAxis>(&first.axes[0]); g != nullptr && D == 1) {
        xs = g->grid->x;
    } else {
        auto [lo, hi] = effective_support(first.axes[0]);
        for (const auto& m : basis.modes) {
            const auto [a, b] = effective_support(m.axes[0]);
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        for (std::size_t i = 0; i < points; ++i)
            xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    const auto c = first.center();
    std::ostringstream out;
    out << "x";
    for (const auto& m : basis.modes) out << ",\"" << format_index(m.index) << "\"";
    out << "\n";
    std::vector<double> p(c);
    for (double x : xs) {
        p[0] = x;
        out << fmt(x);
        for (const auto& m : basis.modes) out << "," << fmt(m(p));
        out << "\n";
    }
    return out.str();
}

json state_json(const ReducedState& s) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < s.rho.rows(); ++i) {
        json r = json::array(), q = json::array();
        for (Eigen::Index j = 0; j < s.rho.cols(); ++j) {
            r.push_back(s.rho(i, j).real());
            q.push_back(s.rho(i, j).imag());
        }
        re.push_back(r);
        im.push_back(q);
    }
    const auto ev = s.eigenvalues();
    return {{"dim", s.dim},
            {"order", s.order},
            {"rho_re", re},
            {"rho_im", im},
            {"trace_defect", s.trace_defect()},
            {"hermiticity_residual", s.hermiticity_residual()},
            {"eigenvalues", std::vector<double>(ev.data(), ev.data() + ev.size())},
            {"valid", s.valid()}};
}

json point_json(const ResponsePoint& p) {
    json j = {{"Omega", p.Omega},
              {"P", p.P},
              {"err_P", p.err},
              {"C20", complex_json(p.C20)},
              {"err_C20", p.err_C20},
              {"P_direct", p.P_direct},
              {"P_momentum", p.P_momentum},
              {"path_delta", p.path_delta},
              {"consistent", p.consistent},
              {"cauchy_schwarz", p.cauchy_schwarz},
              {"perturbative", p.perturbative}};
    if (!p.failure.empty()) j["failure"] = p.failure;
    return j;
}

json report_json(const EquivalenceReport& r) {
    json pts = json::array();
    for (const auto& p : r.points) {
        const auto& d = p.diagnostics;
        pts.push_back({{"lambda", p.lambda},
                       {"delta", p.delta},
                       {"exact", state_json(p.exact)},
                       {"perturbative", state_json(p.perturbative)},
                       {"truncation_warning", p.truncation_warning},
                       {"integrator",
                        {{"steps", d.steps},
                         {"symplectic_defect", d.symplectic_defect},
                         {"purity_drift", d.purity_drift},
                         {"uncertainty_min", d.uncertainty_min},
                         {"energy_drift", d.energy_drift}}}});
    }
    return {{"points", pts},
            {"exponent", r.exponent},
            {"delta_max", r.delta_max},
            {"invariants_ok", r.invariants_ok},
            {"passed", r.passed},
            {"message", r.message}};
}

} // namespace lqft::io
