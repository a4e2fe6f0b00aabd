#include "lqft/scenario.hpp"

#include "lqft/error.hpp"
#include "lqft/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace lqft {

namespace {

using nlohmann::json;

// Helper that records consumed keys so leftovers can be rejected.
class Object {
public:
    Object(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) fail(ErrorKind::schema, where_ + ": expected an object");
    }
    ~Object() = default;

    bool has(const std::string& k) {
        seen_.insert(k);
        return j_.contains(k);
    }
    const json& at(const std::string& k) {
        seen_.insert(k);
        if (!j_.contains(k)) fail(ErrorKind::schema, where_ + ": missing key '" + k + "'");
        return j_.at(k);
    }
    double number(const std::string& k) {
        const auto& v = at(k);
        if (!v.is_number()) fail(ErrorKind::schema, where_ + "." + k + ": expected a number");
        return v.get<double>();
    }
    double number(const std::string& k, double def) { return has(k) ? number(k) : def; }
    long integer(const std::string& k, long def) {
        if (!has(k)) return def;
        const auto& v = at(k);
        if (!v.is_number_integer()) fail(ErrorKind::schema, where_ + "." + k + ": expected an integer");
        return v.get<long>();
    }
    bool boolean(const std::string& k, bool def) {
        if (!has(k)) return def;
        const auto& v = at(k);
        if (!v.is_boolean()) fail(ErrorKind::schema, where_ + "." + k + ": expected true or false");
        return v.get<bool>();
    }
    std::string string(const std::string& k) {
        const auto& v = at(k);
        if (!v.is_string()) fail(ErrorKind::schema, where_ + "." + k + ": expected a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& k, const std::string& def) { return has(k) ? string(k) : def; }
    std::vector<double> numbers(const std::string& k) {
        const auto& v = at(k);
        if (!v.is_array()) fail(ErrorKind::schema, where_ + "." + k + ": expected an array");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(ErrorKind::schema, where_ + "." + k + ": expected numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    Vec3 vec3(const std::string& k, Vec3 def) {
        if (!has(k)) return def;
        const auto v = numbers(k);
        if (v.size() != 3) fail(ErrorKind::schema, where_ + "." + k + ": expected 3 components");
        return {v[0], v[1], v[2]};
    }
    Object child(const std::string& k) { return Object(at(k), where_ + "." + k); }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(ErrorKind::schema, where_ + ": unknown key '" + it.key() + "'");
    }
    const std::string& where() const { return where_; }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path q(p);
    return q.is_absolute() ? q : base / q;
}

Tabulated1D tabulation(Object& o, const std::filesystem::path& base) {
    const bool walls = o.boolean("hard_walls", false);
    if (o.has("csv")) return io::read_potential_csv(resolve(base, o.string("csv")), walls);
    return Tabulated1D{o.numbers("x"), o.numbers("v"), walls};
}

ModeBasis parse_potential(Object o, const std::filesystem::path& base) {
    const std::string kind = o.string("kind");
    const double mass = o.number("mass", 0.0);
    ModeBasis b;
    if (kind == "box") {
        const double d = o.number("d");
        const long n = o.integer("n_max", 3);
        b = box_modes(d, mass, static_cast<int>(n), o.vec3("origin", {0.0, 0.0, 0.0}));
    } else if (kind == "quadratic") {
        const double ell = o.number("ell");
        const long n = o.integer("n_max", 3);
        b = quadratic_modes(ell, mass, static_cast<int>(n), o.vec3("center", {0.0, 0.0, 0.0}));
    } else if (kind == "tabulated") {
        const auto count = o.integer("count", 5);
        b = solve_modes_fd(tabulation(o, base), mass, static_cast<int>(count));
    } else if (kind == "static_curved") {
        const auto count = o.integer("count", 5);
        const bool walls = o.boolean("hard_walls", false);
        StaticCurved1D g;
        if (o.has("csv")) {
            g = io::read_curved_csv(resolve(base, o.string("csv")), walls);
        } else {
            g = StaticCurved1D{o.numbers("x"), o.numbers("lapse"), o.numbers("metric"), o.numbers("v"), walls};
        }
        b = static_curved_modes_1d(g, mass, static_cast<int>(count));
    } else if (kind == "separable") {
        const auto count = o.integer("count", 5);
        const auto max_modes = o.integer("max_modes", 27);
        std::vector<ModeBasis> axes;
        for (const char* ax : {"x", "y", "z"}) {
            Object a = o.child(ax);
            axes.push_back(solve_modes_fd(tabulation(a, base), 0.0, static_cast<int>(count)));
            a.finish();
        }
        b = separable_product(axes[0], axes[1], axes[2], mass, static_cast<std::size_t>(max_modes));
    } else {
        fail(ErrorKind::schema, o.where() + ".kind: unknown potential '" + kind + "'");
    }
    o.finish();
    return b;
}

FieldModel parse_field(Object o) {
    const std::string kind = o.string("kind", "continuum");
    FieldModel f;
    if (kind == "continuum") {
        f = FieldSpec{o.number("mass", 0.0), o.number("epsilon", 1e-6)};
    } else if (kind == "box") {
        BoxFieldSpec b;
        b.d = o.number("d");
        b.mass = o.number("mass", 0.0);
        b.n_cap = static_cast<int>(o.integer("n_cap", 3));
        b.origin = o.vec3("origin", {0.0, 0.0, 0.0});
        b.epsilon = o.number("epsilon", 0.0);
        require(b.d > 0.0 && b.n_cap >= 1 && b.epsilon >= 0.0, ErrorKind::schema, o.where() + ": invalid box field");
        f = b;
    } else {
        fail(ErrorKind::schema, o.where() + ".kind: unknown field '" + kind + "'");
    }
    o.finish();
    return f;
}

Window parse_window(Object o) {
    const std::string kind = o.string("kind", "gaussian");
    Window w;
    if (kind == "gaussian") {
        w = gaussian_window(o.number("T", 1.0));
    } else if (kind == "compact") {
        w = compact_window(o.number("t0"), o.number("t1"));
    } else {
        fail(ErrorKind::schema, o.where() + ".kind: unknown window '" + kind + "'");
    }
    o.finish();
    return w;
}

QuadratureControls parse_quad(Object o) {
    QuadratureControls q;
    q.abs_tol = o.number("abs_tol", q.abs_tol);
    q.rel_tol = o.number("rel_tol", q.rel_tol);
    q.t_range = o.number("t_range", q.t_range);
    q.k_max = o.number("k_max", q.k_max);
    q.time_panels = static_cast<std::size_t>(o.integer("time_panels", 0));
    q.time_order = static_cast<std::size_t>(o.integer("time_order", 16));
    q.max_refinements = static_cast<int>(o.integer("max_refinements", 3));
    require(q.abs_tol > 0.0 && q.rel_tol > 0.0 && q.time_order >= 2 && q.max_refinements >= 0,
            ErrorKind::schema, o.where() + ": invalid quadrature controls");
    o.finish();
    return q;
}

OracleSettings parse_oracle(Object o) {
    OracleSettings s;
    s.t0 = o.number("t0", s.t0);
    s.t1 = o.number("t1", s.t1);
    s.steps = static_cast<std::size_t>(o.integer("steps", static_cast<long>(s.steps)));
    s.dim = static_cast<int>(o.integer("dim", s.dim));
    s.isolate = o.boolean("isolate", false);
    require(s.t1 > s.t0 && s.steps > 0 && s.dim >= 3, ErrorKind::schema, o.where() + ": invalid oracle settings");
    o.finish();
    return s;
}

} // namespace

const Mode& Scenario::accessible_mode() const { return basis.modes.at(accessible_position()); }

std::size_t Scenario::accessible_position() const {
    if (!accessible) return 0;
    return basis.position(*accessible);
}

CouplingConfig Scenario::coupling(std::size_t i) const {
    CouplingConfig c;
    c.lambda = lambdas.empty() ? 0.0 : lambdas.at(i);
    c.smearing = build_lambda(window, accessible_mode(), redshift);
    c.field = field;
    c.quad = quad;
    return c;
}

std::vector<double> Scenario::sweep() const {
    if (!gaps_from_spectrum) return gaps;
    std::vector<double> g;
    for (const auto& m : basis.modes) g.push_back(redshift * m.omega);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

ToyScenario Scenario::toy() const {
    const auto* box = std::get_if<BoxFieldSpec>(&field);
    require(box != nullptr, ErrorKind::schema, "verification needs a box field");
    ToyScenario t;
    t.probe = basis;
    t.box_d = box->d;
    t.box_origin = box->origin;
    t.field_m = box->mass;
    t.field_cap = box->n_cap;
    t.window = window;
    t.accessible = accessible_position();
    t.t0 = oracle.t0;
    t.t1 = oracle.t1;
    t.steps = oracle.steps;
    t.dim = oracle.dim;
    t.quad = quad;
    t.isolate = oracle.isolate;
    return t;
}

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    try {
        Object o(doc, "scenario");
        Scenario s;
        s.basis = parse_potential(o.child("potential"), base_dir);
        if (o.has("field")) s.field = parse_field(o.child("field"));
        if (o.has("window")) s.window = parse_window(o.child("window"));
        if (o.has("accessible")) {
            const auto& a = o.at("accessible");
            if (!a.is_array()) fail(ErrorKind::schema, "scenario.accessible: expected an index array");
            ModeIndex idx;
            for (const auto& e : a) {
                if (!e.is_number_integer()) fail(ErrorKind::schema, "scenario.accessible: expected integers");
                idx.push_back(e.get<int>());
            }
            s.accessible = idx;
            try {
                (void)s.basis.position(idx);
            } catch (const Error&) {
                fail(ErrorKind::schema, "scenario.accessible: mode " + format_index(idx) + " is not in the basis");
            }
        }
        s.redshift = o.number("redshift", 1.0);
        require(s.redshift > 0.0, ErrorKind::schema, "scenario.redshift must be positive");
        if (o.has("lambda")) s.lambdas = o.numbers("lambda");
        if (o.has("sweep")) {
            Object w = o.child("sweep");
            if (w.has("gaps")) s.gaps = w.numbers("gaps");
            s.gaps_from_spectrum = w.boolean("from_spectrum", false);
            w.finish();
        }
        if (o.has("quadrature")) s.quad = parse_quad(o.child("quadrature"));
        if (o.has("oracle")) s.oracle = parse_oracle(o.child("oracle"));
        s.dim = static_cast<int>(o.integer("dim", 3));
        require(s.dim >= 3, ErrorKind::schema, "scenario.dim must be at least 3");
        s.output = o.string("output", "");
        s.profile_points = static_cast<std::size_t>(o.integer("profile_points", 201));
        require(s.profile_points >= 2, ErrorKind::schema, "scenario.profile_points must be at least 2");
        o.finish();
        return s;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::schema, std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::schema, "cannot open scenario " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::schema, path.string() + ": " + e.what());
    }
    return parse_scenario(doc, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

} // namespace lqft
