// Command-line front end: modes, response, state, verify.

#include "lqft/error.hpp"
#include "lqft/io.hpp"
#include "lqft/scenario.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using namespace lqft;
namespace fs = std::filesystem;

constexpr int exit_solver = 2;
constexpr int exit_consistency = 3;
constexpr int exit_equivalence = 4;
constexpr int exit_usage = 64;

struct Options {
    std::string scenario;
    std::string out;
    unsigned threads = 1;
    double tolerance = 0.0;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path output_dir(const Options& opt, const Scenario& sc) {
    if (!opt.out.empty()) return opt.out;
    if (!sc.output.empty()) return sc.output;
    if (const char* env = std::getenv("LQFT_OUT"); env != nullptr && *env != '\0') return env;
    return ".";
}

Scenario load(const Options& opt) {
    Scenario sc = load_scenario(opt.scenario);
    if (opt.tolerance > 0.0) sc.quad.abs_tol = opt.tolerance;
    return sc;
}

int cmd_modes(const Options& opt) {
    const Scenario sc = load(opt);
    const fs::path dir = output_dir(opt, sc);
    io::write_atomic(dir / "modes.json", io::modes_json(sc.basis).dump(2) + "\n");
    io::write_atomic(dir / "profiles.csv", io::profiles_csv(sc.basis, sc.profile_points));
    const std::size_t n = std::min<std::size_t>(5, sc.basis.modes.size());
    for (std::size_t i = 0; i < n; ++i)
        std::printf("%s, %.6f\n", format_index(sc.basis.modes[i].index).c_str(), sc.basis.modes[i].omega);
    return 0;
}

int cmd_response(const Options& opt) {
    const Scenario sc = load(opt);
    const auto gaps = sc.sweep();
    if (gaps.empty()) throw UsageError("response needs a sweep (sweep.gaps or sweep.from_spectrum)");
    const fs::path dir = output_dir(opt, sc);
    const std::vector<double> lambdas = sc.lambdas.empty() ? std::vector<double>{0.0} : sc.lambdas;
    std::ostringstream csv;
    nlohmann::json points = nlohmann::json::array();
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        CouplingConfig base = sc.coupling(0);
        base.lambda = lambdas[i];
        const auto pts = response_curve(base, gaps, opt.threads);
        write_response_csv(csv, base, pts, i == 0);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            auto pj = io::point_json(pts[j]);
            pj["lambda"] = lambdas[i];
            points.push_back(pj);
            if (!pts[j].consistent) {
                char buf[256];
                std::snprintf(buf, sizeof buf, "row %zu: Omega=%.9g lambda=%.9g P_direct=%.12g P_momentum=%.12g %s",
                              i * gaps.size() + j + 1, pts[j].Omega, lambdas[i], pts[j].P_direct, pts[j].P_momentum,
                              pts[j].failure.c_str());
                bad.emplace_back(buf);
            }
            if (!pts[j].perturbative)
                std::fprintf(stderr, "warning: Omega=%.9g lambda=%.9g is outside the perturbative regime\n",
                             pts[j].Omega, lambdas[i]);
        }
    }
    io::write_atomic(dir / "response.csv", csv.str());
    io::write_atomic(dir / "response.json", nlohmann::json{{"points", points}}.dump(2) + "\n");
    if (!bad.empty()) {
        std::fprintf(stderr, "two-path cross-check failed:\n");
        for (const auto& b : bad) std::fprintf(stderr, "  %s\n", b.c_str());
        return exit_consistency;
    }
    std::printf("%zu points written to %s\n", lambdas.size() * gaps.size(), (dir / "response.csv").c_str());
    return 0;
}

int cmd_state(const Options& opt) {
    const Scenario sc = load(opt);
    const fs::path dir = output_dir(opt, sc);
    const std::vector<double> lambdas = sc.lambdas.empty() ? std::vector<double>{0.0} : sc.lambdas;
    nlohmann::json states = nlohmann::json::array();
    int code = 0;
    for (double l : lambdas) {
        CouplingConfig c = sc.coupling(0);
        c.lambda = l;
        const auto r = reduced_state(c, sc.dim);
        const auto u = udw_reduced_state(c, sc.dim);
        const double dist = frobenius_distance(r, u);
        const bool equal = dist < 10.0 * c.quad.abs_tol;
        states.push_back({{"lambda", l},
                          {"Omega", c.smearing.gap},
                          {"reduced_state", io::state_json(r)},
                          {"udw_reduced_state", io::state_json(u)},
                          {"frobenius_distance", dist},
                          {"equivalent", equal}});
        std::printf("lambda %.6g: P = %.12g, |rho - rho_udw|_F = %.3e%s\n", l, r.rho(1, 1).real(), dist,
                    r.valid() && u.valid() ? "" : "  [flagged: positivity or trace outside tolerance]");
        if (!equal) code = exit_consistency;
    }
    io::write_atomic(dir / "state.json", nlohmann::json{{"states", states}}.dump(2) + "\n");
    return code;
}

int cmd_verify(const Options& opt) {
    const Scenario sc = load(opt);
    if (sc.lambdas.size() < 2) throw UsageError("verify needs at least two lambda values");
    const fs::path dir = output_dir(opt, sc);
    const auto rep = verify_equivalence(sc.toy(), sc.lambdas, opt.threads);
    io::write_atomic(dir / "verify.json", io::report_json(rep).dump(2) + "\n");
    for (const auto& p : rep.points) std::printf("lambda %.6g: Delta = %.6e\n", p.lambda, p.delta);
    std::printf("%s\n", rep.message.c_str());
    return rep.passed ? 0 : exit_equivalence;
}

constexpr const char* units_help =
    "All lengths and times are in units of the window duration T (T = 1 by convention);\n"
    "energies are in units of 1/T and the coupling lambda in units of 1/T^2.\n"
    "Default output directory: --out, else the scenario's \"output\", else $LQFT_OUT, else '.'.\n"
    "Exit codes: 0 ok, 2 solver error, 3 consistency failure, 4 equivalence failure, 64 usage/schema.";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localized scalar field modes, second-order reduced states and detector equivalence."};
    app.footer(units_help);
    app.require_subcommand(1, 1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opt.scenario, "Scenario JSON file")->required();
        sub->add_option("--out", opt.out, "Output directory");
        sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--tolerance", opt.tolerance, "Absolute quadrature tolerance override")
            ->check(CLI::PositiveNumber);
        sub->footer(units_help);
    };
    auto* modes = app.add_subcommand("modes", "Mode spectrum: modes.json, profiles.csv");
    auto* response = app.add_subcommand("response", "Excitation sweep: response.csv");
    auto* state = app.add_subcommand("state", "Reduced states of the accessible mode: state.json");
    auto* verify = app.add_subcommand("verify", "Non-perturbative equivalence check: verify.json");
    for (auto* s : {modes, response, state, verify}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*modes) return cmd_modes(opt);
        if (*response) return cmd_response(opt);
        if (*state) return cmd_state(opt);
        if (*verify) return cmd_verify(opt);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return exit_usage;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s: %s\n", to_string(e.kind()), e.what());
        switch (e.kind()) {
        case ErrorKind::schema: return exit_usage;
        case ErrorKind::consistency: return exit_consistency;
        default: return exit_solver;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_solver;
    }
    return exit_usage;
}
