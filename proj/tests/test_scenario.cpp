#include "lqft/io.hpp"
#include "lqft/scenario.hpp"
#include "support.hpp"
#include <doctest.h>
#include <fstream>
#include <numbers>

using namespace lqft;
using lqft_test::rel;
using lqft_test::throws_kind;
using nlohmann::json;

namespace {

json reference() {
    return json::parse(R"({
      "potential": {"kind": "quadratic", "ell": 0.2, "mass": 0.0, "n_max": 1},
      "field": {"kind": "continuum", "mass": 0.0, "epsilon": 1e-6},
      "window": {"kind": "gaussian", "T": 1.0},
      "lambda": [0.01, 0.02],
      "sweep": {"gaps": [1, 2, 5]}
    })");
}

bool schema_error(const json& doc) {
    return throws_kind([&] { parse_scenario(doc); }, ErrorKind::schema);
}

} // namespace

TEST_CASE("reference scenario parses into the expected configuration") {
    auto s = parse_scenario(reference());
    CHECK(s.basis.modes.size() == 8);
    CHECK(s.accessible_mode().index == ModeIndex{0, 0, 0});
    CHECK(s.lambdas == std::vector<double>{0.01, 0.02});
    CHECK(s.sweep() == std::vector<double>{1, 2, 5});
    auto cfg = s.coupling(1);
    CHECK(cfg.lambda == 0.02);
    CHECK(cfg.smearing.gap == s.accessible_mode().omega);
    CHECK(std::get<FieldSpec>(cfg.field).epsilon == 1e-6);
    CHECK(cfg.smearing.window.duration() == 1.0);
}

TEST_CASE("sweep from the spectrum, redshift and explicit accessible mode") {
    auto doc = reference();
    doc["sweep"] = {{"from_spectrum", true}};
    doc["redshift"] = 0.5;
    doc["accessible"] = {1, 0, 0};
    auto s = parse_scenario(doc);
    auto gaps = s.sweep();
    // Degenerate levels appear once: omega^2 ell^2 in {3, 5, 7, 9}.
    REQUIRE(gaps.size() == 4);
    for (std::size_t i = 0; i < gaps.size(); ++i) CHECK(rel(gaps[i], 0.5 * std::sqrt(3.0 + 2.0 * i) / 0.2) < 1e-14);
    CHECK(s.accessible_mode().index == ModeIndex{1, 0, 0});
    CHECK(s.coupling().smearing.gap == 0.5 * s.accessible_mode().omega);
}

TEST_CASE("malformed scenarios are schema errors") {
    auto unknown = reference();
    unknown["potential"]["elll"] = 1.0;
    CHECK(schema_error(unknown));
    auto top = reference();
    top["lambdas"] = {0.1};
    CHECK(schema_error(top));
    auto type = reference();
    type["window"]["T"] = "one";
    CHECK(schema_error(type));
    auto kind = reference();
    kind["field"]["kind"] = "lattice";
    CHECK(schema_error(kind));
    auto missing = reference();
    missing["potential"].erase("ell");
    CHECK(schema_error(missing));
    auto ghost = reference();
    ghost["accessible"] = {5, 0, 0};
    CHECK(schema_error(ghost));
    auto center = reference();
    center["potential"]["center"] = {1.0, 2.0};
    CHECK(schema_error(center));
    CHECK(schema_error(json::array({1, 2})));
}

TEST_CASE("physically invalid values keep their own error kind") {
    auto doc = reference();
    doc["potential"]["ell"] = -1.0;
    CHECK(throws_kind([&] { parse_scenario(doc); }, ErrorKind::invalid_parameter));
}

TEST_CASE("tabulated and curved potentials load from CSV relative to the scenario") {
    auto dir = std::filesystem::temp_directory_path() / "lqft_scenario_test";
    std::filesystem::create_directories(dir / "data");
    {
        std::ofstream v(dir / "data" / "well.csv"), c(dir / "data" / "curved.csv");
        v.precision(17);
        c.precision(17);
        v << "x,V\n";
        c << "x,lapse,metric,V\n";
        for (int i = 0; i < 512; ++i) {
            double x = -8.0 + 16.0 * i / 511.0;
            v << x << "," << 0.5 * x * x << "\n";
            c << x << ",1,1," << 0.5 * x * x << "\n";
        }
    }
    auto tab = parse_scenario(json::parse(R"({"potential": {"kind": "tabulated", "csv": "data/well.csv", "count": 3}})"), dir);
    CHECK(rel(tab.basis.modes[1].omega, std::sqrt(3.0)) < 1e-3);
    auto cur = parse_scenario(json::parse(R"({"potential": {"kind": "static_curved", "csv": "data/curved.csv", "count": 2}})"), dir);
    CHECK(rel(cur.basis.modes[0].omega, tab.basis.modes[0].omega) < 1e-12);
    CHECK(throws_kind([&] { parse_scenario(json::parse(R"({"potential": {"kind": "tabulated", "csv": "nope.csv", "count": 3}})"), dir); },
                      ErrorKind::schema));
    json flat = {{"kind", "tabulated"}, {"count", 1}, {"hard_walls", true}};
    for (int i = 0; i < 257; ++i) {
        flat["x"].push_back(4.0 * i / 256.0);
        flat["v"].push_back(0.0);
    }
    auto walls = parse_scenario(json{{"potential", flat}});
    CHECK(rel(walls.basis.modes[0].omega, std::numbers::pi / 4.0) < 1e-4);
    std::filesystem::remove_all(dir);
}

TEST_CASE("box-field scenario yields an oracle toy") {
    auto doc = json::parse(R"({
      "potential": {"kind": "quadratic", "ell": 1.15, "n_max": 1, "center": [9.25, 9.25, 9.25]},
      "field": {"kind": "box", "d": 18.5, "n_cap": 2},
      "lambda": [0.05, 0.025],
      "oracle": {"steps": 1000, "isolate": true}
    })");
    auto s = parse_scenario(doc);
    auto toy = s.toy();
    CHECK(toy.probe.modes.size() == 8);
    CHECK(toy.steps == 1000);
    CHECK(toy.isolate);
    CHECK(std::holds_alternative<BoxFieldSpec>(s.field));
    CHECK(throws_kind([] { parse_scenario(reference()).toy(); }, ErrorKind::schema));
}

TEST_CASE("atomic writes leave no temporary files") {
    auto dir = std::filesystem::temp_directory_path() / "lqft_atomic_test";
    std::filesystem::create_directories(dir);
    io::write_atomic(dir / "out.txt", "first\n");
    io::write_atomic(dir / "out.txt", "second\n");
    std::ifstream in(dir / "out.txt");
    std::string line;
    std::getline(in, line);
    CHECK(line == "second");
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    std::filesystem::remove_all(dir);
}
