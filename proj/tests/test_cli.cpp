#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nodalab/io.hpp"
#include "nodalab/runner.hpp"

using namespace nodalab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("nodalab_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    f << content;
}

int run(const std::vector<std::string>& args, std::string* err_out = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (err_out) *err_out = err.str();
    return code;
}

}  // namespace

TEST_CASE("exponent subcommand emits the closed-form alpha") {
    TempDir dir;
    const auto cfg = dir.path / "exp.json";
    write(cfg, R"({"experiment":"exponent","A":2,"c":1.0})");
    const int code = run({"exponent", "--config", cfg.string(), "--out", dir.path.string()});
    CHECK(code == 0);
    const auto j = json::parse(slurp(dir.path / "exponent.json"));
    CHECK(j.at("alpha").get<double>() == 3.0);
    CHECK(j.at("majorant_ok").get<bool>());
    CHECK(fs::exists(dir.path / "exponent.csv"));
    const auto manifest = json::parse(slurp(dir.path / "exponent_manifest.json"));
    CHECK(manifest.at("version").get<std::string>() == std::string(kVersion));
    CHECK(manifest.at("outputs").size() == 2);
}

TEST_CASE("freq subcommand reproduces the constant frequency column") {
    TempDir dir;
    const auto cfg = dir.path / "freq.json";
    write(cfg, R"({
      "experiment": "freq",
      "field": {"kind": "harmonic_poly", "n": 2, "k": 4, "variant": "re"},
      "radii": {"min": 0.1, "max": 1.0, "count": 6, "scale": "log"},
      "svg": true
    })");
    const int code = run({"freq", "--config", cfg.string(), "--out", dir.path.string()});
    CHECK(code == 0);
    std::istringstream csv(slurp(dir.path / "freq.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "r,H,H_error,beta");
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto last = line.rfind(',');
        const double beta = std::stod(line.substr(last + 1));
        CHECK(beta == doctest::Approx(4.5).epsilon(1e-6));
        ++rows;
    }
    CHECK(rows == 6);
    CHECK(fs::exists(dir.path / "freq.svg"));
}

TEST_CASE("reruns are byte-identical") {
    TempDir dir;
    const auto cfg = dir.path / "nodal.json";
    write(cfg, R"({
      "experiment": "nodal",
      "field": {"kind": "sphere_quadric", "center": [0.0, 0.0], "radius": 0.5},
      "cube": {"center": [0.0, 0.0], "half_side": 1.0},
      "method": "both",
      "depth": 6,
      "lines": 2000,
      "seed": 11,
      "svg": true
    })");
    const auto out1 = dir.path / "run1";
    const auto out2 = dir.path / "run2";
    CHECK(run({"nodal", "--config", cfg.string(), "--out", out1.string()}) == 0);
    CHECK(run({"nodal", "--config", cfg.string(), "--out", out2.string(), "--threads",
               "4"}) == 0);
    for (const char* name : {"nodal.csv", "nodal.json", "nodal.svg"}) {
        CHECK(slurp(out1 / name) == slurp(out2 / name));
    }
    // the config hash is stable across runs
    const auto m1 = json::parse(slurp(out1 / "nodal_manifest.json"));
    const auto m2 = json::parse(slurp(out2 / "nodal_manifest.json"));
    CHECK(m1.at("config_hash") == m2.at("config_hash"));
}

TEST_CASE("seed changes change stochastic outputs") {
    TempDir dir;
    const auto cfg = dir.path / "nodal.json";
    write(cfg, R"({
      "experiment": "nodal",
      "field": {"kind": "sphere_quadric", "center": [0.0, 0.0], "radius": 0.5},
      "cube": {"center": [0.0, 0.0], "half_side": 1.0},
      "method": "crofton",
      "lines": 2000,
      "seed": 11
    })");
    const auto out1 = dir.path / "a";
    const auto out2 = dir.path / "b";
    CHECK(run({"nodal", "--config", cfg.string(), "--out", out1.string()}) == 0);
    CHECK(run({"nodal", "--config", cfg.string(), "--out", out2.string(), "--seed",
               "12"}) == 0);
    CHECK(slurp(out1 / "nodal.csv") != slurp(out2 / "nodal.csv"));
}

TEST_CASE("config validation names the offending field") {
    TempDir dir;
    std::string err;

    const auto missing = dir.path / "missing.json";
    write(missing, R"({"experiment":"exponent","A":2})");
    CHECK(run({"exponent", "--config", missing.string(), "--out", dir.path.string()},
              &err) == 2);
    CHECK(err.find("'c'") != std::string::npos);

    const auto range = dir.path / "range.json";
    write(range, R"({
      "experiment": "freq",
      "field": {"kind": "harmonic_poly", "n": 2, "k": 2},
      "radii": {"min": -0.5, "max": 1.0}
    })");
    CHECK(run({"freq", "--config", range.string(), "--out", dir.path.string()}, &err) == 2);
    CHECK(err.find("radii.min") != std::string::npos);

    const auto mismatch = dir.path / "mismatch.json";
    write(mismatch, R"({"experiment":"freq","A":2,"c":1.0})");
    CHECK(run({"exponent", "--config", mismatch.string(), "--out", dir.path.string()},
              &err) == 2);
    CHECK(err.find("experiment") != std::string::npos);
}

TEST_CASE("malformed JSON reports line and column") {
    TempDir dir;
    const auto bad = dir.path / "bad.json";
    write(bad, "{\n  \"experiment\": \"exponent\",\n  \"A\": 2,,\n}\n");
    std::string err;
    CHECK(run({"exponent", "--config", bad.string(), "--out", dir.path.string()}, &err) == 2);
    CHECK(err.find(":3:") != std::string::npos);  // the duplicate comma line
    CHECK(err.find("invalid JSON") != std::string::npos);

    CHECK(run({"exponent", "--config", (dir.path / "absent.json").string()}, &err) == 2);
    CHECK(err.find("cannot read") != std::string::npos);
}

TEST_CASE("degenerate fields produce an error record and exit code 3") {
    TempDir dir;
    const auto cfg = dir.path / "zero.json";
    write(cfg, R"({
      "experiment": "nodal",
      "field": {"kind": "constant", "n": 2, "c": 0.0},
      "cube": {"center": [0.0, 0.0], "half_side": 1.0},
      "method": "marching",
      "depth": 4
    })");
    std::string err;
    CHECK(run({"nodal", "--config", cfg.string(), "--out", dir.path.string()}, &err) == 3);
    CHECK(fs::exists(dir.path / "nodal_error.json"));
    CHECK(fs::exists(dir.path / "nodal.csv"));  // partial outputs are kept
    CHECK(err.find("degeneracy") != std::string::npos);
}

TEST_CASE("census subcommand writes the index matrix and heatmap") {
    TempDir dir;
    const auto cfg = dir.path / "census.json";
    write(cfg, R"({
      "experiment": "census",
      "field": {"kind": "harmonic_poly", "n": 2, "k": 6},
      "cube": {"center": [0.0, 0.0], "half_side": 1.0},
      "mode": "subcube",
      "A": 5,
      "c": 0.5,
      "N0": 1.0,
      "svg": true
    })");
    CHECK(run({"census", "--config", cfg.string(), "--out", dir.path.string()}) == 0);
    const auto j = json::parse(slurp(dir.path / "census.json"));
    CHECK(j.at("subcube_indices").size() == 25);
    CHECK(j.at("verdict").get<bool>());
    CHECK(fs::exists(dir.path / "census.svg"));
}

TEST_CASE("yau subcommand fits the scaling exponent") {
    TempDir dir;
    const auto cfg = dir.path / "yau.json";
    write(cfg, R"({
      "experiment": "yau",
      "family": {"kind": "torus_sin", "n": 2, "m_values": [1, 2, 4, 8]},
      "method": "marching",
      "depth": 7,
      "svg": true
    })");
    CHECK(run({"yau", "--config", cfg.string(), "--out", dir.path.string()}) == 0);
    const auto j = json::parse(slurp(dir.path / "yau.json"));
    CHECK(std::abs(j.at("fitted_exponent").get<double>() - 0.5) < 0.02);
    CHECK(fs::exists(dir.path / "yau.svg"));
}

TEST_CASE("plot emitters are deterministic and reject empty input") {
    const std::vector<std::pair<double, double>> pts = {{1.0, 2.0}, {10.0, 6.3}, {100.0, 20.0}};
    const auto a = svg_scatter_loglog(pts, 0.5, 0.7, "t");
    const auto b = svg_scatter_loglog(pts, 0.5, 0.7, "t");
    CHECK(a == b);
    CHECK(a.find("slope = 0.5") != std::string::npos);
    CHECK_THROWS_AS(svg_scatter_loglog({{1.0, 1.0}}, 0.5, 0.0, "t"), std::invalid_argument);
    CHECK_THROWS_AS(svg_line_plot({1.0}, {1.0}, "t"), std::invalid_argument);
    CHECK_THROWS_AS(svg_heatmap(2, {1.0, 2.0, 3.0}, "t"), std::invalid_argument);
}
