#include "nodalab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nodalab/io.hpp"
#include "nodalab/rng.hpp"

namespace nodalab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical degeneracy surfaced by an experiment (distinct exit code).
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------- config field access

const json& require_key(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError("config field '" + ctx + key + "' is missing");
    }
    return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require_key(j, key, ctx);
    if (!v.is_number()) throw ConfigError("config field '" + ctx + key + "' must be a number");
    return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback,
                 const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_number()) {
        throw ConfigError("config field '" + ctx + key + "' must be a number");
    }
    return j.at(key).get<double>();
}

long integer_or(const json& j, const std::string& key, long fallback, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) {
        throw ConfigError("config field '" + ctx + key + "' must be an integer");
    }
    return j.at(key).get<long>();
}

std::string string_or(const json& j, const std::string& key, const std::string& fallback,
                      const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_string()) {
        throw ConfigError("config field '" + ctx + key + "' must be a string");
    }
    return j.at(key).get<std::string>();
}

bool bool_or(const json& j, const std::string& key, bool fallback, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) {
        throw ConfigError("config field '" + ctx + key + "' must be a boolean");
    }
    return j.at(key).get<bool>();
}

void check_positive(double v, const std::string& field) {
    if (!(v > 0.0)) {
        throw ConfigError("config field '" + field + "' must be positive (got " +
                          format_g17(v) + ")");
    }
}

void check_min(long v, long lo, const std::string& field) {
    if (v < lo) {
        throw ConfigError("config field '" + field + "' must be >= " + std::to_string(lo) +
                          " (got " + std::to_string(v) + ")");
    }
}

FieldPtr parse_field(const json& j, const std::string& ctx) {
    try {
        return field_from_descriptor(require_key(j, "field", ctx));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("config field '" + ctx + "field' is invalid: " + e.what());
    }
}

Cube parse_cube(const json& j, const std::string& key, const std::string& ctx) {
    const json& c = require_key(j, key, ctx);
    const std::string sub = ctx + key + ".";
    const auto center = require_key(c, "center", sub).get<Vec>();
    const double h = require_number(c, "half_side", sub);
    check_positive(h, sub + "half_side");
    if (center.empty()) throw ConfigError("config field '" + sub + "center' is empty");
    return Cube(center, h);
}

CubeIndexGrid parse_grid(const json& j, const std::string& ctx, int default_cpa) {
    CubeIndexGrid g;
    g.centers_per_axis = default_cpa;
    if (j.contains("grid")) {
        const json& gj = j.at("grid");
        const std::string sub = ctx + "grid.";
        g.centers_per_axis =
            static_cast<int>(integer_or(gj, "centers_per_axis", g.centers_per_axis, sub));
        g.radii_count = static_cast<int>(integer_or(gj, "radii_count", g.radii_count, sub));
        g.min_radius_factor = number_or(gj, "min_radius_factor", g.min_radius_factor, sub);
        check_min(g.centers_per_axis, 1, sub + "centers_per_axis");
        check_min(g.radii_count, 1, sub + "radii_count");
        check_positive(g.min_radius_factor, sub + "min_radius_factor");
    }
    return g;
}

QuadratureSpec parse_quadrature(const json& j, const std::string& ctx) {
    QuadratureSpec q;
    if (j.contains("quadrature")) {
        const json& qj = j.at("quadrature");
        const std::string sub = ctx + "quadrature.";
        q.circle_nodes = static_cast<int>(integer_or(qj, "circle_nodes", q.circle_nodes, sub));
        q.polar_nodes = static_cast<int>(integer_or(qj, "polar_nodes", q.polar_nodes, sub));
        q.azimuth_nodes =
            static_cast<int>(integer_or(qj, "azimuth_nodes", q.azimuth_nodes, sub));
        check_min(q.circle_nodes, 8, sub + "circle_nodes");
        check_min(q.polar_nodes, 8, sub + "polar_nodes");
        check_min(q.azimuth_nodes, 8, sub + "azimuth_nodes");
    }
    return q;
}

json quadrature_echo(const QuadratureSpec& q) {
    return {{"circle_nodes", q.circle_nodes},
            {"polar_nodes", q.polar_nodes},
            {"azimuth_nodes", q.azimuth_nodes}};
}

json grid_echo(const CubeIndexGrid& g) {
    return {{"centers_per_axis", g.centers_per_axis},
            {"radii_count", g.radii_count},
            {"min_radius_factor", g.min_radius_factor}};
}

// ------------------------------------------------------------- run machinery

struct RunContext {
    std::string experiment;
    fs::path out_dir;
    std::string prefix;
    int threads = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    json resolved;  // config echo with defaults, recorded in the manifest
    std::vector<std::pair<std::string, std::string>> outputs;  // name -> bytes

    void emit(const std::string& suffix, const std::string& content) {
        outputs.emplace_back(prefix + suffix, content);
    }
};

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string iso_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t require_seed(const json& cfg, const RunContext& ctx) {
    if (ctx.seed_given) return ctx.seed;
    if (!cfg.contains("seed")) {
        throw ConfigError("config field 'seed' is required for stochastic experiments");
    }
    if (!cfg.at("seed").is_number_unsigned() && !cfg.at("seed").is_number_integer()) {
        throw ConfigError("config field 'seed' must be an unsigned integer");
    }
    return cfg.at("seed").get<std::uint64_t>();
}

std::vector<double> make_radii(const json& cfg, const std::string& ctx) {
    const json& r = require_key(cfg, "radii", ctx);
    const std::string sub = ctx + "radii.";
    const double lo = require_number(r, "min", sub);
    const double hi = require_number(r, "max", sub);
    const long count = integer_or(r, "count", 16, sub);
    const std::string scale = string_or(r, "scale", "log", sub);
    check_positive(lo, sub + "min");
    if (!(hi > lo)) throw ConfigError("config field '" + sub + "max' must exceed radii.min");
    check_min(count, 2, sub + "count");
    if (scale != "log" && scale != "linear") {
        throw ConfigError("config field '" + sub + "scale' must be 'log' or 'linear'");
    }
    std::vector<double> radii(count);
    for (long i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        radii[i] = scale == "log" ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
    }
    return radii;
}

// ----------------------------------------------------------- the experiments

void run_freq(const json& cfg, RunContext& ctx) {
    const auto field = parse_field(cfg, "");
    Vec center = cfg.contains("center") ? cfg.at("center").get<Vec>()
                                        : Vec(field->dim(), 0.0);
    if (static_cast<int>(center.size()) != field->dim()) {
        throw ConfigError("config field 'center' has wrong dimension");
    }
    const auto radii = make_radii(cfg, "");
    const auto quad = parse_quadrature(cfg, "");
    ctx.resolved["field"] = field->descriptor();
    ctx.resolved["center"] = center;
    ctx.resolved["radii"] = radii;
    ctx.resolved["quadrature"] = quadrature_echo(quad);

    FrequencyProfile prof;
    try {
        prof = frequency_profile(*field, center, radii, quad);
    } catch (const degenerate_field_error& e) {
        throw DegeneracyError(e.what());
    }
    CsvWriter csv({"r", "H", "H_error", "beta"});
    for (std::size_t i = 0; i < prof.radii.size(); ++i) {
        csv.add_row({prof.radii[i], prof.H_values[i], prof.H_errors[i], prof.beta_values[i]});
    }
    ctx.emit(".csv", csv.str());
    json out = {{"field", field->descriptor()}, {"profile", to_json(prof)}};
    ctx.emit(".json", out.dump(2) + "\n");
    if (bool_or(cfg, "svg", false, "")) {
        ctx.emit(".svg", svg_line_plot(prof.radii, prof.beta_values, "frequency beta(r)"));
    }
}

void run_doubling(const json& cfg, RunContext& ctx) {
    const auto field = parse_field(cfg, "");
    const std::string mode = string_or(cfg, "mode", "ball", "");
    ctx.resolved["field"] = field->descriptor();
    ctx.resolved["mode"] = mode;
    if (mode == "ball") {
        const auto center = require_key(cfg, "center", "").get<Vec>();
        const double radius = require_number(cfg, "radius", "");
        check_positive(radius, "radius");
        if (static_cast<int>(center.size()) != field->dim()) {
            throw ConfigError("config field 'center' has wrong dimension");
        }
        ctx.resolved["center"] = center;
        ctx.resolved["radius"] = radius;
        DoublingReport rep;
        try {
            rep = doubling_index_ball(*field, center, radius);
        } catch (const degenerate_field_error& e) {
            throw DegeneracyError(e.what());
        }
        CsvWriter csv({"r", "sup_inner", "sup_outer", "N"});
        csv.add_row({rep.radius, rep.inner.value, rep.outer.value, rep.N});
        ctx.emit(".csv", csv.str());
        ctx.emit(".json", to_json(rep).dump(2) + "\n");
    } else if (mode == "cube") {
        const Cube Q = parse_cube(cfg, "cube", "");
        const auto grid = parse_grid(cfg, "", 5);
        ctx.resolved["cube"] = to_json(Q);
        ctx.resolved["grid"] = grid_echo(grid);
        CubeIndexReport rep;
        try {
            rep = doubling_index_cube(*field, Q, grid);
        } catch (const degenerate_field_error& e) {
            throw DegeneracyError(e.what());
        }
        std::vector<std::string> cols;
        for (int i = 0; i < Q.dim(); ++i) cols.push_back("x" + std::to_string(i));
        cols.push_back("r");
        cols.push_back("N");
        CsvWriter csv(cols);
        for (std::size_t i = 0; i < rep.samples.size(); ++i) {
            std::vector<double> row(rep.samples[i].x.begin(), rep.samples[i].x.end());
            row.push_back(rep.samples[i].r);
            row.push_back(rep.sample_N[i]);
            csv.add_row(row);
        }
        ctx.emit(".csv", csv.str());
        ctx.emit(".json", to_json(rep).dump(2) + "\n");
    } else {
        throw ConfigError("config field 'mode' must be 'ball' or 'cube'");
    }
}

void run_nodal(const json& cfg, RunContext& ctx) {
    const auto field = parse_field(cfg, "");
    const Cube Q = parse_cube(cfg, "cube", "");
    const std::string method = string_or(cfg, "method", "both", "");
    const long depth = integer_or(cfg, "depth", 8, "");
    const long lines = integer_or(cfg, "lines", 100000, "");
    check_min(depth, 1, "depth");
    const bool want_march = method == "marching" || method == "both";
    const bool want_croft = method == "crofton" || method == "both";
    if (!want_march && !want_croft) {
        throw ConfigError("config field 'method' must be marching, crofton or both");
    }
    std::uint64_t seed = 0;
    if (want_croft) seed = require_seed(cfg, ctx);
    const bool svg = bool_or(cfg, "svg", false, "");
    ctx.resolved["field"] = field->descriptor();
    ctx.resolved["cube"] = to_json(Q);
    ctx.resolved["method"] = method;
    ctx.resolved["depth"] = depth;
    ctx.resolved["lines"] = lines;
    if (want_croft) ctx.resolved["seed"] = seed;

    json out;
    CsvWriter csv({"method", "value", "resolution", "error_indicator", "seed"});
    bool degenerate = false;
    if (want_march) {
        const auto est = nodal_measure_marching(*field, Q, static_cast<int>(depth),
                                                ctx.threads, svg && field->dim() == 2);
        out["marching"] = to_json(est);
        csv.add_row_mixed({"marching", format_g17(est.value), std::to_string(est.resolution),
                           format_g17(est.error_indicator), "0"});
        degenerate = degenerate || est.undefined;
        if (svg && field->dim() == 2) {
            ctx.emit(".svg", svg_polylines(est.segments, Q, "nodal set (marching)"));
        }
    }
    if (want_croft) {
        check_min(lines, 1000, "lines");
        const auto est = nodal_measure_crofton(*field, Q, lines, seed, ctx.threads);
        out["crofton"] = to_json(est);
        csv.add_row_mixed({"crofton", format_g17(est.value), std::to_string(est.resolution),
                           format_g17(est.error_indicator), std::to_string(est.seed)});
        degenerate = degenerate || est.undefined;
    }
    ctx.emit(".csv", csv.str());
    ctx.emit(".json", out.dump(2) + "\n");
    if (degenerate) {
        throw DegeneracyError("nodal estimate undefined: field vanishes identically on Q");
    }
}

void run_census(const json& cfg, RunContext& ctx) {
    const auto field = parse_field(cfg, "");
    const Cube Q = parse_cube(cfg, "cube", "");
    const std::string mode = string_or(cfg, "mode", "subcube", "");
    CensusConfig ccfg;
    ccfg.subcube_grid = parse_grid(cfg, "", 1);
    ctx.resolved["field"] = field->descriptor();
    ctx.resolved["cube"] = to_json(Q);
    ctx.resolved["mode"] = mode;
    ctx.resolved["grid"] = grid_echo(ccfg.subcube_grid);

    CensusReport rep;
    if (mode == "subcube") {
        const long A = integer_or(cfg, "A", 9, "");
        const double c = number_or(cfg, "c", 0.5, "");
        const double N0 = number_or(cfg, "N0", 1.0, "");
        check_min(A, 1, "A");
        check_positive(c, "c");
        ctx.resolved["A"] = A;
        ctx.resolved["c"] = c;
        ctx.resolved["N0"] = N0;
        rep = subcube_census(*field, Q, static_cast<int>(A), c, N0, ccfg);
    } else if (mode == "hyperplane") {
        const long A1 = integer_or(cfg, "A", 9, "");
        const double N = number_or(cfg, "N", -1.0, "");
        const long axis = integer_or(cfg, "axis", -1, "");
        const double eps = number_or(cfg, "eps", 0.5, "");
        check_positive(eps, "eps");
        ctx.resolved["A"] = A1;
        ctx.resolved["N"] = N;
        ctx.resolved["axis"] = axis;
        ctx.resolved["eps"] = eps;
        rep = hyperplane_census(*field, Q, static_cast<int>(A1), N, static_cast<int>(axis),
                                eps, ccfg);
    } else {
        throw ConfigError("config field 'mode' must be 'subcube' or 'hyperplane'");
    }
    CsvWriter csv({"subcube_id", "index", "bad"});
    for (std::size_t i = 0; i < rep.subcube_indices.size(); ++i) {
        csv.add_row({static_cast<double>(rep.subcube_ids[i]), rep.subcube_indices[i],
                     rep.subcube_indices[i] > rep.threshold ? 1.0 : 0.0});
    }
    ctx.emit(".csv", csv.str());
    ctx.emit(".json", to_json(rep).dump(2) + "\n");
    if (bool_or(cfg, "svg", false, "") && field->dim() == 2 && mode == "subcube") {
        ctx.emit(".svg", svg_heatmap(rep.A, rep.subcube_indices, "subcube doubling indices"));
    }
}

Simplex parse_simplex(const json& cfg, const std::string& ctx) {
    const json& sj = require_key(cfg, "simplex", ctx);
    const auto verts =
        require_key(sj, "vertices", ctx + "simplex.").get<std::vector<Vec>>();
    try {
        return Simplex(verts);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field 'simplex.vertices' is invalid: ") +
                          e.what());
    }
}

void run_simplex(const json& cfg, RunContext& ctx) {
    const std::string mode = string_or(cfg, "mode", "covering_check", "");
    ctx.resolved["mode"] = mode;
    if (mode == "covering_check") {
        const Simplex S = parse_simplex(cfg, "");
        const double K = number_or(cfg, "K", 2.0, "");
        const double c1 = number_or(cfg, "c1", 0.1, "");
        check_positive(K, "K");
        ctx.resolved["K"] = K;
        ctx.resolved["c1"] = c1;
        const auto res = covering_check(S, K, c1);
        const double cmax = max_covering_c1(S, K);
        CsvWriter csv({"K", "c1", "rho", "margin", "holds", "max_c1"});
        csv.add_row({K, c1, res.rho, res.margin, res.holds ? 1.0 : 0.0, cmax});
        ctx.emit(".csv", csv.str());
        json out = to_json(res);
        out["max_c1"] = cmax;
        ctx.emit(".json", out.dump(2) + "\n");
    } else if (mode == "constants") {
        const double a = require_number(cfg, "a", "");
        const long n = integer_or(cfg, "n", 2, "");
        const long shapes = integer_or(cfg, "shape_samples", 64, "");
        check_positive(a, "a");
        check_min(n, 2, "n");
        check_min(shapes, 1, "shape_samples");
        const std::uint64_t seed = require_seed(cfg, ctx);
        ctx.resolved["a"] = a;
        ctx.resolved["n"] = n;
        ctx.resolved["shape_samples"] = shapes;
        ctx.resolved["seed"] = seed;
        const auto cc = covering_constants(a, static_cast<int>(n),
                                           static_cast<int>(shapes), seed);
        CsvWriter csv({"a", "n", "K", "c1", "certified_margin"});
        csv.add_row({cc.a, static_cast<double>(cc.n), cc.K, cc.c1, cc.certified_margin});
        ctx.emit(".csv", csv.str());
        ctx.emit(".json", to_json(cc).dump(2) + "\n");
    } else if (mode == "lemma") {
        const auto field = parse_field(cfg, "");
        const Simplex S = parse_simplex(cfg, "");
        const double N = require_number(cfg, "N", "");
        const double c = number_or(cfg, "c", 0.3, "");
        const double K = number_or(cfg, "K", 2.0, "");
        const double C = number_or(cfg, "C", 4.0, "");
        check_positive(N, "N");
        check_positive(c, "c");
        check_positive(K, "K");
        check_positive(C, "C");
        ctx.resolved["field"] = field->descriptor();
        ctx.resolved["N"] = N;
        ctx.resolved["c"] = c;
        ctx.resolved["K"] = K;
        ctx.resolved["C"] = C;
        const auto rep = simplex_lemma_check(*field, S, N, c, K, C);
        CsvWriter csv({"barycenter_index", "required", "applicable", "verdict"});
        csv.add_row({rep.barycenter_index, rep.required, rep.applicable ? 1.0 : 0.0,
                     rep.verdict ? 1.0 : 0.0});
        ctx.emit(".csv", csv.str());
        json out = {{"vertex_indices", rep.vertex_indices},
                    {"vertex_radius", rep.vertex_radius},
                    {"barycenter_index", rep.barycenter_index},
                    {"required", rep.required},
                    {"applicable", rep.applicable},
                    {"verdict", rep.verdict}};
        ctx.emit(".json", out.dump(2) + "\n");
    } else {
        throw ConfigError("config field 'mode' must be covering_check, constants or lemma");
    }
}

void run_smallness(const json& cfg, RunContext& ctx) {
    const json& fam = require_key(cfg, "family", "");
    const std::string kind = string_or(fam, "kind", "sinh", "family.");
    std::vector<std::pair<double, FieldPtr>> family;
    if (kind == "sinh") {
        const auto ks = require_key(fam, "k_values", "family.").get<std::vector<double>>();
        if (ks.size() < 4) {
            throw ConfigError("config field 'family.k_values' needs at least 4 entries");
        }
        family = make_sinh_family(ks);
    } else {
        throw ConfigError("config field 'family.kind' must be 'sinh'");
    }
    Cube q = cfg.contains("cube") ? parse_cube(cfg, "cube", "") : Cube(Vec{0.5, 0.5}, 0.5);
    Face face;
    face.cube = q;
    face.axis = static_cast<int>(integer_or(cfg.contains("face") ? cfg.at("face") : json::object(),
                                            "axis", 1, "face."));
    face.side = static_cast<int>(integer_or(cfg.contains("face") ? cfg.at("face") : json::object(),
                                            "side", -1, "face."));
    if (face.axis < 0 || face.axis >= q.dim()) {
        throw ConfigError("config field 'face.axis' out of range");
    }
    if (face.side != -1 && face.side != 1) {
        throw ConfigError("config field 'face.side' must be -1 or 1");
    }
    ctx.resolved["family"] = fam;
    ctx.resolved["cube"] = to_json(q);
    ctx.resolved["face"] = {{"axis", face.axis}, {"side", face.side}};

    const auto rep = smallness_experiment(family, q, face);
    CsvWriter csv({"label", "eps", "sup_half", "excluded"});
    for (const auto& s : rep.samples) {
        csv.add_row({s.label, s.eps, s.sup_half, s.excluded ? 1.0 : 0.0});
    }
    ctx.emit(".csv", csv.str());
    ctx.emit(".json", to_json(rep).dump(2) + "\n");
    if (bool_or(cfg, "svg", false, "")) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : rep.samples) {
            if (!s.excluded) pts.emplace_back(s.eps, s.sup_half);
        }
        ctx.emit(".svg", svg_scatter_loglog(pts, rep.fitted_alpha, std::log(rep.fitted_C),
                                            "propagation of smallness"));
    }
}

void run_yau(const json& cfg, RunContext& ctx) {
    const json& fam = require_key(cfg, "family", "");
    const std::string kind = string_or(fam, "kind", "torus_sin", "family.");
    if (kind != "torus_sin") {
        throw ConfigError("config field 'family.kind' must be 'torus_sin'");
    }
    const long n = integer_or(fam, "n", 2, "family.");
    check_min(n, 2, "family.n");
    const auto ms = require_key(fam, "m_values", "family.").get<std::vector<int>>();
    if (ms.size() < 4) {
        throw ConfigError("config field 'family.m_values' needs at least 4 entries");
    }
    std::vector<FieldPtr> family;
    for (int m : ms) {
        if (m < 1) throw ConfigError("config field 'family.m_values' must be positive");
        family.push_back(make_torus_eigen(static_cast<int>(n),
                                          std::vector<int>(n, m)));
    }
    YauConfig ycfg;
    const std::string method = string_or(cfg, "method", n == 2 ? "marching" : "crofton", "");
    if (method == "marching") {
        ycfg.method = NodalMethod::marching;
    } else if (method == "crofton") {
        ycfg.method = NodalMethod::crofton;
    } else {
        throw ConfigError("config field 'method' must be 'marching' or 'crofton'");
    }
    ycfg.depth = static_cast<int>(integer_or(cfg, "depth", 8, ""));
    ycfg.lines = integer_or(cfg, "lines", 30000, "");
    ycfg.threads = ctx.threads;
    check_min(ycfg.depth, 1, "depth");
    if (ycfg.method == NodalMethod::crofton) {
        check_min(ycfg.lines, 1000, "lines");
        ycfg.seed = require_seed(cfg, ctx);
        ctx.resolved["seed"] = ycfg.seed;
    }
    ctx.resolved["family"] = fam;
    ctx.resolved["method"] = method;
    ctx.resolved["depth"] = ycfg.depth;
    ctx.resolved["lines"] = ycfg.lines;

    const auto fit = yau_scaling_fit(family, ycfg);
    CsvWriter csv({"lambda", "volume"});
    for (const auto& [lambda, volume] : fit.points) csv.add_row({lambda, volume});
    ctx.emit(".csv", csv.str());
    ctx.emit(".json", to_json(fit).dump(2) + "\n");
    if (bool_or(cfg, "svg", false, "")) {
        double intercept = 0.0;  // recover intercept for the plotted line
        for (const auto& [lambda, volume] : fit.points) {
            intercept += std::log(volume) - fit.fitted_exponent * std::log(lambda);
        }
        intercept /= fit.points.size();
        ctx.emit(".svg", svg_scatter_loglog(fit.points, fit.fitted_exponent, intercept,
                                            "nodal volume vs lambda"));
    }
}

void run_exponent(const json& cfg, RunContext& ctx) {
    const long A = integer_or(cfg, "A", 2, "");
    const double c = require_number(cfg, "c", "");
    const double N0 = number_or(cfg, "N0", 1.0, "");
    const long levels = integer_or(cfg, "levels", 64, "");
    check_min(A, 2, "A");
    check_positive(c, "c");
    check_positive(N0, "N0");
    check_min(levels, 1, "levels");
    ctx.resolved["A"] = A;
    ctx.resolved["c"] = c;
    ctx.resolved["N0"] = N0;
    ctx.resolved["levels"] = levels;
    RecursionModel model;
    try {
        model = recursion_exponent(static_cast<int>(A), c, N0, static_cast<int>(levels));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    CsvWriter csv({"level", "N", "log2_F", "log2_bound"});
    const double l4A = std::log2(4.0 * A);
    const double l1c = std::log2(1.0 + c);
    for (long j = 0; j <= levels; ++j) {
        csv.add_row({static_cast<double>(j), N0 * std::pow(1.0 + c, static_cast<double>(j)),
                     j * l4A, model.alpha * (j * l1c)});
    }
    ctx.emit(".csv", csv.str());
    ctx.emit(".json", to_json(model).dump(2) + "\n");
}

// --------------------------------------------------------------- entry point

int dispatch(const std::string& experiment, const json& cfg, RunContext& ctx,
             std::ostream& err) {
    const std::string declared = string_or(cfg, "experiment", experiment, "");
    if (declared != experiment) {
        throw ConfigError("config field 'experiment' says '" + declared +
                          "' but the subcommand is '" + experiment + "'");
    }
    ctx.resolved["experiment"] = experiment;
    ctx.resolved["threads"] = ctx.threads;
    const std::string started = iso_utc_now();

    int code = 0;
    std::string degeneracy;
    try {
        if (experiment == "freq") run_freq(cfg, ctx);
        else if (experiment == "doubling") run_doubling(cfg, ctx);
        else if (experiment == "nodal") run_nodal(cfg, ctx);
        else if (experiment == "census") run_census(cfg, ctx);
        else if (experiment == "simplex") run_simplex(cfg, ctx);
        else if (experiment == "smallness") run_smallness(cfg, ctx);
        else if (experiment == "yau") run_yau(cfg, ctx);
        else if (experiment == "exponent") run_exponent(cfg, ctx);
        else throw ConfigError("unknown experiment '" + experiment + "'");
    } catch (const DegeneracyError& e) {
        degeneracy = e.what();
        json rec = {{"error", degeneracy}, {"experiment", experiment}};
        ctx.emit("_error.json", rec.dump(2) + "\n");
        code = 3;
    }

    fs::create_directories(ctx.out_dir);
    std::vector<std::string> names;
    for (const auto& [name, content] : ctx.outputs) {
        write_text_file((ctx.out_dir / name).string(), content);
        names.push_back(name);
    }
    json manifest = {{"experiment", experiment},
                     {"version", kVersion},
                     {"config_hash", hex64(fnv1a64(ctx.resolved.dump()))},
                     {"resolved_config", ctx.resolved},
                     {"started_utc", started},
                     {"finished_utc", iso_utc_now()},
                     {"outputs", names}};
    write_text_file((ctx.out_dir / (ctx.prefix + "_manifest.json")).string(),
                    manifest.dump(2) + "\n");
    if (code == 3) err << "numerical degeneracy: " << degeneracy << "\n";
    return code;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"desk-scale experiments on nodal sets, frequency and doubling indices"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 0;
    const char* env_threads = std::getenv("NODALAB_THREADS");
    const int default_threads = env_threads ? std::max(1, std::atoi(env_threads)) : 1;

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"freq", "sampled frequency profile r -> (H, beta)"},
        {"doubling", "doubling index of a ball or a cube"},
        {"nodal", "nodal measure by marching and/or Crofton lines"},
        {"census", "subcube or hyperplane doubling-index census"},
        {"simplex", "covering checks, covering constants, simplex lemma"},
        {"smallness", "propagation-of-smallness exponent experiment"},
        {"yau", "nodal volume scaling across an eigenfunction family"},
        {"exponent", "bad-N recursion model and its exponent"}};
    std::vector<CLI::App*> sub_apps;
    for (const auto& [name, desc] : subs) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--threads", threads, "worker threads");
        sub_apps.push_back(sub);
    }

    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    RunContext ctx;
    for (std::size_t i = 0; i < sub_apps.size(); ++i) {
        if (sub_apps[i]->parsed()) {
            ctx.experiment = subs[i].first;
            ctx.seed_given = sub_apps[i]->count("--seed") > 0;
            ctx.threads = sub_apps[i]->count("--threads") > 0 ? threads : default_threads;
        }
    }
    if (ctx.threads < 1) {
        err << "error: --threads must be >= 1\n";
        return 2;
    }
    ctx.seed = seed;
    ctx.out_dir = out_dir;

    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
        err << "error: cannot read config file '" << config_path << "'\n";
        return 2;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    json cfg;
    try {
        cfg = json::parse(text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into line:column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        err << "error: " << config_path << ":" << line << ":" << col
            << ": invalid JSON: " << e.what() << "\n";
        return 2;
    }

    ctx.prefix = string_or(cfg, "out_prefix", ctx.experiment, "");
    try {
        return dispatch(ctx.experiment, cfg, ctx, err);
    } catch (const ConfigError& e) {
        err << "error: " << config_path << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace nodalab
