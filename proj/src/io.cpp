#include "nodalab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nodalab {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string format_g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> columns) : n_cols_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) body_ += ',';
        body_ += columns[i];
    }
    body_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw std::invalid_argument("CsvWriter: column mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) body_ += ',';
        body_ += format_g17(values[i]);
    }
    body_ += '\n';
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) throw std::invalid_argument("CsvWriter: column mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

json to_json(const Cube& Q) {
    return {{"center", Q.center}, {"half_side", Q.half_side}};
}

json to_json(const FrequencyProfile& p) {
    return {{"center", p.center},
            {"radii", p.radii},
            {"H", p.H_values},
            {"H_error", p.H_errors},
            {"beta", p.beta_values},
            {"quadrature",
             {{"circle_nodes", p.quadrature.circle_nodes},
              {"polar_nodes", p.quadrature.polar_nodes},
              {"azimuth_nodes", p.quadrature.azimuth_nodes}}}};
}

json to_json(const SupResult& s) {
    return {{"value", s.value},
            {"log2_value", s.log2_value},
            {"witness", s.witness},
            {"gap_bound", s.gap_bound}};
}

json to_json(const DoublingReport& r) {
    return {{"center", r.center},
            {"radius", r.radius},
            {"sup_inner", to_json(r.inner)},
            {"sup_outer", to_json(r.outer)},
            {"N", r.N}};
}

json to_json(const CubeIndexReport& r) {
    return {{"cube", to_json(r.Q)},
            {"N", r.N},
            {"argmax_x", r.argmax_x},
            {"argmax_r", r.argmax_r},
            {"grid",
             {{"centers_per_axis", r.grid.centers_per_axis},
              {"radii_count", r.grid.radii_count},
              {"min_radius_factor", r.grid.min_radius_factor}}},
            {"sample_N", r.sample_N}};
}

json to_json(const SandwichReport& r) {
    return {{"N_inner", r.N_inner},
            {"N_outer", r.N_outer},
            {"log_t_ratio", r.log_t_ratio},
            {"slack_lower", r.slack_lower},
            {"slack_upper", r.slack_upper},
            {"implied_C_lower", r.implied_C_lower},
            {"implied_C_upper", r.implied_C_upper},
            {"below_floor", r.below_floor},
            {"holds", r.holds}};
}

json to_json(const NodalEstimate& e) {
    json j = {{"cube", to_json(e.Q)},
              {"method", e.method == NodalMethod::marching ? "marching" : "crofton"},
              {"value", e.value},
              {"resolution", e.resolution},
              {"error_indicator", e.error_indicator},
              {"undefined", e.undefined}};
    if (e.method == NodalMethod::crofton) {
        j["seed"] = e.seed;
        j["kinematic_constant"] = e.kinematic_constant;
    }
    return j;
}

json to_json(const ScalingFit& f) {
    json pts = json::array();
    for (const auto& [x, v] : f.points) pts.push_back({{"lambda", x}, {"volume", v}});
    return {{"points", pts},
            {"fitted_exponent", f.fitted_exponent},
            {"fit_residual", f.fit_residual}};
}

json to_json(const CensusReport& r) {
    return {{"cube", to_json(r.Q)},
            {"A", r.A},
            {"rule", r.rule == CensusRule::subcube_threshold ? "subcube_threshold"
                                                             : "hyperplane_half_N"},
            {"c", r.c},
            {"N0", r.N0},
            {"N_of_Q", r.N_of_Q},
            {"threshold", r.threshold},
            {"subcube_ids", r.subcube_ids},
            {"subcube_indices", r.subcube_indices},
            {"bad_count", r.bad_count},
            {"bound", r.bound},
            {"fraction", r.fraction},
            {"verdict", r.verdict}};
}

json to_json(const RecursionModel& m) {
    return {{"A", m.A},
            {"c", m.c},
            {"N0", m.N0},
            {"alpha", m.alpha},
            {"levels", m.levels},
            {"majorant_ok", m.majorant_ok}};
}

json to_json(const TreeSimReport& r) {
    return {{"A0", r.A0},
            {"n", r.n},
            {"j0", r.j0},
            {"seed", r.seed},
            {"k_factor", r.k_factor},
            {"m_factor", r.m_factor},
            {"K", r.K},
            {"K_bound", r.K_bound},
            {"M", r.M},
            {"M_fraction", r.M_fraction},
            {"M_fraction_bound", r.M_fraction_bound},
            {"K_ok", r.K_ok},
            {"M_ok", r.M_ok}};
}

json to_json(const CoveringCheckResult& r) {
    return {{"holds", r.holds},
            {"rho", r.rho},
            {"margin", r.margin},
            {"interior_ok", r.interior_ok},
            {"boundary_value", r.boundary.value},
            {"boundary_gap_bound", r.boundary.gap_bound}};
}

json to_json(const CoveringConstants& c) {
    return {{"a", c.a},
            {"n", c.n},
            {"K", c.K},
            {"c1", c.c1},
            {"certified_margin", c.certified_margin},
            {"a_too_large", c.a_too_large}};
}

json to_json(const SmallnessReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples) {
        samples.push_back({{"label", s.label},
                           {"eps", s.eps},
                           {"sup_half", s.sup_half},
                           {"excluded", s.excluded}});
    }
    return {{"cube", to_json(r.q)},
            {"face", {{"axis", r.face.axis}, {"side", r.face.side}}},
            {"samples", samples},
            {"fitted_alpha", r.fitted_alpha},
            {"fitted_C", r.fitted_C},
            {"envelope_C", r.envelope_C}};
}

// ----------------------------------------------------------------------- svg

namespace {

constexpr int kW = 640;
constexpr int kH = 480;
constexpr int kMargin = 56;

struct Axis {
    double lo, hi;
    double map(double v, int pix_lo, int pix_hi) const {
        const double t = (v - lo) / (hi - lo);
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

Axis make_axis(double lo, double hi) {
    if (!(hi > lo)) {
        hi = lo + 1.0;
        lo -= 1.0;
    }
    const double pad = 0.06 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string svg_header(const std::string& title) {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kW) +
         "\" height=\"" + std::to_string(kH) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(kW / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" +
         title + "</text>\n";
    return s;
}

}  // namespace

std::string svg_scatter_loglog(const std::vector<std::pair<double, double>>& points,
                               double slope, double intercept, const std::string& title) {
    if (points.size() < 2) {
        throw std::invalid_argument("svg_scatter_loglog: need at least 2 points");
    }
    std::vector<double> lx, ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            throw std::invalid_argument("svg_scatter_loglog: need positive data");
        }
        lx.push_back(std::log10(x));
        ly.push_back(std::log10(y));
    }
    const Axis ax = make_axis(*std::min_element(lx.begin(), lx.end()),
                              *std::max_element(lx.begin(), lx.end()));
    const Axis ay = make_axis(*std::min_element(ly.begin(), ly.end()),
                              *std::max_element(ly.begin(), ly.end()));
    std::string s = svg_header(title);
    s += "<rect x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kMargin) +
         "\" width=\"" + std::to_string(kW - 2 * kMargin) + "\" height=\"" +
         std::to_string(kH - 2 * kMargin) + "\" fill=\"none\" stroke=\"black\"/>\n";
    // fitted line in natural-log space: log y = slope log x + intercept
    const double ln10 = std::log(10.0);
    auto fit_y = [&](double lxv) { return (slope * (lxv * ln10) + intercept) / ln10; };
    const double x1 = ax.lo, x2 = ax.hi;
    s += "<line x1=\"" + format_g6(ax.map(x1, kMargin, kW - kMargin)) + "\" y1=\"" +
         format_g6(ay.map(fit_y(x1), kH - kMargin, kMargin)) + "\" x2=\"" +
         format_g6(ax.map(x2, kMargin, kW - kMargin)) + "\" y2=\"" +
         format_g6(ay.map(fit_y(x2), kH - kMargin, kMargin)) +
         "\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < lx.size(); ++i) {
        s += "<circle cx=\"" + format_g6(ax.map(lx[i], kMargin, kW - kMargin)) + "\" cy=\"" +
             format_g6(ay.map(ly[i], kH - kMargin, kMargin)) +
             "\" r=\"4\" fill=\"crimson\"/>\n";
    }
    s += "<text x=\"" + std::to_string(kW / 2) + "\" y=\"" + std::to_string(kH - 16) +
         "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">slope = " +
         format_g6(slope) + "</text>\n";
    s += "</svg>\n";
    return s;
}

std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::string& title) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("svg_line_plot: need at least 2 points");
    }
    const Axis ax = make_axis(*std::min_element(xs.begin(), xs.end()),
                              *std::max_element(xs.begin(), xs.end()));
    const Axis ay = make_axis(*std::min_element(ys.begin(), ys.end()),
                              *std::max_element(ys.begin(), ys.end()));
    std::string s = svg_header(title);
    s += "<rect x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kMargin) +
         "\" width=\"" + std::to_string(kW - 2 * kMargin) + "\" height=\"" +
         std::to_string(kH - 2 * kMargin) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ' ';
        s += format_g6(ax.map(xs[i], kMargin, kW - kMargin)) + "," +
             format_g6(ay.map(ys[i], kH - kMargin, kMargin));
    }
    s += "\"/>\n</svg>\n";
    return s;
}

std::string svg_heatmap(int A, const std::vector<double>& values, const std::string& title) {
    if (A < 1 || values.size() != static_cast<std::size_t>(A) * A) {
        throw std::invalid_argument("svg_heatmap: need A*A values");
    }
    const double vmax = std::max(1e-300, *std::max_element(values.begin(), values.end()));
    std::string s = svg_header(title);
    const double cell = static_cast<double>(std::min(kW, kH) - 2 * kMargin) / A;
    for (int j = 0; j < A; ++j) {
        for (int i = 0; i < A; ++i) {
            const double v = values[static_cast<std::size_t>(j) * A + i];
            const int shade = 255 - static_cast<int>(std::lround(235.0 * v / vmax));
            s += "<rect x=\"" + format_g6(kMargin + i * cell) + "\" y=\"" +
                 format_g6(kH - kMargin - (j + 1) * cell) + "\" width=\"" + format_g6(cell) +
                 "\" height=\"" + format_g6(cell) + "\" fill=\"rgb(" + std::to_string(shade) +
                 "," + std::to_string(shade) + ",255)\"/>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

std::string svg_polylines(const std::vector<std::pair<Vec, Vec>>& segments, const Cube& Q,
                          const std::string& title) {
    if (Q.dim() != 2) throw std::invalid_argument("svg_polylines: 2-D cubes only");
    const Axis ax = {Q.center[0] - Q.half_side, Q.center[0] + Q.half_side};
    const Axis ay = {Q.center[1] - Q.half_side, Q.center[1] + Q.half_side};
    std::string s = svg_header(title);
    s += "<rect x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kMargin) +
         "\" width=\"" + std::to_string(kW - 2 * kMargin) + "\" height=\"" +
         std::to_string(kH - 2 * kMargin) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const auto& [a, b] : segments) {
        s += "<line x1=\"" + format_g6(ax.map(a[0], kMargin, kW - kMargin)) + "\" y1=\"" +
             format_g6(ay.map(a[1], kH - kMargin, kMargin)) + "\" x2=\"" +
             format_g6(ax.map(b[0], kMargin, kW - kMargin)) + "\" y2=\"" +
             format_g6(ay.map(b[1], kH - kMargin, kMargin)) +
             "\" stroke=\"black\" stroke-width=\"0.6\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace nodalab
