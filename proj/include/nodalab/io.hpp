// Report serialization: CSV with a stable 17-significant-digit format, JSON
// exports for every report type, and deterministic SVG plot emitters.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nodalab/census.hpp"
#include "nodalab/growth.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/simplexcov.hpp"
#include "nodalab/smallness.hpp"

namespace nodalab {

// '%.17g' with '.' decimal separator regardless of locale.
std::string format_g17(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& cells);
    const std::string& str() const { return body_; }

private:
    std::string body_;
    std::size_t n_cols_;
};

void write_text_file(const std::string& path, const std::string& content);

nlohmann::json to_json(const Cube& Q);
nlohmann::json to_json(const FrequencyProfile& p);
nlohmann::json to_json(const SupResult& s);
nlohmann::json to_json(const DoublingReport& r);
nlohmann::json to_json(const CubeIndexReport& r);
nlohmann::json to_json(const SandwichReport& r);
nlohmann::json to_json(const NodalEstimate& e);
nlohmann::json to_json(const ScalingFit& f);
nlohmann::json to_json(const CensusReport& r);
nlohmann::json to_json(const RecursionModel& m);
nlohmann::json to_json(const TreeSimReport& r);
nlohmann::json to_json(const CoveringCheckResult& r);
nlohmann::json to_json(const CoveringConstants& c);
nlohmann::json to_json(const SmallnessReport& r);

// Scatter of (x, y) on log-log axes with the fitted line and its slope in the
// footer. Deterministic bytes for identical input.
std::string svg_scatter_loglog(const std::vector<std::pair<double, double>>& points,
                               double slope, double intercept, const std::string& title);

// Simple polyline plot of y against x on linear axes.
std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::string& title);

// Grayscale A x A heatmap of per-subcube values (n = 2 censuses).
std::string svg_heatmap(int A, const std::vector<double>& values, const std::string& title);

// The PL nodal segments of a 2-D marching estimate drawn inside Q.
std::string svg_polylines(const std::vector<std::pair<Vec, Vec>>& segments, const Cube& Q,
                          const std::string& title);

}  // namespace nodalab
