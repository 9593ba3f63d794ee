// Two independent estimators of the (n-1)-measure of a zero set inside a
// cube: piecewise-linear marching (n = 2, 3) and Cauchy-Crofton line sampling
// (any n), plus the doubling-index / nodal-density pairing and power-law fits.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nodalab/fields.hpp"
#include "nodalab/geom.hpp"
#include "nodalab/growth.hpp"
#include "nodalab/stats.hpp"

namespace nodalab {

enum class NodalMethod { marching, crofton };

struct NodalEstimate {
    Cube Q;
    NodalMethod method = NodalMethod::marching;
    double value = 0.0;
    long resolution = 0;             // grid depth or line count
    double error_indicator = 0.0;    // refinement difference or MC std error
    std::uint64_t seed = 0;          // crofton only
    double kinematic_constant = 0.0; // crofton only, frozen from calibration
    bool undefined = false;          // u == 0 identically on Q
    // 2-D marching only (when collect_segments): the PL nodal segments
    std::vector<std::pair<Vec, Vec>> segments;
};

// PL zero-set measure on a uniform 2^depth grid with simplex decomposition.
// Rejects n >= 4 (use crofton). Sign-free cells with small corner values get
// one center probe and, on a sign flip, one level of local refinement.
NodalEstimate nodal_measure_marching(const Field& u, const Cube& Q, int depth,
                                     int threads = 1, bool collect_segments = false);

// Cauchy-Crofton estimate from `lines` random lines meeting Q (uniform
// kinematic measure). The kinematic constant is calibrated once per dimension
// against u = x_1 on [-1,1]^n and cached. Identical seed and configuration
// give bit-identical output for any thread count.
NodalEstimate nodal_measure_crofton(const Field& u, const Cube& Q, long lines,
                                    std::uint64_t seed, int threads = 1,
                                    int scan_steps = 2048);

struct ThvPoint {
    double N = 0.0;        // doubling index of Q
    double density = 0.0;  // H^{n-1} estimate / diam^{n-1}(Q)
    CubeIndexReport index;
    NodalEstimate measure;
};

struct ThvConfig {
    CubeIndexGrid grid;
    int depth = 7;                  // marching depth for n <= 3
    long lines = 100000;            // crofton fallback for n >= 4
    std::uint64_t seed = 1;
    int threads = 1;
};

ThvPoint thv_datapoint(const Field& u, const Cube& Q, const ThvConfig& cfg = {});

struct ScalingFit {
    std::vector<std::pair<double, double>> points;  // (lambda or N, volume)
    double fitted_exponent = 0.0;
    double fit_residual = 0.0;
};

struct YauConfig {
    NodalMethod method = NodalMethod::marching;
    int depth = 8;
    long lines = 30000;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Nodal volume per fundamental cell across an eigenfunction family, fitted as
// a power law in lambda. Requires >= 4 members with eigenvalues spanning a
// factor >= 8.
ScalingFit yau_scaling_fit(const std::vector<FieldPtr>& family, const YauConfig& cfg = {});

}  // namespace nodalab
