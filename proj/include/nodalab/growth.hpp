// Frequency and doubling-index engines: sphere L2 norms by quadrature,
// sup norms by lattice + ascent, and checkers for the growth inequalities
// relating them. No RNG anywhere in this module; results are deterministic
// for a given configuration.
#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "nodalab/fields.hpp"
#include "nodalab/geom.hpp"
#include "nodalab/vec.hpp"

namespace nodalab {

// Field is numerically zero on the probed region.
struct degenerate_field_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
    int circle_nodes = 256;   // n = 2: periodic trapezoid
    int polar_nodes = 64;     // n >= 3: Gauss-Legendre per polar angle
    int azimuth_nodes = 128;  // n >= 3: trapezoid on the azimuth
};

struct SphereNorm {
    double value = 0.0;           // estimate of int_{|x-p|=r} u^2 dS
    double error_estimate = 0.0;  // |value - half-resolution value|
};

// H(p, r). Throws degenerate_field_error when the estimate is below 1e-300.
SphereNorm sphere_norm_H(const Field& u, const Vec& p, double r,
                         const QuadratureSpec& quad = {});

// beta(r) = (r/2) dlogH/dr via Richardson-extrapolated central differences,
// step = r * step_factor.
double frequency_beta(const Field& u, const Vec& p, double r,
                      double step_factor = 1e-3, const QuadratureSpec& quad = {});

struct FrequencyProfile {
    Vec center;
    std::vector<double> radii;
    std::vector<double> H_values;
    std::vector<double> H_errors;
    std::vector<double> beta_values;
    QuadratureSpec quadrature;
};

FrequencyProfile frequency_profile(const Field& u, const Vec& p,
                                   const std::vector<double>& radii,
                                   const QuadratureSpec& quad = {});

struct SupOptions {
    int lattice_per_axis = 33;       // cube lattice resolution (capped below)
    long max_lattice_points = 250000;
    int ball_shells = 8;             // radial shells for ball lattices
    int ball_directions = 256;       // direction budget per shell
    int refine_top = 8;              // candidates refined by ascent
    int max_iterations = 400;
};

struct SupResult {
    double value = 0.0;      // |u| at the witness (genuinely evaluated)
    double log2_value = 0.0;
    Vec witness;
    double gap_bound = 0.0;  // sampled |grad u| x mesh diameter heuristic
};

SupResult sup_norm(const Field& u, const Cube& region, const SupOptions& opt = {});
SupResult sup_norm(const Field& u, const Ball& region, const SupOptions& opt = {});

struct DoublingReport {
    Vec center;
    double radius = 0.0;
    SupResult inner;  // sup over B(x, r)
    SupResult outer;  // sup over B(x, 2r)
    double N = 0.0;   // log2(outer/inner), always >= 0
};

// 2^N = sup_{2B}|u| / sup_B|u|. The inner witness seeds the outer search, so
// the ratio is never below 1. Throws degenerate_field_error when the inner
// sup is effectively zero.
DoublingReport doubling_index_ball(const Field& u, const Vec& x, double r,
                                   const SupOptions& opt = {});

struct CubeIndexGrid {
    int centers_per_axis = 5;           // 1 = cube center only
    int radii_count = 8;                // geometric ladder
    double min_radius_factor = 1.0 / 64.0;  // ladder starts at diam * factor
};

struct CenterRadius {
    Vec x;
    double r = 0.0;
};

struct CubeIndexReport {
    Cube Q;
    double N = 0.0;  // max over sampled (x, r) of N(x, r)
    Vec argmax_x;
    double argmax_r = 0.0;
    CubeIndexGrid grid;
    std::vector<CenterRadius> samples;  // the lattice that was scanned
    std::vector<double> sample_N;       // N(x, r) per sample, same order
};

// N(Q) = sup over centers in Q and radii in (0, diam Q] of N(x, r), as a
// lattice approximation. `extra` samples are included in the max, which lets
// censuses share one lattice (subcube samples are valid for the parent).
CubeIndexReport doubling_index_cube(const Field& u, const Cube& Q,
                                    const CubeIndexGrid& grid = {},
                                    std::span<const CenterRadius> extra = {},
                                    const SupOptions& opt = {});

struct SandwichReport {
    double N_inner = 0.0;      // N(x, rho)
    double N_outer = 0.0;      // N(x, t rho)
    double log_t_ratio = 0.0;  // log_t( sup_{t rho} / sup_rho )
    double slack_lower = 0.0;  // log_t_ratio - N_inner (1 - eps)
    double slack_upper = 0.0;  // N_outer (1 + eps) - log_t_ratio
    double implied_C_lower = 0.0;  // C needed to repair each side (0 if none)
    double implied_C_upper = 0.0;
    bool below_floor = false;  // N_inner <= N0: no verdict
    bool holds = false;
};

// Growth sandwich t^{N(x,rho)(1-eps)} <= sup ratio <= t^{N(x,t rho)(1+eps)}.
SandwichReport check_growth_sandwich(const Field& u, const Vec& x, double rho,
                                     double t, double eps, double N0 = 1.0,
                                     const SupOptions& opt = {});

struct LogIntegralReport {
    double lhs = 0.0;  // log(H(r2)/H(r1))
    double rhs = 0.0;  // 2 int beta d log r
    double residual = 0.0;
};

// Integral identity H(r2)/H(r1) = exp(2 int beta dlog r), adaptive Simpson
// over log r.
LogIntegralReport check_log_integral(const Field& u, const Vec& p, double r1,
                                     double r2, const QuadratureSpec& quad = {},
                                     double tol = 1e-9);

struct CenterShiftReport {
    double N1 = 0.0;     // N(x1, rho)
    double N2 = 0.0;     // N(x2, C rho)
    double ratio = 0.0;  // N2 / N1
    bool below_floor = false;
    bool violation = false;  // ratio < 0.99 while N1 above the floor
};

CenterShiftReport check_center_shift(const Field& u, const Vec& x1, const Vec& x2,
                                     double rho, double C, double N0 = 1.0,
                                     const SupOptions& opt = {});

}  // namespace nodalab
