// Euclidean primitives: axis-aligned cubes, balls, simplices, subdivision,
// widths, and max-min sphere distances. Everything here is exact geometry or
// sampled optimization with a reported gap; no field evaluations.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nodalab/vec.hpp"

namespace nodalab {

struct Cube {
    Vec center;
    double half_side = 0.0;

    Cube() = default;
    Cube(Vec c, double h);

    int dim() const { return static_cast<int>(center.size()); }
    double side() const { return 2.0 * half_side; }
    double diam() const;
    double volume() const;

    // Homothety with the same center (the rho*Q notation).
    Cube scaled(double rho) const;

    bool contains(std::span<const double> x) const;  // closed cube
    Vec corner(unsigned mask) const;                 // bit i selects hi on axis i
    Vec clamp(std::span<const double> x) const;
};

struct Ball {
    Vec center;
    double radius = 0.0;

    Ball() = default;
    Ball(Vec c, double r);

    int dim() const { return static_cast<int>(center.size()); }
    Ball scaled(double r) const;  // rB: same center, radius r*radius
    bool contains(std::span<const double> x) const;
    Vec project(std::span<const double> x) const;  // nearest point in the ball
};

struct Simplex {
    std::vector<Vec> vertices;  // n+1 points in R^n

    Simplex() = default;
    explicit Simplex(std::vector<Vec> v);

    int dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices[0].size()); }
    Vec barycenter() const;
    double diam() const;
};

struct SimplexMetrics {
    double diam = 0.0;
    double width = 0.0;
    double relative_width = 0.0;
    Vec barycenter;
    Vec width_direction;  // unit direction achieving the reported width
    bool degenerate = false;
};

struct FarthestReport {
    double value = 0.0;   // max over |y-x0|=R of min_i |y - centers_i|
    Vec witness;          // point on the sphere attaining `value`
    double gap_bound = 0.0;  // net resolution; true max <= value + gap_bound
};

// Partition Q into A^n equal subcubes (exact tiling). A = 0 is rejected.
std::vector<Cube> subdivide(const Cube& Q, int A);

// Index of the subcube of the A^n partition owning point x, using the
// half-open [lo, hi) convention except at the parent's upper faces. Points
// outside the closed parent return nullopt.
std::optional<std::size_t> subcube_index_of(const Cube& Q, int A, std::span<const double> x);

// Width of a point set: min over unit directions of the directional extent.
// Sampled directions plus projected-subgradient descent; `samples` counts the
// coarse directions. Affinely degenerate sets return exactly 0.
double point_set_width(const std::vector<Vec>& points, int samples = 4096,
                       double tol = 1e-12, Vec* direction_out = nullptr);

// diam / width / relative width / barycenter of a simplex.
SimplexMetrics simplex_metrics(const Simplex& S, int width_samples = 4096);

// max over the sphere |y-x0| = R of the distance to the nearest center.
// Deterministic sphere net plus local ascent; the gap bound is the net
// spacing (the objective is 1-Lipschitz on the sphere).
FarthestReport farthest_min_distance(const std::vector<Vec>& centers,
                                     const Vec& x0, double R,
                                     int samples = 4096);

// Affine rank of a point set (dimension of the affine hull), with a relative
// tolerance on the Gram-Schmidt residuals.
int affine_rank(const std::vector<Vec>& points, double rel_tol = 1e-9);

// Distance from x to the affine hull of `points` (empty hull -> +inf).
double dist_to_affine_hull(std::span<const double> x, const std::vector<Vec>& points);

}  // namespace nodalab
