// Verification and tabulation of the ball-covering lemma for simplices:
// B(x0, rho(1+c1)) inside the union of vertex balls B(x_i, rho) at
// rho = K diam(S), plus the exact metric enlargement delta(t).
#pragma once

#include <cstdint>
#include <vector>

#include "nodalab/geom.hpp"

namespace nodalab {

struct CoveringCheckResult {
    bool holds = false;
    double rho = 0.0;          // K * diam(S)
    double margin = 0.0;       // rho - (max-min distance on the enlarged sphere)
    FarthestReport boundary;   // the boundary-sphere max-min report
    bool interior_ok = false;  // safety-net checks at three interior radii
};

// Does the enlarged ball stay inside the union of the vertex balls? The union
// is star-shaped about x0, so the boundary sphere decides; three interior
// radii are checked as a guard against that reduction being miscoded.
CoveringCheckResult covering_check(const Simplex& S, double K, double c1,
                                   int sphere_samples = 4096);

// Largest c1 for which covering_check holds, by bisection (the check is
// monotone in c1). Bisection tolerance is absolute in c1.
double max_covering_c1(const Simplex& S, double K, double c1_tol = 1e-6,
                       int sphere_samples = 4096);

struct CoveringConstants {
    double a = 0.0;  // relative-width floor of the sampled shapes
    int n = 0;
    double K = 0.0;
    double c1 = 0.0;
    double certified_margin = 0.0;  // min margin over the sample battery
    bool a_too_large = false;       // rejection sampling found no shapes
};

// Empirical (K, c1) over random simplices with w(S) >= a: on a small grid of
// K >= 2/a, the largest c1 passing every sample; returns the pair maximizing
// c1. Deterministic per seed. Explicit `shapes` replace the rejection
// sampling when given.
CoveringConstants covering_constants(double a, int n, int shape_samples,
                                     std::uint64_t seed, int sphere_samples = 2048,
                                     const std::vector<Simplex>& shapes = {});

// Exact minimal enlargement with B(x_i, rho t) inside B(x0, rho t (1+delta)):
// delta = |x_i - x0| / (rho t).
double delta_of_t(const Simplex& S, int vertex_index, double rho, double t);

}  // namespace nodalab
