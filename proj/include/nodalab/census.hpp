// Cube-hierarchy doubling-index censuses, the bad-cube recursion model that
// yields the volume exponent, and simplex extraction with the barycenter
// index check. Census verdicts are empirical: a violation is reported with
// its witness, never suppressed.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nodalab/fields.hpp"
#include "nodalab/geom.hpp"
#include "nodalab/growth.hpp"

namespace nodalab {

enum class CensusRule { subcube_threshold, hyperplane_half_N };

struct CensusConfig {
    CubeIndexGrid subcube_grid{/*centers_per_axis=*/1, /*radii_count=*/8,
                               /*min_radius_factor=*/1.0 / 64.0};
    SupOptions sup;
};

struct CensusReport {
    Cube Q;
    int A = 0;  // subdivision factor per axis
    CensusRule rule = CensusRule::subcube_threshold;
    double c = 0.0;
    double N0 = 0.0;
    double N_of_Q = 0.0;     // lattice approximation (annotates the verdict)
    double threshold = 0.0;  // indices strictly above it count as bad
    std::vector<double> subcube_indices;     // one entry per reported subcube
    std::vector<std::size_t> subcube_ids;    // flat subdivision indices
    std::vector<CenterRadius> witnesses;     // argmax (x, r) per reported subcube
    long bad_count = 0;
    double bound = 0.0;  // the count the theorem compares against
    double fraction = 0.0;
    bool verdict = false;  // bad_count < bound
};

// Theorem-5.1-style census: indices of all A^n subcubes on a shared lattice
// (subcube centers with per-subcube radii ladders; every subcube sample also
// feeds N(Q)). Bad = index strictly above max(N(Q)/(1+c), N0); the bound is
// A^{n-1}/2.
CensusReport subcube_census(const Field& u, const Cube& Q, int A, double c, double N0,
                            const CensusConfig& cfg = {});

// Corollary-4.2-style census on the subcubes meeting the central hyperplane
// {x_axis = center}: counts indices strictly above N/2 against eps*A1^{n-1}.
// N <= 0 requests N(Q) computed from the same lattice.
CensusReport hyperplane_census(const Field& u, const Cube& Q, int A1, double N,
                               int axis = -1, double eps = 0.5,
                               const CensusConfig& cfg = {});

struct RecursionModel {
    int A = 0;
    double c = 0.0;
    double N0 = 0.0;
    double alpha = 0.0;  // log(4A) / log(1+c)
    int levels = 0;
    bool majorant_ok = false;  // F(N) <= F(N0) (N/N0)^alpha at all grid levels
};

// alpha from the bad-N recursion F((1+c)N) <= 4A F(N), checked against its
// own majorant at levels j = 0..levels in log arithmetic.
RecursionModel recursion_exponent(int A, double c, double N0 = 1.0, int levels = 64);

enum class SpawnMode { uniform, always_max };

struct TreeSimReport {
    int A0 = 0;
    int n = 0;
    int j0 = 0;
    std::uint64_t seed = 0;
    double k_factor = 0.0;  // (2A0+1)^{n-1} / 2, per-level cap for K
    double m_factor = 0.0;  // (2A0+1)^{n-1} - 1, per-level cap for M
    std::vector<double> K;           // bad-cube mass per level
    std::vector<double> K_bound;     // K[j0] * k_factor^{j-j0}
    std::vector<double> M;           // hyperplane bad-cube mass per level
    std::vector<double> M_fraction;  // M_k / (2A0+1)^{k(n-1)}
    std::vector<double> M_fraction_bound;  // (1 - (2A0+1)^{-(n-1)})^k
    bool K_ok = false;
    bool M_ok = false;
};

// Stochastic level-mass model of the bad-cube tree: each level spawns at most
// the permitted multiple of the previous mass (uniform fraction of the cap,
// or the full cap). cap_override, when set, replaces the per-cube cap.
TreeSimReport simulate_bad_cube_tree(int A0, int n, int depth, int j0, std::uint64_t seed,
                                     SpawnMode spawn = SpawnMode::uniform,
                                     std::optional<double> cap_override = std::nullopt);

struct WideSimplexResult {
    Simplex S;
    double relative_width = 0.0;
    double diam_ratio = 0.0;   // diam(S) / diam(q)
    double achieved_a = 0.0;   // min of the two
    bool degenerate = false;
};

// Greedy wide-simplex extraction: farthest pair, then repeatedly the point
// farthest from the current affine hull.
WideSimplexResult extract_wide_simplex(const std::vector<Vec>& points, const Cube& q);

struct SimplexLemmaReport {
    std::vector<double> vertex_indices;  // N(x_i, (K/2) diam S)
    double vertex_radius = 0.0;
    double barycenter_index = 0.0;  // N(x0, C diam S)
    double required = 0.0;          // N (1+c)
    bool applicable = false;        // all vertex indices exceed N
    bool verdict = false;           // barycenter_index > required
};

// Empirical check of the simplex lemma: high doubling index at every vertex
// forces a strictly higher index at the barycenter on a larger scale.
SimplexLemmaReport simplex_lemma_check(const Field& u, const Simplex& S, double N,
                                       double c, double K, double C,
                                       const SupOptions& opt = {});

}  // namespace nodalab
