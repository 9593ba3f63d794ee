#include "nodalab/census.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodalab/rng.hpp"

namespace nodalab {

namespace {

// Index every subcube on its own lattice and take N(Q) as the max over the
// parent's lattice plus every subcube sample (all are valid (x, r) pairs for
// Q, so monotonicity N(q) <= N(Q) holds by construction).
struct SharedCensus {
    double N_of_Q;
    std::vector<double> indices;
    std::vector<CenterRadius> witnesses;
};

SharedCensus shared_lattice_indices(const Field& u, const Cube& Q,
                                    const std::vector<Cube>& children,
                                    const CensusConfig& cfg) {
    SharedCensus out;
    out.indices.reserve(children.size());
    std::vector<CenterRadius> extra;
    for (const auto& child : children) {
        const auto rep = doubling_index_cube(u, child, cfg.subcube_grid, {}, cfg.sup);
        out.indices.push_back(rep.N);
        out.witnesses.push_back({rep.argmax_x, rep.argmax_r});
        extra.insert(extra.end(), rep.samples.begin(), rep.samples.end());
    }
    const auto parent = doubling_index_cube(u, Q, cfg.subcube_grid, extra, cfg.sup);
    out.N_of_Q = parent.N;
    return out;
}

}  // namespace

CensusReport subcube_census(const Field& u, const Cube& Q, int A, double c, double N0,
                            const CensusConfig& cfg) {
    if (A < 1) throw std::invalid_argument("subcube_census: need A >= 1");
    if (!(c > 0.0)) throw std::invalid_argument("subcube_census: need c > 0");
    const auto children = subdivide(Q, A);
    const auto shared = shared_lattice_indices(u, Q, children, cfg);

    CensusReport rep;
    rep.Q = Q;
    rep.A = A;
    rep.rule = CensusRule::subcube_threshold;
    rep.c = c;
    rep.N0 = N0;
    rep.N_of_Q = shared.N_of_Q;
    rep.threshold = std::max(shared.N_of_Q / (1.0 + c), N0);
    rep.subcube_indices = shared.indices;
    rep.witnesses = shared.witnesses;
    rep.subcube_ids.resize(children.size());
    for (std::size_t i = 0; i < children.size(); ++i) rep.subcube_ids[i] = i;
    rep.bad_count = 0;
    for (const double idx : rep.subcube_indices) {
        if (idx > rep.threshold) ++rep.bad_count;  // strict exceedance
    }
    rep.bound = 0.5 * std::pow(static_cast<double>(A), u.dim() - 1);
    rep.fraction = static_cast<double>(rep.bad_count) /
                   std::pow(static_cast<double>(A), u.dim() - 1);
    rep.verdict = static_cast<double>(rep.bad_count) < rep.bound;
    return rep;
}

CensusReport hyperplane_census(const Field& u, const Cube& Q, int A1, double N, int axis,
                               double eps, const CensusConfig& cfg) {
    if (A1 < 3 || A1 % 2 == 0) {
        throw std::invalid_argument("hyperplane_census: A1 must be odd and >= 3");
    }
    const int n = u.dim();
    if (axis < 0) axis = n - 1;
    if (axis >= n) throw std::invalid_argument("hyperplane_census: axis out of range");
    const auto children = subdivide(Q, A1);

    // subcubes whose closed cube meets the central hyperplane {x_axis = c}
    std::vector<Cube> selected;
    std::vector<std::size_t> ids;
    const double tol = 1e-12 * Q.half_side;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (std::abs(children[i].center[axis] - Q.center[axis]) <=
            children[i].half_side + tol) {
            selected.push_back(children[i]);
            ids.push_back(i);
        }
    }
    const auto shared = shared_lattice_indices(u, Q, selected, cfg);

    CensusReport rep;
    rep.Q = Q;
    rep.A = A1;
    rep.rule = CensusRule::hyperplane_half_N;
    rep.N0 = N;
    rep.N_of_Q = shared.N_of_Q;
    const double N_used = N > 0.0 ? N : shared.N_of_Q;
    rep.threshold = 0.5 * N_used;
    rep.subcube_indices = shared.indices;
    rep.witnesses = shared.witnesses;
    rep.subcube_ids = ids;
    rep.bad_count = 0;
    for (const double idx : rep.subcube_indices) {
        if (idx > rep.threshold) ++rep.bad_count;
    }
    const double row = std::pow(static_cast<double>(A1), n - 1);
    rep.bound = eps * row;
    rep.fraction = static_cast<double>(rep.bad_count) / row;
    rep.verdict = static_cast<double>(rep.bad_count) < rep.bound;
    return rep;
}

RecursionModel recursion_exponent(int A, double c, double N0, int levels) {
    if (A < 2) throw std::invalid_argument("recursion_exponent: need A >= 2");
    if (!(c > 0.0)) throw std::invalid_argument("recursion_exponent: need c > 0");
    RecursionModel model;
    model.A = A;
    model.c = c;
    model.N0 = N0;
    model.levels = levels;
    const double l4A = std::log2(4.0 * A);
    const double l1c = std::log2(1.0 + c);
    model.alpha = l4A / l1c;
    if (!(model.alpha > 1.0)) {
        throw std::invalid_argument("recursion_exponent: c too large, exponent would be <= 1");
    }
    // Majorant grid: log2 F((1+c)^j N0) - log2 F(N0) = j log2(4A), bound is
    // alpha * j * log2(1+c). Equal in exact arithmetic; allow a few ulps.
    model.majorant_ok = true;
    for (int j = 0; j <= levels; ++j) {
        const double lhs = j * l4A;
        const double rhs = model.alpha * (j * l1c);
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                             std::max(1.0, std::abs(lhs));
        if (lhs > rhs + slack) {
            model.majorant_ok = false;
            break;
        }
    }
    return model;
}

TreeSimReport simulate_bad_cube_tree(int A0, int n, int depth, int j0, std::uint64_t seed,
                                     SpawnMode spawn, std::optional<double> cap_override) {
    if (A0 < 1) throw std::invalid_argument("simulate_bad_cube_tree: need A0 >= 1");
    if (n < 2) throw std::invalid_argument("simulate_bad_cube_tree: need n >= 2");
    if (depth < 1 || depth > 20) {
        throw std::invalid_argument("simulate_bad_cube_tree: depth must be in [1, 20]");
    }
    if (j0 < 0 || j0 > depth) {
        throw std::invalid_argument("simulate_bad_cube_tree: j0 out of range");
    }
    if (cap_override && *cap_override < 0.0) {
        throw std::invalid_argument("simulate_bad_cube_tree: negative cap");
    }
    TreeSimReport rep;
    rep.A0 = A0;
    rep.n = n;
    rep.j0 = j0;
    rep.seed = seed;
    const double row = std::pow(2.0 * A0 + 1.0, n - 1);
    rep.k_factor = 0.5 * row;
    rep.m_factor = row - 1.0;
    const double k_cap = cap_override.value_or(rep.k_factor);
    const double m_cap = cap_override.value_or(rep.m_factor);

    Rng rng(seed);
    rep.K.push_back(1.0);
    rep.M.push_back(1.0);
    for (int j = 0; j < depth; ++j) {
        const double uk = spawn == SpawnMode::always_max ? 1.0 : rng.uniform();
        const double um = spawn == SpawnMode::always_max ? 1.0 : rng.uniform();
        rep.K.push_back(uk * k_cap * rep.K.back());
        rep.M.push_back(um * m_cap * rep.M.back());
    }
    rep.K_ok = true;
    for (int j = 0; j <= depth; ++j) {
        const double bound = j >= j0 ? rep.K[j0] * std::pow(rep.k_factor, j - j0)
                                     : std::numeric_limits<double>::infinity();
        rep.K_bound.push_back(bound);
        if (rep.K[j] > bound * (1.0 + 1e-12)) rep.K_ok = false;
    }
    rep.M_ok = true;
    for (int k = 0; k <= depth; ++k) {
        const double frac = rep.M[k] / std::pow(row, k);
        const double bound = std::pow(1.0 - 1.0 / row, k);
        rep.M_fraction.push_back(frac);
        rep.M_fraction_bound.push_back(bound);
        if (frac > bound * (1.0 + 1e-12)) rep.M_ok = false;
    }
    return rep;
}

WideSimplexResult extract_wide_simplex(const std::vector<Vec>& points, const Cube& q) {
    const int n = q.dim();
    if (points.size() < static_cast<std::size_t>(n) + 1) {
        throw std::invalid_argument("extract_wide_simplex: need at least n+1 points");
    }
    WideSimplexResult out;
    // farthest pair for the diameter
    std::size_t ia = 0, ib = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = dist(points[i], points[j]);
            if (d > best) {
                best = d;
                ia = i;
                ib = j;
            }
        }
    }
    std::vector<Vec> chosen = {points[ia], points[ib]};
    if (best <= 0.0) {
        out.degenerate = true;
        return out;
    }
    while (chosen.size() < static_cast<std::size_t>(n) + 1) {
        double far = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double d = dist_to_affine_hull(points[i], chosen);
            if (d > far) {
                far = d;
                arg = i;
            }
        }
        if (far <= 1e-12 * best) {
            out.degenerate = true;  // all points affinely degenerate
            return out;
        }
        chosen.push_back(points[arg]);
    }
    out.S = Simplex(chosen);
    const auto m = simplex_metrics(out.S);
    out.relative_width = m.relative_width;
    out.diam_ratio = m.diam / q.diam();
    out.achieved_a = std::min(out.relative_width, out.diam_ratio);
    out.degenerate = m.degenerate;
    if (out.degenerate) out.achieved_a = 0.0;
    return out;
}

SimplexLemmaReport simplex_lemma_check(const Field& u, const Simplex& S, double N, double c,
                                       double K, double C, const SupOptions& opt) {
    if (!(N > 0.0) || !(c > 0.0) || !(K > 0.0) || !(C > 0.0)) {
        throw std::invalid_argument("simplex_lemma_check: parameters must be positive");
    }
    SimplexLemmaReport rep;
    const double d = S.diam();
    rep.vertex_radius = 0.5 * K * d;
    rep.applicable = true;
    for (const auto& v : S.vertices) {
        const double idx = doubling_index_ball(u, v, rep.vertex_radius, opt).N;
        rep.vertex_indices.push_back(idx);
        if (!(idx > N)) rep.applicable = false;
    }
    rep.required = N * (1.0 + c);
    if (rep.applicable) {
        rep.barycenter_index = doubling_index_ball(u, S.barycenter(), C * d, opt).N;
        rep.verdict = rep.barycenter_index > rep.required;
    }
    return rep;
}

}  // namespace nodalab
