#include "nodalab/simplexcov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nodalab/rng.hpp"

namespace nodalab {

CoveringCheckResult covering_check(const Simplex& S, double K, double c1,
                                   int sphere_samples) {
    if (!(K > 0.0)) throw std::invalid_argument("covering_check: need K > 0");
    if (!(c1 >= 0.0)) throw std::invalid_argument("covering_check: need c1 >= 0");
    const auto metrics = simplex_metrics(S);
    if (metrics.degenerate || metrics.width <= 0.0) {
        throw std::invalid_argument("covering_check: degenerate simplex");
    }
    CoveringCheckResult res;
    res.rho = K * metrics.diam;
    const Vec x0 = metrics.barycenter;
    const double enlarged = res.rho * (1.0 + c1);
    res.boundary = farthest_min_distance(S.vertices, x0, enlarged, sphere_samples);
    res.margin = res.rho - res.boundary.value;
    res.interior_ok = true;
    for (double f : {0.25, 0.5, 0.75}) {
        const auto rep = farthest_min_distance(S.vertices, x0, f * enlarged,
                                               std::max(256, sphere_samples / 4));
        if (rep.value > res.rho) res.interior_ok = false;
    }
    res.holds = res.margin >= 0.0 && res.interior_ok;
    return res;
}

double max_covering_c1(const Simplex& S, double K, double c1_tol, int sphere_samples) {
    if (!covering_check(S, K, 0.0, sphere_samples).holds) return 0.0;
    double lo = 0.0;
    double hi = 0.25;
    int guard = 0;
    while (covering_check(S, K, hi, sphere_samples).holds && guard++ < 8) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > c1_tol) {
        const double mid = 0.5 * (lo + hi);
        if (covering_check(S, K, mid, sphere_samples).holds) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

CoveringConstants covering_constants(double a, int n, int shape_samples,
                                     std::uint64_t seed, int sphere_samples,
                                     const std::vector<Simplex>& explicit_shapes) {
    if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument("covering_constants: need a in (0, 1]");
    }
    if (n < 2) throw std::invalid_argument("covering_constants: need n >= 2");
    if (shape_samples < 1) {
        throw std::invalid_argument("covering_constants: need at least one shape sample");
    }
    CoveringConstants out;
    out.a = a;
    out.n = n;

    // rejection-sample simplices with relative width >= a in the unit cube,
    // unless explicit shapes were supplied
    Rng rng(seed);
    std::vector<Simplex> shapes = explicit_shapes;
    if (shapes.empty()) {
        long attempts = 0;
        const long cap = 2000L * shape_samples;
        while (static_cast<int>(shapes.size()) < shape_samples && attempts < cap) {
            ++attempts;
            std::vector<Vec> verts;
            for (int v = 0; v <= n; ++v) {
                Vec p(n);
                for (int i = 0; i < n; ++i) p[i] = rng.uniform();
                verts.push_back(std::move(p));
            }
            Simplex S(std::move(verts));
            const auto m = simplex_metrics(S, 512);
            if (!m.degenerate && m.relative_width >= a) shapes.push_back(std::move(S));
        }
    }
    if (shapes.empty()) {
        out.a_too_large = true;  // no simplex this wide exists or is reachable
        return out;
    }

    const double K_base = std::max(2.0, 2.0 / a);
    double best_c1 = -1.0;
    for (double K : {K_base, 1.5 * K_base, 2.0 * K_base}) {
        double c1 = std::numeric_limits<double>::infinity();
        for (const auto& S : shapes) {
            c1 = std::min(c1, max_covering_c1(S, K, 1e-4, sphere_samples));
            if (c1 == 0.0) break;
        }
        if (c1 > best_c1) {
            best_c1 = c1;
            out.K = K;
            out.c1 = c1;
        }
    }
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& S : shapes) {
        margin = std::min(margin,
                          covering_check(S, out.K, out.c1, sphere_samples).margin);
    }
    out.certified_margin = margin;
    return out;
}

double delta_of_t(const Simplex& S, int vertex_index, double rho, double t) {
    if (!(rho > 0.0) || !(t > 0.0)) {
        throw std::invalid_argument("delta_of_t: need rho > 0 and t > 0");
    }
    if (vertex_index < 0 || vertex_index >= static_cast<int>(S.vertices.size())) {
        throw std::invalid_argument("delta_of_t: vertex index out of range");
    }
    // |y - x0| <= |y - x_i| + |x_i - x0| <= rho t (1 + delta) with equality on
    // the ray through x0 and x_i, so this delta is minimal.
    return dist(S.vertices[vertex_index], S.barycenter()) / (rho * t);
}

}  // namespace nodalab
