#include "nodalab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nodalab/rng.hpp"

namespace nodalab {

namespace {

constexpr std::uint64_t kWidthSeed = 0x5eedull;

// Orthonormalize `vecs` in place (modified Gram-Schmidt), dropping vectors
// whose residual falls below rel_tol * scale. Returns the retained basis.
std::vector<Vec> orthonormal_basis(std::vector<Vec> vecs, double rel_tol = 1e-12) {
    double scale = 0.0;
    for (const auto& v : vecs) scale = std::max(scale, norm(v));
    if (scale == 0.0) return {};
    std::vector<Vec> basis;
    for (auto& v : vecs) {
        for (const auto& b : basis) {
            const double p = dot(v, b);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * b[i];
        }
        const double m = norm(v);
        if (m > rel_tol * scale) {
            for (auto& x : v) x /= m;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

// A unit vector orthogonal to the given orthonormal basis, or empty if the
// basis already spans the space.
Vec orthogonal_complement_vector(const std::vector<Vec>& basis, int n) {
    for (int axis = 0; axis < n; ++axis) {
        Vec v(n, 0.0);
        v[axis] = 1.0;
        for (const auto& b : basis) {
            const double p = dot(v, b);
            for (int i = 0; i < n; ++i) v[i] -= p * b[i];
        }
        const double m = norm(v);
        if (m > 1e-8) {
            for (auto& x : v) x /= m;
            return v;
        }
    }
    return {};
}

double directional_extent(const std::vector<Vec>& points, std::span<const double> d,
                          std::size_t* arg_hi = nullptr, std::size_t* arg_lo = nullptr) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double p = dot(points[i], d);
        if (p > hi) {
            hi = p;
            if (arg_hi) *arg_hi = i;
        }
        if (p < lo) {
            lo = p;
            if (arg_lo) *arg_lo = i;
        }
    }
    return hi - lo;
}

// Projected subgradient descent of the extent over the unit sphere of
// directions, with random tangent restarts when the subgradient stalls.
void refine_width_direction(const std::vector<Vec>& points, Vec& d, double tol, Rng& rng) {
    const int n = static_cast<int>(d.size());
    double f = directional_extent(points, d);
    double step = 0.25;
    const double floor_step = std::max(tol, 1e-15);
    int iter = 0;
    while (step > floor_step && iter < 600) {
        ++iter;
        std::size_t ih = 0, il = 0;
        directional_extent(points, d, &ih, &il);
        Vec g = sub(points[ih], points[il]);
        const double gd = dot(g, d);
        for (int i = 0; i < n; ++i) g[i] -= gd * d[i];
        const double gm = norm(g);
        bool moved = false;
        if (gm > 1e-15) {
            Vec cand(n);
            for (int i = 0; i < n; ++i) cand[i] = d[i] - step * g[i] / gm;
            normalize_inplace(cand);
            const double fc = directional_extent(points, cand);
            if (fc < f) {
                d = std::move(cand);
                f = fc;
                step *= 1.4;
                moved = true;
            }
        }
        if (!moved) {
            // try a couple of random tangent probes before shrinking
            for (int probe = 0; probe < 2 && !moved; ++probe) {
                Vec t = rng.unit_vector(n);
                const double td = dot(t, d);
                for (int i = 0; i < n; ++i) t[i] -= td * d[i];
                const double tm = norm(t);
                if (tm < 1e-12) continue;
                Vec cand(n);
                for (int i = 0; i < n; ++i) cand[i] = d[i] + step * t[i] / tm;
                normalize_inplace(cand);
                const double fc = directional_extent(points, cand);
                if (fc < f) {
                    d = std::move(cand);
                    f = fc;
                    moved = true;
                }
            }
            if (!moved) step *= 0.5;
        }
    }
}

// For a full set of n+1 affinely independent points, the minimal slab is
// orthogonal to the affine hulls of the two contact sets, which partition the
// vertex set. Enumerating all 2-partitions gives exact candidate directions.
std::vector<Vec> simplex_partition_directions(const std::vector<Vec>& points) {
    const int n = static_cast<int>(points[0].size());
    const std::size_t m = points.size();
    std::vector<Vec> dirs;
    if (m != static_cast<std::size_t>(n) + 1 || m > 20) return dirs;
    const unsigned total = 1u << m;
    for (unsigned mask = 1; mask + 1 < total; ++mask) {
        if (mask & 1u) continue;  // fix point 0 in set B to halve duplicates
        std::vector<Vec> diffs;
        Vec a0, b0;
        bool have_a = false, have_b = false;
        for (std::size_t i = 0; i < m; ++i) {
            const bool in_a = (mask >> i) & 1u;
            if (in_a) {
                if (!have_a) {
                    a0 = points[i];
                    have_a = true;
                } else {
                    diffs.push_back(sub(points[i], a0));
                }
            } else {
                if (!have_b) {
                    b0 = points[i];
                    have_b = true;
                } else {
                    diffs.push_back(sub(points[i], b0));
                }
            }
        }
        auto basis = orthonormal_basis(std::move(diffs));
        if (static_cast<int>(basis.size()) != n - 1) continue;
        Vec d = orthogonal_complement_vector(basis, n);
        if (!d.empty()) dirs.push_back(std::move(d));
    }
    return dirs;
}

}  // namespace

Cube::Cube(Vec c, double h) : center(std::move(c)), half_side(h) {
    if (center.size() < 1) throw std::invalid_argument("Cube: empty center");
    if (!(half_side > 0.0)) throw std::invalid_argument("Cube: half_side must be positive");
}

double Cube::diam() const { return 2.0 * half_side * std::sqrt(static_cast<double>(dim())); }

double Cube::volume() const { return std::pow(2.0 * half_side, dim()); }

Cube Cube::scaled(double rho) const { return Cube(center, half_side * rho); }

bool Cube::contains(std::span<const double> x) const {
    for (int i = 0; i < dim(); ++i) {
        if (std::abs(x[i] - center[i]) > half_side) return false;
    }
    return true;
}

Vec Cube::corner(unsigned mask) const {
    Vec v(center);
    for (int i = 0; i < dim(); ++i) v[i] += ((mask >> i) & 1u) ? half_side : -half_side;
    return v;
}

Vec Cube::clamp(std::span<const double> x) const {
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) {
        v[i] = std::clamp(x[i], center[i] - half_side, center[i] + half_side);
    }
    return v;
}

Ball::Ball(Vec c, double r) : center(std::move(c)), radius(r) {
    if (center.size() < 1) throw std::invalid_argument("Ball: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
}

Ball Ball::scaled(double r) const { return Ball(center, radius * r); }

bool Ball::contains(std::span<const double> x) const { return dist(x, center) <= radius; }

Vec Ball::project(std::span<const double> x) const {
    const double d = dist(x, center);
    if (d <= radius) return Vec(x.begin(), x.end());
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = center[i] + (x[i] - center[i]) * (radius / d);
    return v;
}

Simplex::Simplex(std::vector<Vec> v) : vertices(std::move(v)) {
    if (vertices.empty()) throw std::invalid_argument("Simplex: no vertices");
    const std::size_t n = vertices[0].size();
    if (vertices.size() != n + 1) {
        throw std::invalid_argument("Simplex: need n+1 vertices in R^n");
    }
    for (const auto& p : vertices) {
        if (p.size() != n) throw std::invalid_argument("Simplex: mixed dimensions");
    }
}

Vec Simplex::barycenter() const {
    const int n = dim();
    Vec b(n, 0.0);
    for (const auto& v : vertices) {
        for (int i = 0; i < n; ++i) b[i] += v[i];
    }
    for (auto& x : b) x /= static_cast<double>(vertices.size());
    return b;
}

double Simplex::diam() const {
    double d = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            d = std::max(d, dist(vertices[i], vertices[j]));
        }
    }
    return d;
}

std::vector<Cube> subdivide(const Cube& Q, int A) {
    if (A < 1) throw std::invalid_argument("subdivide: A must be >= 1");
    const int n = Q.dim();
    const double child_h = Q.half_side / static_cast<double>(A);
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) count *= static_cast<std::size_t>(A);
    std::vector<Cube> out;
    out.reserve(count);
    std::vector<int> idx(n, 0);
    for (std::size_t k = 0; k < count; ++k) {
        Vec c(n);
        for (int i = 0; i < n; ++i) {
            c[i] = Q.center[i] - Q.half_side + (2 * idx[i] + 1) * child_h;
        }
        out.emplace_back(std::move(c), child_h);
        for (int i = 0; i < n; ++i) {
            if (++idx[i] < A) break;
            idx[i] = 0;
        }
    }
    return out;
}

std::optional<std::size_t> subcube_index_of(const Cube& Q, int A, std::span<const double> x) {
    if (A < 1) throw std::invalid_argument("subcube_index_of: A must be >= 1");
    if (!Q.contains(x)) return std::nullopt;
    const int n = Q.dim();
    const double step = Q.side() / static_cast<double>(A);
    std::size_t index = 0;
    std::size_t stride = 1;
    for (int i = 0; i < n; ++i) {
        int j = static_cast<int>(std::floor((x[i] - (Q.center[i] - Q.half_side)) / step));
        j = std::clamp(j, 0, A - 1);  // upper faces fold into the last cell
        index += stride * static_cast<std::size_t>(j);
        stride *= static_cast<std::size_t>(A);
    }
    return index;
}

int affine_rank(const std::vector<Vec>& points, double rel_tol) {
    if (points.size() <= 1) return 0;
    std::vector<Vec> diffs;
    diffs.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
    return static_cast<int>(orthonormal_basis(std::move(diffs), rel_tol).size());
}

double dist_to_affine_hull(std::span<const double> x, const std::vector<Vec>& points) {
    if (points.empty()) return std::numeric_limits<double>::infinity();
    std::vector<Vec> diffs;
    for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
    auto basis = orthonormal_basis(std::move(diffs));
    Vec r = sub(x, points[0]);
    for (const auto& b : basis) {
        const double p = dot(r, b);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p * b[i];
    }
    return norm(r);
}

double point_set_width(const std::vector<Vec>& points, int samples, double tol,
                       Vec* direction_out) {
    if (points.empty()) throw std::invalid_argument("point_set_width: no points");
    const int n = static_cast<int>(points[0].size());
    if (points.size() == 1) {
        if (direction_out) *direction_out = Vec(n, 0.0);
        return 0.0;
    }

    // Degenerate affine hull: an exactly orthogonal direction has extent 0.
    if (affine_rank(points) < n) {
        std::vector<Vec> diffs;
        for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
        auto basis = orthonormal_basis(std::move(diffs));
        Vec d = orthogonal_complement_vector(basis, n);
        if (direction_out) *direction_out = d;
        return 0.0;
    }

    Rng rng(kWidthSeed);
    std::vector<Vec> candidates;
    // Exact contact-set directions when the set is a simplex.
    for (auto& d : simplex_partition_directions(points)) candidates.push_back(std::move(d));

    // Coarse direction net.
    if (n == 2) {
        const int m = std::max(8, samples);
        for (int i = 0; i < m; ++i) {
            const double a = std::numbers::pi * i / m;  // antipodal symmetry
            candidates.push_back({std::cos(a), std::sin(a)});
        }
    } else {
        for (int i = 0; i < samples; ++i) candidates.push_back(rng.unit_vector(n));
    }

    // Keep the best few and refine.
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ranked.emplace_back(directional_extent(points, candidates[i]), i);
    }
    std::sort(ranked.begin(), ranked.end());
    const std::size_t keep = std::min<std::size_t>(6, ranked.size());
    double best = std::numeric_limits<double>::infinity();
    Vec best_dir;
    for (std::size_t k = 0; k < keep; ++k) {
        Vec d = candidates[ranked[k].second];
        refine_width_direction(points, d, tol, rng);
        const double f = directional_extent(points, d);
        if (f < best) {
            best = f;
            best_dir = std::move(d);
        }
    }
    if (direction_out) *direction_out = best_dir;
    return best;
}

SimplexMetrics simplex_metrics(const Simplex& S, int width_samples) {
    SimplexMetrics m;
    m.barycenter = S.barycenter();
    m.diam = S.diam();
    m.width = point_set_width(S.vertices, width_samples, 1e-13, &m.width_direction);
    m.degenerate = affine_rank(S.vertices) < S.dim();
    if (m.degenerate) m.width = 0.0;
    m.relative_width = m.diam > 0.0 ? m.width / m.diam : 0.0;
    return m;
}

FarthestReport farthest_min_distance(const std::vector<Vec>& centers, const Vec& x0,
                                     double R, int samples) {
    if (centers.empty()) throw std::invalid_argument("farthest_min_distance: no centers");
    if (!(R > 0.0)) throw std::invalid_argument("farthest_min_distance: R must be positive");
    const int n = static_cast<int>(x0.size());

    auto fmin = [&](std::span<const double> y) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : centers) best = std::min(best, dist(y, c));
        return best;
    };
    auto nearest_center = [&](std::span<const double> y) {
        std::size_t arg = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const double d = dist(y, centers[i]);
            if (d < best) {
                best = d;
                arg = i;
            }
        }
        return arg;
    };

    // Deterministic net on the sphere.
    std::vector<Vec> net;
    double net_gap;
    if (n == 2) {
        const int m = std::max(16, samples);
        net.reserve(m);
        for (int i = 0; i < m; ++i) {
            const double a = 2.0 * std::numbers::pi * i / m;
            net.push_back({x0[0] + R * std::cos(a), x0[1] + R * std::sin(a)});
        }
        net_gap = 2.0 * R * std::sin(std::numbers::pi / m);
    } else if (n == 3) {
        const int mt = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(samples) / 2.0)));
        const int mp = 2 * mt;
        for (int i = 0; i <= mt; ++i) {
            const double th = std::numbers::pi * i / mt;
            for (int j = 0; j < mp; ++j) {
                const double ph = 2.0 * std::numbers::pi * j / mp;
                net.push_back({x0[0] + R * std::sin(th) * std::cos(ph),
                               x0[1] + R * std::sin(th) * std::sin(ph),
                               x0[2] + R * std::cos(th)});
            }
        }
        net_gap = R * (std::numbers::pi / mt + std::numbers::pi / mp);
    } else {
        Rng rng(kWidthSeed);
        net.reserve(samples);
        for (int i = 0; i < samples; ++i) {
            Vec d = rng.unit_vector(n);
            Vec y(n);
            for (int k = 0; k < n; ++k) y[k] = x0[k] + R * d[k];
            net.push_back(std::move(y));
        }
        // heuristic covering radius for a random net
        net_gap = 3.0 * R * std::pow(std::log(static_cast<double>(samples)) / samples,
                                     1.0 / (n - 1));
    }

    double best = -1.0;
    Vec best_y;
    for (const auto& y : net) {
        const double f = fmin(y);
        if (f > best) {
            best = f;
            best_y = y;
        }
    }

    // Local ascent on the sphere: move away from the nearest center.
    Vec y = best_y;
    double f = best;
    double step = net_gap > 0.0 ? net_gap : 0.1 * R;
    for (int iter = 0; iter < 400 && step > 1e-14 * R; ++iter) {
        const auto ci = nearest_center(y);
        Vec g = sub(y, centers[ci]);
        const double gm = norm(g);
        if (gm < 1e-15) break;
        Vec radial = sub(y, x0);
        const double rd = dot(g, radial) / (R * R);
        for (int k = 0; k < n; ++k) g[k] = g[k] / gm - rd * radial[k] / gm;
        Vec cand(n);
        for (int k = 0; k < n; ++k) cand[k] = y[k] + step * g[k];
        Vec d = sub(cand, x0);
        const double dm = norm(d);
        if (dm == 0.0) {
            step *= 0.5;
            continue;
        }
        for (int k = 0; k < n; ++k) cand[k] = x0[k] + R * d[k] / dm;
        const double fc = fmin(cand);
        if (fc > f) {
            y = std::move(cand);
            f = fc;
            step *= 1.3;
        } else {
            step *= 0.5;
        }
    }

    FarthestReport rep;
    rep.value = f;
    rep.witness = y;
    rep.gap_bound = net_gap;
    return rep;
}

}  // namespace nodalab
