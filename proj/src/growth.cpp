#include "nodalab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace nodalab {

namespace {

// ---------------------------------------------------------------- quadrature

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Newton iteration on Legendre polynomials; cached per node count.
const GaussLegendre& gauss_legendre(int m) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    GaussLegendre gl;
    gl.nodes.resize(m);
    gl.weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[i] = -x;
        gl.weights[i] = w;
        gl.nodes[m - 1 - i] = x;
        gl.weights[m - 1 - i] = w;
    }
    return cache.emplace(m, std::move(gl)).first->second;
}

// Sum of u^2 over the sphere |y - p| = r for one resolution level.
double sphere_integral_u2(const Field& u, const Vec& p, double r,
                          const QuadratureSpec& quad) {
    const int n = u.dim();
    KahanSum acc;
    if (n == 2) {
        const int m = std::max(8, quad.circle_nodes);
        Vec y(2);
        for (int i = 0; i < m; ++i) {
            const double a = 2.0 * std::numbers::pi * i / m;
            y[0] = p[0] + r * std::cos(a);
            y[1] = p[1] + r * std::sin(a);
            const double v = u.value(y);
            acc.add(v * v);
        }
        return acc.value() * (2.0 * std::numbers::pi / m) * r;
    }

    // n >= 3: product Gauss-Legendre on the n-2 polar angles (Jacobian
    // sin^{n-1-j} theta_j folded into the weight), trapezoid on the azimuth.
    const int mt = std::max(8, quad.polar_nodes);
    const int mp = std::max(8, quad.azimuth_nodes);
    const auto& gl = gauss_legendre(mt);
    const int polar_count = n - 2;
    std::vector<int> idx(polar_count, 0);
    Vec y(n);
    for (;;) {
        double w = 1.0;
        std::vector<double> theta(polar_count);
        for (int j = 0; j < polar_count; ++j) {
            const double th = std::numbers::pi * 0.5 * (gl.nodes[idx[j]] + 1.0);
            theta[j] = th;
            w *= gl.weights[idx[j]] * (std::numbers::pi * 0.5) *
                 std::pow(std::sin(th), n - 2 - j);
        }
        KahanSum ring;
        for (int a = 0; a < mp; ++a) {
            const double ph = 2.0 * std::numbers::pi * a / mp;
            double s = r;
            for (int j = 0; j < polar_count; ++j) {
                y[j] = p[j] + s * std::cos(theta[j]);
                s *= std::sin(theta[j]);
            }
            y[n - 2] = p[n - 2] + s * std::cos(ph);
            y[n - 1] = p[n - 1] + s * std::sin(ph);
            const double v = u.value(y);
            ring.add(v * v);
        }
        acc.add(w * ring.value() * (2.0 * std::numbers::pi / mp));
        int j = 0;
        for (; j < polar_count; ++j) {
            if (++idx[j] < mt) break;
            idx[j] = 0;
        }
        if (j == polar_count) break;
    }
    return acc.value() * std::pow(r, n - 1);
}

QuadratureSpec halved(const QuadratureSpec& q) {
    return QuadratureSpec{std::max(8, q.circle_nodes / 2), std::max(8, q.polar_nodes / 2),
                          std::max(8, q.azimuth_nodes / 2)};
}

// ------------------------------------------------------------------ sup norm

struct Candidate {
    double absval;
    Vec point;
};

void consider(std::vector<Candidate>& top, std::size_t cap, double absval, const Vec& p) {
    if (top.size() < cap) {
        top.push_back({absval, p});
        std::push_heap(top.begin(), top.end(),
                       [](const Candidate& a, const Candidate& b) { return a.absval > b.absval; });
        return;
    }
    if (absval > top.front().absval) {
        std::pop_heap(top.begin(), top.end(),
                      [](const Candidate& a, const Candidate& b) { return a.absval > b.absval; });
        top.back() = {absval, p};
        std::push_heap(top.begin(), top.end(),
                       [](const Candidate& a, const Candidate& b) { return a.absval > b.absval; });
    }
}

// Adaptive-step ascent of |u| with projection into the region.
Candidate ascend(const Field& u, Vec x, double scale,
                 const std::function<Vec(const Vec&)>& project, int max_iters) {
    double v = u.value(x);
    double s = v >= 0.0 ? 1.0 : -1.0;
    double f = s * v;
    double step = 0.5 * scale;
    const int n = u.dim();
    for (int iter = 0; iter < max_iters && step > 1e-15 * scale; ++iter) {
        Vec g = u.gradient(x);
        double gm = norm(g);
        Vec cand(n);
        if (gm > 1e-300) {
            for (int i = 0; i < n; ++i) cand[i] = x[i] + s * step * g[i] / gm;
        } else {
            const int axis = iter % n;
            const double sign = (iter / n) % 2 == 0 ? 1.0 : -1.0;
            for (int i = 0; i < n; ++i) cand[i] = x[i] + (i == axis ? sign * step : 0.0);
        }
        cand = project(cand);
        const double fv = s * u.value(cand);
        if (fv > f) {
            x = std::move(cand);
            f = fv;
            step *= 1.4;
        } else {
            step *= 0.5;
        }
    }
    return {f, x};
}

SupResult finish_sup(const Field& u, std::vector<Candidate> top, double scale,
                     double mesh_diam, const std::function<Vec(const Vec&)>& project,
                     const SupOptions& opt) {
    double grad_max = 0.0;
    Candidate best{-1.0, {}};
    for (const auto& c : top) {
        grad_max = std::max(grad_max, norm(u.gradient(c.point)));
        Candidate refined = ascend(u, c.point, scale, project, opt.max_iterations);
        if (refined.absval > best.absval) best = refined;
    }
    SupResult r;
    r.value = best.absval;
    r.witness = best.point;
    r.log2_value = best.absval > 0.0 ? std::log2(best.absval)
                                     : -std::numeric_limits<double>::infinity();
    r.gap_bound = grad_max * mesh_diam;
    return r;
}

// Deterministic direction set on S^{n-1}; includes coordinate axes via the
// zero angles of the grid.
std::vector<Vec> sphere_directions(int n, int budget) {
    std::vector<Vec> dirs;
    if (n == 2) {
        const int m = std::max(16, budget);
        dirs.reserve(m);
        for (int i = 0; i < m; ++i) {
            const double a = 2.0 * std::numbers::pi * i / m;
            dirs.push_back({std::cos(a), std::sin(a)});
        }
        return dirs;
    }
    const int polar_count = n - 2;
    int mt = std::max(5, static_cast<int>(std::round(
                              std::pow(budget / 2.0, 1.0 / (polar_count + 1)))));
    const int mp = 2 * mt;
    std::vector<int> idx(polar_count, 0);
    for (;;) {
        std::vector<double> theta(polar_count);
        for (int j = 0; j < polar_count; ++j) theta[j] = std::numbers::pi * idx[j] / (mt - 1);
        for (int a = 0; a < mp; ++a) {
            const double ph = 2.0 * std::numbers::pi * a / mp;
            Vec d(n);
            double s = 1.0;
            for (int j = 0; j < polar_count; ++j) {
                d[j] = s * std::cos(theta[j]);
                s *= std::sin(theta[j]);
            }
            d[n - 2] = s * std::cos(ph);
            d[n - 1] = s * std::sin(ph);
            dirs.push_back(std::move(d));
        }
        int j = 0;
        for (; j < polar_count; ++j) {
            if (++idx[j] < mt) break;
            idx[j] = 0;
        }
        if (j == polar_count) break;
    }
    return dirs;
}

}  // namespace

SphereNorm sphere_norm_H(const Field& u, const Vec& p, double r, const QuadratureSpec& quad) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_norm_H: need r > 0");
    if (static_cast<int>(p.size()) != u.dim()) {
        throw std::invalid_argument("sphere_norm_H: center dimension mismatch");
    }
    SphereNorm out;
    out.value = sphere_integral_u2(u, p, r, quad);
    out.error_estimate = std::abs(out.value - sphere_integral_u2(u, p, r, halved(quad)));
    if (out.value < 1e-300) {
        throw degenerate_field_error("sphere_norm_H: field is effectively zero on the sphere");
    }
    return out;
}

double frequency_beta(const Field& u, const Vec& p, double r, double step_factor,
                      const QuadratureSpec& quad) {
    if (!(r > 0.0)) throw std::invalid_argument("frequency_beta: need r > 0");
    const double h = r * step_factor;
    auto logH = [&](double rr) { return std::log(sphere_norm_H(u, p, rr, quad).value); };
    const double d1 = (logH(r + h) - logH(r - h)) / (2.0 * h);
    const double d2 = (logH(r + 0.5 * h) - logH(r - 0.5 * h)) / h;
    return 0.5 * r * (4.0 * d2 - d1) / 3.0;
}

FrequencyProfile frequency_profile(const Field& u, const Vec& p,
                                   const std::vector<double>& radii,
                                   const QuadratureSpec& quad) {
    FrequencyProfile prof;
    prof.center = p;
    prof.quadrature = quad;
    for (double r : radii) {
        const auto H = sphere_norm_H(u, p, r, quad);
        prof.radii.push_back(r);
        prof.H_values.push_back(H.value);
        prof.H_errors.push_back(H.error_estimate);
        prof.beta_values.push_back(frequency_beta(u, p, r, 1e-3, quad));
    }
    return prof;
}

SupResult sup_norm(const Field& u, const Cube& region, const SupOptions& opt) {
    const int n = u.dim();
    if (region.dim() != n) throw std::invalid_argument("sup_norm: cube dimension mismatch");
    int L = std::max(3, opt.lattice_per_axis);
    while (std::pow(static_cast<double>(L), n) > static_cast<double>(opt.max_lattice_points) &&
           L > 3) {
        L -= 2;
    }
    const double lo_off = -region.half_side;
    const double step = region.side() / (L - 1);
    std::vector<Candidate> top;
    const std::size_t cap = std::max(1, opt.refine_top);
    std::vector<int> idx(n, 0);
    Vec y(n);
    for (;;) {
        for (int i = 0; i < n; ++i) y[i] = region.center[i] + lo_off + idx[i] * step;
        consider(top, cap, std::abs(u.value(y)), y);
        int j = 0;
        for (; j < n; ++j) {
            if (++idx[j] < L) break;
            idx[j] = 0;
        }
        if (j == n) break;
    }
    auto project = [&region](const Vec& x) { return region.clamp(x); };
    return finish_sup(u, std::move(top), region.half_side,
                      step * std::sqrt(static_cast<double>(n)), project, opt);
}

SupResult sup_norm(const Field& u, const Ball& region, const SupOptions& opt) {
    const int n = u.dim();
    if (region.dim() != n) throw std::invalid_argument("sup_norm: ball dimension mismatch");
    const auto dirs = sphere_directions(n, opt.ball_directions);
    const int J = std::max(2, opt.ball_shells);
    std::vector<Candidate> top;
    const std::size_t cap = std::max(1, opt.refine_top);
    consider(top, cap, std::abs(u.value(region.center)), region.center);
    Vec y(n);
    for (int j = 1; j <= J; ++j) {
        const double rr = region.radius * j / J;
        for (const auto& d : dirs) {
            for (int i = 0; i < n; ++i) y[i] = region.center[i] + rr * d[i];
            consider(top, cap, std::abs(u.value(y)), y);
        }
    }
    const double angle_gap = n == 2 ? 2.0 * std::numbers::pi / dirs.size()
                                    : 2.0 * std::numbers::pi / std::sqrt(static_cast<double>(dirs.size()));
    const double mesh = std::max(region.radius / J, region.radius * angle_gap);
    auto project = [&region](const Vec& x) { return region.project(x); };
    return finish_sup(u, std::move(top), region.radius, mesh, project, opt);
}

DoublingReport doubling_index_ball(const Field& u, const Vec& x, double r,
                                   const SupOptions& opt) {
    if (!(r > 0.0)) throw std::invalid_argument("doubling_index_ball: need r > 0");
    DoublingReport rep;
    rep.center = x;
    rep.radius = r;
    rep.inner = sup_norm(u, Ball(x, r), opt);
    if (rep.inner.value < 1e-300) {
        throw degenerate_field_error("doubling_index_ball: field vanishes on the inner ball");
    }
    rep.outer = sup_norm(u, Ball(x, 2.0 * r), opt);
    // the inner witness is feasible for 2B, so the ratio never drops below 1
    if (rep.outer.value < rep.inner.value) rep.outer = rep.inner;
    rep.N = rep.outer.log2_value - rep.inner.log2_value;
    return rep;
}

CubeIndexReport doubling_index_cube(const Field& u, const Cube& Q, const CubeIndexGrid& grid,
                                    std::span<const CenterRadius> extra, const SupOptions& opt) {
    if (grid.centers_per_axis < 1 || grid.radii_count < 1) {
        throw std::invalid_argument("doubling_index_cube: empty grid");
    }
    const int n = Q.dim();
    const double diam = Q.diam();
    std::vector<double> radii;
    radii.reserve(grid.radii_count);
    if (grid.radii_count == 1) {
        radii.push_back(diam);
    } else {
        for (int j = 0; j < grid.radii_count; ++j) {
            const double e = static_cast<double>(grid.radii_count - 1 - j) / (grid.radii_count - 1);
            radii.push_back(diam * std::pow(grid.min_radius_factor, e));
        }
    }

    std::vector<Vec> centers;
    const int cpa = grid.centers_per_axis;
    std::vector<int> idx(n, 0);
    for (;;) {
        Vec c(n);
        for (int i = 0; i < n; ++i) {
            c[i] = cpa == 1 ? Q.center[i]
                            : Q.center[i] - Q.half_side + idx[i] * (Q.side() / (cpa - 1));
        }
        centers.push_back(std::move(c));
        int j = 0;
        for (; j < n; ++j) {
            if (++idx[j] < cpa) break;
            idx[j] = 0;
        }
        if (j == n) break;
    }

    CubeIndexReport rep;
    rep.Q = Q;
    rep.grid = grid;
    rep.N = -std::numeric_limits<double>::infinity();
    auto probe = [&](const Vec& x, double r) {
        rep.samples.push_back({x, r});
        const auto d = doubling_index_ball(u, x, r, opt);
        rep.sample_N.push_back(d.N);
        if (d.N > rep.N) {
            rep.N = d.N;
            rep.argmax_x = x;
            rep.argmax_r = r;
        }
    };
    for (const auto& c : centers) {
        for (double r : radii) probe(c, r);
    }
    for (const auto& cr : extra) probe(cr.x, cr.r);
    return rep;
}

SandwichReport check_growth_sandwich(const Field& u, const Vec& x, double rho, double t,
                                     double eps, double N0, const SupOptions& opt) {
    if (!(t > 2.0)) throw std::invalid_argument("check_growth_sandwich: need t > 2");
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("check_growth_sandwich: need eps in (0,1)");
    }
    SandwichReport rep;
    const auto inner = doubling_index_ball(u, x, rho, opt);
    const auto outer = doubling_index_ball(u, x, t * rho, opt);
    rep.N_inner = inner.N;
    rep.N_outer = outer.N;
    double sup_trho_log2 = outer.inner.log2_value;  // sup over B(x, t rho)
    // the rho-witness lies in B(x, t rho): never allow a smaller sup
    sup_trho_log2 = std::max(sup_trho_log2, inner.inner.log2_value);
    rep.log_t_ratio = (sup_trho_log2 - inner.inner.log2_value) / std::log2(t);
    rep.slack_lower = rep.log_t_ratio - rep.N_inner * (1.0 - eps);
    rep.slack_upper = rep.N_outer * (1.0 + eps) - rep.log_t_ratio;
    rep.implied_C_lower = std::max(0.0, -rep.slack_lower);
    rep.implied_C_upper = std::max(0.0, -rep.slack_upper);
    rep.below_floor = rep.N_inner <= N0;
    rep.holds = rep.slack_lower >= -1e-9 && rep.slack_upper >= -1e-9;
    return rep;
}

LogIntegralReport check_log_integral(const Field& u, const Vec& p, double r1, double r2,
                                     const QuadratureSpec& quad, double tol) {
    if (!(0.0 < r1 && r1 < r2)) {
        throw std::invalid_argument("check_log_integral: need 0 < r1 < r2");
    }
    LogIntegralReport rep;
    rep.lhs = std::log(sphere_norm_H(u, p, r2, quad).value) -
              std::log(sphere_norm_H(u, p, r1, quad).value);

    auto f = [&](double s) { return frequency_beta(u, p, std::exp(s), 1e-3, quad); };
    // adaptive Simpson on [log r1, log r2]
    std::function<double(double, double, double, double, double, double, int)> simpson =
        [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
                return left + right + (left + right - whole) / 15.0;
            }
            return simpson(a, m, fa, flm, fm, left, depth - 1) +
                   simpson(m, b, fm, frm, fb, right, depth - 1);
        };
    const double a = std::log(r1);
    const double b = std::log(r2);
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rep.rhs = 2.0 * simpson(a, b, fa, fm, fb, whole, 12);
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

CenterShiftReport check_center_shift(const Field& u, const Vec& x1, const Vec& x2,
                                     double rho, double C, double N0, const SupOptions& opt) {
    if (!(dist(x1, x2) < rho)) {
        throw std::invalid_argument("check_center_shift: need |x1-x2| < rho");
    }
    CenterShiftReport rep;
    rep.N1 = doubling_index_ball(u, x1, rho, opt).N;
    rep.N2 = doubling_index_ball(u, x2, C * rho, opt).N;
    rep.ratio = rep.N1 > 0.0 ? rep.N2 / rep.N1 : std::numeric_limits<double>::infinity();
    rep.below_floor = rep.N1 <= N0;
    rep.violation = !rep.below_floor && rep.ratio < 0.99;
    return rep;
}

}  // namespace nodalab
