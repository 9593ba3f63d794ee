#include "nodalab/nodal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "nodalab/parallel.hpp"
#include "nodalab/rng.hpp"

namespace nodalab {

namespace {

inline bool sgn(double v) { return v >= 0.0; }  // zeros count as positive

inline Vec edge_zero(const Vec& a, double va, const Vec& b, double vb) {
    const double t = va / (va - vb);
    Vec q(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) q[i] = a[i] + t * (b[i] - a[i]);
    return q;
}

// ------------------------------------------------------------- marching, 2-D

struct MarchChunk {
    double length = 0.0;
    bool any_nonzero = false;
    std::vector<std::pair<Vec, Vec>> segments;
};

double tri_zero_length(const std::array<Vec, 3>& p, const std::array<double, 3>& v,
                       std::vector<std::pair<Vec, Vec>>* segs) {
    const int npos = sgn(v[0]) + sgn(v[1]) + sgn(v[2]);
    if (npos == 0 || npos == 3) return 0.0;
    int lone = -1;
    const bool lone_sign = (npos == 1);
    for (int i = 0; i < 3; ++i) {
        if (sgn(v[i]) == lone_sign) lone = i;
    }
    const int o1 = (lone + 1) % 3, o2 = (lone + 2) % 3;
    Vec q1 = edge_zero(p[lone], v[lone], p[o1], v[o1]);
    Vec q2 = edge_zero(p[lone], v[lone], p[o2], v[o2]);
    const double len = dist(q1, q2);
    if (segs && len > 0.0) segs->emplace_back(std::move(q1), std::move(q2));
    return len;
}

double cell_length_2d(const std::array<Vec, 4>& p, const std::array<double, 4>& v,
                      std::vector<std::pair<Vec, Vec>>* segs) {
    // corners ordered a(0,0) b(1,0) c(1,1) d(0,1); diagonal a-c
    double len = 0.0;
    len += tri_zero_length({p[0], p[1], p[2]}, {v[0], v[1], v[2]}, segs);
    len += tri_zero_length({p[0], p[2], p[3]}, {v[0], v[2], v[3]}, segs);
    return len;
}

// One-shot local refinement for a sign-change-free cell whose corner values
// are small: evaluate the 3x3 subgrid and march the four subcells.
double probe_cell_2d(const Field& u, const std::array<Vec, 4>& p,
                     const std::array<double, 4>& v,
                     std::vector<std::pair<Vec, Vec>>* segs) {
    double delta = 0.0;
    delta = std::max(delta, std::abs(v[0] - v[1]));
    delta = std::max(delta, std::abs(v[1] - v[2]));
    delta = std::max(delta, std::abs(v[2] - v[3]));
    delta = std::max(delta, std::abs(v[3] - v[0]));
    double vmin = std::abs(v[0]);
    for (int i = 1; i < 4; ++i) vmin = std::min(vmin, std::abs(v[i]));
    if (vmin > delta) return 0.0;
    Vec c = {0.5 * (p[0][0] + p[2][0]), 0.5 * (p[0][1] + p[2][1])};
    const double vc = u.value(c);
    if (sgn(vc) == sgn(v[0])) return 0.0;
    // 3x3 subgrid values, subcell marching without further probes
    std::array<std::array<Vec, 3>, 3> gp;
    std::array<std::array<double, 3>, 3> gv;
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            gp[j][i] = {p[0][0] + 0.5 * i * (p[1][0] - p[0][0]),
                        p[0][1] + 0.5 * j * (p[3][1] - p[0][1])};
            gv[j][i] = u.value(gp[j][i]);
        }
    }
    gv[0][0] = v[0];
    gv[0][2] = v[1];
    gv[2][2] = v[2];
    gv[2][0] = v[3];
    double len = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            len += cell_length_2d({gp[j][i], gp[j][i + 1], gp[j + 1][i + 1], gp[j + 1][i]},
                                  {gv[j][i], gv[j][i + 1], gv[j + 1][i + 1], gv[j + 1][i]},
                                  segs);
        }
    }
    return len;
}

MarchChunk march_rows_2d(const Field& u, const Cube& Q, long G, long row_begin,
                         long row_end, bool collect) {
    MarchChunk out;
    const double h = Q.side() / G;
    const double x0 = Q.center[0] - Q.half_side;
    const double y0 = Q.center[1] - Q.half_side;
    std::vector<double> lower(G + 1), upper(G + 1);
    KahanSum total;
    Vec pt(2);
    auto eval_row = [&](long j, std::vector<double>& row) {
        pt[1] = y0 + j * h;
        for (long i = 0; i <= G; ++i) {
            pt[0] = x0 + i * h;
            row[i] = u.value(pt);
            if (row[i] != 0.0) out.any_nonzero = true;
        }
    };
    eval_row(row_begin, lower);
    for (long j = row_begin; j < row_end; ++j) {
        eval_row(j + 1, upper);
        const double ylo = y0 + j * h, yhi = y0 + (j + 1) * h;
        for (long i = 0; i < G; ++i) {
            const double xlo = x0 + i * h, xhi = x0 + (i + 1) * h;
            const std::array<Vec, 4> p = {Vec{xlo, ylo}, Vec{xhi, ylo}, Vec{xhi, yhi},
                                          Vec{xlo, yhi}};
            const std::array<double, 4> v = {lower[i], lower[i + 1], upper[i + 1], upper[i]};
            const bool s0 = sgn(v[0]);
            if (sgn(v[1]) == s0 && sgn(v[2]) == s0 && sgn(v[3]) == s0) {
                total.add(probe_cell_2d(u, p, v, collect ? &out.segments : nullptr));
            } else {
                total.add(cell_length_2d(p, v, collect ? &out.segments : nullptr));
            }
        }
        std::swap(lower, upper);
    }
    out.length = total.value();
    return out;
}

double run_marching_2d(const Field& u, const Cube& Q, int depth, int threads,
                       bool collect, bool* any_nonzero,
                       std::vector<std::pair<Vec, Vec>>* segments) {
    const long G = 1L << depth;
    auto chunks = chunked_map<MarchChunk>(
        G, G, threads, [&](std::size_t, std::size_t b, std::size_t e) {
            return march_rows_2d(u, Q, G, static_cast<long>(b), static_cast<long>(e), collect);
        });
    KahanSum total;
    for (auto& c : chunks) {
        total.add(c.length);
        if (c.any_nonzero) *any_nonzero = true;
        if (collect && segments) {
            for (auto& s : c.segments) segments->push_back(std::move(s));
        }
    }
    return total.value();
}

// ------------------------------------------------------------- marching, 3-D

// Kuhn/Freudenthal decomposition (corner bit i = x, bit 1 = y, bit 2 = z);
// face diagonals are globally consistent across neighbouring cells.
constexpr std::array<std::array<int, 4>, 6> kTets = {{{0, 4, 6, 7},
                                                      {0, 2, 6, 7},
                                                      {0, 4, 5, 7},
                                                      {0, 1, 5, 7},
                                                      {0, 2, 3, 7},
                                                      {0, 1, 3, 7}}};

double triangle_area(const Vec& a, const Vec& b, const Vec& c) {
    const double u1 = b[0] - a[0], u2 = b[1] - a[1], u3 = b[2] - a[2];
    const double v1 = c[0] - a[0], v2 = c[1] - a[1], v3 = c[2] - a[2];
    const double cx = u2 * v3 - u3 * v2;
    const double cy = u3 * v1 - u1 * v3;
    const double cz = u1 * v2 - u2 * v1;
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

double tet_zero_area(const std::array<const Vec*, 4>& p, const std::array<double, 4>& v) {
    int neg[4], pos[4], nn = 0, np = 0;
    for (int i = 0; i < 4; ++i) {
        if (sgn(v[i]))
            pos[np++] = i;
        else
            neg[nn++] = i;
    }
    if (nn == 0 || nn == 4) return 0.0;
    if (nn == 1 || nn == 3) {
        const int lone = (nn == 1) ? neg[0] : pos[0];
        const int* others = (nn == 1) ? pos : neg;
        Vec q0 = edge_zero(*p[lone], v[lone], *p[others[0]], v[others[0]]);
        Vec q1 = edge_zero(*p[lone], v[lone], *p[others[1]], v[others[1]]);
        Vec q2 = edge_zero(*p[lone], v[lone], *p[others[2]], v[others[2]]);
        return triangle_area(q0, q1, q2);
    }
    // 2-2: quad ordered around the zero curve
    Vec q00 = edge_zero(*p[neg[0]], v[neg[0]], *p[pos[0]], v[pos[0]]);
    Vec q01 = edge_zero(*p[neg[0]], v[neg[0]], *p[pos[1]], v[pos[1]]);
    Vec q11 = edge_zero(*p[neg[1]], v[neg[1]], *p[pos[1]], v[pos[1]]);
    Vec q10 = edge_zero(*p[neg[1]], v[neg[1]], *p[pos[0]], v[pos[0]]);
    return triangle_area(q00, q01, q11) + triangle_area(q00, q11, q10);
}

double cell_area_3d(const std::array<Vec, 8>& p, const std::array<double, 8>& v) {
    double area = 0.0;
    for (const auto& tet : kTets) {
        area += tet_zero_area({&p[tet[0]], &p[tet[1]], &p[tet[2]], &p[tet[3]]},
                              {v[tet[0]], v[tet[1]], v[tet[2]], v[tet[3]]});
    }
    return area;
}

double probe_cell_3d(const Field& u, const std::array<Vec, 8>& p,
                     const std::array<double, 8>& v) {
    double delta = 0.0;
    for (int a = 0; a < 8; ++a) {
        for (int b = a + 1; b < 8; ++b) {
            if (__builtin_popcount(a ^ b) == 1) {
                delta = std::max(delta, std::abs(v[a] - v[b]));
            }
        }
    }
    double vmin = std::abs(v[0]);
    for (int i = 1; i < 8; ++i) vmin = std::min(vmin, std::abs(v[i]));
    if (vmin > delta) return 0.0;
    Vec c(3);
    for (int i = 0; i < 3; ++i) c[i] = 0.5 * (p[0][i] + p[7][i]);
    if (sgn(u.value(c)) == sgn(v[0])) return 0.0;
    // refine once: 3x3x3 subgrid, march the 8 subcells
    double area = 0.0;
    std::array<std::array<std::array<double, 3>, 3>, 3> gv;
    auto gpt = [&](int i, int j, int k) {
        return Vec{p[0][0] + 0.5 * i * (p[7][0] - p[0][0]),
                   p[0][1] + 0.5 * j * (p[7][1] - p[0][1]),
                   p[0][2] + 0.5 * k * (p[7][2] - p[0][2])};
    };
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                gv[k][j][i] = u.value(gpt(i, j, k));
            }
        }
    }
    for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) {
            for (int i = 0; i < 2; ++i) {
                std::array<Vec, 8> sp;
                std::array<double, 8> sv;
                for (int m = 0; m < 8; ++m) {
                    const int di = m & 1, dj = (m >> 1) & 1, dk = (m >> 2) & 1;
                    sp[m] = gpt(i + di, j + dj, k + dk);
                    sv[m] = gv[k + dk][j + dj][i + di];
                }
                area += cell_area_3d(sp, sv);
            }
        }
    }
    return area;
}

MarchChunk march_layers_3d(const Field& u, const Cube& Q, long G, long z_begin, long z_end) {
    MarchChunk out;
    const double h = Q.side() / G;
    const Vec lo = {Q.center[0] - Q.half_side, Q.center[1] - Q.half_side,
                    Q.center[2] - Q.half_side};
    const long P = (G + 1) * (G + 1);
    std::vector<double> lower(P), upper(P);
    KahanSum total;
    Vec pt(3);
    auto eval_plane = [&](long k, std::vector<double>& plane) {
        pt[2] = lo[2] + k * h;
        long idx = 0;
        for (long j = 0; j <= G; ++j) {
            pt[1] = lo[1] + j * h;
            for (long i = 0; i <= G; ++i) {
                pt[0] = lo[0] + i * h;
                plane[idx++] = u.value(pt);
            }
        }
        for (long q = 0; q < P; ++q) {
            if (plane[q] != 0.0) {
                out.any_nonzero = true;
                break;
            }
        }
    };
    eval_plane(z_begin, lower);
    for (long k = z_begin; k < z_end; ++k) {
        eval_plane(k + 1, upper);
        const double zlo = lo[2] + k * h, zhi = lo[2] + (k + 1) * h;
        for (long j = 0; j < G; ++j) {
            const double ylo = lo[1] + j * h, yhi = lo[1] + (j + 1) * h;
            for (long i = 0; i < G; ++i) {
                const double xlo = lo[0] + i * h, xhi = lo[0] + (i + 1) * h;
                std::array<Vec, 8> p;
                std::array<double, 8> v;
                for (int m = 0; m < 8; ++m) {
                    const int di = m & 1, dj = (m >> 1) & 1, dk = (m >> 2) & 1;
                    p[m] = {di ? xhi : xlo, dj ? yhi : ylo, dk ? zhi : zlo};
                    const long off = (j + dj) * (G + 1) + (i + di);
                    v[m] = dk ? upper[off] : lower[off];
                }
                const bool s0 = sgn(v[0]);
                bool mixed = false;
                for (int m = 1; m < 8; ++m) {
                    if (sgn(v[m]) != s0) {
                        mixed = true;
                        break;
                    }
                }
                total.add(mixed ? cell_area_3d(p, v) : probe_cell_3d(u, p, v));
            }
        }
        std::swap(lower, upper);
    }
    out.length = total.value();
    return out;
}

double run_marching_3d(const Field& u, const Cube& Q, int depth, int threads,
                       bool* any_nonzero) {
    const long G = 1L << depth;
    auto chunks = chunked_map<MarchChunk>(
        G, G, threads, [&](std::size_t, std::size_t b, std::size_t e) {
            return march_layers_3d(u, Q, G, static_cast<long>(b), static_cast<long>(e));
        });
    KahanSum total;
    for (auto& c : chunks) {
        total.add(c.length);
        if (c.any_nonzero) *any_nonzero = true;
    }
    return total.value();
}

double run_marching(const Field& u, const Cube& Q, int depth, int threads, bool collect,
                    bool* any_nonzero, std::vector<std::pair<Vec, Vec>>* segments) {
    if (u.dim() == 2) return run_marching_2d(u, Q, depth, threads, collect, any_nonzero, segments);
    return run_marching_3d(u, Q, depth, threads, any_nonzero);
}

// ------------------------------------------------------------------- crofton

double unit_ball_volume(int m) {
    if (m == 0) return 1.0;
    return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

struct LineBatch {
    double count_sum = 0.0;
    double count_sq_sum = 0.0;
    bool any_nonzero = false;
};

// Orthonormal basis of the hyperplane orthogonal to omega.
std::vector<Vec> orthobasis(const Vec& omega) {
    const int n = static_cast<int>(omega.size());
    std::vector<Vec> basis;
    for (int axis = 0; axis < n && static_cast<int>(basis.size()) < n - 1; ++axis) {
        Vec v(n, 0.0);
        v[axis] = 1.0;
        double p = dot(v, omega);
        for (int i = 0; i < n; ++i) v[i] -= p * omega[i];
        for (const auto& b : basis) {
            p = dot(v, b);
            for (int i = 0; i < n; ++i) v[i] -= p * b[i];
        }
        const double m = norm(v);
        if (m > 1e-8) {
            for (auto& x : v) x /= m;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

// Count transversal sign changes of u along the segment line cap Q.
long count_crossings(const Field& u, const Cube& Q, const Vec& origin, const Vec& omega,
                     int scan_steps, bool* any_nonzero) {
    const int n = Q.dim();
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double lo = Q.center[i] - Q.half_side - origin[i];
        const double hi = Q.center[i] + Q.half_side - origin[i];
        if (std::abs(omega[i]) < 1e-14) {
            if (lo > 0.0 || hi < 0.0) return 0;
            continue;
        }
        double a = lo / omega[i], b = hi / omega[i];
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
    }
    if (!(t0 < t1)) return 0;
    Vec pt(n);
    auto eval = [&](double t) {
        for (int i = 0; i < n; ++i) pt[i] = origin[i] + t * omega[i];
        const double v = u.value(pt);
        if (v != 0.0) *any_nonzero = true;
        return v;
    };
    long count = 0;
    double prev = eval(t0);
    double tprev = t0;
    for (int k = 1; k <= scan_steps; ++k) {
        const double t = t0 + (t1 - t0) * k / scan_steps;
        const double v = eval(t);
        if (sgn(v) != sgn(prev)) {
            // bisection pins the crossing (tangential contacts are ignored)
            double a = tprev, b = t, va = prev;
            while (b - a > 1e-10) {
                const double m = 0.5 * (a + b);
                const double vm = eval(m);
                if (sgn(vm) == sgn(va)) {
                    a = m;
                    va = vm;
                } else {
                    b = m;
                }
            }
            ++count;
        }
        prev = v;
        tprev = t;
    }
    return count;
}

LineBatch crofton_lines(const Field& u, const Cube& Q, std::uint64_t chunk_seed,
                        std::size_t count, int scan_steps) {
    LineBatch batch;
    Rng rng(chunk_seed);
    const int n = Q.dim();
    const double R = 0.5 * Q.diam();  // circumradius of Q
    for (std::size_t l = 0; l < count; ++l) {
        Vec omega = rng.unit_vector(n);
        const auto basis = orthobasis(omega);
        Vec offset = rng.in_unit_ball(n - 1);
        Vec origin = Q.center;
        for (int b = 0; b < n - 1; ++b) {
            for (int i = 0; i < n; ++i) origin[i] += R * offset[b] * basis[b][i];
        }
        const long c = count_crossings(u, Q, origin, omega, scan_steps, &batch.any_nonzero);
        batch.count_sum += static_cast<double>(c);
        batch.count_sq_sum += static_cast<double>(c) * static_cast<double>(c);
    }
    return batch;
}

struct RawCrofton {
    double mean = 0.0;
    double stderr_mean = 0.0;
    bool any_nonzero = false;
};

RawCrofton run_crofton(const Field& u, const Cube& Q, long lines, std::uint64_t seed,
                       int threads, int scan_steps) {
    const std::size_t n_chunks = 256;
    auto batches = chunked_map<LineBatch>(
        static_cast<std::size_t>(lines), n_chunks, threads,
        [&](std::size_t c, std::size_t b, std::size_t e) {
            return crofton_lines(u, Q, Rng::substream(seed, c), e - b, scan_steps);
        });
    double sum = 0.0, sumsq = 0.0;
    RawCrofton out;
    for (const auto& b : batches) {
        sum += b.count_sum;
        sumsq += b.count_sq_sum;
        out.any_nonzero = out.any_nonzero || b.any_nonzero;
    }
    out.mean = sum / lines;
    const double var = std::max(0.0, sumsq / lines - out.mean * out.mean);
    out.stderr_mean = std::sqrt(var / lines);
    return out;
}

constexpr std::uint64_t kCalibrationSeed = 0xC0FFEEULL;
constexpr long kCalibrationLines = 100000;

// Kinematic constant per dimension, fixed by the hyperplane case u = x_1 on
// [-1,1]^n whose zero set has measure exactly 2^{n-1}.
double kinematic_constant(int n, int threads, int scan_steps) {
    static std::map<int, double> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    Vec a(n, 0.0);
    a[0] = 1.0;
    const auto plane = make_affine(a, 0.0);
    const Cube Q(Vec(n, 0.0), 1.0);
    const auto raw = run_crofton(*plane, Q, kCalibrationLines, kCalibrationSeed, threads,
                                 scan_steps);
    const double R = 0.5 * Q.diam();
    const double disk = unit_ball_volume(n - 1) * std::pow(R, n - 1);
    const double c = std::pow(2.0, n - 1) / (disk * raw.mean);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, c);
    return c;
}

}  // namespace

NodalEstimate nodal_measure_marching(const Field& u, const Cube& Q, int depth, int threads,
                                     bool collect_segments) {
    if (u.dim() > 3) {
        throw std::invalid_argument("nodal_measure_marching: n >= 4 unsupported, use crofton");
    }
    if (Q.dim() != u.dim()) throw std::invalid_argument("nodal_measure_marching: dim mismatch");
    if (depth < 1) throw std::invalid_argument("nodal_measure_marching: need depth >= 1");
    NodalEstimate est;
    est.Q = Q;
    est.method = NodalMethod::marching;
    est.resolution = depth;
    bool any_nonzero = false;
    est.value = run_marching(u, Q, depth, threads, collect_segments, &any_nonzero,
                             &est.segments);
    bool coarse_nonzero = false;
    const double coarse =
        depth > 1 ? run_marching(u, Q, depth - 1, threads, false, &coarse_nonzero, nullptr)
                  : 0.0;
    est.error_indicator = depth > 1 ? std::abs(est.value - coarse) : est.value;
    if (!any_nonzero) {
        est.undefined = true;  // u vanishes identically on the grid
        est.value = 0.0;
    }
    return est;
}

NodalEstimate nodal_measure_crofton(const Field& u, const Cube& Q, long lines,
                                    std::uint64_t seed, int threads, int scan_steps) {
    if (lines < 1000) throw std::invalid_argument("nodal_measure_crofton: need lines >= 1000");
    if (Q.dim() != u.dim()) throw std::invalid_argument("nodal_measure_crofton: dim mismatch");
    NodalEstimate est;
    est.Q = Q;
    est.method = NodalMethod::crofton;
    est.resolution = lines;
    est.seed = seed;
    const int n = Q.dim();
    est.kinematic_constant = kinematic_constant(n, threads, scan_steps);
    const auto raw = run_crofton(u, Q, lines, seed, threads, scan_steps);
    const double R = 0.5 * Q.diam();
    const double disk = unit_ball_volume(n - 1) * std::pow(R, n - 1);
    est.value = est.kinematic_constant * disk * raw.mean;
    est.error_indicator = est.kinematic_constant * disk * raw.stderr_mean;
    if (!raw.any_nonzero) {
        est.undefined = true;
        est.value = 0.0;
    }
    return est;
}

ThvPoint thv_datapoint(const Field& u, const Cube& Q, const ThvConfig& cfg) {
    ThvPoint pt;
    pt.index = doubling_index_cube(u, Q, cfg.grid);
    pt.N = pt.index.N;
    pt.measure = u.dim() <= 3
                     ? nodal_measure_marching(u, Q, cfg.depth, cfg.threads)
                     : nodal_measure_crofton(u, Q, cfg.lines, cfg.seed, cfg.threads);
    pt.density = pt.measure.value / std::pow(Q.diam(), u.dim() - 1);
    return pt;
}

ScalingFit yau_scaling_fit(const std::vector<FieldPtr>& family, const YauConfig& cfg) {
    if (family.size() < 4) {
        throw std::invalid_argument("yau_scaling_fit: need at least 4 family members");
    }
    std::vector<double> lambdas, volumes;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& f = family[i];
        if (!f || !f->meta().eigenvalue) {
            throw std::invalid_argument("yau_scaling_fit: member without eigenvalue");
        }
        const Cube cell = fundamental_cell(*f);
        NodalEstimate est;
        if (cfg.method == NodalMethod::marching && f->dim() <= 3) {
            est = nodal_measure_marching(*f, cell, cfg.depth, cfg.threads);
        } else {
            est = nodal_measure_crofton(*f, cell, cfg.lines, Rng::substream(cfg.seed, i),
                                        cfg.threads);
        }
        lambdas.push_back(*f->meta().eigenvalue);
        volumes.push_back(est.value);
    }
    const double lmin = *std::min_element(lambdas.begin(), lambdas.end());
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    if (!(lmax / lmin >= 8.0)) {
        throw std::invalid_argument("yau_scaling_fit: eigenvalues must span a factor >= 8");
    }
    const auto fit = fit_loglog(lambdas, volumes);
    ScalingFit out;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        out.points.emplace_back(lambdas[i], volumes[i]);
    }
    out.fitted_exponent = fit.slope;
    out.fit_residual = fit.rms_residual;
    return out;
}

}  // namespace nodalab
