#include "nodalab/smallness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "nodalab/stats.hpp"

namespace nodalab {

namespace {

// Derivative-free sup of f over an axis-aligned face: lattice on the face
// coordinates, then coordinate pattern search with an adaptive step.
double face_sup(const Face& F, int lattice_per_axis,
                const std::function<double(const Vec&)>& f, Vec* witness) {
    const int n = F.cube.dim();
    const double pinned = F.coordinate();
    std::vector<int> free_axes;
    for (int i = 0; i < n; ++i) {
        if (i != F.axis) free_axes.push_back(i);
    }
    const int L = std::max(3, lattice_per_axis);
    const int m = static_cast<int>(free_axes.size());

    Vec best_x;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(m, 0);
    Vec x(n);
    x[F.axis] = pinned;
    for (;;) {
        for (int j = 0; j < m; ++j) {
            const int a = free_axes[j];
            x[a] = F.cube.center[a] - F.cube.half_side + idx[j] * (F.cube.side() / (L - 1));
        }
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
        int j = 0;
        for (; j < m; ++j) {
            if (++idx[j] < L) break;
            idx[j] = 0;
        }
        if (j == m) break;
    }

    double step = F.cube.side() / (L - 1);
    Vec y = best_x;
    while (step > 1e-13 * F.cube.side()) {
        bool improved = false;
        for (int j = 0; j < m; ++j) {
            const int a = free_axes[j];
            for (double s : {step, -step}) {
                Vec cand = y;
                cand[a] = std::clamp(y[a] + s, F.cube.center[a] - F.cube.half_side,
                                     F.cube.center[a] + F.cube.half_side);
                const double v = f(cand);
                if (v > best) {
                    best = v;
                    y = std::move(cand);
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    if (witness) *witness = y;
    return best;
}

}  // namespace

CauchyData cauchy_data_on_face(const Field& u, const Face& F, int lattice_per_axis) {
    if (F.axis < 0 || F.axis >= F.cube.dim()) {
        throw std::invalid_argument("cauchy_data_on_face: axis out of range");
    }
    if (F.side != -1 && F.side != 1) {
        throw std::invalid_argument("cauchy_data_on_face: side must be -1 or +1");
    }
    if (u.dim() != F.cube.dim()) {
        throw std::invalid_argument("cauchy_data_on_face: dimension mismatch");
    }
    CauchyData data;
    data.sup_u = face_sup(F, lattice_per_axis,
                          [&](const Vec& x) { return std::abs(u.value(x)); },
                          &data.witness_u);
    data.sup_r_grad = F.cube.side() *
                      face_sup(F, lattice_per_axis,
                               [&](const Vec& x) { return norm(u.gradient(x)); },
                               &data.witness_grad);
    return data;
}

SmallnessReport smallness_experiment(const std::vector<std::pair<double, FieldPtr>>& family,
                                     const Cube& q, const Face& face,
                                     const SupOptions& opt) {
    SmallnessReport rep;
    rep.q = q;
    rep.face = face;
    const Cube half = q.scaled(0.5);
    for (const auto& [label, field] : family) {
        if (!field || field->dim() != q.dim()) {
            throw std::invalid_argument("smallness_experiment: member dimension mismatch");
        }
        SmallnessSample s;
        s.label = label;
        const double sup_q = sup_norm(*field, q, opt).value;
        if (sup_q < 1e-300) {
            s.excluded = true;  // the zero member
            rep.samples.push_back(s);
            continue;
        }
        const auto cauchy = cauchy_data_on_face(*field, face);
        s.eps = std::max(cauchy.sup_u, cauchy.sup_r_grad) / sup_q;
        s.sup_half = sup_norm(*field, half, opt).value / sup_q;
        if (s.eps <= 0.0) s.excluded = true;
        rep.samples.push_back(s);
    }
    std::stable_sort(rep.samples.begin(), rep.samples.end(),
                     [](const SmallnessSample& a, const SmallnessSample& b) {
                         return a.eps > b.eps;
                     });
    std::vector<double> eps, sup;
    for (const auto& s : rep.samples) {
        if (!s.excluded && s.sup_half > 0.0) {
            eps.push_back(s.eps);
            sup.push_back(s.sup_half);
        }
    }
    if (eps.size() < 4) {
        throw std::invalid_argument("smallness_experiment: need at least 4 usable members");
    }
    const auto fit = fit_loglog(eps, sup);
    rep.fitted_alpha = fit.slope;
    rep.fitted_C = std::exp(fit.intercept);
    double env = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        env = std::max(env, sup[i] / std::pow(eps[i], rep.fitted_alpha));
    }
    rep.envelope_C = env;
    return rep;
}

std::vector<std::pair<double, FieldPtr>> make_sinh_family(const std::vector<double>& ks) {
    std::vector<std::pair<double, FieldPtr>> family;
    family.reserve(ks.size());
    for (double k : ks) family.emplace_back(k, make_sinh_product(k));
    return family;
}

BoundCheck smallness_bound_check(const SmallnessReport& report, double C_candidate,
                                 double alpha_candidate) {
    if (report.samples.empty()) {
        throw std::invalid_argument("smallness_bound_check: empty report");
    }
    BoundCheck check;
    check.all_nonnegative = true;
    for (const auto& s : report.samples) {
        if (s.excluded) continue;
        const double slack = C_candidate * std::pow(s.eps, alpha_candidate) - s.sup_half;
        check.slacks.push_back(slack);
        if (slack < 0.0) check.all_nonnegative = false;
    }
    return check;
}

}  // namespace nodalab
