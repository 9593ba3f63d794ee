#include "nodalab/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nodalab {

namespace {

using nlohmann::json;

// (re, im) of (x + iy)^k by repeated multiplication.
inline void complex_pow(double x, double y, int k, double& re, double& im) {
    re = 1.0;
    im = 0.0;
    for (int i = 0; i < k; ++i) {
        const double r = re * x - im * y;
        im = re * y + im * x;
        re = r;
    }
}

class HarmonicPoly final : public Field {
public:
    HarmonicPoly(int n, int k, PolyVariant variant)
        : Field(n, FieldKind::harmonic_poly,
                FieldMeta{.degree = k,
                          .eigenvalue = std::nullopt,
                          .beta_exact = (2.0 * k + n - 1.0) / 2.0,
                          .nodal_per_cell = std::nullopt,
                          .harmonic = true}),
          k_(k),
          variant_(variant) {}

    double value(std::span<const double> x) const override {
        double re, im;
        complex_pow(x[0], x[1], k_, re, im);
        return variant_ == PolyVariant::re ? re : im;
    }

    Vec gradient(std::span<const double> x) const override {
        Vec g(dim(), 0.0);
        if (k_ == 0) return g;
        double re, im;
        complex_pow(x[0], x[1], k_ - 1, re, im);
        if (variant_ == PolyVariant::re) {
            g[0] = k_ * re;
            g[1] = -k_ * im;
        } else {
            g[0] = k_ * im;
            g[1] = k_ * re;
        }
        return g;
    }

    json descriptor() const override {
        return {{"kind", "harmonic_poly"},
                {"n", dim()},
                {"k", k_},
                {"variant", variant_ == PolyVariant::re ? "re" : "im"}};
    }

private:
    int k_;
    PolyVariant variant_;
};

class TorusEigen final : public Field {
public:
    TorusEigen(int n, std::vector<int> m, std::vector<Parity> parity, FieldMeta meta)
        : Field(n, FieldKind::torus_eigen, std::move(meta)),
          m_(std::move(m)),
          parity_(std::move(parity)) {}

    double value(std::span<const double> x) const override {
        double p = 1.0;
        for (int j = 0; j < dim(); ++j) p *= factor(j, x[j]);
        return p;
    }

    Vec gradient(std::span<const double> x) const override {
        const int n = dim();
        Vec g(n);
        for (int i = 0; i < n; ++i) {
            double p = dfactor(i, x[i]);
            for (int j = 0; j < n; ++j) {
                if (j != i) p *= factor(j, x[j]);
            }
            g[i] = p;
        }
        return g;
    }

    json descriptor() const override {
        std::string par;
        for (auto p : parity_) par += (p == Parity::sin ? 's' : 'c');
        return {{"kind", "torus_eigen"}, {"n", dim()}, {"m", m_}, {"parity", par}};
    }

    const std::vector<int>& modes() const { return m_; }
    const std::vector<Parity>& parities() const { return parity_; }

private:
    double factor(int j, double xj) const {
        const double a = m_[j] * xj;
        return parity_[j] == Parity::sin ? std::sin(a) : std::cos(a);
    }
    double dfactor(int j, double xj) const {
        const double a = m_[j] * xj;
        return parity_[j] == Parity::sin ? m_[j] * std::cos(a) : -m_[j] * std::sin(a);
    }

    std::vector<int> m_;
    std::vector<Parity> parity_;
};

class LiftedEigen final : public Field {
public:
    explicit LiftedEigen(FieldPtr base)
        : Field(base->dim() + 1, FieldKind::lifted_eigen,
                FieldMeta{.degree = std::nullopt,
                          .eigenvalue = std::nullopt,
                          .beta_exact = std::nullopt,
                          .nodal_per_cell = std::nullopt,
                          .harmonic = true}),
          base_(std::move(base)),
          sqrt_lambda_(std::sqrt(*base_->meta().eigenvalue)) {}

    double value(std::span<const double> x) const override {
        const int nb = dim() - 1;
        return base_->value(x.first(nb)) * std::exp(sqrt_lambda_ * x[nb]);
    }

    Vec gradient(std::span<const double> x) const override {
        const int nb = dim() - 1;
        const double e = std::exp(sqrt_lambda_ * x[nb]);
        Vec g = base_->gradient(x.first(nb));
        g.resize(dim());
        for (int i = 0; i < nb; ++i) g[i] *= e;
        g[nb] = sqrt_lambda_ * base_->value(x.first(nb)) * e;
        return g;
    }

    json descriptor() const override {
        return {{"kind", "lifted_eigen"}, {"base", base_->descriptor()}};
    }

private:
    FieldPtr base_;
    double sqrt_lambda_;
};

class ConstantField final : public Field {
public:
    ConstantField(int n, double c)
        : Field(n, FieldKind::custom,
                FieldMeta{.degree = 0,
                          .eigenvalue = std::nullopt,
                          .beta_exact = (n - 1.0) / 2.0,
                          .nodal_per_cell = std::nullopt,
                          .harmonic = true}),
          c_(c) {}
    double value(std::span<const double>) const override { return c_; }
    Vec gradient(std::span<const double>) const override { return Vec(dim(), 0.0); }
    json descriptor() const override {
        return {{"kind", "constant"}, {"n", dim()}, {"c", c_}};
    }

private:
    double c_;
};

class AffineField final : public Field {
public:
    AffineField(Vec a, double b)
        : Field(static_cast<int>(a.size()), FieldKind::custom,
                FieldMeta{.degree = std::nullopt,
                          .eigenvalue = std::nullopt,
                          .beta_exact = std::nullopt,
                          .nodal_per_cell = std::nullopt,
                          .harmonic = true}),
          a_(std::move(a)),
          b_(b) {}
    double value(std::span<const double> x) const override { return dot(a_, x) + b_; }
    Vec gradient(std::span<const double>) const override { return a_; }
    json descriptor() const override {
        return {{"kind", "affine"}, {"a", a_}, {"b", b_}};
    }

private:
    Vec a_;
    double b_;
};

class SphereQuadric final : public Field {
public:
    SphereQuadric(Vec c, double radius)
        : Field(static_cast<int>(c.size()), FieldKind::custom, FieldMeta{}),
          c_(std::move(c)),
          radius_(radius) {}
    double value(std::span<const double> x) const override {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            const double d = x[i] - c_[i];
            s += d * d;
        }
        return s - radius_ * radius_;
    }
    Vec gradient(std::span<const double> x) const override {
        Vec g(dim());
        for (int i = 0; i < dim(); ++i) g[i] = 2.0 * (x[i] - c_[i]);
        return g;
    }
    json descriptor() const override {
        return {{"kind", "sphere_quadric"}, {"center", c_}, {"radius", radius_}};
    }

private:
    Vec c_;
    double radius_;
};

// sin(kx) sinh(ky)/sinh(k): harmonic, |u| <= 1 on [0,1]^2, Cauchy data on
// {y=0} of size k/sinh(k).
class SinhProduct final : public Field {
public:
    explicit SinhProduct(double k)
        : Field(2, FieldKind::custom,
                FieldMeta{.degree = std::nullopt,
                          .eigenvalue = std::nullopt,
                          .beta_exact = std::nullopt,
                          .nodal_per_cell = std::nullopt,
                          .harmonic = true}),
          k_(k),
          inv_sinh_k_(1.0 / std::sinh(k)) {}
    double value(std::span<const double> x) const override {
        return std::sin(k_ * x[0]) * std::sinh(k_ * x[1]) * inv_sinh_k_;
    }
    Vec gradient(std::span<const double> x) const override {
        return {k_ * std::cos(k_ * x[0]) * std::sinh(k_ * x[1]) * inv_sinh_k_,
                k_ * std::sin(k_ * x[0]) * std::cosh(k_ * x[1]) * inv_sinh_k_};
    }
    json descriptor() const override {
        return {{"kind", "sinh_product"}, {"k", k_}};
    }

private:
    double k_;
    double inv_sinh_k_;
};

class ScaledArgument final : public Field {
public:
    ScaledArgument(FieldPtr base, double s)
        : Field(base->dim(), FieldKind::custom,
                FieldMeta{.degree = base->meta().degree,
                          .eigenvalue = std::nullopt,
                          .beta_exact = base->meta().beta_exact,
                          .nodal_per_cell = std::nullopt,
                          .harmonic = base->meta().harmonic}),
          base_(std::move(base)),
          s_(s) {}
    double value(std::span<const double> x) const override {
        Vec y = scaled(x, s_);
        return base_->value(y);
    }
    Vec gradient(std::span<const double> x) const override {
        Vec y = scaled(x, s_);
        Vec g = base_->gradient(y);
        for (auto& v : g) v *= s_;
        return g;
    }
    json descriptor() const override {
        return {{"kind", "scaled_argument"}, {"base", base_->descriptor()}, {"s", s_}};
    }

private:
    FieldPtr base_;
    double s_;
};

class ScaledValue final : public Field {
public:
    ScaledValue(FieldPtr base, double s)
        : Field(base->dim(), FieldKind::custom,
                FieldMeta{.degree = base->meta().degree,
                          .eigenvalue = base->meta().eigenvalue,
                          .beta_exact = base->meta().beta_exact,
                          .nodal_per_cell = base->meta().nodal_per_cell,
                          .harmonic = base->meta().harmonic}),
          base_(std::move(base)),
          s_(s) {}
    double value(std::span<const double> x) const override { return s_ * base_->value(x); }
    Vec gradient(std::span<const double> x) const override {
        Vec g = base_->gradient(x);
        for (auto& v : g) v *= s_;
        return g;
    }
    json descriptor() const override {
        return {{"kind", "scaled_value"}, {"base", base_->descriptor()}, {"s", s_}};
    }

private:
    FieldPtr base_;
    double s_;
};

}  // namespace

FieldPtr make_harmonic_poly(int n, int k, PolyVariant variant, int max_degree) {
    if (n < 2) throw std::invalid_argument("make_harmonic_poly: need n >= 2");
    if (k < 0) throw std::invalid_argument("make_harmonic_poly: need k >= 0");
    if (k > max_degree) {
        throw std::invalid_argument("make_harmonic_poly: degree above cap (raise max_degree)");
    }
    return std::make_shared<HarmonicPoly>(n, k, variant);
}

FieldPtr make_torus_eigen(int n, const std::vector<int>& m,
                          const std::vector<Parity>& parity) {
    if (n < 1 || static_cast<int>(m.size()) != n) {
        throw std::invalid_argument("make_torus_eigen: m must have n entries");
    }
    std::vector<Parity> par = parity.empty() ? std::vector<Parity>(n, Parity::sin) : parity;
    if (static_cast<int>(par.size()) != n) {
        throw std::invalid_argument("make_torus_eigen: parity must have n entries");
    }
    bool all_zero = true;
    for (int j = 0; j < n; ++j) {
        if (m[j] != 0) all_zero = false;
        if (m[j] == 0 && par[j] == Parity::sin) {
            throw std::invalid_argument("make_torus_eigen: sin axis with m_j = 0 is the zero field");
        }
    }
    if (all_zero) throw std::invalid_argument("make_torus_eigen: m must be nonzero");

    double lambda = 0.0;
    double lines = 0.0;
    for (int j = 0; j < n; ++j) {
        lambda += static_cast<double>(m[j]) * m[j];
        lines += 2.0 * std::abs(m[j]);
    }
    FieldMeta meta;
    meta.eigenvalue = lambda;
    // nodal set is a union of per-axis families of parallel hyperplanes
    meta.nodal_per_cell = lines * std::pow(2.0 * std::numbers::pi, n - 1);
    return std::make_shared<TorusEigen>(n, m, std::move(par), std::move(meta));
}

FieldPtr lift_eigenfunction(const FieldPtr& phi) {
    if (!phi) throw std::invalid_argument("lift_eigenfunction: null field");
    if (!phi->meta().eigenvalue || *phi->meta().eigenvalue <= 0.0) {
        throw std::invalid_argument("lift_eigenfunction: field has no positive eigenvalue");
    }
    return std::make_shared<LiftedEigen>(phi);
}

FieldPtr make_constant(int n, double c) { return std::make_shared<ConstantField>(n, c); }

FieldPtr make_affine(Vec a, double b) {
    if (a.empty()) throw std::invalid_argument("make_affine: empty coefficient vector");
    return std::make_shared<AffineField>(std::move(a), b);
}

FieldPtr make_sphere_quadric(Vec center, double radius) {
    if (center.empty()) throw std::invalid_argument("make_sphere_quadric: empty center");
    return std::make_shared<SphereQuadric>(std::move(center), radius);
}

FieldPtr make_sinh_product(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("make_sinh_product: need k > 0");
    return std::make_shared<SinhProduct>(k);
}

FieldPtr make_scaled_argument(const FieldPtr& base, double s) {
    if (!base) throw std::invalid_argument("make_scaled_argument: null field");
    if (s == 0.0) throw std::invalid_argument("make_scaled_argument: s must be nonzero");
    return std::make_shared<ScaledArgument>(base, s);
}

FieldPtr make_scaled_value(const FieldPtr& base, double s) {
    if (!base) throw std::invalid_argument("make_scaled_value: null field");
    return std::make_shared<ScaledValue>(base, s);
}

double laplacian_residual(const Field& u, std::span<const double> x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("laplacian_residual: need h > 0");
    const int n = u.dim();
    Vec y(x.begin(), x.end());
    const double u0 = u.value(y);
    double lap = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = y[i];
        y[i] = xi + h;
        const double up = u.value(y);
        y[i] = xi - h;
        const double um = u.value(y);
        y[i] = xi;
        lap += (up - 2.0 * u0 + um) / (h * h);
    }
    return lap;
}

FieldPtr field_from_descriptor(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "harmonic_poly") {
        const std::string v = j.value("variant", "re");
        return make_harmonic_poly(j.at("n").get<int>(), j.at("k").get<int>(),
                                  v == "im" ? PolyVariant::im : PolyVariant::re,
                                  j.value("max_degree", 16));
    }
    if (kind == "torus_eigen") {
        const auto m = j.at("m").get<std::vector<int>>();
        std::vector<Parity> par;
        if (j.contains("parity")) {
            for (char c : j.at("parity").get<std::string>()) {
                par.push_back(c == 'c' ? Parity::cos : Parity::sin);
            }
        }
        return make_torus_eigen(j.at("n").get<int>(), m, par);
    }
    if (kind == "lifted_eigen") return lift_eigenfunction(field_from_descriptor(j.at("base")));
    if (kind == "constant") return make_constant(j.at("n").get<int>(), j.at("c").get<double>());
    if (kind == "affine") return make_affine(j.at("a").get<Vec>(), j.at("b").get<double>());
    if (kind == "sphere_quadric") {
        return make_sphere_quadric(j.at("center").get<Vec>(), j.at("radius").get<double>());
    }
    if (kind == "sinh_product") return make_sinh_product(j.at("k").get<double>());
    if (kind == "scaled_argument") {
        return make_scaled_argument(field_from_descriptor(j.at("base")), j.at("s").get<double>());
    }
    if (kind == "scaled_value") {
        return make_scaled_value(field_from_descriptor(j.at("base")), j.at("s").get<double>());
    }
    throw std::invalid_argument("field_from_descriptor: unknown kind '" + kind + "'");
}

Cube fundamental_cell(const Field& torus_field) {
    const auto* te = dynamic_cast<const TorusEigen*>(&torus_field);
    if (!te) throw std::invalid_argument("fundamental_cell: not a torus eigenfunction");
    const int n = te->dim();
    Vec center(n);
    for (int j = 0; j < n; ++j) {
        const double offset = te->parities()[j] == Parity::sin
                                  ? std::numbers::pi / (2.0 * std::abs(te->modes()[j]))
                                  : 0.0;
        // the extra 2pi/3 keeps nodal hyperplanes off the dyadic marching
        // grids at every depth (phase 1/3 or 2/3 of a cell)
        center[j] = offset + 2.0 * std::numbers::pi / 3.0 + std::numbers::pi;
    }
    return Cube(center, std::numbers::pi);
}

const std::vector<ZooEntry>& standard_zoo() {
    static const std::vector<ZooEntry> zoo = [] {
        std::vector<ZooEntry> z;
        auto cube2 = Cube(Vec{0.0, 0.0}, 1.0);
        auto cube3 = Cube(Vec{0.0, 0.0, 0.0}, 1.0);
        for (int k : {0, 1, 2, 6, 10}) {
            z.push_back({"poly2_k" + std::to_string(k), make_harmonic_poly(2, k), cube2,
                         Vec{0.0, 0.0}, 0.15});
        }
        for (int k : {1, 3, 8}) {
            z.push_back({"poly3_k" + std::to_string(k), make_harmonic_poly(3, k), cube3,
                         Vec{0.0, 0.0, 0.0}, 0.15});
        }
        auto add_torus = [&](const std::string& name, int n, std::vector<int> m,
                             std::vector<Parity> par) {
            auto f = make_torus_eigen(n, m, par);
            const Cube cell = fundamental_cell(*f);
            z.push_back({name, f, cell, cell.center, 0.2});
        };
        add_torus("torus2_m11", 2, {1, 1}, {});
        add_torus("torus2_m23", 2, {2, 3}, {});
        add_torus("torus2_m34_sc", 2, {3, 4}, {Parity::sin, Parity::cos});
        add_torus("torus3_m111", 3, {1, 1, 1}, {});
        add_torus("torus3_m222", 3, {2, 2, 2}, {});
        {
            auto base = make_torus_eigen(2, {1, 1});
            auto lift = lift_eigenfunction(base);
            // generic cube around a point of the nodal plane x = pi
            z.push_back({"lift_torus2_m11", lift, Cube(Vec{2.6, 2.0, 0.0}, 1.0),
                         Vec{std::numbers::pi, 1.0, 0.0}, 0.05});
        }
        return z;
    }();
    return zoo;
}

}  // namespace nodalab
