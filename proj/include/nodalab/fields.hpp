// Library of explicitly known harmonic functions and Laplace eigenfunctions
// on flat geometries, with closed-form gradients and exact ground-truth
// metadata. Fields are immutable after construction and safe to share.
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodalab/geom.hpp"
#include "nodalab/vec.hpp"

namespace nodalab {

enum class FieldKind { harmonic_poly, torus_eigen, lifted_eigen, custom };

enum class Parity { sin, cos };

struct FieldMeta {
    std::optional<int> degree;              // homogeneous degree k
    std::optional<double> eigenvalue;       // lambda with -Delta u = lambda u
    std::optional<double> beta_exact;       // exact constant frequency, when known
    std::optional<double> nodal_per_cell;   // exact H^{n-1} per fundamental domain
    bool harmonic = false;                  // Delta u = 0 identically
};

class Field {
public:
    virtual ~Field() = default;

    int dim() const { return n_; }
    FieldKind kind() const { return kind_; }
    const FieldMeta& meta() const { return meta_; }

    virtual double value(std::span<const double> x) const = 0;
    virtual Vec gradient(std::span<const double> x) const = 0;

    // Lossless kind+parameters descriptor; field_from_descriptor inverts it.
    virtual nlohmann::json descriptor() const = 0;

protected:
    Field(int n, FieldKind kind, FieldMeta meta)
        : n_(n), kind_(kind), meta_(std::move(meta)) {}

private:
    int n_;
    FieldKind kind_;
    FieldMeta meta_;
};

using FieldPtr = std::shared_ptr<const Field>;

enum class PolyVariant { re, im };

// u(x) = Re or Im (x_1 + i x_2)^k, harmonic in R^n. Degrees above the cap are
// rejected to keep 2^N ratios inside double range.
FieldPtr make_harmonic_poly(int n, int k, PolyVariant variant = PolyVariant::re,
                            int max_degree = 16);

// u(x) = prod_j trig_j(m_j x_j) on the 2pi-periodic torus, eigenvalue
// lambda = sum m_j^2. parity defaults to all-sin.
FieldPtr make_torus_eigen(int n, const std::vector<int>& m,
                          const std::vector<Parity>& parity = {});

// u(x,t) = phi(x) e^{sqrt(lambda) t}, harmonic on the product with R.
FieldPtr lift_eigenfunction(const FieldPtr& phi);

FieldPtr make_constant(int n, double c);
FieldPtr make_affine(Vec a, double b);                 // u = <a,x> + b
FieldPtr make_sphere_quadric(Vec center, double radius);  // u = |x-c|^2 - radius^2
FieldPtr make_sinh_product(double k);  // sin(kx) sinh(ky)/sinh(k), harmonic on R^2
FieldPtr make_scaled_argument(const FieldPtr& base, double s);  // u(s x)
FieldPtr make_scaled_value(const FieldPtr& base, double s);     // s * u(x)

// Second-order central-difference Laplacian at x.
double laplacian_residual(const Field& u, std::span<const double> x, double h);

FieldPtr field_from_descriptor(const nlohmann::json& j);

// One period cell of a torus eigenfunction, offset per axis so that no nodal
// hyperplane lies on the cell boundary (sin axes are shifted by pi/(2m_j)).
Cube fundamental_cell(const Field& torus_field);

struct ZooEntry {
    std::string name;
    FieldPtr field;
    Cube nodal_cube;   // domain used for nodal-measure cross checks
    Vec growth_center; // base point for frequency / doubling checks
    double growth_rho = 0.1;
};

// The fixed battery of fields with exactly known ground truths used across
// property tests and the acceptance suite (n = 2 and 3 only).
const std::vector<ZooEntry>& standard_zoo();

}  // namespace nodalab
