// Propagation of smallness of Cauchy data: measure how small boundary data on
// a face forces the function to be on the concentric half-cube, and fit the
// exponent in sup_{q/2}|u| <= C eps^alpha over explicit harmonic families.
#pragma once

#include <utility>
#include <vector>

#include "nodalab/fields.hpp"
#include "nodalab/geom.hpp"
#include "nodalab/growth.hpp"

namespace nodalab {

struct Face {
    Cube cube;
    int axis = 0;
    int side = -1;  // -1 lower face, +1 upper face

    double coordinate() const {
        return cube.center[axis] + side * cube.half_side;
    }
};

struct CauchyData {
    double sup_u = 0.0;       // sup |u| on the face
    double sup_r_grad = 0.0;  // side length * sup |grad u| on the face
    Vec witness_u;
    Vec witness_grad;
};

// Lattice plus pattern-search sup of |u| and r|grad u| on an axis-aligned
// cube face.
CauchyData cauchy_data_on_face(const Field& u, const Face& F, int lattice_per_axis = 129);

struct SmallnessSample {
    double label = 0.0;     // family parameter (k)
    double eps = 0.0;       // max of the two normalized Cauchy quantities
    double sup_half = 0.0;  // normalized sup over the concentric half-cube
    bool excluded = false;  // eps == 0 (degenerate member)
};

struct SmallnessReport {
    Cube q;
    Face face;
    std::vector<SmallnessSample> samples;  // sorted by eps, decreasing
    double fitted_alpha = 0.0;
    double fitted_C = 0.0;    // exp(intercept) of the log-log fit
    double envelope_C = 0.0;  // max sup_half / eps^alpha over the samples
};

// Normalizes each member to sup_q |u| = 1, takes eps = max(sup_F |u|,
// r sup_F |grad u|), measures sup over q/2, and fits log sup vs log eps.
// Members with eps = 0 are excluded with a flag; at least 4 usable members
// are required.
SmallnessReport smallness_experiment(const std::vector<std::pair<double, FieldPtr>>& family,
                                     const Cube& q, const Face& face,
                                     const SupOptions& opt = {});

// sin(kx) sinh(ky)/sinh(k) members for the given k values.
std::vector<std::pair<double, FieldPtr>> make_sinh_family(const std::vector<double>& ks);

struct BoundCheck {
    std::vector<double> slacks;  // C eps_i^alpha - sup_i per included sample
    bool all_nonnegative = false;
};

BoundCheck smallness_bound_check(const SmallnessReport& report, double C_candidate,
                                 double alpha_candidate);

}  // namespace nodalab
