#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nodalab/rng.hpp"
#include "nodalab/simplexcov.hpp"

using namespace nodalab;

namespace {

Simplex equilateral(double side = 1.0) {
    const double h = side / std::sqrt(3.0);
    std::vector<Vec> v;
    for (int i = 0; i < 3; ++i) {
        const double a = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * i / 3.0;
        v.push_back({h * std::cos(a), h * std::sin(a)});
    }
    return Simplex(v);
}

// Largest enlargement for the equilateral triangle at rho = 2 diam(S): the
// worst direction bisects two vertices, and tau = 1 + c1 solves
// 4 tau^2 - 2 (h/d) tau + (h/d)^2 - 4 = 0 with h = d/sqrt(3).
double equilateral_c1_oracle() {
    const double h = 1.0 / std::sqrt(3.0);
    return (2.0 * h + std::sqrt(64.0 - 12.0 * h * h)) / 8.0 - 1.0;
}

Simplex random_wide_simplex(Rng& rng, double a_floor) {
    for (;;) {
        std::vector<Vec> v;
        for (int i = 0; i < 3; ++i) v.push_back({rng.uniform(), rng.uniform()});
        Simplex S(v);
        const auto m = simplex_metrics(S, 512);
        if (!m.degenerate && m.relative_width >= a_floor) return S;
    }
}

}  // namespace

TEST_CASE("covering check on the equilateral triangle") {
    const Simplex S = equilateral();
    const auto ok = covering_check(S, 2.0, 0.1);
    CHECK(ok.holds);
    CHECK(ok.margin > 0.0);
    CHECK(ok.interior_ok);

    const auto fail = covering_check(S, 2.0, 10.0);
    CHECK(!fail.holds);

    const Simplex degenerate({Vec{0.0, 0.0}, Vec{1.0, 1.0}, Vec{2.0, 2.0}});
    CHECK_THROWS_AS(covering_check(degenerate, 2.0, 0.1), std::invalid_argument);
}

TEST_CASE("maximal c1 matches the closed-form quadratic oracle") {
    const Simplex S = equilateral();
    const double c1 = max_covering_c1(S, 2.0, 1e-6);
    CHECK(c1 == doctest::Approx(equilateral_c1_oracle()).epsilon(1e-4));
}

TEST_CASE("the covering also holds at K = 2/a with some positive c1") {
    const Simplex S = equilateral();
    const double a = simplex_metrics(S).relative_width;
    const double c1 = max_covering_c1(S, 2.0 / a, 1e-5);
    CHECK(c1 > 0.0);
}

TEST_CASE("covering check is monotone in c1") {
    Rng rng(314);
    for (int trial = 0; trial < 40; ++trial) {
        const Simplex S = random_wide_simplex(rng, 0.3);
        bool prev_holds = true;
        for (double c1 : {0.02, 0.05, 0.1, 0.2, 0.5}) {
            const bool holds = covering_check(S, 2.0, c1, 1024).holds;
            if (!prev_holds) CHECK(!holds);
            prev_holds = holds;
        }
    }
}

TEST_CASE("maximal passing c1 is non-decreasing in K") {
    Rng rng(2718);
    for (int trial = 0; trial < 8; ++trial) {
        const Simplex S = random_wide_simplex(rng, 0.3);
        double prev = -1.0;
        for (double K : {2.0, 3.0, 5.0, 8.0}) {
            const double c1 = max_covering_c1(S, K, 1e-4, 1024);
            CHECK(c1 >= prev - 2e-4);
            prev = c1;
        }
    }
}

TEST_CASE("covering constants battery") {
    const auto wide = covering_constants(0.5, 2, 24, /*seed=*/5, 1024);
    REQUIRE(!wide.a_too_large);
    CHECK(wide.K >= 2.0 / 0.5 - 1e-12);
    CHECK(wide.c1 > 0.0);
    CHECK(wide.certified_margin >= 0.0);

    // degenerating simplices force smaller c1 and larger K
    const auto thin = covering_constants(0.01, 2, 24, 5, 1024);
    REQUIRE(!thin.a_too_large);
    CHECK(thin.c1 < wide.c1);
    CHECK(thin.K > wide.K);

    // an unreachable width floor is flagged rather than looping forever
    const auto impossible = covering_constants(0.999, 2, 4, 5, 512);
    CHECK(impossible.a_too_large);
}

TEST_CASE("covering constants reduce to the covering check on a single shape") {
    const Simplex S = equilateral();
    const auto cc = covering_constants(0.5, 2, 1, 5, 4096, {S});
    REQUIRE(!cc.a_too_large);
    // the K grid starts at max(2, 2/a) = 4 for a = 0.5
    CHECK(cc.c1 == doctest::Approx(max_covering_c1(S, cc.K, 1e-4)).epsilon(2e-4));
}

TEST_CASE("delta_of_t is the exact minimal enlargement") {
    // place a vertex at distance |x_i - x0| = rho from the barycenter
    const Simplex S = equilateral(std::sqrt(3.0));  // circumradius 1
    const double rho = 1.0;
    CHECK(delta_of_t(S, 0, rho, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    // doubling t halves delta exactly
    const double d1 = delta_of_t(S, 1, 0.7, 3.0);
    const double d2 = delta_of_t(S, 1, 0.7, 6.0);
    CHECK(d1 == doctest::Approx(2.0 * d2).epsilon(1e-15));

    // containment of B(x_i, rho t) in B(x0, rho t (1+delta)): no violation at
    // 1000 boundary points, and the ray witness shows minimality
    const double t = 2.0;
    const double delta = delta_of_t(S, 0, rho, t);
    const Vec x0 = S.barycenter();
    const Vec xi = S.vertices[0];
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        const Vec d = rng.unit_vector(2);
        const Vec y{xi[0] + rho * t * d[0], xi[1] + rho * t * d[1]};
        CHECK(dist(y, x0) <= rho * t * (1.0 + delta) + 1e-12);
    }
    Vec ray = sub(xi, x0);
    normalize_inplace(ray);
    const Vec witness{xi[0] + rho * t * ray[0], xi[1] + rho * t * ray[1]};
    CHECK(dist(witness, x0) == doctest::Approx(rho * t * (1.0 + delta)).epsilon(1e-12));
    CHECK(dist(witness, x0) > rho * t * (1.0 + delta * (1.0 - 1e-6)));

    CHECK_THROWS_AS(delta_of_t(S, 5, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(delta_of_t(S, 0, 0.0, 2.0), std::invalid_argument);
}
