// Acceptance battery: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodalab/census.hpp"
#include "nodalab/fields.hpp"
#include "nodalab/growth.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/rng.hpp"
#include "nodalab/runner.hpp"
#include "nodalab/simplexcov.hpp"
#include "nodalab/smallness.hpp"
#include "nodalab/stats.hpp"

using namespace nodalab;
namespace fs = std::filesystem;

namespace {

struct Harness {
    int failures = 0;

    void criterion(int id, const std::string& name,
                   const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s (%s; %.1f s)\n", ok ? "PASS" : "FAIL", id,
                    name.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

double max_abs(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    Harness h;
    const int threads = 4;

    // 1. Frequency exactness: beta = (2k+n-1)/2 within 1e-6, under 10 s.
    h.criterion(1, "frequency exactness on harmonic polynomials", [&](std::string& detail) {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int n : {2, 3}) {
            for (int k = 0; k <= 10; ++k) {
                const auto u = make_harmonic_poly(n, k);
                for (double r : {0.25, 0.5, 1.0}) {
                    const double beta = frequency_beta(*u, Vec(n, 0.0), r);
                    worst = std::max(worst, std::abs(beta - (2.0 * k + n - 1) / 2.0));
                }
            }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char buf[128];
        std::snprintf(buf, sizeof(buf), "max |beta - exact| = %.2e, runtime %.1f s", worst,
                      secs);
        detail = buf;
        return worst < 1e-6 && secs < 10.0;
    });

    // 2. Doubling exactness: N(0, r) = k within 1e-9; cube index >= k with the
    //    witness at the origin.
    h.criterion(2, "doubling exactness on harmonic polynomials", [&](std::string& detail) {
        double worst = 0.0;
        bool witness_ok = true;
        for (int n : {2, 3}) {
            for (int k = 0; k <= 10; ++k) {
                const auto u = make_harmonic_poly(n, k);
                if (k >= 1) {
                    for (double r : {0.25, 0.5, 1.0}) {
                        const double N = doubling_index_ball(*u, Vec(n, 0.0), r).N;
                        worst = std::max(worst, std::abs(N - k));
                    }
                    CubeIndexGrid grid{3, 6, 1.0 / 64.0};
                    const auto rep = doubling_index_cube(*u, Cube(Vec(n, 0.0), 1.0), grid);
                    if (!(rep.N >= k - 1e-6)) witness_ok = false;
                    if (norm(rep.argmax_x) > 1e-9) witness_ok = false;
                } else {
                    const double N = doubling_index_ball(*u, Vec(n, 0.0), 0.5).N;
                    worst = std::max(worst, std::abs(N));
                }
            }
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "max |N - k| = %.2e, witnesses at origin: %s", worst,
                      witness_ok ? "yes" : "no");
        detail = buf;
        return worst < 1e-9 && witness_ok;
    });

    // 3. Log-integral identity across the zoo, r in [0.1, 1].
    h.criterion(3, "log-integral identity on the zoo", [&](std::string& detail) {
        double worst = 0.0;
        for (const auto& entry : standard_zoo()) {
            for (auto [r1, r2] : {std::pair{0.1, 1.0}, std::pair{0.1, 0.4}, std::pair{0.4, 1.0}}) {
                const double res =
                    check_log_integral(*entry.field, entry.growth_center, r1, r2).residual;
                worst = std::max(worst, res);
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max residual = %.2e", worst);
        detail = buf;
        return worst < 1e-6;
    });

    // 4. Growth sandwich at eps = 0.25, t in {3, 4, 8}, fields with N >= 4.
    h.criterion(4, "growth sandwich slack", [&](std::string& detail) {
        int active = 0, violations = 0;
        double min_slack = 1e300;
        for (const auto& entry : standard_zoo()) {
            for (double rho : {entry.growth_rho, 2.0 * entry.growth_rho}) {
                for (double t : {3.0, 4.0, 8.0}) {
                    SandwichReport rep;
                    try {
                        rep = check_growth_sandwich(*entry.field, entry.growth_center, rho,
                                                    t, 0.25, 4.0);
                    } catch (const degenerate_field_error&) {
                        continue;
                    }
                    if (rep.below_floor) continue;  // N < 4
                    ++active;
                    min_slack = std::min({min_slack, rep.slack_lower, rep.slack_upper});
                    if (rep.slack_lower < -1e-9 || rep.slack_upper < -1e-9) ++violations;
                }
            }
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%d active checks, min slack = %.3f, violations = %d",
                      active, min_slack, violations);
        detail = buf;
        return active > 0 && violations == 0;
    });

    // 5. Nodal exactness and cross-method agreement.
    h.criterion(5, "nodal measure exactness", [&](std::string& detail) {
        bool ok = true;
        std::string parts;

        const auto circ = make_sphere_quadric(Vec{0.0, 0.0}, 0.5);
        const Cube Q2(Vec{0.0, 0.0}, 1.0);
        const auto circle = nodal_measure_marching(*circ, Q2, 8, threads);
        const double circle_err = std::abs(circle.value - std::numbers::pi) / std::numbers::pi;
        ok = ok && circle_err < 0.005;

        const auto tor4 = make_torus_eigen(2, {4, 4});
        const Cube cell4 = fundamental_cell(*tor4);
        const double expect4 = 32.0 * std::numbers::pi;
        const auto march4 = nodal_measure_marching(*tor4, cell4, 9, threads);
        const double march_err = std::abs(march4.value - expect4) / expect4;
        ok = ok && march_err < 0.01;
        const auto croft4 = nodal_measure_crofton(*tor4, cell4, 100000, 20240917, threads);
        const double croft_err = std::abs(croft4.value - expect4) / expect4;
        ok = ok && croft_err < 0.02;

        int gaps = 0;
        for (const auto& entry : standard_zoo()) {
            const int depth = entry.field->dim() == 2 ? 8 : 6;
            const long lines = entry.field->dim() == 2 ? 60000 : 40000;
            const auto m = nodal_measure_marching(*entry.field, entry.nodal_cube, depth,
                                                  threads);
            const auto c = nodal_measure_crofton(*entry.field, entry.nodal_cube, lines,
                                                 1000 + gaps, threads);
            if (std::abs(m.value - c.value) >
                3.0 * (m.error_indicator + c.error_indicator) + 1e-12) {
                ok = false;
            }
            ++gaps;
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "circle %.2f%%, torus march %.2f%%, crofton %.2f%%, %d cross-checks",
                      100 * circle_err, 100 * march_err, 100 * croft_err, gaps);
        detail = std::string(buf);
        return ok;
    });

    // 6. Yau scaling exponents, under 2 minutes.
    h.criterion(6, "yau scaling fit", [&](std::string& detail) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<FieldPtr> fam2;
        for (int m : {1, 2, 4, 8}) fam2.push_back(make_torus_eigen(2, {m, m}));
        YauConfig cfg2;
        cfg2.method = NodalMethod::marching;
        cfg2.depth = 8;
        cfg2.threads = threads;
        const auto fit2 = yau_scaling_fit(fam2, cfg2);

        std::vector<FieldPtr> fam3;
        for (int m : {1, 2, 3, 4}) fam3.push_back(make_torus_eigen(3, {m, m, m}));
        YauConfig cfg3;
        cfg3.method = NodalMethod::crofton;
        cfg3.lines = 30000;
        cfg3.seed = 7;
        cfg3.threads = threads;
        const auto fit3 = yau_scaling_fit(fam3, cfg3);

        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char buf[128];
        std::snprintf(buf, sizeof(buf), "n=2: %.4f, n=3: %.4f, runtime %.0f s",
                      fit2.fitted_exponent, fit3.fitted_exponent, secs);
        detail = buf;
        return std::abs(fit2.fitted_exponent - 0.5) < 0.02 &&
               std::abs(fit3.fitted_exponent - 0.5) < 0.05 && secs < 120.0;
    });

    // 7. Subcube census: bad count < A^{n-1}/2 for every run, no violations.
    h.criterion(7, "subcube census bound", [&](std::string& detail) {
        int runs = 0, violations = 0;
        long worst_bad = 0;
        for (int k = 6; k <= 12; ++k) {
            const auto u = make_harmonic_poly(2, k);
            for (int A : {9, 27}) {
                const auto rep = subcube_census(*u, Cube(Vec{0.0, 0.0}, 1.0), A, 0.5, 1.0);
                ++runs;
                worst_bad = std::max(worst_bad, rep.bad_count);
                if (!rep.verdict) ++violations;  // a witness would be in rep.witnesses
            }
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%d runs, max bad count = %ld, violations = %d", runs,
                      worst_bad, violations);
        detail = buf;
        return violations == 0;
    });

    // 8. Recursion model: exact alpha, majorant at 64 levels, tree bounds for
    //    100 seeds.
    h.criterion(8, "bad-N recursion model", [&](std::string& detail) {
        const auto model = recursion_exponent(2, 1.0, 1.0, 64);
        bool ok = model.alpha == 3.0 && model.majorant_ok;
        int seed_failures = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto rep = simulate_bad_cube_tree(2, 3, 12, 2, seed);
            if (!rep.K_ok || !rep.M_ok) ++seed_failures;
        }
        ok = ok && seed_failures == 0;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "alpha = %.17g, majorant %s, seed failures = %d",
                      model.alpha, model.majorant_ok ? "ok" : "violated", seed_failures);
        detail = buf;
        return ok;
    });

    // 9. Covering lemma: equilateral bisection against the quadratic oracle,
    //    monotonicity over 1000 random simplices with w >= 0.3.
    h.criterion(9, "covering lemma constants", [&](std::string& detail) {
        std::vector<Vec> verts;
        const double hh = 1.0 / std::sqrt(3.0);
        for (int i = 0; i < 3; ++i) {
            const double a = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * i / 3.0;
            verts.push_back({hh * std::cos(a), hh * std::sin(a)});
        }
        const Simplex equi(verts);
        const double c1 = max_covering_c1(equi, 2.0, 1e-6);
        const double oracle = (2.0 * hh + std::sqrt(64.0 - 12.0 * hh * hh)) / 8.0 - 1.0;
        const double gap = std::abs(c1 - oracle);

        Rng rng(515);
        int monotone_failures = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            Simplex S({Vec{0, 0}, Vec{0, 0}, Vec{0, 0}});
            for (;;) {
                std::vector<Vec> v;
                for (int i = 0; i < 3; ++i) v.push_back({rng.uniform(), rng.uniform()});
                S = Simplex(v);
                const auto m = simplex_metrics(S, 256);
                if (!m.degenerate && m.relative_width >= 0.3) break;
            }
            bool prev = true;
            for (double c : {0.02, 0.05, 0.1, 0.15, 0.3}) {
                const bool holds = covering_check(S, 2.0, c, 512).holds;
                if (holds && !prev) ++monotone_failures;
                prev = holds;
            }
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "|c1 - oracle| = %.2e, monotone failures = %d", gap,
                      monotone_failures);
        detail = buf;
        return gap < 1e-4 && monotone_failures == 0;
    });

    // 10. Smallness experiment: fitted exponent near the 1/4 asymptotic of
    //     the sinh family, and all-nonnegative envelope slack.
    h.criterion(10, "propagation-of-smallness exponent", [&](std::string& detail) {
        const Cube q(Vec{0.5, 0.5}, 0.5);
        const Face face{q, 1, -1};
        const std::vector<double> ks = {8, 12, 16, 20, 24, 28, 32};
        const auto rep = smallness_experiment(make_sinh_family(ks), q, face);
        const auto chk = smallness_bound_check(rep, rep.envelope_C, rep.fitted_alpha);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "alpha = %.4f (asymptotic 0.25), envelope slack %s",
                      rep.fitted_alpha, chk.all_nonnegative ? "ok" : "negative");
        detail = buf;
        return std::abs(rep.fitted_alpha - 0.25) <= 0.03 && chk.all_nonnegative;
    });

    // 11. Reproducibility: byte-identical reruns of the CLI outputs.
    h.criterion(11, "byte-identical reruns", [&](std::string& detail) {
        const fs::path dir =
            fs::temp_directory_path() / "nodalab_acceptance_repro";
        fs::remove_all(dir);
        fs::create_directories(dir);
        const auto write_cfg = [&](const std::string& name, const std::string& text) {
            std::ofstream f(dir / name, std::ios::binary);
            f << text;
        };
        write_cfg("freq.json", R"({
          "experiment": "freq",
          "field": {"kind": "harmonic_poly", "n": 2, "k": 4},
          "radii": {"min": 0.1, "max": 1.0, "count": 8},
          "svg": true
        })");
        write_cfg("nodal.json", R"({
          "experiment": "nodal",
          "field": {"kind": "torus_eigen", "n": 2, "m": [2, 2], "parity": "ss"},
          "cube": {"center": [3.5, 3.5], "half_side": 1.0},
          "method": "both",
          "depth": 6,
          "lines": 5000,
          "seed": 3
        })");
        write_cfg("exponent.json", R"({"experiment": "exponent", "A": 3, "c": 0.5})");

        bool ok = true;
        std::ostringstream sink;
        for (const std::string exp : {"freq", "nodal", "exponent"}) {
            const auto out1 = dir / (exp + "_1");
            const auto out2 = dir / (exp + "_2");
            const std::vector<std::string> base = {exp, "--config",
                                                   (dir / (exp + ".json")).string()};
            auto args1 = base;
            args1.push_back("--out");
            args1.push_back(out1.string());
            auto args2 = base;
            args2.push_back("--out");
            args2.push_back(out2.string());
            args2.push_back("--threads");
            args2.push_back("4");
            if (run_cli(args1, sink, sink) != 0) ok = false;
            if (run_cli(args2, sink, sink) != 0) ok = false;
            for (const auto& f : fs::directory_iterator(out1)) {
                const auto name = f.path().filename().string();
                if (name.find("manifest") != std::string::npos) continue;
                if (slurp(out1 / name) != slurp(out2 / name)) ok = false;
            }
        }
        fs::remove_all(dir);
        detail = ok ? "freq, nodal, exponent outputs identical across runs and thread counts"
                    : "outputs differ";
        return ok;
    });

    std::printf("%d of 11 criteria passed\n", 11 - h.failures);
    return h.failures;
}
