// Python bindings for the main operations: fields, frequency and doubling
// indices, nodal measures, censuses, covering checks and the smallness
// experiment. Fields cross the boundary as shared immutable handles.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nodalab/census.hpp"
#include "nodalab/fields.hpp"
#include "nodalab/geom.hpp"
#include "nodalab/growth.hpp"
#include "nodalab/io.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/runner.hpp"
#include "nodalab/simplexcov.hpp"
#include "nodalab/smallness.hpp"

namespace py = pybind11;
using namespace nodalab;

namespace {

struct PyField {
    FieldPtr p;
    const Field& ref() const {
        if (!p) throw std::invalid_argument("empty Field handle");
        return *p;
    }
};

std::vector<Parity> parse_parity(const std::string& s) {
    std::vector<Parity> par;
    for (char c : s) par.push_back(c == 'c' ? Parity::cos : Parity::sin);
    return par;
}

PolyVariant parse_variant(const std::string& v) {
    if (v == "re") return PolyVariant::re;
    if (v == "im") return PolyVariant::im;
    throw std::invalid_argument("variant must be 're' or 'im'");
}

NodalMethod parse_method(const std::string& m) {
    if (m == "marching") return NodalMethod::marching;
    if (m == "crofton") return NodalMethod::crofton;
    throw std::invalid_argument("method must be 'marching' or 'crofton'");
}

}  // namespace

PYBIND11_MODULE(_nodalab, m) {
    m.doc() = "frequency functions, doubling indices, cube censuses and nodal "
              "measures for explicit harmonic and eigenfunction fields";
    m.attr("__version__") = kVersion;

    py::class_<Cube>(m, "Cube")
        .def(py::init<Vec, double>(), py::arg("center"), py::arg("half_side"))
        .def_readonly("center", &Cube::center)
        .def_readonly("half_side", &Cube::half_side)
        .def_property_readonly("dim", &Cube::dim)
        .def("diam", &Cube::diam)
        .def("volume", &Cube::volume)
        .def("scaled", &Cube::scaled, py::arg("rho"))
        .def("contains", [](const Cube& q, const Vec& x) { return q.contains(x); })
        .def("__repr__", [](const Cube& q) {
            std::ostringstream os;
            os << "Cube(dim=" << q.dim() << ", half_side=" << q.half_side << ")";
            return os.str();
        });

    py::class_<Ball>(m, "Ball")
        .def(py::init<Vec, double>(), py::arg("center"), py::arg("radius"))
        .def_readonly("center", &Ball::center)
        .def_readonly("radius", &Ball::radius)
        .def("scaled", &Ball::scaled, py::arg("r"));

    py::class_<Simplex>(m, "Simplex")
        .def(py::init<std::vector<Vec>>(), py::arg("vertices"))
        .def_readonly("vertices", &Simplex::vertices)
        .def("barycenter", &Simplex::barycenter)
        .def("diam", &Simplex::diam);

    py::class_<SimplexMetrics>(m, "SimplexMetrics")
        .def_readonly("diam", &SimplexMetrics::diam)
        .def_readonly("width", &SimplexMetrics::width)
        .def_readonly("relative_width", &SimplexMetrics::relative_width)
        .def_readonly("barycenter", &SimplexMetrics::barycenter)
        .def_readonly("degenerate", &SimplexMetrics::degenerate);

    py::class_<FarthestReport>(m, "FarthestReport")
        .def_readonly("value", &FarthestReport::value)
        .def_readonly("witness", &FarthestReport::witness)
        .def_readonly("gap_bound", &FarthestReport::gap_bound);

    py::class_<PyField>(m, "Field")
        .def_property_readonly("dim", [](const PyField& f) { return f.ref().dim(); })
        .def("value", [](const PyField& f, const Vec& x) { return f.ref().value(x); })
        .def("gradient", [](const PyField& f, const Vec& x) { return f.ref().gradient(x); })
        .def("descriptor", [](const PyField& f) { return f.ref().descriptor().dump(); })
        .def_property_readonly("eigenvalue",
                               [](const PyField& f) { return f.ref().meta().eigenvalue; })
        .def_property_readonly("degree", [](const PyField& f) { return f.ref().meta().degree; })
        .def_property_readonly("nodal_per_cell",
                               [](const PyField& f) { return f.ref().meta().nodal_per_cell; })
        .def("__repr__",
             [](const PyField& f) { return "Field(" + f.ref().descriptor().dump() + ")"; });

    m.def("make_harmonic_poly",
          [](int n, int k, const std::string& variant, int max_degree) {
              return PyField{make_harmonic_poly(n, k, parse_variant(variant), max_degree)};
          },
          py::arg("n"), py::arg("k"), py::arg("variant") = "re", py::arg("max_degree") = 16);
    m.def("make_torus_eigen",
          [](int n, const std::vector<int>& modes, const std::string& parity) {
              return PyField{make_torus_eigen(n, modes, parse_parity(parity))};
          },
          py::arg("n"), py::arg("m"), py::arg("parity") = "");
    m.def("lift_eigenfunction",
          [](const PyField& f) { return PyField{lift_eigenfunction(f.p)}; }, py::arg("phi"));
    m.def("make_constant", [](int n, double c) { return PyField{make_constant(n, c)}; },
          py::arg("n"), py::arg("c"));
    m.def("make_affine", [](Vec a, double b) { return PyField{make_affine(std::move(a), b)}; },
          py::arg("a"), py::arg("b"));
    m.def("make_sphere_quadric",
          [](Vec c, double r) { return PyField{make_sphere_quadric(std::move(c), r)}; },
          py::arg("center"), py::arg("radius"));
    m.def("make_sinh_product", [](double k) { return PyField{make_sinh_product(k)}; },
          py::arg("k"));
    m.def("field_from_descriptor",
          [](const std::string& desc) {
              return PyField{field_from_descriptor(nlohmann::json::parse(desc))};
          },
          py::arg("descriptor_json"));
    m.def("fundamental_cell",
          [](const PyField& f) { return fundamental_cell(f.ref()); }, py::arg("torus_field"));
    m.def("laplacian_residual",
          [](const PyField& f, const Vec& x, double h) {
              return laplacian_residual(f.ref(), x, h);
          },
          py::arg("u"), py::arg("x"), py::arg("h") = 1e-4);

    m.def("subdivide", &subdivide, py::arg("Q"), py::arg("A"));
    m.def("simplex_metrics", &simplex_metrics, py::arg("S"), py::arg("width_samples") = 4096);
    m.def("farthest_min_distance", &farthest_min_distance, py::arg("centers"), py::arg("x0"),
          py::arg("R"), py::arg("samples") = 4096);

    py::class_<SphereNorm>(m, "SphereNorm")
        .def_readonly("value", &SphereNorm::value)
        .def_readonly("error_estimate", &SphereNorm::error_estimate);
    py::class_<SupResult>(m, "SupResult")
        .def_readonly("value", &SupResult::value)
        .def_readonly("log2_value", &SupResult::log2_value)
        .def_readonly("witness", &SupResult::witness)
        .def_readonly("gap_bound", &SupResult::gap_bound);
    py::class_<DoublingReport>(m, "DoublingReport")
        .def_readonly("center", &DoublingReport::center)
        .def_readonly("radius", &DoublingReport::radius)
        .def_readonly("inner", &DoublingReport::inner)
        .def_readonly("outer", &DoublingReport::outer)
        .def_readonly("N", &DoublingReport::N);
    py::class_<CubeIndexReport>(m, "CubeIndexReport")
        .def_readonly("N", &CubeIndexReport::N)
        .def_readonly("argmax_x", &CubeIndexReport::argmax_x)
        .def_readonly("argmax_r", &CubeIndexReport::argmax_r)
        .def_readonly("sample_N", &CubeIndexReport::sample_N);
    py::class_<SandwichReport>(m, "SandwichReport")
        .def_readonly("N_inner", &SandwichReport::N_inner)
        .def_readonly("N_outer", &SandwichReport::N_outer)
        .def_readonly("log_t_ratio", &SandwichReport::log_t_ratio)
        .def_readonly("slack_lower", &SandwichReport::slack_lower)
        .def_readonly("slack_upper", &SandwichReport::slack_upper)
        .def_readonly("below_floor", &SandwichReport::below_floor)
        .def_readonly("holds", &SandwichReport::holds);

    m.def("sphere_norm_H",
          [](const PyField& u, const Vec& p, double r) {
              return sphere_norm_H(u.ref(), p, r);
          },
          py::arg("u"), py::arg("p"), py::arg("r"));
    m.def("frequency_beta",
          [](const PyField& u, const Vec& p, double r) {
              return frequency_beta(u.ref(), p, r);
          },
          py::arg("u"), py::arg("p"), py::arg("r"));
    m.def("sup_norm_cube",
          [](const PyField& u, const Cube& Q) { return sup_norm(u.ref(), Q); }, py::arg("u"),
          py::arg("region"));
    m.def("sup_norm_ball",
          [](const PyField& u, const Ball& B) { return sup_norm(u.ref(), B); }, py::arg("u"),
          py::arg("region"));
    m.def("doubling_index_ball",
          [](const PyField& u, const Vec& x, double r) {
              return doubling_index_ball(u.ref(), x, r);
          },
          py::arg("u"), py::arg("x"), py::arg("r"));
    m.def("doubling_index_cube",
          [](const PyField& u, const Cube& Q, int centers_per_axis, int radii_count) {
              CubeIndexGrid grid;
              grid.centers_per_axis = centers_per_axis;
              grid.radii_count = radii_count;
              return doubling_index_cube(u.ref(), Q, grid);
          },
          py::arg("u"), py::arg("Q"), py::arg("centers_per_axis") = 5,
          py::arg("radii_count") = 8);
    m.def("check_growth_sandwich",
          [](const PyField& u, const Vec& x, double rho, double t, double eps, double N0) {
              return check_growth_sandwich(u.ref(), x, rho, t, eps, N0);
          },
          py::arg("u"), py::arg("x"), py::arg("rho"), py::arg("t"), py::arg("eps"),
          py::arg("N0") = 1.0);
    m.def("check_log_integral",
          [](const PyField& u, const Vec& p, double r1, double r2) {
              const auto rep = check_log_integral(u.ref(), p, r1, r2);
              return py::make_tuple(rep.residual, rep.lhs, rep.rhs);
          },
          py::arg("u"), py::arg("p"), py::arg("r1"), py::arg("r2"));
    m.def("check_center_shift",
          [](const PyField& u, const Vec& x1, const Vec& x2, double rho, double C, double N0) {
              const auto rep = check_center_shift(u.ref(), x1, x2, rho, C, N0);
              return py::make_tuple(rep.ratio, rep.below_floor, rep.violation);
          },
          py::arg("u"), py::arg("x1"), py::arg("x2"), py::arg("rho"), py::arg("C"),
          py::arg("N0") = 1.0);

    py::class_<NodalEstimate>(m, "NodalEstimate")
        .def_readonly("value", &NodalEstimate::value)
        .def_readonly("resolution", &NodalEstimate::resolution)
        .def_readonly("error_indicator", &NodalEstimate::error_indicator)
        .def_readonly("seed", &NodalEstimate::seed)
        .def_readonly("kinematic_constant", &NodalEstimate::kinematic_constant)
        .def_readonly("undefined", &NodalEstimate::undefined);
    py::class_<ScalingFit>(m, "ScalingFit")
        .def_readonly("points", &ScalingFit::points)
        .def_readonly("fitted_exponent", &ScalingFit::fitted_exponent)
        .def_readonly("fit_residual", &ScalingFit::fit_residual);

    m.def("nodal_measure_marching",
          [](const PyField& u, const Cube& Q, int depth, int threads) {
              return nodal_measure_marching(u.ref(), Q, depth, threads);
          },
          py::arg("u"), py::arg("Q"), py::arg("depth") = 8, py::arg("threads") = 1);
    m.def("nodal_measure_crofton",
          [](const PyField& u, const Cube& Q, long lines, std::uint64_t seed, int threads) {
              return nodal_measure_crofton(u.ref(), Q, lines, seed, threads);
          },
          py::arg("u"), py::arg("Q"), py::arg("lines") = 100000, py::arg("seed") = 1,
          py::arg("threads") = 1);
    m.def("thv_datapoint",
          [](const PyField& u, const Cube& Q, int depth) {
              ThvConfig cfg;
              cfg.depth = depth;
              const auto pt = thv_datapoint(u.ref(), Q, cfg);
              return py::make_tuple(pt.N, pt.density);
          },
          py::arg("u"), py::arg("Q"), py::arg("depth") = 7);
    m.def("yau_scaling_fit",
          [](const std::vector<PyField>& family, const std::string& method, int depth,
             long lines, std::uint64_t seed, int threads) {
              YauConfig cfg;
              cfg.method = parse_method(method);
              cfg.depth = depth;
              cfg.lines = lines;
              cfg.seed = seed;
              cfg.threads = threads;
              std::vector<FieldPtr> fields;
              for (const auto& f : family) fields.push_back(f.p);
              return yau_scaling_fit(fields, cfg);
          },
          py::arg("family"), py::arg("method") = "marching", py::arg("depth") = 8,
          py::arg("lines") = 30000, py::arg("seed") = 1, py::arg("threads") = 1);

    py::class_<CensusReport>(m, "CensusReport")
        .def_readonly("A", &CensusReport::A)
        .def_readonly("N_of_Q", &CensusReport::N_of_Q)
        .def_readonly("threshold", &CensusReport::threshold)
        .def_readonly("subcube_indices", &CensusReport::subcube_indices)
        .def_readonly("subcube_ids", &CensusReport::subcube_ids)
        .def_readonly("bad_count", &CensusReport::bad_count)
        .def_readonly("bound", &CensusReport::bound)
        .def_readonly("fraction", &CensusReport::fraction)
        .def_readonly("verdict", &CensusReport::verdict);
    py::class_<RecursionModel>(m, "RecursionModel")
        .def_readonly("A", &RecursionModel::A)
        .def_readonly("c", &RecursionModel::c)
        .def_readonly("alpha", &RecursionModel::alpha)
        .def_readonly("majorant_ok", &RecursionModel::majorant_ok);
    py::class_<TreeSimReport>(m, "TreeSimReport")
        .def_readonly("K", &TreeSimReport::K)
        .def_readonly("K_bound", &TreeSimReport::K_bound)
        .def_readonly("M_fraction", &TreeSimReport::M_fraction)
        .def_readonly("M_fraction_bound", &TreeSimReport::M_fraction_bound)
        .def_readonly("K_ok", &TreeSimReport::K_ok)
        .def_readonly("M_ok", &TreeSimReport::M_ok);
    py::class_<WideSimplexResult>(m, "WideSimplexResult")
        .def_readonly("S", &WideSimplexResult::S)
        .def_readonly("relative_width", &WideSimplexResult::relative_width)
        .def_readonly("diam_ratio", &WideSimplexResult::diam_ratio)
        .def_readonly("achieved_a", &WideSimplexResult::achieved_a)
        .def_readonly("degenerate", &WideSimplexResult::degenerate);
    py::class_<SimplexLemmaReport>(m, "SimplexLemmaReport")
        .def_readonly("vertex_indices", &SimplexLemmaReport::vertex_indices)
        .def_readonly("barycenter_index", &SimplexLemmaReport::barycenter_index)
        .def_readonly("required", &SimplexLemmaReport::required)
        .def_readonly("applicable", &SimplexLemmaReport::applicable)
        .def_readonly("verdict", &SimplexLemmaReport::verdict);

    m.def("subcube_census",
          [](const PyField& u, const Cube& Q, int A, double c, double N0) {
              return subcube_census(u.ref(), Q, A, c, N0);
          },
          py::arg("u"), py::arg("Q"), py::arg("A"), py::arg("c"), py::arg("N0") = 1.0);
    m.def("hyperplane_census",
          [](const PyField& u, const Cube& Q, int A1, double N, int axis, double eps) {
              return hyperplane_census(u.ref(), Q, A1, N, axis, eps);
          },
          py::arg("u"), py::arg("Q"), py::arg("A1"), py::arg("N") = -1.0,
          py::arg("axis") = -1, py::arg("eps") = 0.5);
    m.def("recursion_exponent", &recursion_exponent, py::arg("A"), py::arg("c"),
          py::arg("N0") = 1.0, py::arg("levels") = 64);
    m.def("simulate_bad_cube_tree",
          [](int A0, int n, int depth, int j0, std::uint64_t seed, const std::string& spawn,
             std::optional<double> cap) {
              const SpawnMode mode =
                  spawn == "always_max" ? SpawnMode::always_max : SpawnMode::uniform;
              return simulate_bad_cube_tree(A0, n, depth, j0, seed, mode, cap);
          },
          py::arg("A0"), py::arg("n"), py::arg("depth"), py::arg("j0") = 0,
          py::arg("seed") = 1, py::arg("spawn") = "uniform",
          py::arg("cap_override") = std::nullopt);
    m.def("extract_wide_simplex", &extract_wide_simplex, py::arg("points"), py::arg("q"));
    m.def("simplex_lemma_check",
          [](const PyField& u, const Simplex& S, double N, double c, double K, double C) {
              return simplex_lemma_check(u.ref(), S, N, c, K, C);
          },
          py::arg("u"), py::arg("S"), py::arg("N"), py::arg("c"), py::arg("K"), py::arg("C"));

    py::class_<CoveringCheckResult>(m, "CoveringCheckResult")
        .def_readonly("holds", &CoveringCheckResult::holds)
        .def_readonly("rho", &CoveringCheckResult::rho)
        .def_readonly("margin", &CoveringCheckResult::margin)
        .def_readonly("interior_ok", &CoveringCheckResult::interior_ok);
    py::class_<CoveringConstants>(m, "CoveringConstants")
        .def_readonly("a", &CoveringConstants::a)
        .def_readonly("n", &CoveringConstants::n)
        .def_readonly("K", &CoveringConstants::K)
        .def_readonly("c1", &CoveringConstants::c1)
        .def_readonly("certified_margin", &CoveringConstants::certified_margin)
        .def_readonly("a_too_large", &CoveringConstants::a_too_large);

    m.def("covering_check", &covering_check, py::arg("S"), py::arg("K"), py::arg("c1"),
          py::arg("sphere_samples") = 4096);
    m.def("max_covering_c1", &max_covering_c1, py::arg("S"), py::arg("K"),
          py::arg("c1_tol") = 1e-6, py::arg("sphere_samples") = 4096);
    m.def("covering_constants",
          [](double a, int n, int shape_samples, std::uint64_t seed, int sphere_samples,
             const std::vector<Simplex>& shapes) {
              return covering_constants(a, n, shape_samples, seed, sphere_samples, shapes);
          },
          py::arg("a"), py::arg("n"), py::arg("shape_samples"), py::arg("seed"),
          py::arg("sphere_samples") = 2048, py::arg("shapes") = std::vector<Simplex>{});
    m.def("delta_of_t", &delta_of_t, py::arg("S"), py::arg("vertex_index"), py::arg("rho"),
          py::arg("t"));

    py::class_<Face>(m, "Face")
        .def(py::init([](const Cube& q, int axis, int side) {
                 Face f;
                 f.cube = q;
                 f.axis = axis;
                 f.side = side;
                 return f;
             }),
             py::arg("cube"), py::arg("axis"), py::arg("side"))
        .def_readonly("axis", &Face::axis)
        .def_readonly("side", &Face::side);
    py::class_<CauchyData>(m, "CauchyData")
        .def_readonly("sup_u", &CauchyData::sup_u)
        .def_readonly("sup_r_grad", &CauchyData::sup_r_grad);
    py::class_<SmallnessSample>(m, "SmallnessSample")
        .def_readonly("label", &SmallnessSample::label)
        .def_readonly("eps", &SmallnessSample::eps)
        .def_readonly("sup_half", &SmallnessSample::sup_half)
        .def_readonly("excluded", &SmallnessSample::excluded);
    py::class_<SmallnessReport>(m, "SmallnessReport")
        .def_readonly("samples", &SmallnessReport::samples)
        .def_readonly("fitted_alpha", &SmallnessReport::fitted_alpha)
        .def_readonly("fitted_C", &SmallnessReport::fitted_C)
        .def_readonly("envelope_C", &SmallnessReport::envelope_C);

    m.def("cauchy_data_on_face",
          [](const PyField& u, const Face& F) { return cauchy_data_on_face(u.ref(), F); },
          py::arg("u"), py::arg("F"));
    m.def("smallness_experiment",
          [](const std::vector<std::pair<double, PyField>>& family, const Cube& q,
             const Face& face) {
              std::vector<std::pair<double, FieldPtr>> fam;
              for (const auto& [k, f] : family) fam.emplace_back(k, f.p);
              return smallness_experiment(fam, q, face);
          },
          py::arg("family"), py::arg("q"), py::arg("face"));
    m.def("sinh_smallness_experiment",
          [](const std::vector<double>& ks, const Cube& q, const Face& face) {
              return smallness_experiment(make_sinh_family(ks), q, face);
          },
          py::arg("k_values"), py::arg("q"), py::arg("face"));
    m.def("smallness_bound_check",
          [](const SmallnessReport& rep, double C, double alpha) {
              const auto chk = smallness_bound_check(rep, C, alpha);
              return py::make_tuple(chk.all_nonnegative, chk.slacks);
          },
          py::arg("report"), py::arg("C"), py::arg("alpha"));

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              return run_cli(args, std::cout, std::cerr);
          },
          py::arg("args"), "invoke the experiment driver in-process");
}
