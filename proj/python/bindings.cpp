#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jetspace/checks.hpp"
#include "jetspace/embeddings.hpp"
#include "jetspace/expr.hpp"
#include "jetspace/forms.hpp"
#include "jetspace/jetgroup.hpp"
#include "jetspace/metrics.hpp"
#include "jetspace/multiindex.hpp"
#include "jetspace/taylor.hpp"

namespace py = pybind11;
using namespace jetspace;

namespace {

// Expressions are shared immutable trees; a plain value wrapper keeps the
// binding independent of the holder-type rules for const pointees.
struct ExprHandle {
    ExprPtr ptr;
};

std::vector<std::vector<int>> indices_as_lists(const std::vector<MultiIndex>& indices)
{
    std::vector<std::vector<int>> out;
    out.reserve(indices.size());
    for (const auto& idx : indices) out.emplace_back(idx.entries().begin(), idx.entries().end());
    return out;
}

MultiIndex index_from_list(const std::vector<int>& entries)
{
    return MultiIndex(entries);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Jet-space Carnot groups, sphere embeddings, and Lipschitz-form integrals";

    // ---- multi-indices ----
    m.def("enumerate_indices",
          [](int dim, int order) { return indices_as_lists(enumerate_indices(dim, order)); },
          py::arg("dim"), py::arg("order"));
    m.def("enumerate_up_to",
          [](int dim, int max_order) { return indices_as_lists(enumerate_up_to(dim, max_order)); },
          py::arg("dim"), py::arg("max_order"));
    m.def("index_count", &index_count, py::arg("dim"), py::arg("order"));
    m.def("index_factorial",
          [](const std::vector<int>& idx) { return factorial(index_from_list(idx)); },
          py::arg("index"));
    m.def("index_leq",
          [](const std::vector<int>& a, const std::vector<int>& b) {
              return leq(index_from_list(a), index_from_list(b));
          },
          py::arg("lhs"), py::arg("rhs"));
    m.def("monomial",
          [](const std::vector<double>& y, const std::vector<int>& idx) {
              return monomial(y, index_from_list(idx));
          },
          py::arg("point"), py::arg("index"));

    // ---- group ----
    py::class_<JetPoint>(m, "JetPoint")
        .def(py::init([](int n, int k, std::vector<double> base, std::vector<double> coords) {
                 return JetPoint(GroupParams(n, k), std::move(base), std::move(coords));
             }),
             py::arg("n"), py::arg("k"), py::arg("base"), py::arg("coords"))
        .def_static("identity",
                    [](int n, int k) { return JetPoint::identity(GroupParams(n, k)); },
                    py::arg("n"), py::arg("k"))
        .def_property_readonly("n", &JetPoint::dim)
        .def_property_readonly("k", &JetPoint::order)
        .def_property_readonly("base",
                               [](const JetPoint& p) {
                                   return std::vector<double>(p.base().begin(), p.base().end());
                               })
        .def_property_readonly("coords",
                               [](const JetPoint& p) {
                                   return std::vector<double>(p.coords().begin(), p.coords().end());
                               })
        .def("coord",
             [](const JetPoint& p, const std::vector<int>& idx) { return p.coord(index_from_list(idx)); },
             py::arg("index"))
        .def("to_json", [](const JetPoint& p) { return to_json_string(p); })
        .def_static("from_json", &jet_point_from_json, py::arg("text"))
        .def("__repr__", [](const JetPoint& p) {
            return "JetPoint(n=" + std::to_string(p.dim()) + ", k=" + std::to_string(p.order()) + ")";
        });

    m.def("compose", &compose, py::arg("lhs"), py::arg("rhs"));
    m.def("inverse", &inverse, py::arg("p"));
    m.def("dilate", &dilate, py::arg("factor"), py::arg("p"));
    m.def("homogeneous_norm", &homogeneous_norm, py::arg("p"));
    m.def("box_distance", &box_distance, py::arg("lhs"), py::arg("rhs"));

    // ---- expressions and jets ----
    py::class_<ExprHandle>(m, "Expr")
        .def("to_sexpr", [](const ExprHandle& e) { return e.ptr->to_sexpr(); })
        .def("__repr__", [](const ExprHandle& e) { return e.ptr->to_sexpr(); });

    m.def("const_expr", [](double v) { return ExprHandle{Expr::constant(v)}; }, py::arg("value"));
    m.def("coord_expr", [](int axis) { return ExprHandle{Expr::coordinate(axis)}; }, py::arg("axis"));
    m.def("add_expr",
          [](const ExprHandle& a, const ExprHandle& b) { return ExprHandle{add(a.ptr, b.ptr)}; });
    m.def("sub_expr",
          [](const ExprHandle& a, const ExprHandle& b) { return ExprHandle{sub(a.ptr, b.ptr)}; });
    m.def("mul_expr", [](const ExprHandle& a, const ExprHandle& b) {
        return ExprHandle{Expr::product(a.ptr, b.ptr)};
    });
    m.def("pow_expr",
          [](const ExprHandle& a, int e) { return ExprHandle{Expr::int_power(a.ptr, e)}; });
    m.def("sin_expr", [](const ExprHandle& a) { return ExprHandle{Expr::sin_of(a.ptr)}; });
    m.def("cos_expr", [](const ExprHandle& a) { return ExprHandle{Expr::cos_of(a.ptr)}; });
    m.def("exp_expr", [](const ExprHandle& a) { return ExprHandle{Expr::exp_of(a.ptr)}; });
    m.def("sqrt_expr",
          [](const ExprHandle& a, double dm) { return ExprHandle{Expr::sqrt_of(a.ptr, dm)}; },
          py::arg("arg"), py::arg("domain_min") = 0.0);
    m.def("recip_expr",
          [](const ExprHandle& a, double dm) { return ExprHandle{Expr::reciprocal_of(a.ptr, dm)}; },
          py::arg("arg"), py::arg("domain_min") = 0.0);
    m.def("flat_exp_expr", [](const ExprHandle& a) { return ExprHandle{Expr::flat_exp_of(a.ptr)}; });

    m.def("eval_expr",
          [](const ExprHandle& g, const std::vector<double>& x) { return eval(g.ptr, x); },
          py::arg("expr"), py::arg("point"));
    m.def("gradient",
          [](const ExprHandle& g, const std::vector<double>& x) { return gradient(g.ptr, x); },
          py::arg("expr"), py::arg("point"));
    m.def("jet_eval",
          [](const ExprHandle& g, const std::vector<double>& x, int order) {
              const TruncatedJet jet = jet_eval(g.ptr, x, order);
              py::dict out;
              const JetLayout& lay = jet_layout(jet.dim(), jet.order());
              for (int i = 0; i < lay.size(); ++i) {
                  py::tuple key(lay.at(i).dim());
                  for (int l = 0; l < lay.at(i).dim(); ++l) key[l] = lay.at(i)[l];
                  out[key] = jet.derivatives()[static_cast<std::size_t>(i)];
              }
              return out;
          },
          py::arg("expr"), py::arg("point"), py::arg("order"));
    m.def("jet_to_point",
          [](const ExprHandle& g, const std::vector<double>& x, int order) {
              return jet_to_point(g.ptr, x, order);
          },
          py::arg("expr"), py::arg("point"), py::arg("order"));

    // ---- embeddings ----
    py::class_<SpherePoint>(m, "SpherePoint")
        .def_static("from_ambient", &SpherePoint::from_ambient, py::arg("ambient"))
        .def_static("from_polar", &SpherePoint::from_polar, py::arg("direction"), py::arg("radius"),
                    py::arg("lower"))
        .def_readonly("ambient", &SpherePoint::ambient)
        .def_readonly("direction", &SpherePoint::direction)
        .def_readonly("radius", &SpherePoint::radius)
        .def_property_readonly("hemisphere", [](const SpherePoint& p) {
            switch (p.hemisphere) {
                case Hemisphere::Upper: return "upper";
                case Hemisphere::Lower: return "lower";
                default: return "equator";
            }
        });

    py::class_<BodyFunction>(m, "BodyFunction")
        .def_property_readonly("f", [](const BodyFunction& b) { return ExprHandle{b.f}; })
        .def_property_readonly("alpha", [](const BodyFunction& b) { return ExprHandle{b.alpha}; })
        .def_property_readonly("beta",
                               [](const BodyFunction& b) -> py::object {
                                   if (!b.beta) return py::none();
                                   return py::cast(ExprHandle{b.beta});
                               })
        .def_readonly("dim", &BodyFunction::dim)
        .def_readonly("order", &BodyFunction::order);

    m.def("make_fk", [](int order) { return ExprHandle{make_fk(order)}; }, py::arg("order"));
    m.def("make_body", [](int dim, int order) { return make_body(dim, order); }, py::arg("dim"),
          py::arg("order"));
    m.def("make_bump", [](int dim) { return ExprHandle{make_bump(dim)}; }, py::arg("dim"));
    m.def("polar_lift", [](const std::vector<double>& v) { return polar_lift(v); }, py::arg("v"));
    m.def("embed_circle", &embed_circle, py::arg("order"), py::arg("angle"));
    m.def("embed_sphere", &embed_sphere, py::arg("body"), py::arg("point"));
    m.def("lambda_map", [](const std::vector<double>& x) { return lambda_map(x); }, py::arg("x"));
    m.def("lambda_inv", [](const std::vector<double>& u) { return lambda_inv(u); }, py::arg("u"));
    m.def("cylinder_proj",
          [](const std::vector<double>& v, double t) { return cylinder_proj(v, t); }, py::arg("v"),
          py::arg("t"));

    // ---- metrics ----
    m.def("segment_lip_bound",
          [](const ExprHandle& g, const std::vector<double>& x, const std::vector<double>& y,
             int order, int samples) { return segment_lip_bound(g.ptr, x, y, order, samples); },
          py::arg("expr"), py::arg("x"), py::arg("y"), py::arg("order"), py::arg("samples") = 256);
    m.def("case_i_lower_bound",
          [](int order, double theta, double eta) {
              const CaseIBound b = case_i_lower_bound(order, theta, eta);
              py::dict out;
              out["value"] = b.value;
              out["bound"] = b.bound;
              out["holds"] = b.holds;
              return out;
          },
          py::arg("order"), py::arg("theta"), py::arg("eta"));
    m.def("distortion_scan_json",
          [](const std::string& map, int dim, int order, long pairs, std::uint64_t seed) {
              SamplerSpec spec;
              spec.map = map_kind_from_name(map);
              spec.dim = dim;
              spec.order = order;
              spec.pairs = pairs;
              spec.seed = seed;
              return to_json_string(distortion_scan(spec));
          },
          py::arg("map"), py::arg("dim") = 2, py::arg("order") = 1, py::arg("pairs") = 10000,
          py::arg("seed") = 0);

    // ---- forms ----
    m.def("obstruction_integral",
          [](int dim, int order, int resolution) {
              const IntegralResult r = obstruction_integral(make_body(dim, order), resolution);
              return py::make_tuple(r.value, r.error);
          },
          py::arg("dim"), py::arg("order"), py::arg("resolution") = 16);
    m.def("scaling_study_json",
          [](int dim, int order, const std::vector<double>& m_values, int resolution) {
              const ScalingStudy study = scaling_study(make_body(dim, order), m_values, resolution);
              py::dict out;
              out["fitted_exponent"] = study.fitted_exponent;
              out["base_value"] = study.base_value;
              py::list rows;
              for (const auto& row : study.rows) {
                  py::dict r;
                  r["m"] = row.m;
                  r["value"] = row.value;
                  r["predicted"] = row.predicted;
                  r["relative_error"] = row.relative_error;
                  r["lower_bound"] = row.lower_bound;
                  rows.append(r);
              }
              out["rows"] = rows;
              return out;
          },
          py::arg("dim"), py::arg("order"), py::arg("m_values"), py::arg("resolution") = 16);
    m.def("comass_check",
          [](int dim, int order, long samples, std::uint64_t seed) {
              const ComassResult r = comass_check(dim, order, samples, seed);
              return py::make_tuple(r.max_abs, r.extremal);
          },
          py::arg("dim"), py::arg("order"), py::arg("samples") = 1000, py::arg("seed") = 0);
    m.def("stokes_suite",
          [](int cube_dim, int count, std::uint64_t seed, int resolution) {
              py::list out;
              for (const auto& c : stokes_suite(cube_dim, count, seed, resolution)) {
                  py::dict d;
                  d["interior"] = c.interior.value;
                  d["boundary"] = c.boundary.value;
                  d["pass"] = c.pass;
                  out.append(d);
              }
              return out;
          },
          py::arg("cube_dim"), py::arg("count") = 20, py::arg("seed") = 0,
          py::arg("resolution") = 16);

    // ---- validation suites ----
    m.def("group_check_json",
          [](int n, int k, long trials, std::uint64_t seed) {
              return to_json_string(run_group_checks(GroupParams(n, k), trials, seed));
          },
          py::arg("n"), py::arg("k"), py::arg("trials") = 1000, py::arg("seed") = 0);
    m.def("jet_check_json",
          [](int n, int k, long points, std::uint64_t seed) {
              return to_json_string(run_jet_checks(n, k, points, seed));
          },
          py::arg("n"), py::arg("k"), py::arg("points") = 100, py::arg("seed") = 0);
}
