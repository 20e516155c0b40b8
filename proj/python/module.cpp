// Python bindings for the main operations: moments and bounds, the rule
// catalog, verification/evaluation, search, canonicalization, refinement and
// the rule-file format.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "cubature/catalog.hpp"
#include "cubature/moments.hpp"
#include "cubature/refine.hpp"
#include "cubature/rule.hpp"
#include "cubature/ruleio.hpp"
#include "cubature/search.hpp"
#include "cubature/symmetry.hpp"

namespace py = pybind11;
using namespace cubature;

namespace {

std::vector<std::vector<double>> points_list(const Rule& r) {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < r.point_count(); ++i)
        out.emplace_back(r.point(i), r.point(i) + r.n);
    return out;
}

Rule rule_from_lists(Region region, const std::vector<std::vector<double>>& points,
                     const std::vector<double>& weights, int degree,
                     const std::string& provenance) {
    if (points.empty() || points.size() != weights.size())
        throw std::invalid_argument("points and weights must be non-empty and the same length");
    Rule r;
    r.region = region;
    r.n = static_cast<int>(points[0].size());
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != r.n)
            throw std::invalid_argument("ragged point list");
        r.points.insert(r.points.end(), p.begin(), p.end());
    }
    r.weights = weights;
    r.claimed_degree = degree;
    r.provenance = provenance;
    return r;
}

py::dict report_dict(const SearchReport& rep) {
    py::dict d;
    d["outcome"] = outcome_name(rep.outcome);
    d["restarts_used"] = rep.restarts_used;
    d["iterations"] = rep.iterations;
    d["final_max_residual"] = rep.final_max_residual;
    d["seed"] = rep.seed;
    return d;
}

} // namespace

PYBIND11_MODULE(_cubature, m) {
    m.doc() = "cubature rules for Gaussian-weighted, exponential-weighted and unit-ball integrals";

    py::enum_<Region>(m, "Region")
        .value("GaussianProb", Region::GaussianProb)
        .value("ExpR2", Region::ExpR2)
        .value("ExpR", Region::ExpR)
        .value("Ball", Region::Ball);

    py::class_<Rule>(m, "Rule")
        .def_readonly("region", &Rule::region)
        .def_readonly("n", &Rule::n)
        .def_readonly("claimed_degree", &Rule::claimed_degree)
        .def_readonly("provenance", &Rule::provenance)
        .def_property_readonly("N", &Rule::point_count)
        .def_property_readonly("points", &points_list)
        .def_property_readonly("weights", [](const Rule& r) { return r.weights; })
        .def("__repr__", [](const Rule& r) {
            return "<Rule " + region_name(r.region) + " n=" + std::to_string(r.n) +
                   " N=" + std::to_string(r.point_count()) +
                   " d=" + std::to_string(r.claimed_degree) + ">";
        });

    m.def("make_rule", &rule_from_lists, py::arg("region"), py::arg("points"), py::arg("weights"),
          py::arg("degree") = -1, py::arg("provenance") = "");

    // moments and bounds
    m.def("monomial_moment", [](Region region, int n, const std::vector<int>& alpha) {
        return monomial_moment(region, n, MultiIndex(alpha));
    });
    m.def("volume", &volume);
    m.def("moment_system_size", [](Region region, int n, int d, int extras) {
        return build_moment_system(region, n, d, extras).size();
    }, py::arg("region"), py::arg("n"), py::arg("d"), py::arg("extras") = 0);
    m.def("stroud_bound", &stroud_bound);
    m.def("moller_bound", &moller_bound);
    m.def("effective_bound", &effective_bound);

    // catalog
    m.def("catalog", [] {
        py::list out;
        for (const auto& e : catalog_entries()) {
            py::dict d;
            d["id"] = e.id;
            d["family"] = e.family;
            d["region"] = region_name(e.region);
            d["n"] = e.n;
            d["degree"] = e.degree;
            d["N"] = e.expected_points;
            d["closed_form"] = e.closed_form;
            out.append(d);
        }
        return out;
    });
    m.def("build_rule", &build_catalog_rule, py::arg("id"));
    m.def("simplex_rule", [](Region region, int n, const std::string& variant) {
        SimplexVariant v = variant == "classical" ? SimplexVariant::classical
                           : variant == "b"       ? SimplexVariant::simple_b
                                                  : SimplexVariant::simple_a;
        return simplex_rule(region, n, v);
    }, py::arg("region"), py::arg("n"), py::arg("variant") = "a");

    // verification and evaluation
    m.def("verify", [](const Rule& r, int d, double tol_rel) {
        VerificationReport rep = verify(r, d, tol_rel);
        py::dict out;
        out["degree_checked"] = rep.degree_checked;
        out["max_abs_residual"] = rep.max_abs_residual;
        out["worst_constraint"] = rep.worst_constraint.e;
        out["pass"] = rep.pass;
        out["tolerance_used"] = rep.tolerance_used;
        return out;
    }, py::arg("rule"), py::arg("degree"), py::arg("tol_rel") = 1e-11);
    m.def("detected_degree", &detected_degree, py::arg("rule"), py::arg("tol_rel") = 1e-11,
          py::arg("d_max") = 20);
    m.def("evaluate", [](const Rule& r, const std::function<double(std::vector<double>)>& f) {
        return evaluate(r, [&](std::span<const double> x) {
            return f(std::vector<double>(x.begin(), x.end()));
        });
    });
    m.def("stability_factor", &stability_factor);
    m.def("quality_of", &quality_of, py::arg("rule"), py::arg("boundary_tol") = 1e-9);
    m.def("convert_gaussian", &convert_gaussian);
    m.def("convert_from_gaussian", &convert_from_gaussian);

    // search
    m.def("search", [](Region region, int n, int degree, int N, std::uint64_t seed, int restarts,
                       int extras, const std::string& solver, double tol_rel) {
        SearchConfig c;
        c.region = region;
        c.n = n;
        c.degree = degree;
        c.N = N;
        c.seed = seed;
        c.max_restarts = restarts;
        c.extras = extras;
        c.solver = solver == "lm" ? Solver::levenberg_marquardt : Solver::gauss_newton_pinv;
        c.residual_tol_rel = tol_rel;
        SearchReport rep = search(c);
        py::dict d = report_dict(rep);
        if (rep.rule) d["rule"] = *rep.rule;
        return d;
    }, py::arg("region"), py::arg("n"), py::arg("degree"), py::arg("N"), py::arg("seed") = 0,
       py::arg("restarts") = 20, py::arg("extras") = 0, py::arg("solver") = "gn",
       py::arg("tol_rel") = 1e-11);
    m.def("binary_search_N", [](Region region, int n, int degree, int N_hi, std::uint64_t seed,
                                int restarts) {
        SearchConfig c;
        c.seed = seed;
        c.max_restarts = restarts;
        SearchReport rep = binary_search_N(region, n, degree, N_hi, c);
        py::dict d = report_dict(rep);
        if (rep.rule) d["rule"] = *rep.rule;
        return d;
    }, py::arg("region"), py::arg("n"), py::arg("degree"), py::arg("N_hi"), py::arg("seed") = 0,
       py::arg("restarts") = 20);
    m.def("transfer_rule", [](const Rule& src, Region target, const std::string& solver) {
        SearchConfig c;
        c.solver = solver == "lm" ? Solver::levenberg_marquardt : Solver::gauss_newton_pinv;
        c.residual_tol_rel = 1e-12;
        c.max_iterations = 400;
        SearchReport rep = transfer_rule(src, target, c);
        py::dict d = report_dict(rep);
        if (rep.rule) d["rule"] = *rep.rule;
        return d;
    }, py::arg("rule"), py::arg("target"), py::arg("solver") = "gn");

    // canonicalization
    m.def("detect_shells", [](const Rule& r) {
        auto dec = detect_shells(r);
        py::list shells;
        for (const auto& s : dec.shells) {
            py::dict d;
            d["radius"] = s.radius;
            d["members"] = s.members;
            d["uniform_weight"] = s.uniform_weight;
            d["weight"] = s.weight;
            shells.append(d);
        }
        return shells;
    });
    m.def("align_axes", [](const Rule& r, const std::vector<int>& chosen) {
        return align_axes(r, chosen);
    });
    m.def("symmetrize_bilateral", [](const Rule& r, std::optional<int> axis) {
        int chosen = -1;
        Rule out = symmetrize_bilateral(r, axis, &chosen);
        return py::make_tuple(out, chosen);
    }, py::arg("rule"), py::arg("axis") = std::nullopt);
    m.def("project_to_shell", [](const Rule& r, const std::vector<int>& idx,
                                 std::optional<double> radius, double blend) {
        return project_to_shell(r, idx, radius, blend);
    }, py::arg("rule"), py::arg("indices"), py::arg("radius") = std::nullopt,
       py::arg("blend") = 1.0);

    // refinement and closed-form identification
    m.def("refine", [](const Rule& r, int degree, int digits) {
        ExtendedRule ext = refine_rule(r, degree, digits);
        py::dict d;
        d["working_digits"] = ext.working_digits;
        d["max_residual"] = ext.max_residual.to_string(6);
        d["print32_stable"] = ext.print32_stable;
        std::ostringstream ss;
        write_rule_file(ss, ext.rule, 32);
        d["listing"] = ss.str();
        return d;
    }, py::arg("rule"), py::arg("degree"), py::arg("digits") = 64);
    m.def("identify_surd", [](const std::string& value, int digits) -> py::object {
        Real x = Real::from_string(value, Real::bits_for_digits(digits));
        auto cand = identify_surd(x);
        if (!cand) return py::none();
        py::dict d;
        d["form"] = cand->to_string();
        d["confidence_digits"] = cand->confidence_digits;
        return d;
    }, py::arg("value"), py::arg("digits") = 50);

    // rule files
    m.def("write_rule", [](const Rule& r, const std::string& path, int digits) {
        write_rule_path(path, r, digits);
    }, py::arg("rule"), py::arg("path"), py::arg("digits") = 17);
    m.def("read_rule", &read_rule_path, py::arg("path"));
    m.def("rule_to_string", [](const Rule& r, int digits) {
        std::ostringstream ss;
        write_rule_file(ss, r, digits);
        return ss.str();
    }, py::arg("rule"), py::arg("digits") = 17);
}
