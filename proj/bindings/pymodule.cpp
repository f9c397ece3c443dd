// Python bindings over the main operations. Points and restrictions cross
// the boundary as strings over {0,1} / {0,1,*} in the library's canonical
// encoding; exact rationals come back as decimal strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "disttest/analysis.hpp"
#include "disttest/experiment.hpp"
#include "disttest/instances.hpp"
#include "disttest/isoperimetry.hpp"
#include "disttest/oracle.hpp"
#include "disttest/tester.hpp"

namespace py = pybind11;
using namespace disttest;

namespace {

Distribution make_distribution(py::object spec) {
    // Either {"kind": ..., ...} json-style dict or a mean vector list.
    if (py::isinstance<py::dict>(spec)) {
        py::dict d = spec.cast<py::dict>();
        const std::string kind = d["kind"].cast<std::string>();
        if (kind == "product") return ProductDistribution(d["mu"].cast<std::vector<double>>());
        if (kind == "explicit")
            return ExplicitDistribution(d["n"].cast<int>(), d["mass"].cast<std::vector<double>>());
        throw std::invalid_argument("distribution kind must be product|explicit");
    }
    return ProductDistribution(spec.cast<std::vector<double>>());
}

MeanLaw make_mean_law(const std::vector<std::pair<double, double>>& law) { return law; }

}  // namespace

PYBIND11_MODULE(_disttest, m) {
    m.doc() = "Monotonicity testing of hypercube distributions under subcube conditioning";

    // hypercube
    m.def("flip", [](const std::string& x, int i) { return flip(Point::from_string(x), i).to_string(); },
          py::arg("x"), py::arg("i"));
    m.def("leq", [](const std::string& x, const std::string& y) {
        return leq(Point::from_string(x), Point::from_string(y));
    });
    m.def("point_index", [](const std::string& x) { return Point::from_string(x).index(); });
    m.def("chain_sigma", [](const std::string& z) {
        const Point p = Point::from_string(z);
        return chain_matching(p.dimension()).sigma(p).to_string();
    });

    // distributions
    m.def("pmf", [](py::object d, const std::string& x) {
        return pmf(make_distribution(d), Point::from_string(x));
    });
    m.def("conditional_mu", [](const std::vector<double>& mu, const std::string& rho) {
        return ProductDistribution(mu).conditional(Restriction::from_string(rho)).mean_vector();
    });
    m.def("is_monotone", [](py::object d) { return is_monotone(materialize(make_distribution(d))); });
    m.def("tv_exact", [](py::object p, py::object q) {
        return tv_exact(make_distribution(p), make_distribution(q));
    });

    // isoperimetry
    m.def("directed_gradient", [](int n, const std::vector<double>& values, const std::string& x) {
        return directed_gradient(RealFunction(n, values), Point::from_string(x));
    });
    m.def("dist0_boolean",
          [](int n, const std::vector<double>& values) { return dist0_boolean(RealFunction(n, values)); });
    m.def("dist1_real",
          [](int n, const std::vector<double>& values) { return dist1_real(RealFunction(n, values)); });
    m.def("dist1_real_lp",
          [](int n, const std::vector<double>& values) { return dist1_real_lp(RealFunction(n, values)); });
    m.def("dist_tv_monotone", [](py::object d) {
        return dist_tv_monotone(materialize(make_distribution(d)));
    });
    m.def("talagrand_functional", [](int n, const std::vector<double>& values, int norm) {
        return talagrand_functional(RealFunction(n, values), norm);
    });
    m.def("per_point_threshold_norm", [](int n, const std::vector<double>& values, const std::string& x) {
        return per_point_threshold_norm(RealFunction(n, values), Point::from_string(x));
    });

    // tester
    m.def(
        "edge_test",
        [](py::object d, double eps, std::uint64_t seed) {
            const Distribution target = make_distribution(d);
            SubcubeOracle oracle(target);
            TesterConfig cfg;
            cfg.eps = eps;
            RandomStream rng(seed);
            const Verdict v = edge_test(oracle, cfg, rng);
            py::dict out;
            out["accept"] = v.accept;
            out["queries"] = v.ledger.total_queries;
            return out;
        },
        py::arg("distribution"), py::arg("eps"), py::arg("seed"));
    m.def("scheduled_query_total", [](int n, double eps) {
        TesterConfig cfg;
        cfg.eps = eps;
        return scheduled_query_total(n, cfg);
    });
    m.def("far_certificate", [](int n, const std::vector<double>& mass, double eps) -> py::object {
        const auto cert = far_certificate(ExplicitDistribution(n, mass), eps);
        if (!cert) return py::none();
        py::dict out;
        out["gamma"] = cert->gamma;
        out["ell"] = cert->ell;
        out["eta"] = cert->eta;
        out["probability"] = cert->probability;
        return out;
    });

    // instances
    m.def("moment_matched_pair", [](int K) {
        const MomentMatchedPair pair = build_moment_matched(K);
        py::dict out;
        std::vector<std::string> zs;
        for (const auto& zi : pair.z) zs.push_back(zi.get_str());
        out["z"] = zs;
        out["z_norm"] = pair.z_norm.get_str();
        py::dict a, b;
        for (std::size_t i = 0; i < pair.yes_law.values.size(); ++i)
            a[py::int_(pair.yes_law.values[i])] = pair.yes_law.masses[i].get_str();
        for (std::size_t i = 0; i < pair.no_law.values.size(); ++i)
            b[py::int_(pair.no_law.values[i])] = pair.no_law.masses[i].get_str();
        out["A"] = a;
        out["B"] = b;
        return out;
    });
    m.def("gaussian_sign_mean", &gaussian_sign_mean);
    m.def("matching_distance_lower_bound", [](const std::vector<double>& mu, const std::vector<int>& N) {
        return matching_distance_lower_bound(ProductDistribution(mu), N);
    });
    m.def(
        "uniformity_hard_mu",
        [](int n, double eps, std::uint64_t seed) {
            RandomStream rng(seed);
            return uniformity_hard_instance(n, eps, rng).mean_vector();
        },
        py::arg("n"), py::arg("eps"), py::arg("seed"));

    // analysis
    m.def("count_distribution", [](int q, const std::vector<std::pair<double, double>>& law) {
        return count_distribution(q, make_mean_law(law)).probs;
    });
    m.def("count_tv", [](int n, int q, const std::vector<std::pair<double, double>>& yes,
                         const std::vector<std::pair<double, double>>& no, const std::string& mode) {
        return count_tv(n, q, yes, no, mode == "exact" ? CountTvMode::exact : CountTvMode::subadditive);
    });
    m.def("conditional_moment_ratio", [](int q, int d, int sigma,
                                         const std::vector<std::pair<double, double>>& yes,
                                         const std::vector<std::pair<double, double>>& no) {
        return conditional_moment_ratio(q, d, sigma, yes, no);
    });
    m.def("likelihood_ratio_log", [](const std::vector<std::vector<double>>& samples, double eps) {
        return likelihood_ratio_log(samples, eps);
    });
}
