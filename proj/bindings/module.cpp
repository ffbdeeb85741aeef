#include "cylev/charfn.hpp"
#include "cylev/rkhs.hpp"
#include "cylev/scenario.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

cylev::CylLevyProcess process_from_json(const std::string& spec) {
  const cylev::Json j = cylev::parse_config_text(spec);
  return cylev::CylLevyProcess(cylev::parse_process_kind(j, cylev::Json::object()));
}

std::vector<cylev::DualFunctional> functionals_from_rows(const cylev::Mat& rows) {
  std::vector<cylev::DualFunctional> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    out.emplace_back(cylev::Vec(rows.row(r).transpose()));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cylindrical Levy process simulation and verification core";

  m.def(
      "run_scenario",
      [](const std::string& config, py::object seed, py::object n_paths, py::object threads) {
        cylev::Json cfg = cylev::parse_config_text(config);
        cylev::RunOverrides ov;
        if (!seed.is_none()) ov.seed = seed.cast<std::uint64_t>();
        if (!n_paths.is_none()) ov.n_paths = n_paths.cast<std::size_t>();
        if (!threads.is_none()) ov.threads = threads.cast<int>();
        const cylev::RunResult result = cylev::run_scenario(cfg, ov);
        cylev::Json out{{"summary", result.summary}, {"reports", cylev::Json::object()}};
        for (const auto& [id, body] : result.reports) out["reports"][id] = body;
        return out.dump();
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("n_paths") = py::none(),
      py::arg("threads") = py::none(),
      "Run a scenario config (JSON text); returns the summary and reports as JSON text.");

  m.def("list_scenarios", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& info : cylev::list_scenarios()) out.emplace_back(info.id, info.description);
    return out;
  });

  m.def("bundled_scenario",
        [](const std::string& id) { return cylev::bundled_scenario(id).dump(); });

  m.def(
      "sample_joint",
      [](const std::string& process, const cylev::Mat& functionals,
         const std::vector<double>& grid, std::uint64_t seed, std::uint64_t path_index) {
        const cylev::CylLevyProcess proc = process_from_json(process);
        const cylev::PathBundle bundle =
            sample_joint(proc, functionals_from_rows(functionals), grid, seed, path_index);
        return std::make_pair(bundle.times, cylev::Mat(bundle.values));
      },
      py::arg("process"), py::arg("functionals"), py::arg("grid"), py::arg("seed"),
      py::arg("path_index") = 0,
      "Joint path bundle of L(t)a_j on one latent draw; returns (times, values).");

  m.def(
      "decompose",
      [](const std::string& process, const cylev::Vec& a, const std::vector<double>& grid,
         std::uint64_t seed, std::uint64_t path_index) {
        const cylev::CylLevyProcess proc = process_from_json(process);
        const cylev::DecompositionTerms d =
            decompose(proc, cylev::DualFunctional(a), grid, seed, path_index);
        py::dict out;
        out["times"] = d.times;
        out["drift_rate"] = d.drift_rate;
        out["wiener"] = d.wiener;
        out["small_jumps"] = d.small_jumps;
        out["big_jumps"] = d.big_jumps;
        out["total"] = d.total;
        return out;
      },
      py::arg("process"), py::arg("a"), py::arg("grid"), py::arg("seed"),
      py::arg("path_index") = 0, "Levy-Ito decomposition terms of one projected path.");

  m.def(
      "m2_samples",
      [](const std::string& process, const cylev::Mat& functionals, double t,
         std::size_t n_paths, std::uint64_t seed) {
        return m2_samples(process_from_json(process), functionals_from_rows(functionals), t,
                          n_paths, seed);
      },
      py::arg("process"), py::arg("functionals"), py::arg("t"), py::arg("n_paths"),
      py::arg("seed"), "Samples of the fully compensated jump part M2(t)a_j (paths x j).");

  m.def(
      "latent_samples",
      [](const std::string& process, double t, std::size_t n_paths, std::uint64_t seed) {
        return latent_samples(process_from_json(process), t, n_paths, seed);
      },
      py::arg("process"), py::arg("t"), py::arg("n_paths"), py::arg("seed"));

  m.def(
      "estimate_q2",
      [](const std::string& process, const cylev::Mat& functionals, std::size_t n_paths,
         std::uint64_t seed) {
        const cylev::Q2Estimate est = estimate_q2(
            process_from_json(process), functionals_from_rows(functionals), n_paths, seed);
        return std::make_pair(est.q, est.se);
      },
      py::arg("process"), py::arg("functionals"), py::arg("n_paths"), py::arg("seed"),
      "Monte Carlo covariance of M2(1); returns (estimate, standard errors).");

  m.def(
      "factorize",
      [](const cylev::Mat& q, double rank_tol) {
        const cylev::CovarianceFactorization fact = cylev::factorize(q, rank_tol);
        cylev::Mat preimages(fact.rank(), fact.dim());
        for (int k = 0; k < fact.rank(); ++k)
          preimages.row(k) = fact.basis_preimages[static_cast<std::size_t>(k)].coeffs.transpose();
        return std::make_pair(fact.i_q, preimages);
      },
      py::arg("q"), py::arg("rank_tol") = 1e-12,
      "Covariance factorization Q = i_Q i_Q*; returns (i_Q, preimage functionals as rows).");

  m.def(
      "char_value",
      [](const std::string& process, double t, const cylev::Vec& a) {
        const cylev::CylLevyProcess proc = process_from_json(process);
        return cylev::CharFunctional::from_process(proc.kind(), t)(cylev::DualFunctional(a));
      },
      py::arg("process"), py::arg("t"), py::arg("a"),
      "Closed-form characteristic functional phi_{L(t)}(a).");

  m.def(
      "char_empirical",
      [](const cylev::Mat& latent, const cylev::Vec& a) {
        const auto v = cylev::CharFunctional::empirical(latent).evaluate(cylev::DualFunctional(a));
        return std::make_pair(v.value, v.se);
      },
      py::arg("latent"), py::arg("a"),
      "Empirical characteristic functional over latent samples; returns (value, se).");

  m.def(
      "normalize_driver",
      [](const std::string& triplet) {
        const cylev::LevyTriplet1D t = cylev::parse_triplet(cylev::parse_config_text(triplet));
        const cylev::LevyTriplet1D n = cylev::normalize_to_unit_quadratic(t);
        py::dict out;
        out["drift"] = n.drift;
        out["gauss_var"] = n.gauss_var;
        out["jump_second_moment"] = n.jump_second_moment();
        out["variance_rate"] = n.variance_rate();
        return out;
      },
      py::arg("triplet"), "Rescale jump sizes to unit quadratic variation; returns a summary.");
}
