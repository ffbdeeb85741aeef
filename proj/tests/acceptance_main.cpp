// Acceptance suite: runs every verified identity at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include "cylev/scenario.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>

namespace {

int failures = 0;

void report(int number, const std::string& label, bool pass, double seconds) {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << number << ": " << label << "  ("
            << seconds << " s)\n";
  if (!pass) ++failures;
}

cylev::RunOverrides overrides() {
  cylev::RunOverrides ov;
  if (const char* env = std::getenv("CYLEV_ACCEPT_PATHS")) {
    const long n = std::atol(env);
    if (n > 0) ov.n_paths = static_cast<std::size_t>(n);
  }
  return ov;
}

bool run_bundled(const std::string& id) {
  const cylev::RunResult result = cylev::run_scenario(cylev::bundled_scenario(id), overrides());
  return result.all_passed;
}

template <typename Fn>
void criterion(int number, const std::string& label, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  try {
    pass = fn();
  } catch (const std::exception& e) {
    std::cout << "  error: " << e.what() << "\n";
    pass = false;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(number, label, pass, seconds);
}

}  // namespace

int main() {
  std::cout << "cylindrical Levy process acceptance suite\n";

  criterion(1, "cylindrical Poisson covariance matches lambda zeta zeta^T (dim 4, lambda 2)",
            [] { return run_bundled("poisson_q2"); });

  criterion(2, "Q2(t) = t Q2(1) entrywise at t in {0.5, 2}",
            [] { return run_bundled("q2_time_scaling"); });

  criterion(3, "Ito isometry, scalar (exact target 1.0) and dim 4 with adapted integrands",
            [] { return run_bundled("ito_isometry_scalar") && run_bundled("ito_isometry_dim4"); });

  criterion(4, "cross-expectation oracle on 5 randomized configurations",
            [] { return run_bundled("cross_expectation"); });

  criterion(5, "basis independence: pathwise <= 1e-8 and L2 within 3 SE",
            [] { return run_bundled("basis_independence"); });

  criterion(6, "nonlinearity witness: P discrepancy equals zeta(a+b) n(t) at the bit level",
            [] { return run_bundled("nonlinearity_witness"); });

  criterion(7, "pathwise linearity over 1000 random (alpha, a, b, omega), rel <= 1e-12",
            [] { return run_bundled("pathwise_linearity"); });

  criterion(8, "Levy-Ito reconstruction per path <= 1e-10",
            [] { return run_bundled("levy_ito_reconstruction"); });

  criterion(9, "OU stationary variance 1/(2 theta), theta in {0.5, 1, 2}, |S(t_long)| <= 1e-4",
            [] { return run_bundled("ou_stationary_variance"); });

  criterion(10, "flow composition pathwise <= 1e-10 on 5 random scenarios",
            [] { return run_bundled("flow_composition"); });

  criterion(11, "weak-residual order: halving dt gives ratios in [1.7, 2.3] over 20 paths",
            [] { return run_bundled("weak_residual_order"); });

  criterion(12, "Mehler identity with trigonometric test functions at 10 arguments",
            [] { return run_bundled("mehler_identity"); });

  criterion(13, "self-decomposability of the invariant law at 10 arguments",
            [] { return run_bundled("invariant_measure_expstable"); });

  criterion(14, "translation counterexample: fit residual > 0.1, OU control < 1e-6",
            [] { return run_bundled("translation_counterexample"); });

  criterion(15, "characteristic-function suites (Poisson, compound Poisson, impulsive)",
            [] {
              return run_bundled("charfn_cyl_poisson") &&
                     run_bundled("charfn_compound_poisson") && run_bundled("charfn_impulsive");
            });

  criterion(16, "byte-identical reports for identical seeds, any thread count", [] {
    for (const std::string id : {"levy_ito_reconstruction", "poisson_q2"}) {
      cylev::Json cfg = cylev::bundled_scenario(id);
      cfg["n_paths"] = 20000;
      cylev::RunOverrides one = overrides(), four = overrides();
      one.threads = 1;
      four.threads = 4;
      const cylev::RunResult a = cylev::run_scenario(cfg, one);
      const cylev::RunResult b = cylev::run_scenario(cfg, four);
      if (a.summary.dump() != b.summary.dump()) return false;
      if (a.reports.size() != b.reports.size()) return false;
      for (std::size_t i = 0; i < a.reports.size(); ++i) {
        if (a.reports[i].first != b.reports[i].first) return false;
        if (a.reports[i].second.dump() != b.reports[i].second.dump()) return false;
      }
      // Rerun with the same seed: identical again.
      const cylev::RunResult c = cylev::run_scenario(cfg, one);
      if (a.summary.dump() != c.summary.dump()) return false;
    }
    return true;
  });

  std::cout << (failures == 0 ? "all acceptance criteria passed\n"
                              : "acceptance failures: " + std::to_string(failures) + "\n");
  return failures;
}
