#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylev/integration.hpp"
#include "cylev/mc.hpp"

#include <algorithm>
#include <cmath>

using namespace cylev;

namespace {

LevyTriplet1D unit_poisson_driver() {
  return LevyTriplet1D::compensated(CompoundPoissonJumps{1.0, JumpSizeLaw::point_mass(1.0)});
}

LevyTriplet1D unit_exp_driver() {
  return LevyTriplet1D::compensated(
      CompoundPoissonJumps{1.0, JumpSizeLaw::two_sided_exponential(std::sqrt(2.0))});
}

CylLevyProcess scalar_series() {
  SeriesDesc d;
  d.factor = Mat::Identity(1, 1);
  d.drivers.push_back(unit_poisson_driver());
  return CylLevyProcess(ProcessKind(d));
}

CylLevyProcess dim3_series(const Mat& factor) {
  SeriesDesc d;
  d.factor = factor;
  d.drivers = {unit_poisson_driver(), unit_exp_driver(), LevyTriplet1D(0.0, 1.0)};
  return CylLevyProcess(ProcessKind(d));
}

}  // namespace

TEST_CASE("zero integrand integrates to zero") {
  const CylLevyProcess proc = scalar_series();
  const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Zero(1, 1));
  const std::vector<double> grid = uniform_grid(1.0, 16);
  CHECK(integrate(phi, proc, DualFunctional((Vec(1) << 1.0).finished()), grid, 3, 0) == 0.0);
}

TEST_CASE("scalar constant integrand: I_T f = f m_1(T) pathwise") {
  const CylLevyProcess proc = scalar_series();
  const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Identity(1, 1));
  const std::vector<double> grid = uniform_grid(1.0, 16);
  const double f = -1.7;
  for (std::uint64_t p = 0; p < 50; ++p) {
    const double i = integrate(phi, proc, DualFunctional((Vec(1) << f).finished()), grid, 5, p);
    const DriverPaths dp = sample_drivers(proc.series(), grid, 5, p);
    CHECK(i == doctest::Approx(f * dp.paths[0].values.back()).epsilon(1e-13));
  }
  // E|I_T f|^2 = f^2 T within 3 SE.
  const auto samples = integrate_samples(phi, proc,
                                         DualFunctional((Vec(1) << f).finished()), grid,
                                         100000, 7);
  std::vector<double> sq(samples.size());
  for (std::size_t p = 0; p < samples.size(); ++p) sq[p] = samples[p] * samples[p];
  CHECK(mc_mean(sq, f * f).pass);
}

TEST_CASE("identity integrand isometry: E|I_T f|^2 = T |i_Q^* f|^2") {
  Mat factor(3, 3);
  factor << 1.0, 0.0, 0.3, 0.2, 0.8, 0.0, 0.0, -0.4, 1.1;
  const CylLevyProcess proc = dim3_series(factor);
  const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Identity(3, 3));
  const std::vector<double> grid = uniform_grid(1.0, 32);
  const DualFunctional f((Vec(3) << 0.4, -1.0, 0.6).finished());
  const double target = (factor.transpose() * f.coeffs).squaredNorm();
  const auto samples = integrate_samples(phi, proc, f, grid, 100000, 11);
  std::vector<double> sq(samples.size());
  for (std::size_t p = 0; p < samples.size(); ++p) sq[p] = samples[p] * samples[p];
  CHECK(mc_mean(sq, target).pass);
}

TEST_CASE("integral is linear in the functional, exactly per path") {
  Mat factor(3, 3);
  factor << 1.0, 0.0, 0.3, 0.2, 0.8, 0.0, 0.0, -0.4, 1.1;
  const CylLevyProcess proc = dim3_series(factor);
  std::vector<Mat> values = {Mat::Identity(3, 3), Mat(2.0 * Mat::Identity(3, 3))};
  const StepIntegrand phi = StepIntegrand::deterministic({0.0, 0.4, 1.0}, values);
  const std::vector<double> grid = uniform_grid(1.0, 10);
  CounterRng rng(13, 0);
  for (std::uint64_t p = 0; p < 30; ++p) {
    Vec f(3), g(3);
    for (int k = 0; k < 3; ++k) {
      f[k] = 2.0 * rng.uniform() - 1.0;
      g[k] = 2.0 * rng.uniform() - 1.0;
    }
    const double alpha = 4.0 * rng.uniform() - 2.0;
    const double lhs =
        integrate(phi, proc, DualFunctional(alpha * f + g), grid, 17, p);
    const double rhs = alpha * integrate(phi, proc, DualFunctional(f), grid, 17, p) +
                       integrate(phi, proc, DualFunctional(g), grid, 17, p);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("integral has zero mean against compensated drivers") {
  Mat factor(3, 3);
  factor << 1.0, 0.0, 0.3, 0.2, 0.8, 0.0, 0.0, -0.4, 1.1;
  const CylLevyProcess proc = dim3_series(factor);
  const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Identity(3, 3));
  const std::vector<double> grid = uniform_grid(1.0, 16);
  const auto samples = integrate_samples(
      phi, proc, DualFunctional((Vec(3) << 1.0, 0.5, -0.5).finished()), grid, 100000, 19);
  CHECK(mc_mean(samples, 0.0).pass);
}

TEST_CASE("misaligned breakpoints are rejected") {
  const CylLevyProcess proc = scalar_series();
  const StepIntegrand phi =
      StepIntegrand::deterministic({0.0, 0.37, 1.0}, {Mat::Identity(1, 1), Mat::Identity(1, 1)});
  const std::vector<double> grid = uniform_grid(1.0, 10);  // 0.37 not on the grid
  CHECK_THROWS_AS(
      integrate(phi, proc, DualFunctional((Vec(1) << 1.0).finished()), grid, 23, 0),
      InvalidInput);
}

TEST_CASE("Ito isometry report for deterministic and adapted integrands") {
  Mat factor(3, 3);
  factor << 1.0, 0.0, 0.3, 0.2, 0.8, 0.0, 0.0, -0.4, 1.1;
  const CylLevyProcess proc = dim3_series(factor);
  const std::vector<double> grid = uniform_grid(1.0, 32);
  const DualFunctional f((Vec(3) << 0.4, -1.0, 0.6).finished());

  SUBCASE("deterministic: exact right side") {
    const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Identity(3, 3));
    const IsometryReport rep = ito_isometry_check(phi, proc, f, grid, 100000, 29);
    CHECK(rep.rhs_se == 0.0);
    CHECK(rep.rhs == doctest::Approx((factor.transpose() * f.coeffs).squaredNorm()));
    CHECK(rep.pass);
  }

  SUBCASE("adapted sign rule: right side collapses to a constant") {
    Mat base = Mat::Identity(3, 3);
    const StepIntegrand phi = StepIntegrand::adapted(
        {0.0, 0.25, 0.5, 0.75, 1.0}, 3, 3, [base](std::size_t, const Mat& history) {
          const double v = history.cols() > 0 ? history(0, history.cols() - 1) : 0.0;
          return Mat((v >= 0.0 ? 1.0 : -1.0) * base);
        });
    const IsometryReport rep = ito_isometry_check(phi, proc, f, grid, 100000, 31);
    CHECK(rep.rhs_se == 0.0);  // |i_Q* (±I)* f| does not depend on the sign
    CHECK(rep.pass);
  }

  SUBCASE("adapted magnitude rule: both sides Monte Carlo") {
    Mat base = Mat::Identity(3, 3);
    const StepIntegrand phi = StepIntegrand::adapted(
        {0.0, 0.25, 0.5, 0.75, 1.0}, 3, 3, [base](std::size_t, const Mat& history) {
          const double v = history.cols() > 0 ? history(0, history.cols() - 1) : 0.0;
          return Mat(std::clamp(v, -2.0, 2.0) * base);
        });
    const IsometryReport rep = ito_isometry_check(phi, proc, f, grid, 100000, 31);
    CHECK(rep.rhs_se > 0.0);
    CHECK(rep.pass);
  }

  SUBCASE("zero integrand: both sides vanish") {
    const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Zero(3, 3));
    const IsometryReport rep = ito_isometry_check(phi, proc, f, grid, 1000, 37);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.pass);
  }
}

TEST_CASE("cross-expectation oracle") {
  Mat factor(3, 3);
  factor << 1.0, 0.0, 0.3, 0.2, 0.8, 0.0, 0.0, -0.4, 1.1;
  const CylLevyProcess proc = dim3_series(factor);
  const std::vector<double> grid = uniform_grid(1.0, 32);

  SUBCASE("uncorrelated projections kill the right side") {
    // Functionals orthogonal through Q: c1 . c2 = 0.
    const Vec a1 = (Vec(3) << 1.0, 0.0, 0.0).finished();
    Vec c1 = factor.transpose() * a1;
    // Build a2 with i_Q^T a2 orthogonal to c1.
    Vec c2 = (Vec(3) << -c1[1], c1[0], 0.0).finished();
    const Vec a2 = factor.transpose().fullPivLu().solve(c2);
    const StepProcess h = StepProcess::deterministic(std::vector<double>(32, 1.0));
    const CrossExpectationReport rep = cross_expectation(
        h, h, proc, DualFunctional(a1), DualFunctional(a2), grid, 100000, 41);
    CHECK(std::abs(rep.covariance) <= 1e-10);
    CHECK(std::abs(rep.rhs) <= 1e-10);
    CHECK(rep.pass);
  }

  SUBCASE("h = 1, m1 = m2 normalized recovers T") {
    const Vec a1 = (Vec(3) << 1.0, 0.0, 0.0).finished();
    const double cov = (factor.transpose() * a1).squaredNorm();
    const StepProcess h = StepProcess::deterministic(std::vector<double>(32, 1.0));
    const CrossExpectationReport rep = cross_expectation(
        h, h, proc, DualFunctional(a1), DualFunctional(a1), grid, 100000, 43);
    CHECK(rep.rhs == doctest::Approx(cov).epsilon(1e-12));
    CHECK(rep.pass);
  }

  SUBCASE("h2 = 0 forces both sides to zero") {
    const Vec a = (Vec(3) << 0.5, 0.5, 0.5).finished();
    const StepProcess h1 = StepProcess::deterministic(std::vector<double>(32, 1.0));
    const StepProcess h0 = StepProcess::deterministic(std::vector<double>(32, 0.0));
    const CrossExpectationReport rep = cross_expectation(
        h1, h0, proc, DualFunctional(a), DualFunctional(a), grid, 1000, 47);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.pass);
  }

  SUBCASE("adapted step processes agree within 3 SE") {
    const Vec a1 = (Vec(3) << 1.0, 0.2, -0.4).finished();
    const Vec a2 = (Vec(3) << -0.3, 1.0, 0.6).finished();
    const StepProcess sign = StepProcess::adapted(32, [](std::size_t, const Mat& history) {
      const double v = history.cols() > 0 ? history(0, history.cols() - 1) : 0.0;
      return v >= 0.0 ? 1.0 : -1.0;
    });
    const CrossExpectationReport rep = cross_expectation(
        sign, sign, proc, DualFunctional(a1), DualFunctional(a2), grid, 100000, 53);
    CHECK(rep.pass);
  }
}

TEST_CASE("basis independence under the rotation trick") {
  CounterRng rng(59, 0);
  Mat b(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = 2.0 * rng.uniform() - 1.0;
  const Mat q = b * b.transpose();
  const CovarianceFactorization fact = factorize(q);
  const std::vector<double> grid = uniform_grid(1.0, 16);
  const DualFunctional f((Vec(3) << 0.4, -0.2, 1.0).finished());
  const std::vector<LevyTriplet1D> drivers = {unit_poisson_driver(), unit_exp_driver()};

  SUBCASE("identical bases give a pathwise-zero difference") {
    const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Identity(3, 3));
    const BasisIndependenceReport rep = basis_independence_check(
        phi, q, fact.i_q, fact.i_q, drivers, f, grid, 1000, 61);
    CHECK(rep.max_pathwise_diff == 0.0);
    CHECK(rep.pass);
  }

  SUBCASE("45-degree rotation: pathwise difference at machine scale") {
    Mat r = Mat::Identity(3, 3);
    const double th = M_PI / 4.0;
    r(0, 0) = std::cos(th);
    r(0, 1) = -std::sin(th);
    r(1, 0) = std::sin(th);
    r(1, 1) = std::cos(th);
    const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Identity(3, 3));
    const BasisIndependenceReport rep = basis_independence_check(
        phi, q, fact.i_q, Mat(fact.i_q * r), drivers, f, grid, 10000, 67);
    CHECK(rep.max_pathwise_diff <= 1e-8);
    CHECK(rep.l2_diff <= 1e-16);
    CHECK(rep.pass);
  }

  SUBCASE("bases of different Q are rejected") {
    const StepIntegrand phi = StepIntegrand::constant(1.0, Mat::Identity(3, 3));
    CHECK_THROWS_AS(basis_independence_check(phi, q, fact.i_q, Mat(2.0 * fact.i_q), drivers, f,
                                             grid, 100, 71),
                    InvalidInput);
  }
}

TEST_CASE("Doob-bound sanity for the running supremum") {
  const CylLevyProcess proc = scalar_series();
  const std::vector<double> grid = uniform_grid(1.0, 32);
  const std::size_t n = 100000;
  std::vector<double> sup_sq(n), final_sq(n);
  parallel_for(n, [&](std::size_t p) {
    const DriverPaths dp = sample_drivers(proc.series(), grid, 73, p);
    double sup = 0.0;
    for (double v : dp.paths[0].values) sup = std::max(sup, std::abs(v));
    sup_sq[p] = sup * sup;
    final_sq[p] = dp.paths[0].values.back() * dp.paths[0].values.back();
  });
  const MeanSe sup_ms = mean_se(sup_sq);
  const MeanSe fin_ms = mean_se(final_sq);
  CHECK(sup_ms.mean <= 4.0 * fin_ms.mean * (1.0 + 3.0 * fin_ms.se));
}
