#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylev/mc.hpp"
#include "cylev/rkhs.hpp"

#include <cmath>

using namespace cylev;

namespace {

LevyTriplet1D unit_poisson_driver() {
  return LevyTriplet1D::compensated(CompoundPoissonJumps{1.0, JumpSizeLaw::point_mass(1.0)});
}

Mat random_psd(CounterRng& rng, int n) {
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = 2.0 * rng.uniform() - 1.0;
  return b * b.transpose();
}

std::vector<DualFunctional> canonical_basis(int n) {
  std::vector<DualFunctional> out;
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e[k] = 1.0;
    out.emplace_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("factorization of simple matrices") {
  SUBCASE("identity") {
    const CovarianceFactorization f = factorize(Mat::Identity(2, 2));
    CHECK(f.rank() == 2);
    CHECK((f.i_q * f.i_q.transpose() - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    for (int k = 0; k < 2; ++k) {
      const Vec coords = f.embed_adjoint(f.basis_preimages[static_cast<std::size_t>(k)].coeffs);
      Vec ek = Vec::Zero(2);
      ek[k] = 1.0;
      CHECK((coords - ek).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("diag(4, 0) has rank one with i_Q = (2, 0) and a_1 = (1/2, 0)") {
    Mat q = Mat::Zero(2, 2);
    q(0, 0) = 4.0;
    const CovarianceFactorization f = factorize(q);
    CHECK(f.rank() == 1);
    CHECK(std::abs(std::abs(f.i_q(0, 0)) - 2.0) <= 1e-14);
    CHECK(std::abs(f.i_q(1, 0)) <= 1e-14);
    CHECK(std::abs(std::abs(f.basis_preimages[0].coeffs[0]) - 0.5) <= 1e-14);
  }

  SUBCASE("rank-one lambda zeta zeta^T") {
    Vec zeta(3);
    zeta << 1.0, -2.0, 0.5;
    const double lambda = 2.0;
    const Mat q = lambda * zeta * zeta.transpose();
    const CovarianceFactorization f = factorize(q);
    CHECK(f.rank() == 1);
    const double expected_norm = std::sqrt(lambda) * zeta.norm();
    CHECK(f.i_q.col(0).norm() == doctest::Approx(expected_norm).epsilon(1e-12));
  }
}

TEST_CASE("factorization properties on random PSD matrices") {
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(15));
    const Mat q = random_psd(rng, n);
    const CovarianceFactorization f = factorize(q);
    // Q = i_Q i_Q^* to 1e-10.
    CHECK((f.i_q * f.i_q.transpose() - q).cwiseAbs().maxCoeff() <= 1e-10);
    // i_Q^* a_k = e_k.
    for (int k = 0; k < f.rank(); ++k) {
      const Vec coords = f.embed_adjoint(f.basis_preimages[static_cast<std::size_t>(k)].coeffs);
      for (int l = 0; l < f.rank(); ++l)
        CHECK(std::abs(coords[l] - (l == k ? 1.0 : 0.0)) <= 1e-10);
    }
    // Reproducing property [Qa, Qb]_H = <Qa, b>.
    for (int rep = 0; rep < 5; ++rep) {
      Vec a(n), b(n);
      for (int k = 0; k < n; ++k) {
        a[k] = 2.0 * rng.uniform() - 1.0;
        b[k] = 2.0 * rng.uniform() - 1.0;
      }
      const double lhs = f.embed_adjoint(a).dot(f.embed_adjoint(b));  // [i*a, i*b]_H
      const double rhs = a.dot(q * b);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("factorization rejects bad inputs") {
  Mat asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(factorize(asym), InvalidInput);
  Mat negative = -Mat::Identity(2, 2);
  CHECK_THROWS_AS(factorize(negative), InvalidInput);
}

TEST_CASE("truncation profile decreases to zero") {
  CounterRng rng(5, 0);
  const Mat q = random_psd(rng, 6);
  const CovarianceFactorization f = factorize(q);
  Vec a(6);
  for (int k = 0; k < 6; ++k) a[k] = 2.0 * rng.uniform() - 1.0;
  const auto profile = truncation_profile(f, a);
  CHECK(profile.size() == static_cast<std::size_t>(f.rank()) + 1);
  CHECK(profile.back() == 0.0);
  for (std::size_t m = 1; m < profile.size(); ++m) CHECK(profile[m] <= profile[m - 1] + 1e-15);
  CHECK(profile.front() == doctest::Approx(f.embed_adjoint(a).norm()));
}

TEST_CASE("Q2 estimate of the cylindrical Poisson process") {
  Vec zeta(3);
  zeta << 1.0, -0.5, 0.25;
  const double lambda = 2.0;
  const CylLevyProcess proc{ProcessKind(CylPoissonDesc{lambda, zeta})};
  const auto basis = canonical_basis(3);
  const Q2Estimate est = estimate_q2(proc, basis, 100000, 7);
  const Mat target = lambda * zeta * zeta.transpose();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(est.q(i, j) - target(i, j)) <= 3.5 * std::max(est.se(i, j), 1e-12));
}

TEST_CASE("Q2 estimate of the zero process vanishes") {
  InducedLevyDesc d;
  d.drift = Vec::Zero(2);
  const CylLevyProcess proc{ProcessKind(d)};
  const Q2Estimate est = estimate_q2(proc, canonical_basis(2), 1000, 11);
  CHECK(est.q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("series process covariance recovers the factorized form") {
  CounterRng rng(13, 0);
  const Mat q = random_psd(rng, 3);
  const CovarianceFactorization f = factorize(q);
  const CylLevyProcess proc = build_series_process(f, {unit_poisson_driver()});
  const Q2Estimate est = estimate_q2(proc, canonical_basis(3), 100000, 17);
  SuiteTally tally;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Comparison c;
      c.diff = std::abs(est.q(i, j) - q(i, j));
      c.combined_se = est.se(i, j);
      c.pass = c.diff <= kSigmaRule * c.combined_se;
      tally.add(c);
    }
  CHECK(tally.pass());

  // E|M2(1)a|^2 = |i_Q^* a|^2.
  Vec a(3);
  a << 0.4, -1.0, 0.7;
  const Mat samples = m2_samples(proc, {DualFunctional(a)}, 1.0, 100000, 19);
  std::vector<double> sq(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index p = 0; p < samples.rows(); ++p) sq[static_cast<std::size_t>(p)] =
      samples(p, 0) * samples(p, 0);
  CHECK(mc_mean(sq, f.embed_adjoint(a).squaredNorm()).pass);
}

TEST_CASE("driver projections are uncorrelated with E[m_k(s) m_l(t)] = s delta_kl") {
  CounterRng rng(23, 0);
  const Mat q = random_psd(rng, 3);
  const CovarianceFactorization f = factorize(q);
  const CylLevyProcess proc = build_series_process(
      f, {unit_poisson_driver(),
          LevyTriplet1D::compensated(
              CompoundPoissonJumps{1.0, JumpSizeLaw::uniform(-std::sqrt(3.0), std::sqrt(3.0))})});

  const double s = 0.5, t = 1.0;
  const std::vector<double> grid = {0.0, s, t};
  const std::size_t n = 100000;
  const int r = f.rank();
  Mat prods = Mat::Zero(static_cast<int>(n), r * r);
  parallel_for(n, [&](std::size_t p) {
    const DriverPaths dp = sample_drivers(proc.series(), grid, 29, p);
    for (int k = 0; k < r; ++k)
      for (int l = 0; l < r; ++l)
        prods(static_cast<int>(p), k * r + l) =
            dp.paths[static_cast<std::size_t>(k)].values[1] *
            dp.paths[static_cast<std::size_t>(l)].values[2];
  });
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l) {
      std::vector<double> xs(n);
      for (std::size_t p = 0; p < n; ++p) xs[p] = prods(static_cast<int>(p), k * r + l);
      const double target = (k == l) ? s : 0.0;
      CHECK(mc_mean(xs, target).pass);
    }
}

TEST_CASE("q2 time scaling holds for the Poisson example") {
  Vec zeta(2);
  zeta << 1.0, -0.5;
  const CylLevyProcess proc{ProcessKind(CylPoissonDesc{2.0, zeta})};
  const Q2ScalingReport rep =
      q2_time_scaling_check(proc, canonical_basis(2), {0.5, 2.0}, 50000, 31);
  CHECK(rep.pass);
}

TEST_CASE("build_series_process validates drivers") {
  const CovarianceFactorization f = factorize(Mat::Identity(2, 2));
  // Unnormalized driver: E|m(1)|^2 = 4.
  const LevyTriplet1D bad =
      LevyTriplet1D::compensated(CompoundPoissonJumps{1.0, JumpSizeLaw::point_mass(2.0)});
  CHECK_THROWS_AS(build_series_process(f, {bad}), InvalidInput);
  // Non-centered driver.
  const LevyTriplet1D off(0.0, 0.0, CompoundPoissonJumps{1.0, JumpSizeLaw::point_mass(1.0)});
  CHECK_THROWS_AS(build_series_process(f, {off}), InvalidInput);
  // A normalized Gaussian driver is fine.
  CHECK_NOTHROW(build_series_process(f, {LevyTriplet1D(0.0, 1.0)}));
}
