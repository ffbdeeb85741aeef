#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylev/rng.hpp"
#include "cylev/space.hpp"

#include <cmath>

using namespace cylev;

namespace {

// Independent matrix-exponential oracle: scaled Taylor series.
Mat expm_taylor(const Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::pow(2.0, s) > 0.5) ++s;
  const Mat b = a / std::pow(2.0, s);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat acc = term;
  for (int k = 1; k <= 40; ++k) {
    term = term * b / static_cast<double>(k);
    acc += term;
  }
  for (int k = 0; k < s; ++k) acc = acc * acc;
  return acc;
}

Mat random_matrix(CounterRng& rng, int n, double scale = 2.0) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * (2.0 * rng.uniform() - 1.0);
  return m;
}

Vec random_vec(CounterRng& rng, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
  return v;
}

}  // namespace

TEST_CASE("dual pairing on basis vectors and by hand") {
  Vec e1 = Vec::Zero(3);
  e1[0] = 1.0;
  CHECK(pairing(e1, DualFunctional(e1)) == 1.0);
  CHECK(pairing(Vec::Zero(3), DualFunctional(e1)) == 0.0);

  Vec u(2), a(2);
  u << 1.0, 2.0;
  a << 3.0, -1.0;
  CHECK(pairing(u, DualFunctional(a)) == 1.0);

  CHECK_THROWS_AS(pairing(Vec::Zero(2), DualFunctional(Vec::Zero(3))), InvalidInput);
}

TEST_CASE("pairing is bilinear exactly") {
  CounterRng rng(7, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(8));
    const Vec u = random_vec(rng, n);
    const Vec v = random_vec(rng, n);
    const Vec a = random_vec(rng, n);
    const double alpha = 2.0 * rng.uniform() - 1.0;
    // Exact equality holds because both sides reduce to the same fused dot
    // product evaluation order only up to rounding; allow 1 ulp scale.
    const double lhs = pairing(alpha * u + v, DualFunctional(a));
    const double rhs = alpha * pairing(u, DualFunctional(a)) + pairing(v, DualFunctional(a));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("dual norms of weighted p-norms") {
  NormKind l2{2.0, {}};
  Vec a(2);
  a << 3.0, 4.0;
  CHECK(l2.vector_norm(a) == doctest::Approx(5.0));
  CHECK(l2.dual_norm(a) == doctest::Approx(5.0));

  NormKind l1{1.0, {}};
  CHECK(l1.vector_norm(a) == doctest::Approx(7.0));
  CHECK(l1.dual_norm(a) == doctest::Approx(4.0));  // sup norm

  NormKind linf{std::numeric_limits<double>::infinity(), {}};
  CHECK(linf.vector_norm(a) == doctest::Approx(4.0));
  CHECK(linf.dual_norm(a) == doctest::Approx(7.0));

  // Weighted l2: |u| = sqrt(sum w u^2); dual weights are 1/w.
  NormKind wl2{2.0, {4.0, 1.0}};
  CHECK(wl2.vector_norm(a) == doctest::Approx(std::sqrt(4.0 * 9.0 + 16.0)));
  CHECK(wl2.dual_norm(a) == doctest::Approx(std::sqrt(9.0 / 4.0 + 16.0)));

  // Holder duality: <u, a> <= |u| |a|_* with equality at the aligned vector.
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec u = random_vec(rng, 4);
    const Vec b = random_vec(rng, 4);
    CHECK(std::abs(u.dot(b)) <= l2.vector_norm(u) * l2.dual_norm(b) * (1.0 + 1e-12));
  }
}

TEST_CASE("adjoint consistency of operators") {
  CounterRng rng(13, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(8));
    const OperatorMatrix m(random_matrix(rng, n));
    const Vec u = random_vec(rng, n);
    const DualFunctional f(random_vec(rng, n));
    CHECK(m.adjoint().adjoint().entries == m.entries);
    const double lhs = pairing(m.apply(u), f);
    const double rhs = pairing(u, m.apply_adjoint(f));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("matrix exponential against the Taylor oracle") {
  CounterRng rng(17, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(8));
    const Mat a = random_matrix(rng, n);
    const Mat ours = matrix_exponential(a, 1.0);
    const Mat oracle = expm_taylor(a);
    const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
    CHECK((ours - oracle).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("semigroup examples from first principles") {
  // A = 0: identity semigroup.
  auto id_sg = Semigroup::from_generator(Mat::Zero(3, 3));
  Vec u(3);
  u << 1.0, -2.0, 0.5;
  CHECK((id_sg.apply(5.0, u) - u).norm() == doctest::Approx(0.0));

  // A = -I in dim 2: scalar exponential decay.
  auto decay = Semigroup::from_generator(-Mat::Identity(2, 2));
  Vec e1(2);
  e1 << 1.0, 0.0;
  const Vec out = decay.apply(1.0, e1);
  CHECK(out[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(out[1] == 0.0);

  // Nilpotent generator: exp(tA) = I + tA.
  Mat nil(2, 2);
  nil << 0.0, 1.0, 0.0, 0.0;
  auto shear = Semigroup::from_generator(nil);
  Vec u2(2);
  u2 << 0.0, 1.0;
  const Vec sheared = shear.apply(1.0, u2);
  CHECK(sheared[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sheared[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("semigroup law and S(0) = I") {
  CounterRng rng(19, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(8));
    auto sg = Semigroup::from_generator(random_matrix(rng, n));
    CHECK(sg.evaluate(0.0) == Mat::Identity(n, n));
    const double t = 2.0 * rng.uniform();
    const double s = 2.0 * rng.uniform();
    const Mat lhs = sg.evaluate(t + s);
    const Mat rhs = sg.evaluate(t) * sg.evaluate(s);
    const double scale = std::max(1.0, lhs.cwiseAbs().maxCoeff());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("adjoint semigroup action") {
  CounterRng rng(23, 0);
  const Mat a = random_matrix(rng, 4);
  auto sg = Semigroup::from_generator(a);
  const Vec u = random_vec(rng, 4);
  const DualFunctional f(random_vec(rng, 4));
  const double lhs = pairing(sg.apply(0.7, u), f);
  const double rhs = pairing(u, sg.apply_adjoint(0.7, f));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
}

TEST_CASE("semigroup rejects bad inputs") {
  auto sg = Semigroup::from_generator(Mat::Identity(2, 2));
  CHECK_THROWS_AS(sg.apply(-1.0, Vec::Zero(2)), InvalidInput);
  Vec bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sg.apply(1.0, bad), InvalidInput);
  Mat nan_gen(1, 1);
  nan_gen << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Semigroup::from_generator(nan_gen), InvalidInput);
}

TEST_CASE("translation semigroup is a norm-one permutation power") {
  auto sg = Semigroup::translation(8, 0.25);
  CHECK(sg.operator_norm(0.0) == 1.0);
  CHECK(sg.operator_norm(1.75) == 1.0);
  CHECK(sg.evaluate(0.0) == Mat::Identity(8, 8));
  // Permutation-power law on grid-aligned times.
  const Mat s1 = sg.evaluate(0.25);
  CHECK(sg.evaluate(0.5) == Mat(s1 * s1));
  // Every row has exactly one unit entry.
  const Mat s = sg.evaluate(0.75);
  for (int i = 0; i < 8; ++i) {
    CHECK(s.row(i).sum() == 1.0);
    CHECK(s.row(i).cwiseAbs().maxCoeff() == 1.0);
  }
}

TEST_CASE("dual-norm growth diagnostic") {
  const std::vector<int> dims = {4, 8, 16, 32, 64, 128};
  // Constant coefficients: the l2 dual norm is sqrt(d) — unbounded growth.
  CoefficientSequence ones;
  const DualNormGrowth l2 = dual_norm_growth(ones, NormKind{2.0, {}}, dims);
  CHECK(l2.growth_exponent == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_FALSE(l2.bounded);
  // Under the l1 norm the dual is the sup norm: exactly constant.
  const DualNormGrowth l1 = dual_norm_growth(ones, NormKind{1.0, {}}, dims);
  CHECK(l1.growth_exponent == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(l1.bounded);
  // Square-summable (harmonic) coefficients plateau in the l2 dual norm.
  CoefficientSequence harmonic;
  harmonic.kind = CoefficientSequence::Kind::Harmonic;
  const DualNormGrowth summable = dual_norm_growth(harmonic, NormKind{2.0, {}}, dims);
  CHECK(summable.bounded);
  CHECK(summable.norms.back() <= std::sqrt(M_PI * M_PI / 6.0) + 1e-9);
}

TEST_CASE("stability constants") {
  auto decay = Semigroup::from_generator(-Mat::Identity(3, 3));
  const StabilityReport rep = stability_constants(decay, 4.0, 32);
  CHECK(rep.is_exp_stable);
  CHECK(rep.decay_rate == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t j = 0; j < rep.grid_times.size(); ++j)
    CHECK(rep.grid_norms[j] <=
          rep.growth_constant * std::exp(-rep.decay_rate * rep.grid_times[j]) * (1 + 1e-9));
  CHECK(stable_horizon(rep, 1e-4) == doctest::Approx(std::log(1e4)).epsilon(1e-3));

  auto constant = Semigroup::from_generator(Mat::Zero(2, 2));
  CHECK_FALSE(stability_constants(constant, 4.0, 32).is_exp_stable);

  Mat two_scale = Mat::Zero(2, 2);
  two_scale(0, 0) = -1.0;
  two_scale(1, 1) = -3.0;
  const StabilityReport slow = stability_constants(Semigroup::from_generator(two_scale), 6.0, 48);
  CHECK(slow.is_exp_stable);
  // The slowest mode dominates the operator norm.
  CHECK(slow.decay_rate == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_FALSE(stability_constants(Semigroup::translation(8, 0.125), 2.0, 16).is_exp_stable);
}
