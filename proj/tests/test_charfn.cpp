#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylev/charfn.hpp"
#include "cylev/mc.hpp"

#include <cmath>

using namespace cylev;

namespace {

const Complex kI(0.0, 1.0);

DualFunctional functional(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return DualFunctional(v);
}

}  // namespace

TEST_CASE("projection at beta = 0 is 1 and phi(0) = 1") {
  const CharFunctional phi = CharFunctional::from_process(
      CylPoissonDesc{1.0, functional({1.0, 2.0}).coeffs}, 1.0);
  CHECK(phi(functional({0.0, 0.0})) == Complex(1.0, 0.0));
  CHECK(project_char(phi, {functional({1.0, 0.0})}, Vec::Zero(1)) == Complex(1.0, 0.0));
}

TEST_CASE("cylindrical Poisson projection: exp(e^{i pi} - 1) = e^{-2}") {
  // zeta(a) = pi for the chosen functional.
  const CharFunctional phi =
      CharFunctional::from_process(CylPoissonDesc{1.0, functional({M_PI, 0.0}).coeffs}, 1.0);
  Vec beta(1);
  beta << 1.0;
  const Complex value = project_char(phi, {functional({1.0, 0.0})}, beta);
  CHECK(value.real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(std::abs(value.imag()) <= 1e-12);
}

TEST_CASE("Gaussian closed form: exp(-beta^2 s(a) / 2)") {
  Mat s(2, 2);
  s << 2.0, 0.5, 0.5, 1.0;
  const CharFunctional phi = CharFunctional::gaussian(s, 1.0);
  const DualFunctional a = functional({0.7, -0.3});
  for (double beta : {0.5, 1.0, 2.0}) {
    Vec b(1);
    b << beta;
    const double sa = a.coeffs.dot(s * a.coeffs);
    const Complex got = project_char(phi, {a}, b);
    CHECK(got.real() == doctest::Approx(std::exp(-0.5 * beta * beta * sa)).epsilon(1e-12));
    CHECK(got.imag() == 0.0);
  }
}

TEST_CASE("basic characteristic functional properties") {
  const CharFunctional phi = CharFunctional::from_process(
      CylCompoundPoissonDesc{1.5, JumpLawU::gaussian(functional({0.2, 0.0}).coeffs,
                                                     Mat::Identity(2, 2))},
      1.0);
  CounterRng rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    Vec a(2);
    a << 4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0;
    const Complex v = phi(DualFunctional(a));
    CHECK(std::abs(v) <= 1.0 + 1e-12);
    const Complex conj = phi(DualFunctional(Vec(-a)));
    CHECK(std::abs(v - std::conj(conj)) <= 1e-12);
    CHECK(std::abs(v) > 0.0);  // infinitely divisible: no zeros
  }
}

TEST_CASE("convolution is the pointwise product with merge rules") {
  const Vec zeta = functional({1.0, -0.5}).coeffs;
  const CharFunctional p1 = CharFunctional::from_process(CylPoissonDesc{1.0, zeta}, 1.0);
  const CharFunctional p2 = CharFunctional::from_process(CylPoissonDesc{2.5, zeta}, 1.0);
  const CharFunctional p_sum = CharFunctional::from_process(CylPoissonDesc{3.5, zeta}, 1.0);
  const CharFunctional conv = convolve(p1, p2);
  CHECK(conv.factors().size() == 1);  // same-direction Poissons merge

  const CharFunctional unit = CharFunctional::dirac_zero(2);
  CounterRng rng(5, 0);
  for (int trial = 0; trial < 25; ++trial) {
    Vec a(2);
    a << 4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0;
    const DualFunctional fa(a);
    CHECK(std::abs(conv(fa) - p_sum(fa)) <= 1e-12);
    CHECK(std::abs(conv(fa) - p1(fa) * p2(fa)) <= 1e-12);
    CHECK(convolve(p1, unit)(fa) == p1(fa));  // Dirac at zero is the unit
  }

  // Gaussian forms add.
  Mat s1(2, 2), s2(2, 2);
  s1 << 1.0, 0.0, 0.0, 2.0;
  s2 << 0.5, 0.25, 0.25, 0.5;
  const CharFunctional g = convolve(CharFunctional::gaussian(s1), CharFunctional::gaussian(s2));
  const CharFunctional g_sum = CharFunctional::gaussian(s1 + s2);
  for (int trial = 0; trial < 10; ++trial) {
    Vec a(2);
    a << rng.uniform(), rng.uniform();
    CHECK(std::abs(g(DualFunctional(a)) - g_sum(DualFunctional(a))) <= 1e-13);
  }
}

TEST_CASE("projection/convolution compatibility is exact for closed forms") {
  const CharFunctional p = CharFunctional::from_process(
      CylPoissonDesc{1.0, functional({0.8, 0.3}).coeffs}, 1.0);
  const CharFunctional g = CharFunctional::gaussian(Mat::Identity(2, 2));
  const CharFunctional c = convolve(p, g);
  const std::vector<DualFunctional> as = {functional({1.0, 0.0}), functional({0.5, -1.0})};
  Vec beta(2);
  beta << 0.7, -0.4;
  const Complex lhs = project_char(c, as, beta);
  const Complex rhs = project_char(p, as, beta) * project_char(g, as, beta);
  CHECK(std::abs(lhs - rhs) <= 1e-14);
}

TEST_CASE("infinite divisibility roots") {
  const Vec zeta = functional({1.0, 0.0}).coeffs;
  const CharFunctional pois2 = CharFunctional::from_process(CylPoissonDesc{2.0, zeta}, 1.0);
  const CharFunctional root2 = id_root(pois2, 2);
  const CharFunctional pois1 = CharFunctional::from_process(CylPoissonDesc{1.0, zeta}, 1.0);

  Mat s(2, 2);
  s << 1.0, 0.2, 0.2, 2.0;
  const CharFunctional g = CharFunctional::gaussian(s);
  const CharFunctional g_root = id_root(g, 4);
  const CharFunctional g_quarter = CharFunctional::gaussian(Mat(s / 4.0));

  CounterRng rng(7, 0);
  for (int trial = 0; trial < 25; ++trial) {
    Vec a(2);
    a << 3.0 * rng.uniform() - 1.5, 3.0 * rng.uniform() - 1.5;
    const DualFunctional fa(a);
    CHECK(std::abs(root2(fa) - pois1(fa)) <= 1e-12);
    CHECK(std::abs(std::pow(root2(fa), 2) - pois2(fa)) <= 1e-12);
    CHECK(std::abs(g_root(fa) - g_quarter(fa)) <= 1e-12);
    CHECK(std::abs(std::pow(g_root(fa), 4) - g(fa)) <= 1e-12);
  }

  // n = 1 is the identity.
  const CharFunctional same = id_root(pois2, 1);
  CHECK(std::abs(same(functional({0.3, 0.1})) - pois2(functional({0.3, 0.1}))) == 0.0);

  // Empirical functionals have no explicit exponent.
  const CharFunctional emp = CharFunctional::empirical(Mat::Zero(200, 2));
  CHECK_THROWS_AS(id_root(emp, 2), Unsupported);
}

TEST_CASE("Levy-Khintchine evaluation") {
  // Dirac at zero.
  CylLevyKhintchine trivial{Vec::Zero(2), Mat::Zero(2, 2), std::nullopt};
  CHECK(levy_khintchine_eval(trivial, functional({1.0, 2.0})) == Complex(1.0, 0.0));

  // Pure Gaussian with s(a) = 1.
  CylLevyKhintchine gauss{Vec::Zero(1), Mat::Identity(1, 1), std::nullopt};
  const Complex gv = levy_khintchine_eval(gauss, functional({1.0}));
  CHECK(gv.real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));

  // Jump measure lambda delta_c with |c| > 1: no compensation applies.
  const double c = 2.5, lambda = 0.7;
  CylLevyKhintchine jumps{Vec::Zero(1), Mat::Zero(1, 1),
                          ProcessKind(CylPoissonDesc{lambda, functional({c}).coeffs})};
  const Complex jv = levy_khintchine_eval(jumps, functional({1.0}));
  const Complex expected = std::exp(lambda * (std::exp(kI * c) - 1.0));
  CHECK(std::abs(jv - expected) <= 1e-12);

  // |c| <= 1: the unit-ball compensation enters.
  CylLevyKhintchine small{Vec::Zero(1), Mat::Zero(1, 1),
                          ProcessKind(CylPoissonDesc{lambda, functional({0.4}).coeffs})};
  const Complex sv = levy_khintchine_eval(small, functional({1.0}));
  const Complex expected_small =
      std::exp(lambda * (std::exp(kI * 0.4) - 1.0 - kI * 0.4));
  CHECK(std::abs(sv - expected_small) <= 1e-12);
}

TEST_CASE("closed-form Levy exponents agree with adaptive quadrature") {
  // Dual-route check of the compensated integral for laws with densities.
  std::vector<ProjectedJumpMeasure> measures;
  {
    ProjectedJumpMeasure m;
    m.finite.push_back({1.3, 0.8, JumpSizeLaw::gaussian(0.3, 0.9)});
    measures.push_back(m);
  }
  {
    ProjectedJumpMeasure m;
    m.finite.push_back({0.7, 1.0, JumpSizeLaw::uniform(-2.0, 1.5)});
    measures.push_back(m);
  }
  {
    ProjectedJumpMeasure m;
    m.finite.push_back({2.0, -0.6, JumpSizeLaw::two_sided_exponential(1.5)});
    measures.push_back(m);
  }
  for (const auto& m : measures) {
    for (double s : {0.5, 1.0, 2.0}) {
      for (auto conv : {Compensation::None, Compensation::UnitBall, Compensation::Full}) {
        const Complex closed = m.exponent(s, conv);
        const Complex quad = m.exponent_by_quadrature(s, conv);
        CHECK(std::abs(closed - quad) <= 1e-8);
      }
    }
  }
}

TEST_CASE("empirical characteristic functional matches closed forms at t = 1") {
  const ProcessKind kind = CylPoissonDesc{1.0, functional({1.0, -0.5, 0.75}).coeffs};
  const CylLevyProcess proc{kind};
  const CharFunctional closed = CharFunctional::from_process(kind, 1.0);
  const CharFunctional empirical =
      CharFunctional::empirical(latent_samples(proc, 1.0, 100000, 11));
  CHECK_FALSE(empirical.is_closed_form());
  CHECK(empirical.sample_count() == 100000);

  CounterRng rng(13, 0);
  SuiteTally tally;
  for (int arg = 0; arg < 20; ++arg) {
    Vec a(3);
    for (int k = 0; k < 3; ++k) a[k] = 3.0 * rng.uniform() - 1.5;
    const auto est = empirical.evaluate(DualFunctional(a));
    Comparison c;
    c.diff = std::abs(est.value - closed(DualFunctional(a)));
    c.combined_se = est.se;
    c.pass = c.diff <= kSigmaRule * c.combined_se;
    tally.add(c);
  }
  CHECK(tally.pass());
}
