#pragma once

#include "cylev/common.hpp"
#include "cylev/rng.hpp"

#include <optional>
#include <variant>

namespace cylev {

/// One-dimensional jump-size distribution.
struct JumpSizeLaw {
  enum class Kind { PointMass, Discrete, Uniform, Gaussian, TwoSidedExponential, Pareto };

  Kind kind = Kind::PointMass;
  double a = 1.0;  // PointMass value | Uniform lower | Gaussian mean | Pareto alpha
  double b = 0.0;  // Uniform upper | Gaussian sd | TwoSidedExponential rate | Pareto x_m
  std::vector<double> values;  // Discrete support
  std::vector<double> probs;   // Discrete probabilities (sum to 1)

  static JumpSizeLaw point_mass(double c);
  static JumpSizeLaw discrete(std::vector<double> values, std::vector<double> probs);
  static JumpSizeLaw uniform(double lo, double hi);
  static JumpSizeLaw gaussian(double mean, double sd);
  static JumpSizeLaw two_sided_exponential(double rate);
  static JumpSizeLaw pareto(double alpha, double x_m = 1.0);

  double sample(CounterRng& rng) const;
  double mean() const;
  double second_moment() const;
  /// E[J 1_{|J| <= c}].
  double mean_restricted(double c) const;
  /// E[exp(i s J)]; throws Unsupported when no closed form exists (Pareto).
  Complex char_fn(double s) const;
  bool has_closed_char() const { return kind != Kind::Pareto; }
  /// Probability density at x, when the law has one.
  std::optional<double> density(double x) const;
  /// Effective support [lo, hi] (tail-truncated for unbounded laws).
  std::pair<double, double> support() const;
  /// Law of c * J.
  JumpSizeLaw scaled(double c) const;
};

/// Jump distribution on the model space U.
struct JumpLawU {
  struct PointMass {
    Vec u0;
  };
  struct Discrete {
    std::vector<Vec> points;
    std::vector<double> probs;
  };
  struct Gaussian {
    Vec mean;
    Mat cov;
  };
  std::variant<PointMass, Discrete, Gaussian> law;

  static JumpLawU point_mass(Vec u0);
  static JumpLawU discrete(std::vector<Vec> points, std::vector<double> probs);
  static JumpLawU gaussian(Vec mean, Mat cov);

  int dim() const;
  Vec sample(CounterRng& rng) const;
  Vec mean() const;
  /// Image law of <J, a> for a coefficient functional a.
  JumpSizeLaw project(const Vec& a) const;
  /// E[exp(i <J, a>)].
  Complex char_fn(const Vec& a) const;
};

/// Compensation convention for the Levy exponent integral.
enum class Compensation { None, UnitBall, Full };

/// Symmetric infinite-activity measure intensity * |beta|^(-1-alpha) on
/// 0 < |beta| <= 1, with jump sizes scaled by `scale`. Weak order 2 for
/// alpha < 2; simulated as compound Poisson of raw sizes above eps.
struct PowerLawMeasure {
  double alpha = 0.5;
  double intensity = 1.0;
  double scale = 1.0;
  double eps = 1e-3;
  bool gaussian_substitution = true;

  /// Full second moment int beta^2 nu(dbeta) (scaled sizes).
  double second_moment() const;
  /// Second moment of the removed part |beta_raw| <= eps (scaled sizes).
  double substitution_variance() const;
  /// Arrival rate of simulated jumps (raw sizes in (eps, 1]).
  double simulated_rate() const;
  /// Draw one scaled jump with |raw| in (eps, 1] by inversion.
  double sample(CounterRng& rng) const;
  /// int (e^{i gamma} - 1 - compensation) nu(dgamma) at dual argument s,
  /// i.e. against the law of s * (scaled jump). All conventions coincide by
  /// symmetry. Hybrid Taylor + adaptive Simpson to ~1e-10.
  Complex exponent(double s) const;
};

/// Projection of a cylindrical Levy measure to the real line: a finite list
/// of scaled components. A finite component (rate, scale, law) is the measure
/// rate * Law(scale * J); infinite-activity parts are power-law components.
struct ProjectedJumpMeasure {
  struct FiniteComponent {
    double rate = 0.0;
    double scale = 1.0;
    JumpSizeLaw law;
  };
  std::vector<FiniteComponent> finite;
  std::vector<PowerLawMeasure> power_law;

  bool empty() const { return finite.empty() && power_law.empty(); }
  double total_finite_rate() const;
  /// int gamma nu(dgamma); requires all components integrable.
  double mean() const;
  /// int_{|gamma| <= threshold} gamma nu(dgamma).
  double mean_small(double threshold = 1.0) const;
  /// int gamma^2 nu(dgamma).
  double second_moment() const;
  /// int min(1, gamma^2) nu(dgamma) — the Levy-measure integrability check.
  double levy_integral() const;
  /// int (e^{i s gamma} - 1 - i s gamma w(gamma)) nu(dgamma) with w per the
  /// convention. Closed form per component; quadrature for power laws.
  Complex exponent(double s, Compensation conv) const;
  /// Same integral evaluated by adaptive quadrature against component
  /// densities (domain split at the compensation boundary). Used as the
  /// independent route for laws with densities.
  Complex exponent_by_quadrature(double s, Compensation conv, double tol = 1e-10) const;
};

}  // namespace cylev
