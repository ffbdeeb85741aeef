#pragma once

#include "cylev/common.hpp"

namespace cylev {

/// Norm on the model space: unweighted or weighted l^p, p in [1, inf].
/// p = infinity is encoded by std::numeric_limits<double>::infinity().
struct NormKind {
  double p = 2.0;
  std::vector<double> weights;  // empty = unweighted

  double vector_norm(const Vec& u) const;
  /// Norm of a coefficient functional in the dual of the l^p norm above.
  double dual_norm(const Vec& a) const;
};

/// Finite-dimensional stand-in for the separable Banach space: R^d together
/// with a declared norm. Every construction in the library projects to R^n,
/// so infinite dimension is probed by sweeping d (and by the dual-norm growth
/// diagnostic below).
struct SpaceModel {
  int dim = 1;
  NormKind norm;

  SpaceModel() = default;
  SpaceModel(int d, NormKind n = {}) : dim(d), norm(std::move(n)) {
    require(d >= 1, "SpaceModel: dim must be >= 1");
    require(norm.p >= 1.0, "SpaceModel: norm exponent must be >= 1");
  }
};

/// Coefficient vector of a functional a in U* against the canonical basis.
/// Also hosts algebraic-dual elements: "discontinuity" of such a functional
/// is visible only as unbounded growth of dual_norm as dim increases.
struct DualFunctional {
  Vec coeffs;

  DualFunctional() = default;
  explicit DualFunctional(Vec c) : coeffs(std::move(c)) {}
  int dim() const { return static_cast<int>(coeffs.size()); }

  DualFunctional operator+(const DualFunctional& o) const;
  DualFunctional operator*(double s) const;
};

/// Dual pairing <u, a> = sum_k u_k a_k. Bilinear by construction.
double pairing(const Vec& u, const DualFunctional& a);

enum class OperatorRole { Generic, Generator, NoiseMap, Embedding, Integrand };

/// Bounded operator between model spaces, stored densely.
struct OperatorMatrix {
  Mat entries;
  OperatorRole role = OperatorRole::Generic;

  OperatorMatrix() = default;
  explicit OperatorMatrix(Mat m, OperatorRole r = OperatorRole::Generic)
      : entries(std::move(m)), role(r) {}

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }

  OperatorMatrix adjoint() const { return OperatorMatrix(entries.transpose(), role); }
  Vec apply(const Vec& u) const;
  /// Pullback of a functional: (M* f) as a coefficient vector.
  DualFunctional apply_adjoint(const DualFunctional& f) const;
};

/// exp(tA) for a dense generator. Eigen's scaling-and-squaring Pade
/// evaluator; t = 0 returns the identity exactly.
Mat matrix_exponential(const Mat& a, double t);

/// Strongly continuous semigroup on the model space. Either exp(tA) for a
/// dense generator, or the structured cyclic-shift translation rule on an
/// n-point grid (a permutation power, norm exactly 1 for all t).
class Semigroup {
 public:
  /// Matrix-exponential semigroup with generator A.
  static Semigroup from_generator(Mat a);
  /// Translation semigroup (S(t)f)(x) = f(x + t) discretized on n grid cells
  /// of width cell_width, as a cyclic shift by round(t / cell_width).
  static Semigroup translation(int n_cells, double cell_width);

  int dim() const { return dim_; }
  bool is_translation() const { return translation_; }
  double cell_width() const { return cell_width_; }
  const Mat& generator() const;

  /// S(t) as a dense matrix.
  Mat evaluate(double t) const;
  Vec apply(double t, const Vec& u) const;
  /// Adjoint action S*(t) on functionals: adjoint(exp(tA)) = exp(t A^T).
  DualFunctional apply_adjoint(double t, const DualFunctional& f) const;
  /// Operator 2-norm of S(t).
  double operator_norm(double t) const;

 private:
  Semigroup() = default;
  int dim_ = 0;
  bool translation_ = false;
  Mat generator_;       // dense case
  double cell_width_ = 0.0;  // translation case
};

struct StabilityReport {
  double growth_constant = 1.0;  // R in the bound |S(t)| <= R exp(-lambda t)
  double decay_rate = 0.0;       // lambda
  bool is_exp_stable = false;
  std::vector<double> grid_times;
  std::vector<double> grid_norms;
};

/// Least-squares fit of log |S(t)| over an equispaced grid on (0, horizon].
/// The reported R is enlarged to the grid supremum of |S(t)| e^{lambda t} so
/// that the bound |S(t)| <= R e^{-lambda t} certifies at every grid point;
/// is_exp_stable requires the fitted decay rate to be positive.
StabilityReport stability_constants(const Semigroup& sg, double horizon, int grid);

/// Horizon t with |S(t)| <= target under the fitted (R, lambda);
/// throws if the semigroup is not exponentially stable.
double stable_horizon(const StabilityReport& rep, double target);

/// Coefficient rule zeta_k for extending a functional across dimensions:
/// constant c, power c k^p, or harmonic c / k.
struct CoefficientSequence {
  enum class Kind { Constant, Power, Harmonic };
  Kind kind = Kind::Constant;
  double c = 1.0;
  double p = 0.0;

  Vec materialize(int dim) const;
};

/// Growth of the dual norm of a coefficient sequence as the dimension
/// sweeps upward. In finite dimension every functional is bounded; an
/// algebraic-dual element reveals itself through an unbounded profile
/// (positive log-log growth exponent). Reported per declared norm.
struct DualNormGrowth {
  std::vector<int> dims;
  std::vector<double> norms;
  double growth_exponent = 0.0;  // least-squares slope of log|zeta_d| vs log d
  bool bounded = false;
};

DualNormGrowth dual_norm_growth(const CoefficientSequence& seq, const NormKind& norm,
                                const std::vector<int>& dims);

}  // namespace cylev
