#pragma once

#include "cylev/process.hpp"
#include "cylev/rkhs.hpp"

namespace cylev {

/// Adapted step integrand: constant operator values on [b_j, b_{j+1}).
/// Adapted values are produced by a rule that only sees driver values up to
/// the interval start, which enforces predictability structurally.
class StepIntegrand {
 public:
  /// rule(interval j, history) -> Phi_j, where history holds driver values at
  /// grid times <= b_j (one row per driver).
  using AdaptedRule = std::function<Mat(std::size_t, const Mat&)>;

  static StepIntegrand deterministic(std::vector<double> breakpoints, std::vector<Mat> values);
  static StepIntegrand constant(double horizon, Mat value);
  static StepIntegrand adapted(std::vector<double> breakpoints, int rows, int cols,
                               AdaptedRule rule);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  std::size_t intervals() const { return breakpoints_.size() - 1; }
  double horizon() const { return breakpoints_.back(); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_adapted() const { return static_cast<bool>(rule_); }

  /// Value on interval j; history as in AdaptedRule (ignored when static).
  Mat value_at(std::size_t interval, const Mat& history) const;

 private:
  StepIntegrand() = default;
  std::vector<double> breakpoints_;
  std::vector<Mat> values_;
  AdaptedRule rule_;
  int rows_ = 0, cols_ = 0;
};

/// One sample of I_T(Phi)f = sum_k sum_j <Phi_j i_Q e_k, f> (m_k(t_{j+1}) - m_k(t_j)).
/// The integrand breakpoints must be a subset of the driver grid. Driver
/// randomness is keyed by (seed, path_index, k) — the same streams the other
/// samplers use, so shared-noise identities hold pathwise.
double integrate(const StepIntegrand& phi, const CylLevyProcess& proc,
                 const DualFunctional& f, const std::vector<double>& grid,
                 std::uint64_t seed, std::uint64_t path_index = 0);

/// Bulk version across paths.
std::vector<double> integrate_samples(const StepIntegrand& phi, const CylLevyProcess& proc,
                                      const DualFunctional& f, const std::vector<double>& grid,
                                      std::size_t n_paths, std::uint64_t seed,
                                      int n_threads = 0);

struct IsometryReport {
  double lhs = 0.0;  // MC E|I_t(Phi)f|^2
  double rhs = 0.0;  // int_0^t E|i_Q* Phi*(s) f|^2 ds (exact or MC)
  double lhs_se = 0.0;
  double rhs_se = 0.0;  // zero for deterministic integrands
  std::size_t n_paths = 0;
  bool pass = false;
};

/// Ito isometry check. The right side is an exact interval sum for
/// deterministic integrands and an independent MC estimate for adapted ones.
IsometryReport ito_isometry_check(const StepIntegrand& phi, const CylLevyProcess& proc,
                                  const DualFunctional& f, const std::vector<double>& grid,
                                  std::size_t n_paths, std::uint64_t seed, int n_threads = 0);

/// Real-valued adapted step process h for the cross-expectation oracle.
class StepProcess {
 public:
  using AdaptedRule = std::function<double(std::size_t, const Mat&)>;

  static StepProcess deterministic(std::vector<double> values);
  static StepProcess adapted(std::size_t intervals, AdaptedRule rule);

  std::size_t intervals() const { return n_; }
  bool is_adapted() const { return static_cast<bool>(rule_); }
  double value_at(std::size_t interval, const Mat& history) const;

 private:
  StepProcess() = default;
  std::size_t n_ = 0;
  std::vector<double> values_;
  AdaptedRule rule_;
};

struct CrossExpectationReport {
  double lhs = 0.0;  // MC E[(int h1 dm1)(int h2 dm2)]
  double rhs = 0.0;  // Cov(m1(1), m2(1)) E[int h1 h2 ds]
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  double covariance = 0.0;  // Cov(m1(1), m2(1)), exact
  std::size_t n_paths = 0;
  bool pass = false;
};

/// Lemma-style cross expectation for the driver projections
/// m_i(t) = M2(t) a_i of a series process.
CrossExpectationReport cross_expectation(const StepProcess& h1, const StepProcess& h2,
                                         const CylLevyProcess& proc, const DualFunctional& a1,
                                         const DualFunctional& a2,
                                         const std::vector<double>& grid, std::size_t n_paths,
                                         std::uint64_t seed, int n_threads = 0);

struct BasisIndependenceReport {
  double max_pathwise_diff = 0.0;
  double l2_diff = 0.0;  // MC E|I - I~|^2
  double l2_se = 0.0;
  std::size_t n_paths = 0;
  bool pass = false;
};

/// Rotation-trick comparison of the integral built on two orthonormal bases
/// of the factor space of the same Q: basis B's drivers are expressed as
/// rotations of basis A's drivers on one shared latent draw.
BasisIndependenceReport basis_independence_check(const StepIntegrand& phi, const Mat& q,
                                                 const Mat& basis_a, const Mat& basis_b,
                                                 const std::vector<LevyTriplet1D>& drivers,
                                                 const DualFunctional& f,
                                                 const std::vector<double>& grid,
                                                 std::size_t n_paths, std::uint64_t seed,
                                                 int n_threads = 0);

/// Uniform grid 0 = t_0 < ... < t_n = horizon.
std::vector<double> uniform_grid(double horizon, int steps);

}  // namespace cylev
