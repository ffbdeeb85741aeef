#pragma once

#include "cylev/common.hpp"

#include <optional>

namespace cylev {

/// Monte Carlo estimate with its standard error and an optional reference
/// value. pass is defined by the 3 SE rule against the target.
struct McReport {
  Complex estimate{0.0, 0.0};
  double se = 0.0;  // combined componentwise SE for complex estimates
  double se_re = 0.0;
  double se_im = 0.0;
  std::size_t n_paths = 0;
  std::optional<Complex> target;
  bool pass = true;

  double real() const { return estimate.real(); }
};

inline constexpr std::size_t kMinPathsForVerdict = 100;
inline constexpr double kSigmaRule = 3.0;

/// Report for the sample mean of real-valued path statistics.
McReport mc_mean(std::span<const double> samples,
                 std::optional<double> target = std::nullopt);

/// Empirical characteristic function (1 / n) sum exp(i beta x_j).
McReport empirical_char(std::span<const double> samples, double beta);

/// Multivariate version at a vector argument.
McReport empirical_char(const Mat& samples /* n x d */, const Vec& beta);

/// 3 SE comparison of two estimates (combined SE), or of an estimate against
/// an exact target (the estimate's own SE).
struct Comparison {
  double diff = 0.0;
  double combined_se = 0.0;
  bool pass = true;
};
Comparison compare(const McReport& lhs, const McReport& rhs);
Comparison compare(const McReport& lhs, Complex target);

/// Aggregation rule for suites of many 3 SE comparisons: at least 99% of the
/// comparisons must pass at 3 SE and every one must stay within 5 SE.
struct SuiteTally {
  std::size_t total = 0;
  std::size_t failed_3se = 0;
  std::size_t failed_5se = 0;

  void add(const Comparison& c);
  bool pass() const;
};

}  // namespace cylev
