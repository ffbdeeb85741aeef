#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylev {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Invalid argument / precondition violation (dimension mismatch, bad grid, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A Monte Carlo estimate failed a hard statistical consistency bound.
class StatisticalFailure : public std::runtime_error {
 public:
  explicit StatisticalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested operation is not defined for the given representation
/// (e.g. convolution root of an empirical characteristic functional).
class Unsupported : public std::runtime_error {
 public:
  explicit Unsupported(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool cond, const std::string& msg);

/// Number of worker threads used by parallel Monte Carlo loops.
/// 0 = use hardware concurrency. Overridable via the CYLEV_THREADS
/// environment variable; results are identical for any thread count.
int default_thread_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous blocks across
/// threads; fn must only write to slots indexed by i so that the result is
/// independent of the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int n_threads = 0);

/// Fixed-topology pairwise (tree) summation. Serial and parallel callers
/// reduce the same materialized buffer, so the result is bit-identical
/// regardless of thread count.
double pairwise_sum(std::span<const double> xs);
Complex pairwise_sum(std::span<const Complex> xs);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n)
  std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> xs);

}  // namespace cylev
