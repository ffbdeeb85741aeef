#pragma once

#include "cylev/common.hpp"
#include "cylev/jumps.hpp"
#include "cylev/rng.hpp"

#include <variant>

namespace cylev {

/// Jump component of a one-dimensional Levy triplet: none, compound Poisson,
/// or truncated infinite-activity power law.
struct CompoundPoissonJumps {
  double rate = 1.0;
  JumpSizeLaw law;
};

using JumpPart = std::variant<std::monostate, CompoundPoissonJumps, PowerLawMeasure>;

/// One-dimensional Levy triplet: drift, Gaussian variance, jump part. Paths
/// follow value(t) = drift t + sqrt(gauss_var) W(t) + [jumps up to t], with
/// compound Poisson jumps entering raw; only the truncated power-law part
/// carries the small-jump drift compensation (zero for the symmetric
/// family). A martingale driver is obtained through compensated().
struct LevyTriplet1D {
  double drift = 0.0;
  double gauss_var = 0.0;
  JumpPart jumps;

  LevyTriplet1D() = default;
  LevyTriplet1D(double drift_, double gauss_var_, JumpPart jumps_ = std::monostate{});

  /// Pure-jump (plus optional Gaussian) triplet with drift chosen so that
  /// E[value(t)] = 0: the fully compensated (martingale) form.
  static LevyTriplet1D compensated(JumpPart jumps, double gauss_var = 0.0);

  bool has_jumps() const { return !std::holds_alternative<std::monostate>(jumps); }
  /// The simulated jump measure as a projected-measure object (power laws
  /// appear with their full, untruncated moments).
  ProjectedJumpMeasure jump_measure() const;
  /// int beta^2 nu(dbeta) over the full jump measure.
  double jump_second_moment() const;
  /// d/dt E[value(t)].
  double mean_rate() const;
  /// d/dt Var[value(t)] = gauss_var (+ substitution) + int beta^2 nu(dbeta).
  double variance_rate() const;
  /// Effective Gaussian variance including the Asmussen-Rosinski style
  /// substitution for removed small power-law jumps (when enabled).
  double effective_gauss_var() const;
  /// Small-jump compensator slope of the simulated measure.
  double compensator_slope() const;
  bool is_centered(double tol = 1e-9) const;
  /// Finite second moments of every projection; false only for heavy-tailed
  /// jump laws (Pareto with alpha <= 2).
  bool weak_order_2() const;
};

/// Rescale jump sizes by c = (int beta^2 nu)^{-1/2} so the jump measure has
/// unit second moment; centered triplets stay centered. Throws on a zero or
/// non-finite jump second moment.
LevyTriplet1D normalize_to_unit_quadratic(const LevyTriplet1D& triplet);

/// Sampled joint paths of finitely many processes on a shared time grid.
struct PathBundle {
  std::vector<double> times;  // increasing, times[0] == 0
  Mat values;                 // n_processes x n_times, values(:, 0) == 0
  std::vector<std::vector<std::pair<double, double>>> jumps;  // per process (time, size)
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;

  int n_processes() const { return static_cast<int>(values.rows()); }
  int n_times() const { return static_cast<int>(values.cols()); }
};

void check_time_grid(const std::vector<double>& grid);

/// One exact path of the triplet on the grid: Brownian and compound Poisson
/// parts are simulated exactly (exponential interarrivals, jump-exact values
/// at grid times); power-law parts as compound Poisson above eps with drift
/// compensation and optional Gaussian substitution.
PathBundle sample_path(const LevyTriplet1D& triplet, const std::vector<double>& grid,
                       std::uint64_t seed, std::uint64_t path_index = 0);

/// Low-level variant drawing from a caller-provided stream; used by the
/// joint samplers. Fills jump records and values for one process row.
struct SampledPath1D {
  std::vector<double> jump_times;
  std::vector<double> jump_sizes;
  std::vector<double> gauss_cum;  // cumulative Gaussian part at grid times (empty if none)
  std::vector<double> values;     // at grid times

  double increment(std::size_t interval) const {
    return values[interval + 1] - values[interval];
  }
};
SampledPath1D sample_path_1d(const LevyTriplet1D& triplet, const std::vector<double>& grid,
                             CounterRng& rng);

/// Jump record only, drawing exactly the jump-stream prefix of
/// sample_path_1d (same times and sizes for the same stream state).
void sample_jumps_1d(const LevyTriplet1D& triplet, double horizon, CounterRng& rng,
                     std::vector<double>& times, std::vector<double>& sizes);

/// Ito integral of a step function h against one sampled path of a centered
/// triplet: sum_l h_l (m(t_{l+1}) - m(t_l)). h has one value per grid
/// interval. Unbiased: E = 0.
double compensated_poisson_integral(const std::vector<double>& h,
                                    const std::vector<double>& grid,
                                    const LevyTriplet1D& triplet, std::uint64_t seed,
                                    std::uint64_t path_index = 0);

}  // namespace cylev
