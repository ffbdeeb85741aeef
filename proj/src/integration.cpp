#include "cylev/integration.hpp"

#include <cmath>

namespace cylev {

namespace {

// Indices of the breakpoints inside the driver grid; throws on misalignment.
std::vector<std::size_t> align_breakpoints(const std::vector<double>& breakpoints,
                                           const std::vector<double>& grid) {
  std::vector<std::size_t> idx;
  idx.reserve(breakpoints.size());
  const double tol = 1e-9 * std::max(1.0, grid.back());
  std::size_t g = 0;
  for (double b : breakpoints) {
    while (g < grid.size() && grid[g] < b - tol) ++g;
    require(g < grid.size() && std::abs(grid[g] - b) <= tol,
            "integrand breakpoints must refine the driver grid");
    idx.push_back(g);
  }
  require(idx.back() == grid.size() - 1,
          "integrand horizon must match the driver grid horizon");
  return idx;
}

Mat driver_values(const DriverPaths& dp) {
  const int r = static_cast<int>(dp.paths.size());
  const int n = static_cast<int>(dp.grid.size());
  Mat values(r, n);
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < n; ++j)
      values(k, j) = dp.paths[static_cast<std::size_t>(k)].values[static_cast<std::size_t>(j)];
  return values;
}

// Per-path integral against precomputed driver values. coords_of(j) maps the
// breakpoint interval to the factor-space coordinate vector i_Q^T Phi_j^T f.
double accumulate_integral(const Mat& values, const std::vector<std::size_t>& bp_idx,
                           const std::function<Vec(std::size_t, const Mat&)>& coords_of) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < bp_idx.size(); ++j) {
    const Vec v = coords_of(j, values.leftCols(static_cast<int>(bp_idx[j]) + 1));
    for (std::size_t l = bp_idx[j]; l < bp_idx[j + 1]; ++l) {
      const Vec dm = values.col(static_cast<int>(l) + 1) - values.col(static_cast<int>(l));
      acc += v.dot(dm);
    }
  }
  return acc;
}

}  // namespace

StepIntegrand StepIntegrand::deterministic(std::vector<double> breakpoints,
                                           std::vector<Mat> values) {
  check_time_grid(breakpoints);
  require(values.size() + 1 == breakpoints.size(),
          "StepIntegrand: one value per interval required");
  StepIntegrand phi;
  phi.rows_ = static_cast<int>(values.front().rows());
  phi.cols_ = static_cast<int>(values.front().cols());
  for (const Mat& m : values)
    require(m.rows() == phi.rows_ && m.cols() == phi.cols_,
            "StepIntegrand: inconsistent value shapes");
  phi.breakpoints_ = std::move(breakpoints);
  phi.values_ = std::move(values);
  return phi;
}

StepIntegrand StepIntegrand::constant(double horizon, Mat value) {
  require(horizon > 0.0, "StepIntegrand: horizon must be positive");
  std::vector<Mat> values;
  values.push_back(std::move(value));
  return deterministic({0.0, horizon}, std::move(values));
}

StepIntegrand StepIntegrand::adapted(std::vector<double> breakpoints, int rows, int cols,
                                     AdaptedRule rule) {
  check_time_grid(breakpoints);
  require(rule != nullptr, "StepIntegrand: adapted rule required");
  StepIntegrand phi;
  phi.breakpoints_ = std::move(breakpoints);
  phi.rows_ = rows;
  phi.cols_ = cols;
  phi.rule_ = std::move(rule);
  return phi;
}

Mat StepIntegrand::value_at(std::size_t interval, const Mat& history) const {
  require(interval < intervals(), "StepIntegrand: interval out of range");
  if (rule_) {
    Mat m = rule_(interval, history);
    require(m.rows() == rows_ && m.cols() == cols_, "StepIntegrand: rule produced wrong shape");
    return m;
  }
  return values_[interval];
}

double integrate(const StepIntegrand& phi, const CylLevyProcess& proc,
                 const DualFunctional& f, const std::vector<double>& grid,
                 std::uint64_t seed, std::uint64_t path_index) {
  const SeriesDesc& desc = proc.series();
  require(phi.cols() == proc.dim(), "integrate: integrand domain dimension mismatch");
  require(f.dim() == phi.rows(), "integrate: functional lives on the codomain");
  check_time_grid(grid);
  const auto bp_idx = align_breakpoints(phi.breakpoints(), grid);
  const DriverPaths dp = sample_drivers(desc, grid, seed, path_index);
  const Mat values = driver_values(dp);
  return accumulate_integral(values, bp_idx, [&](std::size_t j, const Mat& history) {
    return Vec(desc.factor.transpose() *
               (phi.value_at(j, history).transpose() * f.coeffs));
  });
}

std::vector<double> integrate_samples(const StepIntegrand& phi, const CylLevyProcess& proc,
                                      const DualFunctional& f, const std::vector<double>& grid,
                                      std::size_t n_paths, std::uint64_t seed, int n_threads) {
  const SeriesDesc& desc = proc.series();
  require(phi.cols() == proc.dim(), "integrate: integrand domain dimension mismatch");
  require(f.dim() == phi.rows(), "integrate: functional lives on the codomain");
  check_time_grid(grid);
  const auto bp_idx = align_breakpoints(phi.breakpoints(), grid);
  std::vector<double> out(n_paths);
  parallel_for(
      n_paths,
      [&](std::size_t p) {
        const DriverPaths dp = sample_drivers(desc, grid, seed, p);
        const Mat values = driver_values(dp);
        out[p] = accumulate_integral(values, bp_idx, [&](std::size_t j, const Mat& history) {
          return Vec(desc.factor.transpose() *
                     (phi.value_at(j, history).transpose() * f.coeffs));
        });
      },
      n_threads);
  return out;
}

IsometryReport ito_isometry_check(const StepIntegrand& phi, const CylLevyProcess& proc,
                                  const DualFunctional& f, const std::vector<double>& grid,
                                  std::size_t n_paths, std::uint64_t seed, int n_threads) {
  const SeriesDesc& desc = proc.series();
  const auto bp_idx = align_breakpoints(phi.breakpoints(), grid);
  // Driver variances E|m_k(1)|^2 (1 for normalized drivers).
  Vec driver_var(desc.factor.cols());
  for (int k = 0; k < desc.factor.cols(); ++k)
    driver_var[k] = desc.drivers[static_cast<std::size_t>(k)].variance_rate();

  IsometryReport rep;
  rep.n_paths = n_paths;

  const std::vector<double> samples =
      integrate_samples(phi, proc, f, grid, n_paths, seed, n_threads);
  std::vector<double> sq(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) sq[p] = samples[p] * samples[p];
  const MeanSe lhs = mean_se(sq);
  rep.lhs = lhs.mean;
  rep.lhs_se = lhs.se;

  auto interval_sum = [&](const Mat& values) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < bp_idx.size(); ++j) {
      const Vec v = desc.factor.transpose() *
                    (phi.value_at(j, values.leftCols(static_cast<int>(bp_idx[j]) + 1))
                         .transpose() *
                     f.coeffs);
      double norm2 = 0.0;
      for (int k = 0; k < v.size(); ++k) norm2 += driver_var[k] * v[k] * v[k];
      acc += norm2 * (phi.breakpoints()[j + 1] - phi.breakpoints()[j]);
    }
    return acc;
  };

  if (!phi.is_adapted()) {
    rep.rhs = interval_sum(Mat());
    rep.rhs_se = 0.0;
  } else {
    // Independent driver draws for the right side (disjoint stream salt).
    std::vector<double> rhs_samples(n_paths);
    parallel_for(
        n_paths,
        [&](std::size_t p) {
          const DriverPaths dp = sample_drivers(desc, grid, seed + 0x9e3779b9ULL, p);
          rhs_samples[p] = interval_sum(driver_values(dp));
        },
        n_threads);
    const MeanSe rhs = mean_se(rhs_samples);
    rep.rhs = rhs.mean;
    rep.rhs_se = rhs.se;
  }
  rep.pass = std::abs(rep.lhs - rep.rhs) <= kSigmaRule * std::hypot(rep.lhs_se, rep.rhs_se);
  return rep;
}

StepProcess StepProcess::deterministic(std::vector<double> values) {
  require(!values.empty(), "StepProcess: need at least one interval");
  StepProcess h;
  h.n_ = values.size();
  h.values_ = std::move(values);
  return h;
}

StepProcess StepProcess::adapted(std::size_t intervals, AdaptedRule rule) {
  require(intervals >= 1 && rule != nullptr, "StepProcess: invalid adapted process");
  StepProcess h;
  h.n_ = intervals;
  h.rule_ = std::move(rule);
  return h;
}

double StepProcess::value_at(std::size_t interval, const Mat& history) const {
  require(interval < n_, "StepProcess: interval out of range");
  return rule_ ? rule_(interval, history) : values_[interval];
}

CrossExpectationReport cross_expectation(const StepProcess& h1, const StepProcess& h2,
                                         const CylLevyProcess& proc, const DualFunctional& a1,
                                         const DualFunctional& a2,
                                         const std::vector<double>& grid, std::size_t n_paths,
                                         std::uint64_t seed, int n_threads) {
  const SeriesDesc& desc = proc.series();
  check_time_grid(grid);
  require(h1.intervals() == grid.size() - 1 && h2.intervals() == grid.size() - 1,
          "cross_expectation: step processes must have one value per grid interval");

  const Vec c1 = desc.factor.transpose() * a1.coeffs;
  const Vec c2 = desc.factor.transpose() * a2.coeffs;
  double cov = 0.0;
  for (int k = 0; k < c1.size(); ++k)
    cov += c1[k] * c2[k] * desc.drivers[static_cast<std::size_t>(k)].variance_rate();

  CrossExpectationReport rep;
  rep.covariance = cov;
  rep.n_paths = n_paths;

  std::vector<double> lhs_samples(n_paths);
  parallel_for(
      n_paths,
      [&](std::size_t p) {
        const DriverPaths dp = sample_drivers(desc, grid, seed, p);
        const Mat values = driver_values(dp);
        double i1 = 0.0, i2 = 0.0;
        for (std::size_t l = 0; l + 1 < grid.size(); ++l) {
          const Mat history = values.leftCols(static_cast<int>(l) + 1);
          const Vec dm = values.col(static_cast<int>(l) + 1) - values.col(static_cast<int>(l));
          i1 += h1.value_at(l, history) * c1.dot(dm);
          i2 += h2.value_at(l, history) * c2.dot(dm);
        }
        lhs_samples[p] = i1 * i2;
      },
      n_threads);
  const MeanSe lhs = mean_se(lhs_samples);
  rep.lhs = lhs.mean;
  rep.lhs_se = lhs.se;

  // E int h1 h2 ds: exact interval sum for deterministic processes, an
  // independent substream otherwise.
  if (!h1.is_adapted() && !h2.is_adapted()) {
    double acc = 0.0;
    const Mat empty;
    for (std::size_t l = 0; l + 1 < grid.size(); ++l)
      acc += h1.value_at(l, empty) * h2.value_at(l, empty) * (grid[l + 1] - grid[l]);
    rep.rhs = cov * acc;
    rep.rhs_se = 0.0;
  } else {
    std::vector<double> time_samples(n_paths);
    parallel_for(
        n_paths,
        [&](std::size_t p) {
          const DriverPaths dp = sample_drivers(desc, grid, seed + 0x51ed270bULL, p);
          const Mat values = driver_values(dp);
          double acc = 0.0;
          for (std::size_t l = 0; l + 1 < grid.size(); ++l) {
            const Mat history = values.leftCols(static_cast<int>(l) + 1);
            acc += h1.value_at(l, history) * h2.value_at(l, history) * (grid[l + 1] - grid[l]);
          }
          time_samples[p] = acc;
        },
        n_threads);
    const MeanSe ts = mean_se(time_samples);
    rep.rhs = cov * ts.mean;
    rep.rhs_se = std::abs(cov) * ts.se;
  }
  rep.pass = std::abs(rep.lhs - rep.rhs) <= kSigmaRule * std::hypot(rep.lhs_se, rep.rhs_se);
  return rep;
}

BasisIndependenceReport basis_independence_check(const StepIntegrand& phi, const Mat& q,
                                                 const Mat& basis_a, const Mat& basis_b,
                                                 const std::vector<LevyTriplet1D>& drivers,
                                                 const DualFunctional& f,
                                                 const std::vector<double>& grid,
                                                 std::size_t n_paths, std::uint64_t seed,
                                                 int n_threads) {
  require(basis_a.rows() == q.rows() && basis_b.rows() == q.rows(),
          "basis_independence_check: factor shapes do not match Q");
  require(basis_a.cols() == basis_b.cols(), "basis_independence_check: rank mismatch");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  require((basis_a * basis_a.transpose() - q).cwiseAbs().maxCoeff() <= 1e-8 * scale,
          "basis_independence_check: basis A does not factor Q");
  require((basis_b * basis_b.transpose() - q).cwiseAbs().maxCoeff() <= 1e-8 * scale,
          "basis_independence_check: basis B does not factor Q");

  // Rotation relating the bases: B = A R with R orthogonal. Identical bases
  // relate through the exact identity.
  const Mat r = (basis_a == basis_b)
                    ? Mat(Mat::Identity(basis_a.cols(), basis_a.cols()))
                    : Mat(basis_a.completeOrthogonalDecomposition().solve(basis_b));
  require((basis_a * r - basis_b).cwiseAbs().maxCoeff() <= 1e-8 * scale,
          "basis_independence_check: bases are not related by a rotation");
  require((r.transpose() * r - Mat::Identity(r.cols(), r.cols())).cwiseAbs().maxCoeff() <= 1e-8,
          "basis_independence_check: relating map is not orthogonal");

  SeriesDesc desc;
  desc.factor = basis_a;
  desc.drivers.reserve(static_cast<std::size_t>(basis_a.cols()));
  for (int k = 0; k < basis_a.cols(); ++k)
    desc.drivers.push_back(drivers[static_cast<std::size_t>(k) % drivers.size()]);
  const CylLevyProcess proc{ProcessKind(desc)};

  const auto bp_idx = align_breakpoints(phi.breakpoints(), grid);
  BasisIndependenceReport rep;
  rep.n_paths = n_paths;

  std::vector<double> diffs(n_paths), sq(n_paths);
  parallel_for(
      n_paths,
      [&](std::size_t p) {
        const DriverPaths dp = sample_drivers(desc, grid, seed, p);
        const Mat values = driver_values(dp);
        // Phi(omega) is the same process in both integrals (adapted rules see
        // the shared driver history); only the expansion basis differs, with
        // basis B's drivers n(t) = R^T m(t) on the same latent draw.
        double ia = 0.0, ib = 0.0;
        for (std::size_t j = 0; j + 1 < bp_idx.size(); ++j) {
          const Mat history = values.leftCols(static_cast<int>(bp_idx[j]) + 1);
          const Vec phif = phi.value_at(j, history).transpose() * f.coeffs;
          const Vec va = basis_a.transpose() * phif;
          const Vec vb = r * (basis_b.transpose() * phif);  // pulled back to m-coordinates
          for (std::size_t l = bp_idx[j]; l < bp_idx[j + 1]; ++l) {
            const Vec dm =
                values.col(static_cast<int>(l) + 1) - values.col(static_cast<int>(l));
            ia += va.dot(dm);
            ib += vb.dot(dm);
          }
        }
        diffs[p] = ia - ib;
        sq[p] = diffs[p] * diffs[p];
      },
      n_threads);
  for (double d : diffs) rep.max_pathwise_diff = std::max(rep.max_pathwise_diff, std::abs(d));
  const MeanSe l2 = mean_se(sq);
  rep.l2_diff = l2.mean;
  rep.l2_se = l2.se;
  rep.pass = rep.max_pathwise_diff <= 1e-8 &&
             rep.l2_diff <= std::max(kSigmaRule * rep.l2_se, 1e-16);
  return rep;
}

std::vector<double> uniform_grid(double horizon, int steps) {
  require(horizon > 0.0 && steps >= 1, "uniform_grid: invalid parameters");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j)
    grid[static_cast<std::size_t>(j)] = horizon * j / steps;
  grid[0] = 0.0;
  grid[static_cast<std::size_t>(steps)] = horizon;
  return grid;
}

}  // namespace cylev
