#include "cylev/levy.hpp"

#include <algorithm>
#include <cmath>

namespace cylev {

LevyTriplet1D::LevyTriplet1D(double drift_, double gauss_var_, JumpPart jumps_)
    : drift(drift_), gauss_var(gauss_var_), jumps(std::move(jumps_)) {
  require(gauss_var >= 0.0, "LevyTriplet1D: gauss_var must be >= 0");
  if (const auto* cp = std::get_if<CompoundPoissonJumps>(&jumps))
    require(cp->rate > 0.0, "LevyTriplet1D: compound Poisson rate must be > 0");
  if (const auto* pl = std::get_if<PowerLawMeasure>(&jumps)) {
    require(pl->alpha > 0.0 && pl->alpha < 2.0,
            "LevyTriplet1D: power-law exponent must lie in (0, 2)");
    require(pl->eps > 0.0 && pl->eps < 1.0, "LevyTriplet1D: truncation eps must be in (0, 1)");
  }
}

LevyTriplet1D LevyTriplet1D::compensated(JumpPart jumps, double gauss_var) {
  LevyTriplet1D t(0.0, gauss_var, std::move(jumps));
  t.drift = t.compensator_slope() - t.jump_measure().mean();
  return t;
}

ProjectedJumpMeasure LevyTriplet1D::jump_measure() const {
  ProjectedJumpMeasure m;
  if (const auto* cp = std::get_if<CompoundPoissonJumps>(&jumps))
    m.finite.push_back({cp->rate, 1.0, cp->law});
  if (const auto* pl = std::get_if<PowerLawMeasure>(&jumps)) m.power_law.push_back(*pl);
  return m;
}

double LevyTriplet1D::jump_second_moment() const { return jump_measure().second_moment(); }

double LevyTriplet1D::mean_rate() const {
  return drift + jump_measure().mean() - compensator_slope();
}

double LevyTriplet1D::variance_rate() const {
  // Simulated jumps carry jump_second_moment() minus the removed sub-eps
  // part; the substitution (when enabled) restores it through the Gaussian.
  double removed = 0.0;
  if (const auto* pl = std::get_if<PowerLawMeasure>(&jumps))
    removed = pl->substitution_variance();
  return effective_gauss_var() + jump_second_moment() - removed;
}

double LevyTriplet1D::effective_gauss_var() const {
  double v = gauss_var;
  if (const auto* pl = std::get_if<PowerLawMeasure>(&jumps))
    if (pl->gaussian_substitution) v += pl->substitution_variance();
  return v;
}

double LevyTriplet1D::compensator_slope() const {
  // Compound Poisson jumps are simulated raw; only the truncated
  // infinite-activity part carries the drift compensation
  // -t int_{eps < |b| <= 1} b nu(db), which vanishes for the symmetric
  // power-law family.
  return 0.0;
}

bool LevyTriplet1D::is_centered(double tol) const {
  const double scale = 1.0 + std::abs(drift) + jump_second_moment();
  return std::abs(mean_rate()) <= tol * scale;
}

bool LevyTriplet1D::weak_order_2() const { return std::isfinite(jump_second_moment()); }

LevyTriplet1D normalize_to_unit_quadratic(const LevyTriplet1D& triplet) {
  require(triplet.has_jumps(), "normalize_to_unit_quadratic: triplet has no jump part");
  const double m2 = triplet.jump_second_moment();
  require(m2 > 0.0, "normalize_to_unit_quadratic: zero jump second moment");
  require(std::isfinite(m2), "normalize_to_unit_quadratic: infinite jump second moment");
  const double c = 1.0 / std::sqrt(m2);
  LevyTriplet1D out = triplet;
  if (auto* cp = std::get_if<CompoundPoissonJumps>(&out.jumps)) {
    cp->law = cp->law.scaled(c);
  } else if (auto* pl = std::get_if<PowerLawMeasure>(&out.jumps)) {
    pl->scale *= c;
  }
  if (triplet.is_centered()) {
    out.drift = out.compensator_slope() - out.jump_measure().mean();
  } else {
    out.drift = triplet.drift * c;
  }
  return out;
}

void check_time_grid(const std::vector<double>& grid) {
  require(grid.size() >= 2, "time grid needs at least two points");
  require(grid.front() == 0.0, "time grid must start at 0");
  for (std::size_t j = 1; j < grid.size(); ++j)
    require(grid[j] > grid[j - 1], "time grid must be strictly increasing");
}

void sample_jumps_1d(const LevyTriplet1D& triplet, double horizon, CounterRng& rng,
                     std::vector<double>& times, std::vector<double>& sizes) {
  double rate = 0.0;
  if (const auto* cp = std::get_if<CompoundPoissonJumps>(&triplet.jumps)) rate = cp->rate;
  if (const auto* pl = std::get_if<PowerLawMeasure>(&triplet.jumps))
    rate = pl->simulated_rate();
  if (rate <= 0.0) return;
  double t = rng.exponential(rate);
  while (t <= horizon) {
    double size = 0.0;
    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&triplet.jumps))
      size = cp->law.sample(rng);
    else
      size = std::get<PowerLawMeasure>(triplet.jumps).sample(rng);
    times.push_back(t);
    sizes.push_back(size);
    t += rng.exponential(rate);
  }
}

SampledPath1D sample_path_1d(const LevyTriplet1D& triplet, const std::vector<double>& grid,
                             CounterRng& rng) {
  const double horizon = grid.back();
  SampledPath1D out;

  // Jumps first (fixed draw order), then Brownian increments.
  sample_jumps_1d(triplet, horizon, rng, out.jump_times, out.jump_sizes);

  const double sigma = std::sqrt(triplet.effective_gauss_var());
  const double slope = triplet.drift - triplet.compensator_slope();

  out.values.resize(grid.size());
  out.values[0] = 0.0;
  if (sigma > 0.0) {
    out.gauss_cum.assign(grid.size(), 0.0);
    for (std::size_t j = 1; j < grid.size(); ++j)
      out.gauss_cum[j] =
          out.gauss_cum[j - 1] + sigma * std::sqrt(grid[j] - grid[j - 1]) * rng.gaussian();
  }
  double jumpsum = 0.0;
  std::size_t next_jump = 0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    while (next_jump < out.jump_times.size() && out.jump_times[next_jump] <= grid[j])
      jumpsum += out.jump_sizes[next_jump++];
    const double brownian = out.gauss_cum.empty() ? 0.0 : out.gauss_cum[j];
    out.values[j] = slope * grid[j] + brownian + jumpsum;
  }
  return out;
}

PathBundle sample_path(const LevyTriplet1D& triplet, const std::vector<double>& grid,
                       std::uint64_t seed, std::uint64_t path_index) {
  check_time_grid(grid);
  CounterRng rng(seed, Substream::id(path_index, 0));
  SampledPath1D p = sample_path_1d(triplet, grid, rng);
  PathBundle out;
  out.times = grid;
  out.values = Mat::Zero(1, static_cast<int>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) out.values(0, static_cast<int>(j)) = p.values[j];
  out.jumps.resize(1);
  for (std::size_t k = 0; k < p.jump_times.size(); ++k)
    out.jumps[0].emplace_back(p.jump_times[k], p.jump_sizes[k]);
  out.seed = seed;
  out.path_index = path_index;
  return out;
}

double compensated_poisson_integral(const std::vector<double>& h,
                                    const std::vector<double>& grid,
                                    const LevyTriplet1D& triplet, std::uint64_t seed,
                                    std::uint64_t path_index) {
  check_time_grid(grid);
  require(h.size() + 1 == grid.size(),
          "compensated_poisson_integral: h must have one value per grid interval");
  require(triplet.is_centered(),
          "compensated_poisson_integral: triplet must be mean-zero (compensated form)");
  CounterRng rng(seed, Substream::id(path_index, 0));
  const SampledPath1D p = sample_path_1d(triplet, grid, rng);
  double acc = 0.0;
  for (std::size_t l = 0; l < h.size(); ++l) acc += h[l] * (p.values[l + 1] - p.values[l]);
  return acc;
}

}  // namespace cylev
