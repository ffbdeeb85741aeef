#include "cylev/process.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cylev {

namespace {

int kind_dim(const ProcessKind& kind) {
  if (const auto* p = std::get_if<CylPoissonDesc>(&kind)) return static_cast<int>(p->zeta.size());
  if (const auto* c = std::get_if<CylCompoundPoissonDesc>(&kind)) return c->rho.dim();
  if (const auto* im = std::get_if<ImpulsiveDesc>(&kind))
    return static_cast<int>(im->cell_weights.size());
  if (const auto* in = std::get_if<InducedLevyDesc>(&kind)) return static_cast<int>(in->drift.size());
  return static_cast<int>(std::get<SeriesDesc>(kind).factor.rows());
}

// Cumulative grouped sums of (time, size) jump events at grid times.
// Identical sizes accumulate as count * size.
std::vector<double> grouped_cumsum(const std::vector<std::pair<double, double>>& events,
                                   const std::vector<double>& grid) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::map<double, long> groups;
    for (const auto& [t, size] : events)
      if (t <= grid[j]) ++groups[size];
    double acc = 0.0;
    for (const auto& [size, count] : groups) acc += static_cast<double>(count) * size;
    out[j] = acc;
  }
  return out;
}

}  // namespace

CylLevyProcess::CylLevyProcess(ProcessKind kind) : kind_(std::move(kind)), dim_(kind_dim(kind_)) {
  require(dim_ >= 1, "CylLevyProcess: dimension must be >= 1");
  if (const auto* p = std::get_if<CylPoissonDesc>(&kind_))
    require(p->lambda > 0.0, "CylLevyProcess: Poisson intensity must be > 0");
  if (const auto* c = std::get_if<CylCompoundPoissonDesc>(&kind_))
    require(c->lambda > 0.0, "CylLevyProcess: compound Poisson intensity must be > 0");
  if (const auto* im = std::get_if<ImpulsiveDesc>(&kind_)) {
    require(im->rho_rate > 0.0, "CylLevyProcess: impulsive jump rate must be > 0");
    for (int i = 0; i < im->cell_weights.size(); ++i)
      require(im->cell_weights[i] >= 0.0, "CylLevyProcess: cell weights must be >= 0");
  }
  if (const auto* s = std::get_if<SeriesDesc>(&kind_)) {
    require(static_cast<std::size_t>(s->factor.cols()) == s->drivers.size(),
            "CylLevyProcess: one driver per factor column required");
    require(s->factor.cols() >= 1, "CylLevyProcess: series needs at least one term");
  }
}

const SeriesDesc& CylLevyProcess::series() const {
  require(is_series(), "CylLevyProcess: not a series process");
  return std::get<SeriesDesc>(kind_);
}

bool CylLevyProcess::weak_order_2() const {
  if (const auto* im = std::get_if<ImpulsiveDesc>(&kind_))
    return std::isfinite(im->rho.second_moment());
  if (const auto* s = std::get_if<SeriesDesc>(&kind_)) {
    for (const auto& d : s->drivers)
      if (!d.weak_order_2()) return false;
    return true;
  }
  return true;  // remaining kinds have parametric laws with finite moments
}

ProjectedJumpMeasure CylLevyProcess::projected_jumps(const Vec& a) const {
  require(a.size() == dim_, "CylLevyProcess: functional dimension mismatch");
  ProjectedJumpMeasure m;
  if (const auto* p = std::get_if<CylPoissonDesc>(&kind_)) {
    const double za = p->zeta.dot(a);
    if (za != 0.0) m.finite.push_back({p->lambda, 1.0, JumpSizeLaw::point_mass(za)});
  } else if (const auto* c = std::get_if<CylCompoundPoissonDesc>(&kind_)) {
    m.finite.push_back({c->lambda, 1.0, c->rho.project(a)});
  } else if (const auto* im = std::get_if<ImpulsiveDesc>(&kind_)) {
    for (int i = 0; i < im->cell_weights.size(); ++i) {
      const double w = im->cell_weights[i];
      if (w > 0.0 && a[i] != 0.0) m.finite.push_back({w * im->rho_rate, a[i], im->rho});
    }
  } else if (const auto* in = std::get_if<InducedLevyDesc>(&kind_)) {
    if (in->jump_rate > 0.0 && in->jump_law)
      m.finite.push_back({in->jump_rate, 1.0, in->jump_law->project(a)});
  } else {
    const auto& s = std::get<SeriesDesc>(kind_);
    for (int k = 0; k < s.factor.cols(); ++k) {
      const double beta = s.factor.col(k).dot(a);
      if (beta == 0.0) continue;
      const auto& d = s.drivers[static_cast<std::size_t>(k)];
      if (const auto* cp = std::get_if<CompoundPoissonJumps>(&d.jumps))
        m.finite.push_back({cp->rate, beta, cp->law});
      if (const auto* pl = std::get_if<PowerLawMeasure>(&d.jumps)) {
        PowerLawMeasure scaled = *pl;
        scaled.scale *= beta;
        m.power_law.push_back(scaled);
      }
    }
  }
  return m;
}

double CylLevyProcess::gaussian_form(const Vec& a) const {
  require(a.size() == dim_, "CylLevyProcess: functional dimension mismatch");
  if (const auto* in = std::get_if<InducedLevyDesc>(&kind_)) {
    if (in->gauss_cov.size() == 0) return 0.0;
    return a.dot(in->gauss_cov * a);
  }
  if (const auto* s = std::get_if<SeriesDesc>(&kind_)) {
    double v = 0.0;
    for (int k = 0; k < s->factor.cols(); ++k) {
      const double beta = s->factor.col(k).dot(a);
      v += beta * beta * s->drivers[static_cast<std::size_t>(k)].effective_gauss_var();
    }
    return v;
  }
  return 0.0;
}

Vec CylLevyProcess::slope_vector() const {
  Vec slope = Vec::Zero(dim_);
  if (const auto* im = std::get_if<ImpulsiveDesc>(&kind_)) {
    const double jm = im->rho.mean();
    for (int i = 0; i < dim_; ++i) slope[i] = -im->cell_weights[i] * im->rho_rate * jm;
  } else if (const auto* in = std::get_if<InducedLevyDesc>(&kind_)) {
    slope = in->drift;
  } else if (const auto* s = std::get_if<SeriesDesc>(&kind_)) {
    for (int k = 0; k < s->factor.cols(); ++k) {
      const auto& d = s->drivers[static_cast<std::size_t>(k)];
      slope += s->factor.col(k) * (d.drift - d.compensator_slope());
    }
  }
  return slope;
}

Vec CylLevyProcess::jump_mean_vector() const {
  Vec m = Vec::Zero(dim_);
  if (const auto* p = std::get_if<CylPoissonDesc>(&kind_)) {
    m = p->lambda * p->zeta;
  } else if (const auto* c = std::get_if<CylCompoundPoissonDesc>(&kind_)) {
    m = c->lambda * c->rho.mean();
  } else if (const auto* im = std::get_if<ImpulsiveDesc>(&kind_)) {
    const double jm = im->rho.mean();
    for (int i = 0; i < dim_; ++i) m[i] = im->cell_weights[i] * im->rho_rate * jm;
  } else if (const auto* in = std::get_if<InducedLevyDesc>(&kind_)) {
    if (in->jump_rate > 0.0 && in->jump_law) m = in->jump_rate * in->jump_law->mean();
  } else {
    const auto& s = std::get<SeriesDesc>(kind_);
    for (int k = 0; k < s.factor.cols(); ++k) {
      const auto& d = s.drivers[static_cast<std::size_t>(k)];
      m += s.factor.col(k) * d.jump_measure().mean();
    }
  }
  return m;
}

Complex CylLevyProcess::char_exponent(const Vec& a) const {
  const Complex i(0.0, 1.0);
  return i * slope_vector().dot(a) - 0.5 * gaussian_form(a) +
         projected_jumps(a).exponent(1.0, Compensation::None);
}

double CylLevyProcess::mean_rate(const Vec& a) const {
  return (slope_vector() + jump_mean_vector()).dot(a);
}

double CylLevyProcess::m2_second_moment(const Vec& a) const {
  const ProjectedJumpMeasure m = projected_jumps(a);
  double v = 0.0;
  for (const auto& c : m.finite) v += c.rate * c.scale * c.scale * c.law.second_moment();
  // Simulated power-law jumps carry the truncated second moment.
  for (const auto& p : m.power_law) v += p.second_moment() - p.substitution_variance();
  return v;
}

DriverPaths sample_drivers(const SeriesDesc& desc, const std::vector<double>& grid,
                           std::uint64_t seed, std::uint64_t path_index) {
  check_time_grid(grid);
  DriverPaths out;
  out.grid = grid;
  out.paths.reserve(desc.drivers.size());
  for (std::size_t k = 0; k < desc.drivers.size(); ++k) {
    CounterRng rng(seed, Substream::id(path_index, k));
    out.paths.push_back(sample_path_1d(desc.drivers[k], grid, rng));
  }
  return out;
}

Vec LatentPath::state_at(std::size_t j) const {
  Vec u = slope * times[j];
  if (gauss.rows() > 0) u += gauss.col(static_cast<int>(j));
  for (std::size_t k = 0; k < jump_times.size() && jump_times[k] <= times[j]; ++k)
    u += jump_vecs[k];
  return u;
}

std::vector<double> LatentPath::project(const Vec& a) const {
  std::vector<double> out(times.size(), 0.0);
  Vec jumpsum = Vec::Zero(slope.size());
  std::size_t next = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    while (next < jump_times.size() && jump_times[next] <= times[j])
      jumpsum += jump_vecs[next++];
    double v = slope.dot(a) * times[j] + jumpsum.dot(a);
    if (gauss.rows() > 0) v += gauss.col(static_cast<int>(j)).dot(a);
    out[j] = v;
  }
  return out;
}

LatentPath CylLevyProcess::sample_latent(const std::vector<double>& grid, std::uint64_t seed,
                                         std::uint64_t path_index) const {
  check_time_grid(grid);
  LatentPath path;
  path.times = grid;
  path.slope = slope_vector();
  const double horizon = grid.back();

  auto add_poisson_jumps = [&](CounterRng& rng, double rate,
                               const std::function<Vec(CounterRng&)>& draw) {
    if (rate <= 0.0) return;
    double t = rng.exponential(rate);
    while (t <= horizon) {
      path.jump_times.push_back(t);
      path.jump_vecs.push_back(draw(rng));
      t += rng.exponential(rate);
    }
  };

  if (const auto* p = std::get_if<CylPoissonDesc>(&kind_)) {
    CounterRng rng(seed, Substream::id(path_index, Substream::kJumps));
    add_poisson_jumps(rng, p->lambda, [&](CounterRng&) { return p->zeta; });
  } else if (const auto* c = std::get_if<CylCompoundPoissonDesc>(&kind_)) {
    CounterRng rng(seed, Substream::id(path_index, Substream::kJumps));
    add_poisson_jumps(rng, c->lambda, [&](CounterRng& r) { return c->rho.sample(r); });
  } else if (const auto* im = std::get_if<ImpulsiveDesc>(&kind_)) {
    CounterRng rng(seed, Substream::id(path_index, Substream::kJumps));
    const double wsum = im->cell_weights.sum();
    add_poisson_jumps(rng, wsum * im->rho_rate, [&](CounterRng& r) {
      // Thinning: pick the cell proportionally to its weight, then the size.
      double u = r.uniform() * wsum;
      int cell = 0;
      double acc = im->cell_weights[0];
      while (u > acc && cell + 1 < dim_) acc += im->cell_weights[++cell];
      Vec v = Vec::Zero(dim_);
      v[cell] = im->rho.sample(r);
      return v;
    });
  } else if (const auto* in = std::get_if<InducedLevyDesc>(&kind_)) {
    {
      CounterRng rng(seed, Substream::id(path_index, Substream::kJumps));
      if (in->jump_rate > 0.0 && in->jump_law)
        add_poisson_jumps(rng, in->jump_rate,
                          [&](CounterRng& r) { return in->jump_law->sample(r); });
    }
    if (in->gauss_cov.size() > 0 && in->gauss_cov.norm() > 0.0) {
      CounterRng rng(seed, Substream::id(path_index, Substream::kWiener));
      Eigen::LLT<Mat> llt(in->gauss_cov);
      const Mat l = llt.matrixL();
      path.gauss = Mat::Zero(dim_, static_cast<int>(grid.size()));
      for (std::size_t j = 1; j < grid.size(); ++j) {
        Vec z(dim_);
        for (int k = 0; k < dim_; ++k) z[k] = rng.gaussian();
        path.gauss.col(static_cast<int>(j)) =
            path.gauss.col(static_cast<int>(j - 1)) + std::sqrt(grid[j] - grid[j - 1]) * (l * z);
      }
    }
  } else {
    const auto& s = std::get<SeriesDesc>(kind_);
    const DriverPaths drivers = sample_drivers(s, grid, seed, path_index);
    bool any_gauss = false;
    for (const auto& dp : drivers.paths) any_gauss |= !dp.gauss_cum.empty();
    if (any_gauss) path.gauss = Mat::Zero(dim_, static_cast<int>(grid.size()));
    // Deterministic multiway merge of the driver jump streams by time,
    // breaking ties by driver index.
    std::vector<std::pair<double, std::pair<int, std::size_t>>> order;
    for (int k = 0; k < s.factor.cols(); ++k) {
      const auto& dp = drivers.paths[static_cast<std::size_t>(k)];
      for (std::size_t q = 0; q < dp.jump_times.size(); ++q)
        order.emplace_back(dp.jump_times[q], std::make_pair(k, q));
      if (!dp.gauss_cum.empty())
        for (std::size_t j = 0; j < grid.size(); ++j)
          path.gauss.col(static_cast<int>(j)) += s.factor.col(k) * dp.gauss_cum[j];
    }
    std::sort(order.begin(), order.end());
    for (const auto& [t, kq] : order) {
      path.jump_times.push_back(t);
      path.jump_vecs.push_back(s.factor.col(kq.first) *
                               drivers.paths[static_cast<std::size_t>(kq.first)]
                                   .jump_sizes[kq.second]);
    }
    return path;
  }

  // Non-series kinds may interleave; sort jumps by time for the cumulative walks.
  std::vector<std::size_t> idx(path.jump_times.size());
  for (std::size_t q = 0; q < idx.size(); ++q) idx[q] = q;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return path.jump_times[x] < path.jump_times[y];
  });
  std::vector<double> jt(idx.size());
  std::vector<Vec> jv(idx.size());
  for (std::size_t q = 0; q < idx.size(); ++q) {
    jt[q] = path.jump_times[idx[q]];
    jv[q] = path.jump_vecs[idx[q]];
  }
  path.jump_times = std::move(jt);
  path.jump_vecs = std::move(jv);
  return path;
}

PathBundle sample_joint(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_list,
                        const std::vector<double>& grid, std::uint64_t seed,
                        std::uint64_t path_index) {
  require(!a_list.empty(), "sample_joint: need at least one functional");
  for (const auto& a : a_list)
    require(a.dim() == proc.dim(), "sample_joint: functional dimension mismatch");
  const LatentPath latent = proc.sample_latent(grid, seed, path_index);
  PathBundle out;
  out.times = grid;
  out.seed = seed;
  out.path_index = path_index;
  out.values = Mat::Zero(static_cast<int>(a_list.size()), static_cast<int>(grid.size()));
  out.jumps.resize(a_list.size());
  for (std::size_t j = 0; j < a_list.size(); ++j) {
    const std::vector<double> v = latent.project(a_list[j].coeffs);
    for (std::size_t l = 0; l < v.size(); ++l)
      out.values(static_cast<int>(j), static_cast<int>(l)) = v[l];
    for (std::size_t q = 0; q < latent.jump_times.size(); ++q) {
      const double size = latent.jump_vecs[q].dot(a_list[j].coeffs);
      if (size != 0.0) out.jumps[j].emplace_back(latent.jump_times[q], size);
    }
  }
  return out;
}

DecompositionTerms decompose(const CylLevyProcess& proc, const DualFunctional& a,
                             const std::vector<double>& grid, std::uint64_t seed,
                             std::uint64_t path_index) {
  require(a.dim() == proc.dim(), "decompose: functional dimension mismatch");
  const LatentPath latent = proc.sample_latent(grid, seed, path_index);

  std::vector<std::pair<double, double>> small, big;
  for (std::size_t q = 0; q < latent.jump_times.size(); ++q) {
    const double size = latent.jump_vecs[q].dot(a.coeffs);
    if (size == 0.0) continue;
    // Closed unit ball: |size| == 1 counts as small.
    if (std::abs(size) <= 1.0)
      small.emplace_back(latent.jump_times[q], size);
    else
      big.emplace_back(latent.jump_times[q], size);
  }

  DecompositionTerms out;
  out.times = grid;
  const double comp_small = proc.projected_jumps(a.coeffs).mean_small(1.0);
  out.drift_rate = latent.slope.dot(a.coeffs) + comp_small;
  out.big_jumps = grouped_cumsum(big, grid);
  out.small_jumps = grouped_cumsum(small, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) out.small_jumps[j] -= grid[j] * comp_small;
  out.wiener.assign(grid.size(), 0.0);
  if (latent.gauss.rows() > 0)
    for (std::size_t j = 0; j < grid.size(); ++j)
      out.wiener[j] = latent.gauss.col(static_cast<int>(j)).dot(a.coeffs);
  out.total = latent.project(a.coeffs);
  return out;
}

M2Path m2_projection(const CylLevyProcess& proc, const DualFunctional& a,
                     const std::vector<double>& grid, std::uint64_t seed,
                     std::uint64_t path_index) {
  require(a.dim() == proc.dim(), "m2_projection: functional dimension mismatch");
  if (!proc.weak_order_2())
    throw Unsupported("m2_projection: process has infinite weak second moments");
  const LatentPath latent = proc.sample_latent(grid, seed, path_index);
  const double jump_mean = proc.jump_mean_vector().dot(a.coeffs);

  std::vector<std::pair<double, double>> events;
  for (std::size_t q = 0; q < latent.jump_times.size(); ++q) {
    const double size = latent.jump_vecs[q].dot(a.coeffs);
    if (size != 0.0) events.emplace_back(latent.jump_times[q], size);
  }
  M2Path out;
  out.times = grid;
  out.values = grouped_cumsum(events, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] -= grid[j] * jump_mean;
  out.drift_rate = proc.mean_rate(a.coeffs);
  return out;
}

Mat m2_samples(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_list,
               double t, std::size_t n_paths, std::uint64_t seed, int n_threads) {
  require(t > 0.0, "m2_samples: t must be positive");
  if (!proc.weak_order_2())
    throw Unsupported("m2_samples: process has infinite weak second moments");
  const std::vector<double> grid = {0.0, t};
  const Vec jump_mean = proc.jump_mean_vector();
  Mat out(static_cast<int>(n_paths), static_cast<int>(a_list.size()));
  parallel_for(
      n_paths,
      [&](std::size_t p) {
        const LatentPath latent = proc.sample_latent(grid, seed, p);
        Vec m2 = -t * jump_mean;
        for (const auto& v : latent.jump_vecs) m2 += v;
        for (std::size_t j = 0; j < a_list.size(); ++j)
          out(static_cast<int>(p), static_cast<int>(j)) = m2.dot(a_list[j].coeffs);
      },
      n_threads);
  return out;
}

Mat joint_samples(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_list,
                  double t, std::size_t n_paths, std::uint64_t seed, int n_threads) {
  require(t > 0.0, "joint_samples: t must be positive");
  const std::vector<double> grid = {0.0, t};
  Mat out(static_cast<int>(n_paths), static_cast<int>(a_list.size()));
  parallel_for(
      n_paths,
      [&](std::size_t p) {
        const LatentPath latent = proc.sample_latent(grid, seed, p);
        const Vec u = latent.state_at(1);
        for (std::size_t j = 0; j < a_list.size(); ++j)
          out(static_cast<int>(p), static_cast<int>(j)) = u.dot(a_list[j].coeffs);
      },
      n_threads);
  return out;
}

Mat latent_samples(const CylLevyProcess& proc, double t, std::size_t n_paths,
                   std::uint64_t seed, int n_threads) {
  require(t > 0.0, "latent_samples: t must be positive");
  const std::vector<double> grid = {0.0, t};
  Mat out(static_cast<int>(n_paths), proc.dim());
  parallel_for(
      n_paths,
      [&](std::size_t p) {
        const LatentPath latent = proc.sample_latent(grid, seed, p);
        out.row(static_cast<int>(p)) = latent.state_at(1).transpose();
      },
      n_threads);
  return out;
}

NonlinearityWitness nonlinearity_witness(const CylLevyProcess& proc, double t,
                                         std::uint64_t seed) {
  const auto* desc = std::get_if<CylPoissonDesc>(&proc.kind());
  require(desc != nullptr, "nonlinearity_witness: needs a cylindrical Poisson process");
  const double znorm2 = desc->zeta.squaredNorm();
  require(znorm2 > 0.0, "nonlinearity_witness: zeta must be nonzero");
  require(t > 0.0, "nonlinearity_witness: t must be positive");

  NonlinearityWitness w;
  // zeta(a) = zeta(b) = 0.8, so zeta(a + b) = 1.6 leaves the unit ball.
  w.a = DualFunctional(desc->zeta * (0.8 / znorm2));
  w.b = w.a;
  w.t = t;
  const DualFunctional ab = w.a + w.b;
  w.zeta_ab = desc->zeta.dot(ab.coeffs);

  const std::vector<double> grid = {0.0, t};
  for (std::uint64_t p = 0;; ++p) {
    require(p < 100000, "nonlinearity_witness: no path with n(t) >= 1 found");
    const LatentPath latent = proc.sample_latent(grid, seed, p);
    if (latent.jump_times.empty()) continue;
    w.path_index = p;
    w.jump_count = static_cast<long>(latent.jump_times.size());
    const DecompositionTerms da = decompose(proc, w.a, grid, seed, p);
    const DecompositionTerms db = decompose(proc, w.b, grid, seed, p);
    const DecompositionTerms dab = decompose(proc, ab, grid, seed, p);
    w.p_discrepancy = dab.big_jumps.back() - da.big_jumps.back() - db.big_jumps.back();
    w.m_discrepancy = dab.small_jumps.back() - da.small_jumps.back() - db.small_jumps.back();
    return w;
  }
}

}  // namespace cylev
