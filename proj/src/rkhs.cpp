#include "cylev/rkhs.hpp"

#include <cmath>

namespace cylev {

CovarianceFactorization factorize(const Mat& q, double rank_tol) {
  require(q.rows() == q.cols(), "factorize: Q must be square");
  require(rank_tol >= 0.0, "factorize: rank_tol must be >= 0");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  require((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "factorize: Q is asymmetric beyond tolerance");

  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (q + q.transpose()));
  require(eig.info() == Eigen::Success, "factorize: eigendecomposition failed");
  const Vec lambda = eig.eigenvalues();  // ascending
  const double lambda_max = std::max(0.0, lambda(lambda.size() - 1));
  const double keep_tol = rank_tol * lambda_max;
  const double neg_tol = std::max(keep_tol, 1e-12 * scale);
  require(lambda(0) >= -neg_tol, "factorize: negative eigenvalue beyond tolerance");

  int rank = 0;
  for (int k = 0; k < lambda.size(); ++k)
    if (lambda(k) > keep_tol && lambda(k) > 0.0) ++rank;

  CovarianceFactorization fact;
  fact.q = q;
  fact.rank_tol = rank_tol;
  fact.i_q = Mat::Zero(q.rows(), rank);
  fact.basis_preimages.reserve(rank);
  // Kept eigenpairs in descending order of eigenvalue.
  int col = 0;
  for (int k = static_cast<int>(lambda.size()) - 1; k >= 0 && col < rank; --k) {
    if (!(lambda(k) > keep_tol && lambda(k) > 0.0)) continue;
    const double root = std::sqrt(lambda(k));
    fact.i_q.col(col) = eig.eigenvectors().col(k) * root;
    fact.basis_preimages.emplace_back(Vec(eig.eigenvectors().col(k) / root));
    ++col;
  }
  return fact;
}

std::vector<double> truncation_profile(const CovarianceFactorization& fact, const Vec& a) {
  const Vec coords = fact.embed_adjoint(a);
  std::vector<double> out(static_cast<std::size_t>(fact.rank()) + 1, 0.0);
  for (int m = 0; m <= fact.rank(); ++m) {
    double tail = 0.0;
    for (int k = m; k < fact.rank(); ++k) tail += coords[k] * coords[k];
    out[static_cast<std::size_t>(m)] = std::sqrt(tail);
  }
  return out;
}

Q2Estimate estimate_q2(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_basis,
                       std::size_t n_paths, std::uint64_t seed, int n_threads) {
  require(!a_basis.empty(), "estimate_q2: need at least one functional");
  require(n_paths >= kMinPathsForVerdict, "estimate_q2: need at least 100 paths");
  const Mat samples = m2_samples(proc, a_basis, 1.0, n_paths, seed, n_threads);
  const int na = static_cast<int>(a_basis.size());

  Q2Estimate est;
  est.n_paths = n_paths;
  est.q = Mat::Zero(na, na);
  est.se = Mat::Zero(na, na);
  std::vector<double> prod(n_paths);
  for (int i = 0; i < na; ++i) {
    for (int j = i; j < na; ++j) {
      for (std::size_t p = 0; p < n_paths; ++p)
        prod[p] = samples(static_cast<int>(p), i) * samples(static_cast<int>(p), j);
      const MeanSe ms = mean_se(prod);
      est.q(i, j) = est.q(j, i) = ms.mean;
      est.se(i, j) = est.se(j, i) = ms.se;
    }
  }

  // PSD projection: clip eigenvalues in (-5 SE, 0); report failure below.
  const double se_scale = est.se.maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat> eig(est.q);
  if (eig.eigenvalues()(0) < -5.0 * se_scale)
    throw StatisticalFailure("estimate_q2: estimate is negative beyond 5 SE");
  if (eig.eigenvalues()(0) < 0.0) {
    Vec clipped = eig.eigenvalues().cwiseMax(0.0);
    est.q = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  }
  return est;
}

Q2ScalingReport q2_time_scaling_check(const CylLevyProcess& proc,
                                      const std::vector<DualFunctional>& a_basis,
                                      const std::vector<double>& t_list, std::size_t n_paths,
                                      std::uint64_t seed, int n_threads) {
  for (double t : t_list) require(t > 0.0, "q2_time_scaling_check: times must be positive");
  Q2ScalingReport rep;

  // Q2(1) estimated from its own substream so the comparisons are independent.
  const std::vector<DualFunctional>& as = a_basis;
  auto moment_at = [&](double t, std::uint64_t stream_salt) {
    const Mat samples = m2_samples(proc, as, t, n_paths, seed + stream_salt, n_threads);
    const int na = static_cast<int>(as.size());
    Mat q = Mat::Zero(na, na), se = Mat::Zero(na, na);
    std::vector<double> prod(n_paths);
    for (int i = 0; i < na; ++i)
      for (int j = i; j < na; ++j) {
        for (std::size_t p = 0; p < n_paths; ++p)
          prod[p] = samples(static_cast<int>(p), i) * samples(static_cast<int>(p), j);
        const MeanSe ms = mean_se(prod);
        q(i, j) = q(j, i) = ms.mean;
        se(i, j) = se(j, i) = ms.se;
      }
    return std::make_pair(q, se);
  };

  const auto [q1, se1] = moment_at(1.0, 0);
  std::uint64_t salt = 1;
  for (double t : t_list) {
    const auto [qt, set] = moment_at(t, salt++);
    SuiteTally tally;
    double worst = 0.0;
    for (int i = 0; i < qt.rows(); ++i)
      for (int j = i; j < qt.cols(); ++j) {
        Comparison c;
        c.diff = std::abs(qt(i, j) - t * q1(i, j));
        c.combined_se = std::hypot(set(i, j), t * se1(i, j));
        c.pass = c.diff <= kSigmaRule * c.combined_se;
        tally.add(c);
        if (c.combined_se > 0.0) worst = std::max(worst, c.diff / c.combined_se);
      }
    rep.entries.push_back({t, worst, tally.pass()});
    rep.pass = rep.pass && tally.pass();
  }
  return rep;
}

CylLevyProcess build_series_process(const CovarianceFactorization& fact,
                                    const std::vector<LevyTriplet1D>& driver_prototypes) {
  require(fact.rank() >= 1, "build_series_process: factorization has rank 0");
  require(!driver_prototypes.empty(), "build_series_process: need at least one driver");
  SeriesDesc desc;
  desc.factor = fact.i_q;
  desc.drivers.reserve(fact.rank());
  for (int k = 0; k < fact.rank(); ++k) {
    const LevyTriplet1D& d = driver_prototypes[static_cast<std::size_t>(k) %
                                               driver_prototypes.size()];
    require(d.is_centered(), "build_series_process: driver is not centered");
    require(std::abs(d.variance_rate() - 1.0) <= 1e-9,
            "build_series_process: driver is not normalized to E|m(1)|^2 = 1");
    desc.drivers.push_back(d);
  }
  return CylLevyProcess(std::move(desc));
}

}  // namespace cylev
