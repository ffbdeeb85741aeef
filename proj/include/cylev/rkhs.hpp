#pragma once

#include "cylev/mc.hpp"
#include "cylev/process.hpp"

namespace cylev {

/// Factorization Q = i_Q i_Q* through the finite-rank reproducing kernel
/// space: i_Q columns span the factor space, and the preimage functionals
/// a_k satisfy i_Q* a_k = e_k.
struct CovarianceFactorization {
  Mat q;     // dim x dim, symmetric PSD
  Mat i_q;   // dim x rank
  std::vector<DualFunctional> basis_preimages;  // a_k, one per kept eigenpair
  double rank_tol = 1e-12;

  int dim() const { return static_cast<int>(q.rows()); }
  int rank() const { return static_cast<int>(i_q.cols()); }
  /// Coordinates of i_Q* a in the factor basis.
  Vec embed_adjoint(const Vec& a) const { return i_q.transpose() * a; }
};

/// Eigendecomposition-based factorization: keep eigenpairs with
/// lambda > rank_tol * lambda_max, i_Q = V sqrt(Lambda), a_k = v_k / sqrt(lambda_k).
/// Throws on asymmetry beyond 1e-10 or negative eigenvalues beyond tolerance.
CovarianceFactorization factorize(const Mat& q, double rank_tol = 1e-12);

/// Tail norms |(I - p_m) i_Q* a| for m = 0..rank: the explicit truncation
/// loss of the finite series.
std::vector<double> truncation_profile(const CovarianceFactorization& fact, const Vec& a);

struct Q2Estimate {
  Mat q;        // entrywise MC estimate of E[(M2(1)a_i)(M2(1)a_j)]
  Mat se;       // entrywise standard errors
  std::size_t n_paths = 0;
};

/// Monte Carlo covariance of the fully compensated jump part at t = 1,
/// evaluated on the given functional basis. The raw estimate is symmetric by
/// construction; negative eigenvalues within -5 SE of zero are clipped,
/// anything lower raises a statistical failure.
Q2Estimate estimate_q2(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_basis,
                       std::size_t n_paths, std::uint64_t seed, int n_threads = 0);

struct Q2ScalingReport {
  struct Entry {
    double t = 0.0;
    double max_sigmas = 0.0;  // worst entrywise |Q(t) - t Q(1)| in combined SEs
    bool pass = true;
  };
  std::vector<Entry> entries;
  bool pass = true;
};

/// Checks Q2(t) = t Q2(1) entrywise at the requested times (3 SE rule with
/// the multiple-comparison allowance).
Q2ScalingReport q2_time_scaling_check(const CylLevyProcess& proc,
                                      const std::vector<DualFunctional>& a_basis,
                                      const std::vector<double>& t_list, std::size_t n_paths,
                                      std::uint64_t seed, int n_threads = 0);

/// Finite-rank series process M2(t)a = sum_k <i_Q e_k, a> m_k(t) over
/// independent drivers. Prototypes are cycled to fill the rank; every driver
/// must be centered with E|m(1)|^2 = 1.
CylLevyProcess build_series_process(const CovarianceFactorization& fact,
                                    const std::vector<LevyTriplet1D>& driver_prototypes);

}  // namespace cylev
