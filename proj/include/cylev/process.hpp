#pragma once

#include "cylev/levy.hpp"
#include "cylev/space.hpp"

namespace cylev {

/// L(t)a = zeta(a) n(t) for a Poisson process n of the given intensity.
/// zeta is a coefficient vector; it may be an algebraic-dual element whose
/// dual norm grows with the dimension.
struct CylPoissonDesc {
  double lambda = 1.0;
  Vec zeta;
};

/// L(t)a = Y_1 a + ... + Y_{n(t)} a with iid U-valued jumps Y ~ rho.
struct CylCompoundPoissonDesc {
  double lambda = 1.0;
  JumpLawU rho;
};

/// Impulsive cylindrical process on a finite grid of cells: Poisson random
/// measure with intensity ds (sum_i w_i delta_{cell i}) rho(dbeta), fully
/// compensated. Functionals are coefficient vectors over the cells.
struct ImpulsiveDesc {
  Vec cell_weights;
  double rho_rate = 1.0;
  JumpSizeLaw rho;
};

/// Process induced by a U-valued Levy process X: L(t)a = <X(t), a>.
struct InducedLevyDesc {
  Vec drift;
  Mat gauss_cov;  // may be 0 x 0 for none
  double jump_rate = 0.0;
  std::optional<JumpLawU> jump_law;
};

/// Finite-rank series M2(t)a = sum_k <factor e_k, a> m_k(t) over independent
/// centered drivers m_k.
struct SeriesDesc {
  Mat factor;  // dim x rank, columns are i_Q e_k
  std::vector<LevyTriplet1D> drivers;
};

using ProcessKind = std::variant<CylPoissonDesc, CylCompoundPoissonDesc, ImpulsiveDesc,
                                 InducedLevyDesc, SeriesDesc>;

/// One latent draw shared by every functional: for fixed omega the map
/// a -> L(t)a = <u(t), a> is linear exactly.
struct LatentPath {
  std::vector<double> times;
  Vec slope;                       // deterministic drift of the latent state
  Mat gauss;                       // dim x n_times cumulative Gaussian part (0 rows if none)
  std::vector<double> jump_times;  // sorted
  std::vector<Vec> jump_vecs;      // latent jump increments

  /// Latent state at grid index j.
  Vec state_at(std::size_t j) const;
  /// Projected path values <u(t_j), a> for all grid times.
  std::vector<double> project(const Vec& a) const;
};

/// Sampled driver paths of a series process (shared by the stochastic
/// integral and the Ornstein-Uhlenbeck solver so that checks built on the
/// same (seed, path) see the same randomness).
struct DriverPaths {
  std::vector<double> grid;
  std::vector<SampledPath1D> paths;  // one per driver
};

DriverPaths sample_drivers(const SeriesDesc& desc, const std::vector<double>& grid,
                           std::uint64_t seed, std::uint64_t path_index);

class CylLevyProcess {
 public:
  explicit CylLevyProcess(ProcessKind kind);

  const ProcessKind& kind() const { return kind_; }
  int dim() const { return dim_; }
  bool weak_order_2() const;
  bool is_series() const { return std::holds_alternative<SeriesDesc>(kind_); }
  const SeriesDesc& series() const;

  LatentPath sample_latent(const std::vector<double>& grid, std::uint64_t seed,
                           std::uint64_t path_index) const;

  /// Image of the cylindrical Levy measure under a: nu o a^{-1}.
  ProjectedJumpMeasure projected_jumps(const Vec& a) const;
  /// Quadratic form of the Gaussian part: Var W(1)a.
  double gaussian_form(const Vec& a) const;
  /// Latent drift slope (matches LatentPath::slope).
  Vec slope_vector() const;
  /// d/dt of the expected latent jump sum.
  Vec jump_mean_vector() const;
  /// Exponent psi(a) of the simulated law: phi_{L(t)}(a) = exp(t psi(a)).
  Complex char_exponent(const Vec& a) const;
  /// d/dt E[L(t)a].
  double mean_rate(const Vec& a) const;
  /// E|M2(1)a|^2 = int beta^2 (nu o a^{-1})(dbeta).
  double m2_second_moment(const Vec& a) const;

 private:
  ProcessKind kind_;
  int dim_ = 0;
};

/// Joint path bundle: every functional evaluated on the same latent draw, so
/// the marginal of column j is the law of (L(t) a_j).
PathBundle sample_joint(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_list,
                        const std::vector<double>& grid, std::uint64_t seed,
                        std::uint64_t path_index = 0);

/// Levy-Ito decomposition of one projected path. Jumps are classified by the
/// closed unit ball (|jump| <= 1 counts as small); the small-jump part is
/// compensated by t * int_{|g|<=1} g (nu o a^{-1})(dg). Identical projected
/// jump sizes are accumulated as count * size, which keeps the documented
/// exact identities exact at the bit level.
struct DecompositionTerms {
  std::vector<double> times;
  double drift_rate = 0.0;          // mm(a)
  std::vector<double> wiener;       // W(t)a
  std::vector<double> small_jumps;  // M(t)a
  std::vector<double> big_jumps;    // P(t)a
  std::vector<double> total;        // L(t)a
};

DecompositionTerms decompose(const CylLevyProcess& proc, const DualFunctional& a,
                             const std::vector<double>& grid, std::uint64_t seed,
                             std::uint64_t path_index = 0);

/// Fully compensated jump part M2(t)a and the linear drift mm_2(a) of the
/// weak-order-2 decomposition L(t)a = mm_2(a) t + W(t)a + M2(t)a.
struct M2Path {
  std::vector<double> times;
  std::vector<double> values;  // M2(t)a
  double drift_rate = 0.0;     // mm_2(a)
};

M2Path m2_projection(const CylLevyProcess& proc, const DualFunctional& a,
                     const std::vector<double>& grid, std::uint64_t seed,
                     std::uint64_t path_index = 0);

/// Bulk sampler of M2(t) a_j across paths; row p is path p, column j the
/// value M2(t)a_j. Parallel over paths with deterministic layout.
Mat m2_samples(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_list,
               double t, std::size_t n_paths, std::uint64_t seed, int n_threads = 0);

/// Joint samples of L(t)a_j (full process values at one time).
Mat joint_samples(const CylLevyProcess& proc, const std::vector<DualFunctional>& a_list,
                  double t, std::size_t n_paths, std::uint64_t seed, int n_threads = 0);

/// Latent U-vectors u with L(t)a = <u, a>, one row per path. The frozen
/// sample set behind empirical characteristic functionals.
Mat latent_samples(const CylLevyProcess& proc, double t, std::size_t n_paths,
                   std::uint64_t seed, int n_threads = 0);

/// Witness of the non-linearity of the big-jump part P for a cylindrical
/// Poisson process: functionals a, b with |zeta(a)|, |zeta(b)| <= 1 but
/// |zeta(a+b)| > 1, evaluated on a path with n(t) >= 1.
struct NonlinearityWitness {
  DualFunctional a;
  DualFunctional b;
  double t = 1.0;
  std::uint64_t path_index = 0;
  long jump_count = 0;          // n(t) on the witness path
  double p_discrepancy = 0.0;   // P(t)(a+b) - P(t)a - P(t)b
  double m_discrepancy = 0.0;   // M(t)(a+b) - M(t)a - M(t)b
  double zeta_ab = 0.0;         // zeta(a+b)
};

NonlinearityWitness nonlinearity_witness(const CylLevyProcess& proc, double t,
                                         std::uint64_t seed);

}  // namespace cylev
