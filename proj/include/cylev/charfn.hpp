#pragma once

#include "cylev/process.hpp"

namespace cylev {

/// Levy-Khintchine datum of an infinitely divisible cylindrical measure:
/// linear drift functional, quadratic form, and a jump projector given by a
/// process descriptor (its projected_jumps map realizes a -> nu o a^{-1}).
struct CylLevyKhintchine {
  Vec drift;                         // m(a) = <drift, a>
  Mat sigma;                         // s(a) = a^T sigma a
  std::optional<ProcessKind> jumps;  // nu, when present

  int dim() const { return static_cast<int>(drift.size()); }
};

/// exp(i m(a) - s(a)/2 + int (e^{i g} - 1 - i g 1_{|g|<=1}) (nu o a^{-1})(dg)).
/// Closed form for point-mass and parametric jump laws; adaptive quadrature
/// (domain split at the compensation boundary) backs the dual-route checks.
Complex levy_khintchine_eval(const CylLevyKhintchine& lk, const DualFunctional& a);

/// Characteristic functional of a cylindrical measure. Closed forms are
/// products of infinitely divisible factors (each with an explicit exponent
/// that scales in t); empirical kinds carry frozen latent samples.
class CharFunctional {
 public:
  struct DiracFactor {
    Vec point;  // exp(i <point, a>)
  };
  struct GaussianFactor {
    Mat sigma_t;  // exp(-a^T sigma_t a / 2), time already folded in
  };
  struct ProcessFactor {
    ProcessKind kind;  // exp(t psi_kind(a))
    double t = 1.0;
  };
  struct LkFactor {
    CylLevyKhintchine lk;
    double t = 1.0;
  };
  using Factor = std::variant<DiracFactor, GaussianFactor, ProcessFactor, LkFactor>;

  /// phi of the Dirac measure at 0 (the convolution unit): phi == 1.
  static CharFunctional dirac_zero(int dim);
  static CharFunctional dirac(Vec point);
  static CharFunctional gaussian(Mat sigma, double t = 1.0);
  static CharFunctional from_process(ProcessKind kind, double t = 1.0);
  static CharFunctional levy_khintchine(CylLevyKhintchine lk, double t = 1.0);
  /// Frozen empirical functional over latent samples (rows are draws of the
  /// latent U-vector); phi(a) = mean exp(i <u_j, a>).
  static CharFunctional empirical(Mat latent);

  int dim() const { return dim_; }
  bool is_closed_form() const { return !empirical_.has_value(); }
  std::size_t sample_count() const;

  Complex operator()(const DualFunctional& a) const;
  /// Estimate with standard errors; exact (se = 0) for closed forms.
  struct Value {
    Complex value;
    double se = 0.0;
  };
  Value evaluate(const DualFunctional& a) const;

  const std::vector<Factor>& factors() const { return factors_; }

 private:
  CharFunctional() = default;
  int dim_ = 0;
  std::vector<Factor> factors_;
  std::optional<Mat> empirical_;

  friend CharFunctional convolve(const CharFunctional& a, const CharFunctional& b);
  friend CharFunctional id_root(const CharFunctional& phi, int n);
};

/// phi(beta_1 a_1 + ... + beta_n a_n): the characteristic function of the
/// image measure mu o pi_{a_1..a_n}^{-1} at beta.
Complex project_char(const CharFunctional& phi, const std::vector<DualFunctional>& a_list,
                     const Vec& beta);

/// Pointwise product phi_1 phi_2; compatible closed-form factors merge
/// (Gaussians add forms, same-direction Poissons add intensities).
CharFunctional convolve(const CharFunctional& a, const CharFunctional& b);

/// The n-th convolution root: every factor's exponent scaled by 1/n.
/// Closed forms only; no principal-branch guessing on empirical data.
CharFunctional id_root(const CharFunctional& phi, int n);

}  // namespace cylev
