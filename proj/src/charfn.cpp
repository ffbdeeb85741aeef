#include "cylev/charfn.hpp"

#include "cylev/mc.hpp"

#include <cmath>

namespace cylev {

namespace {

const Complex kI(0.0, 1.0);

Complex factor_exponent(const CharFunctional::Factor& f, const Vec& a) {
  if (const auto* d = std::get_if<CharFunctional::DiracFactor>(&f)) return kI * d->point.dot(a);
  if (const auto* g = std::get_if<CharFunctional::GaussianFactor>(&f))
    return Complex(-0.5 * a.dot(g->sigma_t * a), 0.0);
  if (const auto* p = std::get_if<CharFunctional::ProcessFactor>(&f))
    return p->t * CylLevyProcess(p->kind).char_exponent(a);
  const auto& lk = std::get<CharFunctional::LkFactor>(f);
  Complex e = kI * lk.lk.drift.dot(a) - 0.5 * a.dot(lk.lk.sigma * a);
  if (lk.lk.jumps) {
    const ProjectedJumpMeasure nu = CylLevyProcess(*lk.lk.jumps).projected_jumps(a);
    e += nu.exponent(1.0, Compensation::UnitBall);
  }
  return lk.t * e;
}

}  // namespace

Complex levy_khintchine_eval(const CylLevyKhintchine& lk, const DualFunctional& a) {
  require(a.dim() == lk.dim(), "levy_khintchine_eval: functional dimension mismatch");
  Complex e = kI * lk.drift.dot(a.coeffs) - 0.5 * a.coeffs.dot(lk.sigma * a.coeffs);
  if (lk.jumps) {
    const ProjectedJumpMeasure nu = CylLevyProcess(*lk.jumps).projected_jumps(a.coeffs);
    require(std::isfinite(nu.levy_integral()),
            "levy_khintchine_eval: divergent jump integral");
    e += nu.exponent(1.0, Compensation::UnitBall);
  }
  return std::exp(e);
}

CharFunctional CharFunctional::dirac_zero(int dim) {
  require(dim >= 1, "CharFunctional: dim must be >= 1");
  CharFunctional phi;
  phi.dim_ = dim;
  return phi;
}

CharFunctional CharFunctional::dirac(Vec point) {
  CharFunctional phi;
  phi.dim_ = static_cast<int>(point.size());
  phi.factors_.push_back(DiracFactor{std::move(point)});
  return phi;
}

CharFunctional CharFunctional::gaussian(Mat sigma, double t) {
  require(sigma.rows() == sigma.cols(), "CharFunctional: gaussian form must be square");
  require(t > 0.0, "CharFunctional: t must be positive");
  CharFunctional phi;
  phi.dim_ = static_cast<int>(sigma.rows());
  phi.factors_.push_back(GaussianFactor{t * sigma});
  return phi;
}

CharFunctional CharFunctional::from_process(ProcessKind kind, double t) {
  require(t > 0.0, "CharFunctional: t must be positive");
  CharFunctional phi;
  phi.dim_ = CylLevyProcess(kind).dim();
  phi.factors_.push_back(ProcessFactor{std::move(kind), t});
  return phi;
}

CharFunctional CharFunctional::levy_khintchine(CylLevyKhintchine lk, double t) {
  require(t > 0.0, "CharFunctional: t must be positive");
  CharFunctional phi;
  phi.dim_ = lk.dim();
  phi.factors_.push_back(LkFactor{std::move(lk), t});
  return phi;
}

CharFunctional CharFunctional::empirical(Mat latent) {
  require(latent.rows() >= static_cast<int>(kMinPathsForVerdict),
          "CharFunctional: empirical kind needs at least 100 samples");
  CharFunctional phi;
  phi.dim_ = static_cast<int>(latent.cols());
  phi.empirical_ = std::move(latent);
  return phi;
}

std::size_t CharFunctional::sample_count() const {
  return empirical_ ? static_cast<std::size_t>(empirical_->rows()) : 0;
}

CharFunctional::Value CharFunctional::evaluate(const DualFunctional& a) const {
  require(a.dim() == dim_, "CharFunctional: functional dimension mismatch");
  Value out;
  Complex exponent(0.0, 0.0);
  for (const auto& f : factors_) exponent += factor_exponent(f, a.coeffs);
  out.value = std::exp(exponent);
  if (empirical_) {
    const McReport rep = empirical_char(*empirical_, a.coeffs);
    out.value *= rep.estimate;
    out.se = rep.se;
  }
  return out;
}

Complex CharFunctional::operator()(const DualFunctional& a) const { return evaluate(a).value; }

Complex project_char(const CharFunctional& phi, const std::vector<DualFunctional>& a_list,
                     const Vec& beta) {
  require(static_cast<Eigen::Index>(a_list.size()) == beta.size(),
          "project_char: functional/argument length mismatch");
  require(!a_list.empty(), "project_char: need at least one functional");
  DualFunctional combined(Vec::Zero(phi.dim()));
  for (std::size_t k = 0; k < a_list.size(); ++k)
    combined = combined + a_list[k] * beta[static_cast<Eigen::Index>(k)];
  return phi(combined);
}

CharFunctional convolve(const CharFunctional& a, const CharFunctional& b) {
  require(a.dim_ == b.dim_, "convolve: dimension mismatch");
  CharFunctional out = a;
  for (const auto& f : b.factors_) {
    bool merged = false;
    // Merge rules: Gaussian forms add; same-direction Poisson intensities add.
    if (const auto* g = std::get_if<CharFunctional::GaussianFactor>(&f)) {
      for (auto& existing : out.factors_) {
        if (auto* eg = std::get_if<CharFunctional::GaussianFactor>(&existing)) {
          eg->sigma_t += g->sigma_t;
          merged = true;
          break;
        }
      }
    } else if (const auto* p = std::get_if<CharFunctional::ProcessFactor>(&f)) {
      if (const auto* pois = std::get_if<CylPoissonDesc>(&p->kind)) {
        for (auto& existing : out.factors_) {
          auto* ep = std::get_if<CharFunctional::ProcessFactor>(&existing);
          if (!ep) continue;
          auto* epois = std::get_if<CylPoissonDesc>(&ep->kind);
          if (!epois || epois->zeta != pois->zeta) continue;
          epois->lambda = epois->lambda * ep->t + pois->lambda * p->t;
          ep->t = 1.0;
          merged = true;
          break;
        }
      }
    }
    if (!merged) out.factors_.push_back(f);
  }
  if (b.empirical_) {
    require(!out.empirical_, "convolve: cannot combine two empirical functionals");
    out.empirical_ = b.empirical_;
  }
  return out;
}

CharFunctional id_root(const CharFunctional& phi, int n) {
  require(n >= 1, "id_root: n must be >= 1");
  if (!phi.is_closed_form())
    throw Unsupported("id_root: empirical characteristic functionals have no explicit exponent");
  CharFunctional out = phi;
  if (n == 1) return out;
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& f : out.factors_) {
    if (auto* d = std::get_if<CharFunctional::DiracFactor>(&f)) {
      d->point *= inv;
    } else if (auto* g = std::get_if<CharFunctional::GaussianFactor>(&f)) {
      g->sigma_t *= inv;
    } else if (auto* p = std::get_if<CharFunctional::ProcessFactor>(&f)) {
      p->t *= inv;
    } else {
      std::get<CharFunctional::LkFactor>(f).t *= inv;
    }
  }
  // Spot-check (root)^n == phi at a few deterministic arguments.
  for (int k = 0; k < 3; ++k) {
    Vec arg = Vec::Zero(phi.dim());
    arg[k % phi.dim()] = 0.5 + 0.25 * k;
    const DualFunctional a(arg);
    const Complex lhs = std::pow(out(a), n);
    const Complex rhs = phi(a);
    if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(rhs)))
      throw StatisticalFailure("id_root: (root)^n failed to reproduce phi");
  }
  return out;
}

}  // namespace cylev
