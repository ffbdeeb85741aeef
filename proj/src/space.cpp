#include "cylev/space.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace cylev {

namespace {

double weight_at(const std::vector<double>& w, int k) {
  return w.empty() ? 1.0 : w[static_cast<std::size_t>(k)];
}

}  // namespace

double NormKind::vector_norm(const Vec& u) const {
  require(weights.empty() || static_cast<int>(weights.size()) == u.size(),
          "NormKind: weight length does not match dimension");
  if (std::isinf(p)) {
    double m = 0.0;
    for (int k = 0; k < u.size(); ++k) m = std::max(m, weight_at(weights, k) * std::abs(u[k]));
    return m;
  }
  double s = 0.0;
  for (int k = 0; k < u.size(); ++k) s += weight_at(weights, k) * std::pow(std::abs(u[k]), p);
  return std::pow(s, 1.0 / p);
}

double NormKind::dual_norm(const Vec& a) const {
  require(weights.empty() || static_cast<int>(weights.size()) == a.size(),
          "NormKind: weight length does not match dimension");
  // Dual of the weighted l^p norm (sum w_k |u_k|^p)^(1/p) is the weighted l^q
  // norm with weights w_k^(-q/p), q the conjugate exponent.
  if (std::isinf(p)) {
    double s = 0.0;
    for (int k = 0; k < a.size(); ++k) s += std::abs(a[k]) / weight_at(weights, k);
    return s;
  }
  if (p == 1.0) {
    double m = 0.0;
    for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k]) / weight_at(weights, k));
    return m;
  }
  const double q = p / (p - 1.0);
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k)
    s += std::pow(weight_at(weights, k), -q / p) * std::pow(std::abs(a[k]), q);
  return std::pow(s, 1.0 / q);
}

DualFunctional DualFunctional::operator+(const DualFunctional& o) const {
  require(dim() == o.dim(), "DualFunctional: dimension mismatch in +");
  return DualFunctional(coeffs + o.coeffs);
}

DualFunctional DualFunctional::operator*(double s) const {
  return DualFunctional(coeffs * s);
}

double pairing(const Vec& u, const DualFunctional& a) {
  require(u.size() == a.coeffs.size(), "pairing: dimension mismatch");
  return u.dot(a.coeffs);
}

Vec OperatorMatrix::apply(const Vec& u) const {
  require(u.size() == entries.cols(), "OperatorMatrix: dimension mismatch in apply");
  return entries * u;
}

DualFunctional OperatorMatrix::apply_adjoint(const DualFunctional& f) const {
  require(f.coeffs.size() == entries.rows(),
          "OperatorMatrix: dimension mismatch in apply_adjoint");
  return DualFunctional(entries.transpose() * f.coeffs);
}

Mat matrix_exponential(const Mat& a, double t) {
  require(a.rows() == a.cols(), "matrix_exponential: matrix must be square");
  require(t >= 0.0, "matrix_exponential: t must be >= 0");
  require(a.allFinite(), "matrix_exponential: non-finite entries");
  if (t == 0.0) return Mat::Identity(a.rows(), a.cols());
  return (t * a).exp();
}

Semigroup Semigroup::from_generator(Mat a) {
  require(a.rows() == a.cols(), "Semigroup: generator must be square");
  require(a.allFinite(), "Semigroup: generator has non-finite entries");
  Semigroup sg;
  sg.dim_ = static_cast<int>(a.rows());
  sg.generator_ = std::move(a);
  return sg;
}

Semigroup Semigroup::translation(int n_cells, double cell_width) {
  require(n_cells >= 1, "Semigroup: translation needs at least one cell");
  require(cell_width > 0.0, "Semigroup: cell width must be positive");
  Semigroup sg;
  sg.dim_ = n_cells;
  sg.translation_ = true;
  sg.cell_width_ = cell_width;
  return sg;
}

const Mat& Semigroup::generator() const {
  require(!translation_, "Semigroup: translation rule has no dense generator");
  return generator_;
}

Mat Semigroup::evaluate(double t) const {
  require(t >= 0.0, "Semigroup: t must be >= 0");
  if (translation_) {
    // (S(t)f)_i = f_{i + k}, a cyclic shift by k = round(t / cell_width).
    const long k = std::lround(t / cell_width_) % dim_;
    Mat s = Mat::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i) s(i, (i + k) % dim_) = 1.0;
    return s;
  }
  return matrix_exponential(generator_, t);
}

Vec Semigroup::apply(double t, const Vec& u) const {
  require(u.size() == dim_, "Semigroup: dimension mismatch");
  require(u.allFinite(), "Semigroup: non-finite input");
  if (translation_) {
    const long k = std::lround(t / cell_width_) % dim_;
    require(t >= 0.0, "Semigroup: t must be >= 0");
    Vec out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = u[(i + k) % dim_];
    return out;
  }
  return evaluate(t) * u;
}

DualFunctional Semigroup::apply_adjoint(double t, const DualFunctional& f) const {
  require(f.dim() == dim_, "Semigroup: dimension mismatch");
  if (translation_) {
    require(t >= 0.0, "Semigroup: t must be >= 0");
    const long k = std::lround(t / cell_width_) % dim_;
    Vec out(dim_);
    for (int i = 0; i < dim_; ++i) out[(i + k) % dim_] = f.coeffs[i];
    return DualFunctional(out);
  }
  return DualFunctional(matrix_exponential(generator_.transpose(), t) * f.coeffs);
}

double Semigroup::operator_norm(double t) const {
  if (translation_) return 1.0;  // permutation power
  const Mat s = evaluate(t);
  return s.jacobiSvd().singularValues()(0);
}

StabilityReport stability_constants(const Semigroup& sg, double horizon, int grid) {
  require(horizon > 0.0, "stability_constants: horizon must be positive");
  require(grid >= 2, "stability_constants: need at least 2 grid points");
  StabilityReport rep;
  rep.grid_times.resize(grid);
  rep.grid_norms.resize(grid);
  // Fit log|S(t)| = c - lambda t on t_j = j * horizon / grid, j = 1..grid.
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (int j = 0; j < grid; ++j) {
    const double t = horizon * (j + 1) / grid;
    const double nrm = sg.operator_norm(t);
    rep.grid_times[j] = t;
    rep.grid_norms[j] = nrm;
    const double y = std::log(std::max(nrm, 1e-300));
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double n = grid;
  const double denom = n * stt - st * st;
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;
  rep.decay_rate = -slope;
  // Enlarge R to the grid supremum of |S(t)| e^{lambda t}: the reported pair
  // then certifies the bound at every grid point.
  double r = std::exp(intercept);
  for (int j = 0; j < grid; ++j)
    r = std::max(r, rep.grid_norms[j] * std::exp(rep.decay_rate * rep.grid_times[j]));
  rep.growth_constant = std::max(r, 1.0) * (1.0 + 1e-12);
  rep.is_exp_stable = rep.decay_rate > 1e-9;
  return rep;
}

double stable_horizon(const StabilityReport& rep, double target) {
  require(target > 0.0, "stable_horizon: target must be positive");
  require(rep.is_exp_stable, "stable_horizon: semigroup is not exponentially stable");
  return (std::log(rep.growth_constant) - std::log(target)) / rep.decay_rate;
}

Vec CoefficientSequence::materialize(int dim) const {
  require(dim >= 1, "CoefficientSequence: dim must be >= 1");
  Vec out(dim);
  for (int k = 0; k < dim; ++k) {
    const double idx = static_cast<double>(k + 1);
    switch (kind) {
      case Kind::Constant:
        out[k] = c;
        break;
      case Kind::Power:
        out[k] = c * std::pow(idx, p);
        break;
      case Kind::Harmonic:
        out[k] = c / idx;
        break;
    }
  }
  return out;
}

DualNormGrowth dual_norm_growth(const CoefficientSequence& seq, const NormKind& norm,
                                const std::vector<int>& dims) {
  require(dims.size() >= 3, "dual_norm_growth: need at least 3 dimensions");
  require(norm.weights.empty(), "dual_norm_growth: sweeping dims needs an unweighted norm");
  DualNormGrowth out;
  out.dims = dims;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int d : dims) {
    require(d >= 1, "dual_norm_growth: dims must be positive");
    const double n = norm.dual_norm(seq.materialize(d));
    out.norms.push_back(n);
    const double x = std::log(static_cast<double>(d));
    const double y = std::log(std::max(n, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(dims.size());
  out.growth_exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  out.bounded = out.growth_exponent <= 0.05;
  return out;
}

}  // namespace cylev
