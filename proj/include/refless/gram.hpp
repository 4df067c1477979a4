#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "refless/error.hpp"
#include "refless/linalg.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

inline constexpr double kPivotFloor = 1e-14;
inline constexpr double kLogOverflow = 700.0;

/// Gamma_kl = kappa_k kappa_l / (kappa_k + kappa_l)
inline Matrix<double> build_gamma(std::span<const double> kappa) {
  const std::size_t n = kappa.size();
  Matrix<double> g(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) g(k, l) = g(l, k) = kappa[k] * kappa[l] / (kappa[k] + kappa[l]);
  return g;
}

/// M(x,t) = D(x,t) + Gamma with D_jj = alpha_j^2 exp(2 kappa_j x - 8 kappa_j^3 t),
/// factored after symmetric scaling by s_j = sqrt(M_jj). Coordinates whose
/// log weight exceeds kLogOverflow are decoupled and take no part in the solve.
class GramSystem {
 public:
  double x = 0.0;
  double t = 0.0;

  std::size_t size() const noexcept { return kappa_.size(); }
  std::span<const double> kappa() const noexcept { return kappa_; }
  std::span<const double> log_weight() const noexcept { return log_d_; }

  /// d_j(x,t); +inf for coordinates beyond the overflow guard.
  std::vector<double> diag_weight() const {
    std::vector<double> d(log_d_.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::exp(log_d_[j]);
    return d;
  }

  /// Dense M, for inspection.
  Matrix<double> matrix() const {
    Matrix<double> m = build_gamma(kappa_);
    for (std::size_t j = 0; j < size(); ++j) m(j, j) += std::exp(log_d_[j]);
    return m;
  }

  bool dropped(std::size_t j) const { return log_d_[j] > kLogOverflow; }
  std::span<const std::size_t> active() const noexcept { return active_; }

  /// s_j^2 = d_j + kappa_j / 2 over the active coordinates.
  std::span<const double> scale() const noexcept { return scale_; }
  const Matrix<double>& equilibrated() const noexcept { return scaled_; }
  const Matrix<double>& factor() const noexcept { return chol_; }

  friend GramSystem assemble_weights(std::vector<double> kappa, std::vector<double> log_d, double x,
                                     double t);

 private:
  std::vector<double> kappa_;
  std::vector<double> log_d_;
  std::vector<std::size_t> active_;
  std::vector<double> scale_;
  Matrix<double> scaled_;
  Matrix<double> chol_;
};

inline GramSystem assemble_weights(std::vector<double> kappa, std::vector<double> log_d, double x,
                                   double t) {
  GramSystem sys;
  sys.x = x;
  sys.t = t;
  sys.kappa_ = std::move(kappa);
  sys.log_d_ = std::move(log_d);
  for (std::size_t j = 0; j < sys.kappa_.size(); ++j)
    if (!sys.dropped(j)) sys.active_.push_back(j);

  const std::size_t n = sys.active_.size();
  sys.scale_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t j = sys.active_[a];
    sys.scale_[a] = std::sqrt(std::exp(sys.log_d_[j]) + 0.5 * sys.kappa_[j]);
  }
  sys.scaled_ = Matrix<double>(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    const double ka = sys.kappa_[sys.active_[a]];
    for (std::size_t b = 0; b < n; ++b) {
      const double kb = sys.kappa_[sys.active_[b]];
      sys.scaled_(a, b) = ka * kb / (ka + kb) / (sys.scale_[a] * sys.scale_[b]);
    }
    sys.scaled_(a, a) = 1.0;
  }
  sys.chol_ = sys.scaled_;
  if (const std::size_t bad = cholesky_in_place(sys.chol_, kPivotFloor))
    throw Error(ErrorKind::FactorizationFailure,
                "equilibrated pivot below 1e-14; kappa too clustered or N too large",
                sys.active_[bad - 1] + 1);
  return sys;
}

inline GramSystem assemble(const SpectralData& data, double x, double t = 0.0) {
  std::vector<double> log_d(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double k = data.kappa[j];
    log_d[j] = 2.0 * std::log(k / data.m[j]) + 2.0 * k * x - 8.0 * k * k * k * t;
  }
  return assemble_weights(data.kappa, std::move(log_d), x, t);
}

namespace detail {

// Solves the equilibrated active block for a right-hand side already
// divided by s, with one refinement step.
template <class T>
std::vector<T> scaled_solve(const GramSystem& sys, std::vector<T> b) {
  std::vector<T> y = b;
  cholesky_solve_in_place<T>(sys.factor(), y);
  const auto& a = sys.equilibrated();
  std::vector<T> r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    T acc = b[i];
    for (std::size_t k = 0; k < b.size(); ++k) acc -= a(i, k) * y[k];
    r[i] = acc;
  }
  cholesky_solve_in_place<T>(sys.factor(), r);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += r[i];
  return y;
}

}  // namespace detail

/// w = M^{-1} rhs. Decoupled coordinates get rhs_j / d_j (zero in double).
template <class T = double>
std::vector<T> solve(const GramSystem& sys, std::span<const T> rhs) {
  if (rhs.size() != sys.size())
    throw Error(ErrorKind::LengthMismatch, "right-hand side does not match system size");
  const auto act = sys.active();
  const auto s = sys.scale();
  std::vector<T> b(act.size());
  for (std::size_t a = 0; a < act.size(); ++a) b[a] = rhs[act[a]] / s[a];
  const std::vector<T> y = detail::scaled_solve<T>(sys, std::move(b));
  std::vector<T> w(sys.size());
  for (std::size_t j = 0; j < sys.size(); ++j)
    if (sys.dropped(j)) w[j] = rhs[j] * std::exp(-sys.log_weight()[j]);
  for (std::size_t a = 0; a < act.size(); ++a) w[act[a]] = y[a] / s[a];
  return w;
}

inline std::vector<double> solve(const GramSystem& sys, const std::vector<double>& rhs) {
  return solve<double>(sys, std::span<const double>(rhs));
}

/// max_j |Im(2 z kappa_j - 8 zeta kappa_j^3)|: the rotation of the diagonal
/// weights off the positive axis.
inline double rotation_angle(std::span<const double> kappa, std::complex<double> z,
                             std::complex<double> zeta) {
  double worst = 0.0;
  for (double k : kappa) worst = std::max(worst, std::abs(2.0 * k * z.imag() - 8.0 * k * k * k * zeta.imag()));
  return worst;
}

/// Solves (A^2 exp(2zK - 8 zeta K^3) + Gamma) w = rhs for complex (z, zeta)
/// with every diagonal weight rotated by less than pi/2.
inline std::vector<std::complex<double>> solve_complex(const SpectralData& data, std::complex<double> z,
                                                       std::complex<double> zeta,
                                                       std::span<const std::complex<double>> rhs) {
  using C = std::complex<double>;
  if (rhs.size() != data.size())
    throw Error(ErrorKind::LengthMismatch, "right-hand side does not match system size");
  if (!(rotation_angle(data.kappa, z, zeta) < std::numbers::pi / 2))
    throw Error(ErrorKind::DomainViolation, "(z, zeta) outside the holomorphy domain");

  const std::size_t n = data.size();
  std::vector<C> log_d(n);
  std::vector<std::size_t> act;
  for (std::size_t j = 0; j < n; ++j) {
    const double k = data.kappa[j];
    log_d[j] = 2.0 * std::log(k / data.m[j]) + 2.0 * k * z - 8.0 * k * k * k * zeta;
    if (log_d[j].real() <= kLogOverflow) act.push_back(j);
  }
  const std::size_t na = act.size();
  std::vector<double> s(na);
  for (std::size_t a = 0; a < na; ++a)
    s[a] = std::sqrt(std::exp(log_d[act[a]].real()) + 0.5 * data.kappa[act[a]]);

  Matrix<C> b(na, na);
  for (std::size_t a = 0; a < na; ++a) {
    const double ka = data.kappa[act[a]];
    for (std::size_t c = 0; c < na; ++c) {
      const double kc = data.kappa[act[c]];
      b(a, c) = ka * kc / (ka + kc) / (s[a] * s[c]);
    }
    b(a, a) += std::exp(log_d[act[a]]) / (s[a] * s[a]);
  }
  const Matrix<C> unscaled = b;
  const auto rows = equilibrate_rows(b);
  LuFactor<C> lu;
  if (const std::size_t bad = lu_factor(b, kPivotFloor, lu))
    throw Error(ErrorKind::SingularSystem, "pivot below 1e-14 of its row scale", act[bad - 1] + 1);

  std::vector<C> rb(na);
  for (std::size_t a = 0; a < na; ++a) rb[a] = rhs[act[a]] / s[a];
  auto solve_scaled = [&](const std::vector<C>& v) {
    std::vector<C> e(na);
    for (std::size_t a = 0; a < na; ++a) e[a] = v[a] * rows[a];
    return lu.solve<C>(e);
  };
  std::vector<C> y = solve_scaled(rb);
  std::vector<C> r = rb;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t c = 0; c < na; ++c) r[a] -= unscaled(a, c) * y[c];
  const std::vector<C> dy = solve_scaled(r);
  for (std::size_t a = 0; a < na; ++a) y[a] += dy[a];

  std::vector<C> w(n);
  for (std::size_t j = 0; j < n; ++j)
    if (log_d[j].real() > kLogOverflow) w[j] = rhs[j] * std::exp(-log_d[j]);
  for (std::size_t a = 0; a < na; ++a) w[act[a]] = y[a] / s[a];
  return w;
}

namespace detail {

// log(1 + e^v) without overflow
inline double softplus(double v) { return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }

}  // namespace detail

/// log det(I + M_raw(x)), M_raw_kl = m_k m_l exp(-(kappa_k + kappa_l) x) / (kappa_k + kappa_l).
/// Uses M = E (I + M_raw) E with E = diag(alpha_j exp(kappa_j x)).
inline double logdet_shift(const GramSystem& sys) {
  double acc = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j)
    acc += detail::softplus(std::log(0.5 * sys.kappa()[j]) - sys.log_weight()[j]);
  const auto& l = sys.factor();
  for (std::size_t a = 0; a < l.rows(); ++a) acc += 2.0 * std::log(l(a, a));
  return acc;
}

inline double logdet_shift(const SpectralData& data, double x) { return logdet_shift(assemble(data, x)); }

}  // namespace refless
