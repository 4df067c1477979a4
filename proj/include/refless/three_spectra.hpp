#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "refless/blaschke.hpp"
#include "refless/error.hpp"
#include "refless/linalg.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

namespace detail {

// log |(k - mu) / (k + mu)| and its sign
inline double log_abs_ratio(double k, double mu, int& sign) {
  const double num = k - mu, den = k + mu;
  if ((num < 0) != (den < 0)) sign = -sign;
  const double r = 2.0 * mu / den;
  return std::abs(r) < 0.5 ? std::log1p(-r) : std::log(std::abs(num / den));
}

// B(i kappa_n) = prod_l (kappa_n - mu_l) / (kappa_n + mu_l) as (log |B|, sign)
inline double log_abs_b(std::span<const double> mu, double k, int& sign) {
  sign = 1;
  double acc = 0.0;
  for (double m : mu) acc += log_abs_ratio(k, m, sign);
  return acc;
}

}  // namespace detail

/// m_n from Eq. m_n^{-2} = i a'(i kappa_n) prod_l (kappa_n - mu_l) / (kappa_n + mu_l), n 1-based.
inline double norming_from_three_spectra(const ThreeSpectra& three, std::size_t n) {
  if (three.kappa.size() != three.mu.size())
    throw Error(ErrorKind::LengthMismatch, "kappa and mu differ in length");
  if (n < 1 || n > three.size()) throw Error(ErrorKind::IndexOutOfRange, "eigenvalue index out of range", n);
  validate(SpectralData{three.kappa, std::vector<double>(three.size(), 1.0)});
  for (std::size_t l = 0; l < three.size(); ++l)
    for (double k : three.kappa)
      if (std::abs(std::abs(three.mu[l]) - k) < kGenericityTolerance * k)
        throw Error(ErrorKind::SpecialPotential, "|mu| coincides with an eigenvalue parameter", l + 1);

  int sign = 1;
  const double kn = three.kappa[n - 1];
  const double log_b = detail::log_abs_b(three.mu, kn, sign);
  const double ad = a_dot(three.kappa, n);
  if (ad < 0) sign = -sign;
  if (sign < 0 || !std::isfinite(log_b))
    throw Error(ErrorKind::NonPositiveRadicand, "radicand of the norming formula is not positive", n);
  return std::exp(-0.5 * (log_b + std::log(std::abs(ad))));
}

inline SpectralData norming_from_three_spectra(const ThreeSpectra& three) {
  SpectralData out{three.kappa, std::vector<double>(three.size())};
  for (std::size_t n = 1; n <= three.size(); ++n) out.m[n - 1] = norming_from_three_spectra(three, n);
  return out;
}

struct NewtonOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 200;
};

namespace detail {

struct MuProblem {
  std::vector<double> kappa;
  std::vector<double> log_target;  // log |m_n^{-2} / (i a'(i kappa_n))|
  std::vector<double> center, radius;

  std::size_t size() const { return kappa.size(); }

  explicit MuProblem(const SpectralData& data) : kappa(data.kappa) {
    const std::size_t n = data.size();
    for (std::size_t j = 0; j < n; ++j) {
      log_target.push_back(-2.0 * std::log(data.m[j]) - std::log(std::abs(a_dot(kappa, j + 1))));
      const double hi = kappa[j], lo = j + 1 < n ? kappa[j + 1] : 0.0;
      center.push_back(0.5 * (hi + lo));
      radius.push_back(0.5 * (hi - lo));
    }
  }

  double mu(std::size_t l, int sigma, double s) const { return sigma * (center[l] + radius[l] * std::tanh(s)); }

  double s_of(std::size_t l, double mu_abs) const {
    const double u = std::clamp((mu_abs - center[l]) / radius[l], -1.0 + 1e-16, 1.0 - 1e-16);
    return std::atanh(u);
  }

  std::vector<double> residual(std::span<const double> mu, std::span<const double> target) const {
    std::vector<double> f(size());
    for (std::size_t n = 0; n < size(); ++n) {
      int sign = 1;
      f[n] = log_abs_b(mu, kappa[n], sign) - target[n];
    }
    return f;
  }
};

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Damped Newton in the interval coordinates s; returns true on convergence.
inline bool newton_mu(const MuProblem& pb, std::span<const int> sigma, std::vector<double>& s,
                      std::span<const double> target, const NewtonOptions& opt) {
  const std::size_t n = pb.size();
  auto mus = [&](std::span<const double> sv) {
    std::vector<double> mu(n);
    for (std::size_t l = 0; l < n; ++l) mu[l] = pb.mu(l, sigma[l], sv[l]);
    return mu;
  };
  std::vector<double> mu = mus(s);
  std::vector<double> f = pb.residual(mu, target);
  double norm = max_abs(f);
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    if (norm < opt.tolerance) return true;
    Matrix<double> jac(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t l = 0; l < n; ++l) {
        const double k = pb.kappa[r];
        const double sech = 1.0 / std::cosh(s[l]);
        jac(r, l) = -2.0 * k / (k * k - mu[l] * mu[l]) * sigma[l] * pb.radius[l] * sech * sech;
      }
    std::vector<double> rhs = f;
    const auto rows = equilibrate_rows(jac);
    for (std::size_t r = 0; r < n; ++r) rhs[r] *= rows[r];
    LuFactor<double> lu;
    if (lu_factor(jac, 1e-300, lu) != 0) return false;
    const std::vector<double> step = lu.solve<double>(rhs);
    bool improved = false;
    double damp = 1.0;
    for (int h = 0; h < 40; ++h, damp *= 0.5) {
      std::vector<double> trial = s;
      for (std::size_t l = 0; l < n; ++l) trial[l] -= damp * step[l];
      const std::vector<double> tmu = mus(trial);
      std::vector<double> tf = pb.residual(tmu, target);
      const double tn = max_abs(tf);
      if (std::isfinite(tn) && tn < norm) {
        s = std::move(trial), mu = tmu, f = std::move(tf), norm = tn;
        improved = true;
        break;
      }
    }
    if (!improved) return norm < opt.tolerance;
  }
  return norm < opt.tolerance;
}

// Monic P(z) = prod (z - mu_l) from P(k_n) = t_n (-1)^N P(-k_n), in units of kappa_1.
inline std::optional<std::vector<double>> interpolating_polynomial(const MuProblem& pb,
                                                                   std::span<const double> signed_target) {
  const std::size_t n = pb.size();
  const double k1 = pb.kappa[0];
  const double s = n % 2 ? -1.0 : 1.0;
  Matrix<double> a(n, n);
  std::vector<double> rhs(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double k = pb.kappa[r] / k1, t = signed_target[r];
    for (std::size_t c = 0; c <= n; ++c) {
      const double v = std::pow(k, static_cast<double>(c)) - s * t * std::pow(-k, static_cast<double>(c));
      if (c < n) a(r, c) = v;
      else rhs[r] = -v;
    }
  }
  const auto rows = equilibrate_rows(a);
  for (std::size_t r = 0; r < n; ++r) rhs[r] *= rows[r];
  LuFactor<double> lu;
  if (lu_factor(a, 1e-13, lu) != 0) return std::nullopt;
  std::vector<double> coef = lu.solve<double>(rhs);
  coef.push_back(1.0);
  return coef;
}

struct PolyValue {
  double value;
  double scale;  // sum |c_k|, for relative zero tests on |z| <= 1
};

inline PolyValue poly_eval(std::span<const double> coef, double z) {
  PolyValue pv{0.0, 0.0};
  for (std::size_t k = coef.size(); k-- > 0;) {
    pv.value = pv.value * z + coef[k];
    pv.scale += std::abs(coef[k]);
  }
  return pv;
}

}  // namespace detail

/// Signed Dirichlet parameters mu of the reflectionless potential with data
/// (kappa, m): the unique interlacing mu with B(i kappa_n) = m_n^{-2} / (i a'(i kappa_n)).
/// The signs and a starting point come from the polynomial P(z) = prod (z - mu_l),
/// which the interpolation conditions determine linearly; Newton then polishes
/// the logarithmic residual in interval coordinates.
inline std::vector<double> mu_from_norming(const SpectralData& data, const NewtonOptions& opt = {}) {
  validate(data);
  const std::size_t n = data.size();
  if (n == 0) return {};
  const detail::MuProblem pb(data);

  std::vector<double> signed_target(n);
  for (std::size_t j = 0; j < n; ++j) signed_target[j] = (j % 2 ? -1.0 : 1.0) * std::exp(pb.log_target[j]);

  std::vector<int> sigma(n, 1);
  std::vector<double> s(n, 0.0);
  bool have_guess = false;
  if (const auto coef = detail::interpolating_polynomial(pb, signed_target)) {
    const double k1 = pb.kappa[0];
    auto is_zero = [&](double z) {
      const auto pv = detail::poly_eval(*coef, z);
      return std::abs(pv.value) <= kGenericityTolerance * pv.scale;
    };
    if (is_zero(0.0)) throw Error(ErrorKind::SpecialPotential, "a Dirichlet parameter sits at zero", n);
    for (std::size_t j = 0; j < n; ++j)
      if (is_zero(pb.kappa[j] / k1) || is_zero(-pb.kappa[j] / k1))
        throw Error(ErrorKind::SpecialPotential, "a Dirichlet parameter coincides with an eigenvalue parameter", j + 1);
    have_guess = true;
    for (std::size_t l = 0; l < n && have_guess; ++l) {
      const double hi = pb.kappa[l] / k1, lo = l + 1 < n ? pb.kappa[l + 1] / k1 : 0.0;
      auto sgn = [&](double z) { return detail::poly_eval(*coef, z).value > 0; };
      const bool pos = sgn(lo) != sgn(hi), neg = sgn(-hi) != sgn(-lo);
      if (pos == neg) {
        have_guess = false;
        break;
      }
      sigma[l] = pos ? 1 : -1;
      double a = pos ? lo : -hi, b = pos ? hi : -lo;
      const bool fa = sgn(a);
      for (int it = 0; it < 200 && b - a > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (a + b);
        (sgn(mid) == fa ? a : b) = mid;
      }
      s[l] = pb.s_of(l, std::abs(0.5 * (a + b)) * k1);
    }
  }

  if (have_guess && detail::newton_mu(pb, sigma, s, pb.log_target, opt)) {
    std::vector<double> mu(n);
    for (std::size_t l = 0; l < n; ++l) mu[l] = pb.mu(l, sigma[l], s[l]);
    return mu;
  }

  // Retry: continuation from the geometric-mean point towards the targets.
  std::vector<double> s0(n), mu0(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double hi = pb.kappa[l], lo = l + 1 < n ? pb.kappa[l + 1] : 0.5 * pb.kappa[l];
    s0[l] = pb.s_of(l, std::sqrt(hi * lo));
    mu0[l] = pb.mu(l, sigma[l], s0[l]);
  }
  const std::vector<double> start = pb.residual(mu0, std::vector<double>(n, 0.0));
  s = s0;
  constexpr int kSteps = 16;
  for (int h = 1; h <= kSteps; ++h) {
    const double tau = static_cast<double>(h) / kSteps;
    std::vector<double> target(n);
    for (std::size_t j = 0; j < n; ++j) target[j] = (1 - tau) * start[j] + tau * pb.log_target[j];
    NewtonOptions step_opt = opt;
    if (h < kSteps) step_opt.tolerance = 1e-8;
    if (!detail::newton_mu(pb, sigma, s, target, step_opt))
      throw Error(ErrorKind::NewtonDivergence, "no convergence for the Dirichlet parameters");
  }
  std::vector<double> mu(n);
  for (std::size_t l = 0; l < n; ++l) mu[l] = pb.mu(l, sigma[l], s[l]);
  return mu;
}

}  // namespace refless
