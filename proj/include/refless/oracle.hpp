#pragma once

// Direct-scattering oracle: everything here comes from integrating
// -y'' + q y = lambda^2 y numerically. Nothing uses the closed forms except to
// sample q (or u) in the first place.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>

#include "refless/error.hpp"
#include "refless/kdv.hpp"
#include "refless/potential.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

/// q on [-L, L] from samples on a uniform grid, quintic B-spline in between and
/// zero outside. decay_rate is the smallest kappa (tails go like exp(-2 rate |x|)).
class SampledPotential {
 public:
  SampledPotential() = default;  // q = 0 on [-12, 12]

  SampledPotential(std::vector<double> samples, double L, double decay_rate)
      : L_(L), rate_(decay_rate), samples_(std::move(samples)) {
    if (!(L > 0.0) || samples_.size() < 8)
      throw Error(ErrorKind::InvalidArgument, "need L > 0 and at least 8 samples");
    h_ = 2.0 * L / static_cast<double>(samples_.size() - 1);
    for (double v : samples_) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite potential sample");
      max_abs_ = std::max(max_abs_, std::abs(v));
    }
    spline_.emplace(samples_, -L, h_, std::pair{0.0, 0.0}, std::pair{0.0, 0.0});
    // integration starts where |q| is negligible for good
    const double cut = 1e-15 * max_abs_;
    std::size_t hi = samples_.size() - 1, lo = 0;
    while (hi > 0 && std::abs(samples_[hi]) <= cut) --hi;
    while (lo + 1 < samples_.size() && std::abs(samples_[lo]) <= cut) ++lo;
    right_start_ = std::min(L, -L + static_cast<double>(hi + 1) * h_);
    left_start_ = std::max(-L, -L + (static_cast<double>(lo) - 1.0) * h_);
  }

  template <class F>
  static SampledPotential from_function(F&& q, double L, double decay_rate, double h) {
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * L / h)) + 1;
    std::vector<double> v(n);
    const double step = 2.0 * L / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = q(-L + static_cast<double>(i) * step);
    return SampledPotential(std::move(v), L, decay_rate);
  }

  double operator()(double x) const {
    if (!spline_ || std::abs(x) >= L_) return 0.0;
    return (*spline_)(x);
  }

  double L() const noexcept { return L_; }
  double decay_rate() const noexcept { return rate_; }
  double max_abs() const noexcept { return max_abs_; }
  double step() const noexcept { return h_; }
  bool is_zero() const noexcept { return max_abs_ == 0.0; }
  // |q| <= 1e-15 max|q| on [right_start, L] and on [-L, left_start]
  double right_start() const noexcept { return right_start_; }
  double left_start() const noexcept { return left_start_; }

 private:
  double L_ = 12.0;
  double rate_ = 1.0;
  double h_ = 0.0;
  double max_abs_ = 0.0;
  double right_start_ = 0.0;
  double left_start_ = 0.0;
  std::vector<double> samples_;
  std::optional<boost::math::interpolators::cardinal_quintic_b_spline<double>> spline_;
};

/// L = max(12, 30/kappa_N, max|x_j| + 15/kappa_N) over the soliton centers x_j.
inline double oracle_half_length(const SpectralData& data) {
  if (data.empty()) return 12.0;
  const double kn = data.kappa.back();
  double L = std::max(12.0, 30.0 / kn);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double k = data.kappa[j];
    L = std::max(L, std::abs(std::log(data.m[j] * data.m[j] / (2.0 * k)) / (2.0 * k)) + 15.0 / kn);
  }
  return L;
}

/// q sampled from eval_q at spacing 0.005 / max(1, kappa_1).
inline SampledPotential sample_potential(const SpectralData& data) {
  if (data.empty()) return {};
  const double h = 0.005 / std::max(1.0, data.kappa.front());
  return SampledPotential::from_function([&](double x) { return eval_q(data, x).q; }, oracle_half_length(data),
                                         data.kappa.back(), h);
}

/// u(., t) sampled the same way; the window follows the evolved soliton centers.
inline SampledPotential sample_potential(const SpectralData& data, double t) {
  if (data.empty()) return {};
  const double h = 0.005 / std::max(1.0, data.kappa.front());
  return SampledPotential::from_function([&](double x) { return eval_u(data, x, t); },
                                         oracle_half_length(evolve_spectral(data, t)), data.kappa.back(), h);
}

namespace detail {

using OdeState = std::array<cplx, 3>;

// Solution normalized to (1, i lambda) at the start point x0; the true Jost
// solution is this times scale = exp(i lambda x0). norm2 is the integral of
// |y|^2 over the traversed span, before scaling.
struct Shot {
  cplx y;
  cplx yp;
  double norm2 = 0.0;
  cplx scale;
  double start = 0.0;

  cplx value() const { return y * scale; }
  cplx derivative() const { return yp * scale; }
};

inline Shot shoot(const SampledPotential& pot, cplx lambda, Side side, double x_end) {
  namespace ode = boost::numeric::odeint;
  const bool right = side == Side::Right;
  const double x0 = right ? std::max(pot.right_start(), x_end) : std::min(pot.left_start(), x_end);
  const cplx il = cplx(0.0, 1.0) * lambda;
  const cplx l2 = lambda * lambda;
  OdeState y{cplx(1.0), il, cplx(0.0)};
  auto rhs = [&](const OdeState& s, OdeState& ds, double x) {
    ds[0] = s[1];
    ds[1] = (pot(x) - l2) * s[0];
    ds[2] = std::norm(s[0]);
  };
  if (x0 != x_end) {
    const double span = std::abs(x_end - x0);
    const double dt0 = (right ? -1.0 : 1.0) * std::min(0.01, span);
    try {
      ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-11, ode::runge_kutta_dopri5<OdeState>()), rhs, y, x0,
                              x_end, dt0);
    } catch (const ode::odeint_error& e) {
      throw Error(ErrorKind::ToleranceNotMet, e.what());
    }
  }
  for (const cplx& c : y)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::ToleranceNotMet, "integration left double range");
  return Shot{y[0], y[1], std::abs(y[2].real()), std::exp(il * x0), x0};
}

// f'g - fg'
inline cplx wronskian(cplx f, cplx fp, cplx g, cplx gp) { return fp * g - f * gp; }

}  // namespace detail

/// Right (Im lambda >= 0) or left (Im lambda <= 0) Jost solution at x_end, obtained
/// from (e^{i lambda x0}, i lambda e^{i lambda x0}) at the far end by adaptive
/// Dormand-Prince 5(4), rtol 1e-11, atol 1e-13.
inline JostValue integrate_jost(const SampledPotential& pot, cplx lambda, Side side, double x_end = 0.0) {
  if (lambda == cplx(0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be nonzero");
  if (side == Side::Right && lambda.imag() < 0.0)
    throw Error(ErrorKind::InvalidArgument, "right Jost solution needs Im lambda >= 0");
  if (side == Side::Left && lambda.imag() > 0.0)
    throw Error(ErrorKind::InvalidArgument, "left Jost solution needs Im lambda <= 0");
  const auto s = detail::shoot(pot, lambda, side, x_end);
  return JostValue{x_end, lambda, s.value(), s.derivative()};
}

struct ScatteringCoefficients {
  cplx a;
  cplx b;
};

/// a = W(e_+(k), e_-(-k)) / (2ik), b = -W(e_+(k), conj e_-(-k)) / (2ik), W = f'g - fg' at 0.
inline ScatteringCoefficients compute_ab(const SampledPotential& pot, double k) {
  if (!(std::abs(k) >= 0.1)) throw Error(ErrorKind::InvalidArgument, "|k| must be at least 0.1");
  if (k < 0.0) throw Error(ErrorKind::InvalidArgument, "k must be positive");
  const auto ep = integrate_jost(pot, cplx(k), Side::Right);
  const auto em = integrate_jost(pot, cplx(-k), Side::Left);
  const cplx two_ik(0.0, 2.0 * k);
  const cplx a = detail::wronskian(ep.value, ep.derivative, em.value, em.derivative) / two_ik;
  const cplx b = -detail::wronskian(ep.value, ep.derivative, std::conj(em.value), std::conj(em.derivative)) / two_ik;
  return {a, b};
}

namespace detail {

// sign-carrying W(e_+(i kappa), e_-(-i kappa)) at 0; positive scale factors dropped
inline double bound_wronskian(const SampledPotential& pot, double kappa) {
  const auto p = shoot(pot, cplx(0.0, kappa), Side::Right, 0.0);
  const auto m = shoot(pot, cplx(0.0, -kappa), Side::Left, 0.0);
  return wronskian(p.y, p.yp, m.y, m.yp).real();
}

template <class F>
double bisect_sign(F&& f, double lo, double hi, double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> scan_bound_states(const SampledPotential& pot, double kappa_max, std::size_t points) {
  std::vector<double> found;
  const double ratio = std::pow(1e-4, 1.0 / static_cast<double>(points - 1));
  double hi = kappa_max;
  double fhi = bound_wronskian(pot, hi);
  for (std::size_t i = 1; i < points; ++i) {
    const double lo = hi * ratio;
    const double flo = bound_wronskian(pot, lo);
    if (fhi == 0.0) {
      found.push_back(hi);
    } else if ((flo < 0.0) != (fhi < 0.0) && flo != 0.0) {
      found.push_back(bisect_sign([&](double k) { return bound_wronskian(pot, k); }, lo, hi, flo, 1e-12));
    }
    hi = lo;
    fhi = flo;
  }
  return found;
}

}  // namespace detail

/// Zeros of W(e_+(i kappa), e_-(-i kappa)) on (kappa_max / 1e4, kappa_max]: sign scan over
/// 400 geometric points, bisection to 1e-12, one retry on a 10x finer grid.
inline std::vector<double> find_bound_states(const SampledPotential& pot, double kappa_max, std::size_t expected) {
  if (!(kappa_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa_max must be positive");
  auto found = detail::scan_bound_states(pot, kappa_max, 400);
  if (found.size() != expected) found = detail::scan_bound_states(pot, kappa_max, 4000);
  if (found.size() != expected)
    throw Error(ErrorKind::CountMismatch,
                "found " + std::to_string(found.size()) + " bound states, expected " + std::to_string(expected),
                found.size());
  return found;
}

/// Inverse L2 norm of the Jost solution at the bound state kappa: e_+ (normalized at +inf)
/// for Side::Right, e_- (normalized at -inf) for Side::Left. Beyond the integration
/// range the solutions are pure exponentials and their tails are added in closed form.
inline double norming_constant(const SampledPotential& pot, double kappa, Side side = Side::Right) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
  const auto p = detail::shoot(pot, cplx(0.0, kappa), Side::Right, 0.0);
  const auto m = detail::shoot(pot, cplx(0.0, -kappa), Side::Left, 0.0);
  const double sp = p.scale.real(), sm = m.scale.real();
  const double right = p.norm2 * sp * sp + std::exp(-2.0 * kappa * p.start) / (2.0 * kappa);
  const double left = m.norm2 * sm * sm + std::exp(2.0 * kappa * m.start) / (2.0 * kappa);
  // e_+ = c e_- on the whole line; take c from whichever of value/derivative is larger
  const double c = std::abs(m.y) >= std::abs(m.yp) ? (p.value() / m.value()).real()
                                                     : (p.derivative() / m.derivative()).real();
  const double total = side == Side::Right ? right + c * c * left : left + right / (c * c);
  return 1.0 / std::sqrt(total);
}

/// Signed Dirichlet parameters: on each interval (kappa_{n+1}, kappa_n), and (1e-4 kappa_N, kappa_N)
/// last, exactly one of mu -> e_+(0, i mu) (sign +) and mu -> e_-(0, -i mu) (sign -) must change sign.
inline std::vector<double> dirichlet_spectra(const SampledPotential& pot, std::span<const double> kappa) {
  std::vector<double> mu;
  auto fr = [&](double m) { return detail::shoot(pot, cplx(0.0, m), Side::Right, 0.0).y.real(); };
  auto fl = [&](double m) { return detail::shoot(pot, cplx(0.0, -m), Side::Left, 0.0).y.real(); };
  for (std::size_t n = 0; n < kappa.size(); ++n) {
    const double hi = kappa[n] * (1.0 - 1e-10);
    const double lo = (n + 1 < kappa.size() ? kappa[n + 1] : 1e-4 * kappa[n]) * (1.0 + 1e-10);
    const double rl = fr(lo), rh = fr(hi), ll = fl(lo), lh = fl(hi);
    const bool right = (rl < 0.0) != (rh < 0.0);
    const bool left = (ll < 0.0) != (lh < 0.0);
    if (right == left)
      throw Error(ErrorKind::GenericityFailure,
                  right ? "both half-line problems have an eigenvalue in the gap" : "no half-line eigenvalue in the gap",
                  n + 1);
    const double tol = 1e-13 * kappa[n];
    mu.push_back(right ? detail::bisect_sign(fr, lo, hi, rl, tol) : -detail::bisect_sign(fl, lo, hi, ll, tol));
  }
  return mu;
}

/// 48 equally spaced wavenumbers on [0.3, 5].
inline std::vector<double> default_k_grid() {
  std::vector<double> k(48);
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = 0.3 + 4.7 * static_cast<double>(i) / 47.0;
  return k;
}

/// max |b(k) / a(k)| over the grid
inline double reflection_sweep(const SampledPotential& pot, std::span<const double> k_grid) {
  double worst = 0.0;
  for (double k : k_grid) {
    if (k < 0.1) throw Error(ErrorKind::InvalidArgument, "k grid must lie in [0.1, inf)");
    const auto ab = compute_ab(pot, k);
    worst = std::max(worst, std::abs(ab.b / ab.a));
  }
  return worst;
}

struct OracleReport {
  std::vector<double> kappa;
  std::vector<double> m;       // right norming constants
  std::vector<double> m_left;  // left norming constants
  std::vector<double> mu;      // empty when special
  bool special = false;        // no generic Dirichlet assignment (e.g. q even)
  double max_reflection = 0.0;
  double max_unitarity_defect = 0.0;  // max ||a|^2 - |b|^2 - 1|
};

/// Full direct-scattering pass over a sampled potential with a known bound-state count.
inline OracleReport run_oracle(const SampledPotential& pot, std::size_t expected,
                               std::span<const double> k_grid) {
  OracleReport r;
  if (expected > 0) r.kappa = find_bound_states(pot, 1.01 * std::sqrt(pot.max_abs()), expected);
  for (double k : r.kappa) {
    r.m.push_back(norming_constant(pot, k, Side::Right));
    r.m_left.push_back(norming_constant(pot, k, Side::Left));
  }
  try {
    r.mu = dirichlet_spectra(pot, r.kappa);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::GenericityFailure) throw;
    r.special = true;
  }
  for (double k : k_grid) {
    const auto ab = compute_ab(pot, k);
    r.max_reflection = std::max(r.max_reflection, std::abs(ab.b / ab.a));
    r.max_unitarity_defect = std::max(r.max_unitarity_defect, std::abs(std::norm(ab.a) - std::norm(ab.b) - 1.0));
  }
  return r;
}

}  // namespace refless
