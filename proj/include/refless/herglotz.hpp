#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "refless/blaschke.hpp"
#include "refless/error.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

/// nu = d0 delta_0 + sum d_j delta_{xi_j}, xi strictly decreasing and positive.
struct HerglotzMeasure {
  std::vector<double> xi;
  std::vector<double> d;
  double d0 = 0.0;

  std::size_t size() const noexcept { return xi.size(); }
  bool operator==(const HerglotzMeasure&) const = default;
};

/// Alternating zeros (odd positions) and poles (even positions),
/// lambda_1 > lambda_2 > ... ; a trailing pole may sit at 0, which is where
/// a mass d0 > 0 at the origin shows up.
struct ZeroPoleSequence {
  std::vector<double> lambda;
  bool operator==(const ZeroPoleSequence&) const = default;
};

inline const HerglotzMeasure& validate(const HerglotzMeasure& nu) {
  if (nu.xi.size() != nu.d.size())
    throw Error(ErrorKind::LengthMismatch, "xi and d differ in length", std::min(nu.xi.size(), nu.d.size()) + 1);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (!(std::isfinite(nu.xi[j]) && nu.xi[j] > 0.0))
      throw Error(ErrorKind::NonPositiveEntry, "atoms must be positive", j + 1);
    if (!(std::isfinite(nu.d[j]) && nu.d[j] > 0.0))
      throw Error(ErrorKind::NonPositiveEntry, "masses must be positive", j + 1);
    if (j > 0 && !(nu.xi[j] < nu.xi[j - 1]))
      throw Error(ErrorKind::NonDecreasingKappa, "atoms must be strictly decreasing", j + 1);
  }
  if (!(std::isfinite(nu.d0) && nu.d0 >= 0.0)) throw Error(ErrorKind::NonPositiveEntry, "d0 must be non-negative");
  return nu;
}

inline const ZeroPoleSequence& validate(const ZeroPoleSequence& seq) {
  const auto& l = seq.lambda;
  if (l.size() % 2) throw Error(ErrorKind::LengthMismatch, "zeros and poles must pair up", l.size());
  for (std::size_t j = 0; j < l.size(); ++j) {
    const bool last = j + 1 == l.size();
    if (!std::isfinite(l[j]) || l[j] < 0.0 || (l[j] == 0.0 && !last))
      throw Error(ErrorKind::NonPositiveEntry, "entries must be positive (a final pole may be 0)", j + 1);
    if (j > 0 && !(l[j] < l[j - 1]))
      throw Error(ErrorKind::NonDecreasingKappa, "sequence must be strictly decreasing", j + 1);
  }
  return seq;
}

/// phi_nu(z) = 1 - d0 / z + sum d_j / (xi_j - z)
inline cplx herglotz_eval(const HerglotzMeasure& nu, cplx z) {
  cplx acc = 1.0;
  if (nu.d0 > 0.0) {
    if (std::abs(z) <= 1e-300) throw Error(ErrorKind::PoleHit, "z at the atom 0");
    acc -= nu.d0 / z;
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const cplx gap = nu.xi[j] - z;
    if (std::abs(gap) <= 1e-15 * nu.xi[j]) throw Error(ErrorKind::PoleHit, "z at an atom", j + 1);
    acc += nu.d[j] / gap;
  }
  return acc;
}

/// psi_lambda(z) = prod (z - lambda_{2n-1}) / (z - lambda_{2n})
inline cplx product_eval(const ZeroPoleSequence& seq, cplx z) {
  cplx acc = 1.0;
  for (std::size_t n = 0; n + 1 < seq.lambda.size(); n += 2) {
    const cplx gap = z - seq.lambda[n + 1];
    if (std::abs(gap) <= 1e-15 * std::max(seq.lambda[n + 1], 1e-300))
      throw Error(ErrorKind::PoleHit, "z at a pole", n + 2);
    acc *= 1.0 + (seq.lambda[n + 1] - seq.lambda[n]) / gap;
  }
  return acc;
}

namespace detail {

// phi restricted to the real line between poles, where it is increasing
inline double herglotz_real(const HerglotzMeasure& nu, double x) {
  double acc = 1.0 - (nu.d0 > 0.0 ? nu.d0 / x : 0.0);
  for (std::size_t j = 0; j < nu.size(); ++j) acc += nu.d[j] / (nu.xi[j] - x);
  return acc;
}

// Unique zero of an increasing function on (a, b) that runs from -inf to a
// non-negative value at b (b itself may be a pole, then the value is +inf).
template <class F>
double increasing_zero(F&& f, double a, double b, bool b_is_pole, std::size_t index) {
  if (!b_is_pole) {
    const double fb = f(b);
    if (fb == 0.0) return b;
    if (!(fb > 0.0)) throw Error(ErrorKind::BracketFailure, "no sign change in the bracket", index);
  }
  double lo = a, hi = b;
  for (int it = 0; it < 400 && hi - lo > 1e-13 * std::abs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Zeros eta of phi_nu: one above xi_1 (below xi_1 + sum d + d0), one in each
/// gap (xi_k, xi_{k-1}), and one in (0, xi_n) when d0 > 0. Decreasing order.
inline std::vector<double> herglotz_zeros(const HerglotzMeasure& nu) {
  validate(nu);
  if (nu.size() == 0) throw Error(ErrorKind::InvalidArgument, "measure needs at least one atom");
  auto f = [&](double x) { return detail::herglotz_real(nu, x); };
  double total = nu.d0;
  for (double v : nu.d) total += v;
  std::vector<double> eta;
  // phi(xi_1 + total) >= 0 with equality for a single atom; widen slightly
  // so rounding cannot flip the sign at the bracket end
  const double top = nu.xi[0] + total;
  eta.push_back(f(top) == 0.0 ? top : detail::increasing_zero(f, nu.xi[0], top + 1e-9 * total, false, 1));
  for (std::size_t k = 1; k < nu.size(); ++k)
    eta.push_back(detail::increasing_zero(f, nu.xi[k], nu.xi[k - 1], true, k + 1));
  if (nu.d0 > 0.0) eta.push_back(detail::increasing_zero(f, 0.0, nu.xi.back(), true, nu.size() + 1));
  return eta;
}

/// lambda = (eta_1, xi_1, eta_2, xi_2, ...), closed by (eta_{n+1}, 0) when d0 > 0.
inline ZeroPoleSequence measure_to_product(const HerglotzMeasure& nu) {
  validate(nu);
  ZeroPoleSequence seq;
  if (nu.size() == 0) {
    if (nu.d0 > 0.0) throw Error(ErrorKind::InvalidArgument, "a lone mass at 0 has no zero on (0, inf)");
    return seq;
  }
  const auto eta = herglotz_zeros(nu);
  for (std::size_t k = 0; k < nu.size(); ++k) {
    seq.lambda.push_back(eta[k]);
    seq.lambda.push_back(nu.xi[k]);
  }
  if (nu.d0 > 0.0) {
    seq.lambda.push_back(eta.back());
    seq.lambda.push_back(0.0);
  }
  return seq;
}

/// Masses from the residues of psi: d_n = (lambda_{2n-1} - lambda_{2n}) prod_{k != n}
/// (lambda_{2n} - lambda_{2k-1}) / (lambda_{2n} - lambda_{2k}); d0 = -lim z psi(z) at 0.
inline HerglotzMeasure product_to_measure(const ZeroPoleSequence& seq) {
  validate(seq);
  const auto& l = seq.lambda;
  const std::size_t pairs = l.size() / 2;
  const bool origin = pairs > 0 && l.back() == 0.0;
  HerglotzMeasure nu;
  for (std::size_t n = 0; n < pairs; ++n) {
    const double xi = l[2 * n + 1];
    if (origin && n + 1 == pairs) break;
    double mass = l[2 * n] - xi;
    for (std::size_t k = 0; k < pairs; ++k)
      if (k != n) mass *= (xi - l[2 * k]) / (xi - l[2 * k + 1]);
    nu.xi.push_back(xi);
    nu.d.push_back(mass);
  }
  if (origin) {
    double d0 = l[2 * (pairs - 1)];
    for (std::size_t k = 0; k + 1 < pairs; ++k) d0 *= l[2 * k] / l[2 * k + 1];
    nu.d0 = d0;
  }
  return nu;
}

/// R(w) = prod (w - kappa_j^2) / (w - mu_j^2)
inline cplx R_eval(const ThreeSpectra& three, cplx w) {
  validate_three(three);
  cplx acc = 1.0;
  for (std::size_t j = 0; j < three.size(); ++j) {
    const double k2 = three.kappa[j] * three.kappa[j], m2 = three.mu[j] * three.mu[j];
    const cplx gap = w - m2;
    if (std::abs(gap) <= 1e-15 * m2) throw Error(ErrorKind::PoleHit, "w at a pole mu_j^2", j + 1);
    acc *= 1.0 + (m2 - k2) / gap;
  }
  return acc;
}

/// R as a Herglotz function 1 + sum D_j / (mu_j^2 - w): atoms mu_j^2, masses from residues.
inline HerglotzMeasure R_measure(const ThreeSpectra& three) {
  validate_three(three);
  ZeroPoleSequence seq;
  for (std::size_t j = 0; j < three.size(); ++j) {
    seq.lambda.push_back(three.kappa[j] * three.kappa[j]);
    seq.lambda.push_back(three.mu[j] * three.mu[j]);
  }
  return product_to_measure(seq);
}

inline cplx R_eval_sum(const ThreeSpectra& three, cplx w) { return herglotz_eval(R_measure(three), w); }

}  // namespace refless
