#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "refless/error.hpp"
#include "refless/gram.hpp"
#include "refless/potential.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

/// m_j(t) = m_j exp(4 kappa_j^3 t): the time factor exp(-8 t K^3) absorbed into A^2.
inline SpectralData evolve_spectral(const SpectralData& data, double t) {
  SpectralData out = data;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double rate = 4.0 * std::pow(data.kappa[j], 3) * t;
    if (std::abs(rate) > kLogOverflow) throw Error(ErrorKind::Overflow, "norming constant leaves double range", j + 1);
    out.m[j] = data.m[j] * std::exp(rate);
  }
  return out;
}

/// u(x,t) = -4 sum kappa_j d_j(x,t) w_j^2, w = (A^2 exp(2xK - 8tK^3) + Gamma)^{-1} kappa.
inline double eval_u(const SpectralData& data, double x, double t) {
  if (data.empty()) return 0.0;
  return detail::evaluate_system(assemble(data, x, t), data.kappa).q;
}

/// phi(x,t) = kappa^T (A^2 exp(xK - tK^3) + Gamma)^{-1} kappa on the real slice.
inline double eval_phi(const SpectralData& data, double x, double t) {
  if (data.empty()) return 0.0;
  return detail::evaluate_system(assemble(data, x / 2, t / 8), data.kappa).Q;
}

/// Holomorphic continuation of phi; requires |Im z kappa_j - Im zeta kappa_j^3| < pi/2 for all j.
inline cplx eval_phi(const SpectralData& data, cplx z, cplx zeta) {
  if (data.empty()) return 0.0;
  const std::vector<cplx> rhs(data.kappa.begin(), data.kappa.end());
  const auto w = solve_complex(data, z / 2.0, zeta / 8.0, rhs);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) acc += data.kappa[j] * w[j];
  return acc;
}

namespace detail {

// |f_t + a f f_x + b f_x^2 + f_xxx| with 5-point x-stencils and a 2-point t-stencil
template <class F>
double pde_residual(F&& f, double x, double t, double h, double a, double b) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step h must be positive");
  const double f0 = f(x, t);
  const double fp1 = f(x + h, t), fm1 = f(x - h, t), fp2 = f(x + 2 * h, t), fm2 = f(x - 2 * h, t);
  const double ft = (f(x, t + h) - f(x, t - h)) / (2 * h);
  const double fx = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
  const double fxxx = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
  return std::abs(ft + a * f0 * fx + b * fx * fx + fxxx);
}

}  // namespace detail

/// |u_t - 6 u u_x + u_xxx| by central differences
inline double kdv_residual(const SpectralData& data, double x, double t, double h) {
  if (data.empty()) return 0.0;
  return detail::pde_residual([&](double xx, double tt) { return eval_u(data, xx, tt); }, x, t, h, -6.0, 0.0);
}

/// |v_t - 3 v_x^2 + v_xxx| for v = phi
inline double phi_residual(const SpectralData& data, double x, double t, double h) {
  if (data.empty()) return 0.0;
  return detail::pde_residual([&](double xx, double tt) { return eval_phi(data, xx, tt); }, x, t, h, 0.0, -3.0);
}

/// argmin of u(., t) on [a, b] by Brent's method (golden section with parabolic steps).
inline double track_minimum(const SpectralData& data, double t, double a, double b) {
  const auto r = boost::math::tools::brent_find_minima([&](double x) { return eval_u(data, x, t); }, a, b,
                                                       std::numeric_limits<double>::digits / 2);
  return r.first;
}

}  // namespace refless
