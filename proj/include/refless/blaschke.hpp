#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "refless/error.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

using cplx = std::complex<double>;

/// prod_n (z - lambda_n) / (z - conj(lambda_n)). Each factor is written as
/// 1 + (conj(l) - l) / (z - conj(l)) so that long products of nearly-unit
/// factors keep their relative accuracy.
inline cplx blaschke(std::span<const cplx> lambda, cplx z) {
  cplx acc = 1.0;
  for (std::size_t n = 0; n < lambda.size(); ++n) {
    const cplx lb = std::conj(lambda[n]);
    const cplx gap = z - lb;
    if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(lb)))
      throw Error(ErrorKind::PoleHit, "z coincides with a conjugate zero", n + 1);
    acc *= 1.0 + (lb - lambda[n]) / gap;
  }
  return acc;
}

/// a(z) = prod (z - i kappa_n) / (z + i kappa_n)
inline cplx scattering_a(std::span<const double> kappa, cplx z) {
  std::vector<cplx> zeros(kappa.size());
  for (std::size_t n = 0; n < kappa.size(); ++n) zeros[n] = cplx(0.0, kappa[n]);
  return blaschke(zeros, z);
}

/// i * a'(i kappa_n) = (1 / (2 kappa_n)) prod_{j != n} (kappa_n - kappa_j) / (kappa_n + kappa_j),
/// n is 1-based.
inline double a_dot(std::span<const double> kappa, std::size_t n) {
  if (n < 1 || n > kappa.size())
    throw Error(ErrorKind::IndexOutOfRange, "eigenvalue index out of range", n);
  const double kn = kappa[n - 1];
  double acc = 0.5 / kn;
  for (std::size_t j = 0; j < kappa.size(); ++j)
    if (j != n - 1) acc *= (kn - kappa[j]) / (kn + kappa[j]);
  return acc;
}

/// Left norming constants m_-j = 1 / (m_j |i a'(i kappa_j)|), i.e. the right
/// norming constants of the reflected potential q(-x).
inline SpectralData reflect(const SpectralData& data) {
  SpectralData out = data;
  for (std::size_t j = 0; j < data.size(); ++j)
    out.m[j] = 1.0 / (data.m[j] * std::abs(a_dot(data.kappa, j + 1)));
  return out;
}

}  // namespace refless
