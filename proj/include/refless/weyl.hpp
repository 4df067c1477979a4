#pragma once

#include <complex>

#include "refless/error.hpp"
#include "refless/herglotz.hpp"
#include "refless/potential.hpp"
#include "refless/three_spectra.hpp"

namespace refless {

enum class MRoute { Jost, Herglotz };

/// n_q(z) = z - d0 / z + sum D_j / (mu_j - z) with D_j the masses of R at mu_j^2;
/// -m_+(-z^2) = n_q(z) and m_-(-z^2) = n_q(-z).
inline cplx n_function(const ThreeSpectra& three, cplx z) {
  const HerglotzMeasure nu = R_measure(three);
  cplx acc = z;
  for (std::size_t j = 0; j < three.size(); ++j) {
    const cplx gap = three.mu[j] - z;
    if (std::abs(gap) <= 1e-15 * std::abs(three.mu[j])) throw Error(ErrorKind::PoleHit, "z at a pole mu_j", j + 1);
    acc += nu.d[j] / gap;
  }
  return acc;
}

/// Weyl-Titchmarsh function m_+(-z^2) or m_-(-z^2), Re z >= 0.
/// Jost route: logarithmic derivative at 0 of e_+(., iz) (resp. of e_-(., -iz), with a
/// minus sign) for the potential whose norming constants come from the three spectra.
/// Herglotz route: through n_q built from the residues of R.
inline cplx m_function(const ThreeSpectra& three, cplx z, Side side, MRoute route = MRoute::Jost) {
  validate_three(three);
  if (z.real() < 0.0) throw Error(ErrorKind::InvalidArgument, "m-functions are evaluated at Re z >= 0");
  if (route == MRoute::Herglotz) return side == Side::Right ? -n_function(three, z) : n_function(three, -z);

  const SpectralData data = norming_from_three_spectra(three);
  const cplx i(0.0, 1.0);
  if (side == Side::Right) {
    const JostValue e = eval_jost_right(data, 0.0, i * z);
    if (e.value == cplx(0.0)) throw Error(ErrorKind::PoleHit, "z at a right Dirichlet eigenvalue");
    return e.derivative / e.value;
  }
  const JostValue e = eval_jost_left(data, 0.0, -i * z);
  if (e.value == cplx(0.0)) throw Error(ErrorKind::PoleHit, "z at a left Dirichlet eigenvalue");
  return -e.derivative / e.value;
}

}  // namespace refless
