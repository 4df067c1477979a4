#pragma once

#include <cmath>
#include <random>

#include "refless/spectral_data.hpp"

namespace refless::testing {

inline const SpectralData kS1{{1.0}, {std::sqrt(2.0)}};
inline const SpectralData kS2{{1.0}, {2.0}};

// Decreasing kappa below top * 0.8 with soliton centers
// (1/(2 kappa)) ln(m^2 / (2 kappa)) in [-spread, spread].
inline SpectralData make_instance(std::mt19937& rng, std::size_t n, double spread = 1.0,
                                 double top = 1.6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SpectralData d;
  double k = top;
  for (std::size_t j = 0; j < n; ++j) {
    k *= 0.55 + 0.25 * u(rng);
    d.kappa.push_back(k);
    d.m.push_back(std::sqrt(2 * k) * std::exp(k * spread * (2.0 * u(rng) - 1.0)));
  }
  return validate(d);
}

}  // namespace refless::testing
