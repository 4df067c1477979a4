#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "refless/error.hpp"

namespace refless {

/// Eigenvalue parameters kappa (bound states at -kappa^2) and right norming
/// constants m of a reflectionless potential. An empty record is the zero
/// potential.
struct SpectralData {
  std::vector<double> kappa;
  std::vector<double> m;

  std::size_t size() const noexcept { return kappa.size(); }
  bool empty() const noexcept { return kappa.empty(); }

  /// alpha_j = kappa_j / m_j
  std::vector<double> alpha() const {
    std::vector<double> a(kappa.size());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = kappa[j] / m[j];
    return a;
  }

  bool operator==(const SpectralData&) const = default;
};

/// Full-line eigenvalue parameters together with the signed Dirichlet
/// parameters: mu_j > 0 when -mu_j^2 belongs to the right half-line operator,
/// mu_j < 0 when it belongs to the left one.
struct ThreeSpectra {
  std::vector<double> kappa;
  std::vector<double> mu;

  std::size_t size() const noexcept { return kappa.size(); }
  bool operator==(const ThreeSpectra&) const = default;
};

/// Truncation rule for long sequences standing in for infinite ones.
struct TailPolicy {
  double tolerance = 1e-8;
  std::size_t max_terms = 64;
};

enum class SequenceKind { Geometric, Power };
enum class NormingRule { Unit, EqualAlpha };

struct SequenceParams {
  double scale = 1.0;     // c
  double ratio = 0.5;     // r, geometric only
  double exponent = 2.0;  // p, power only
  NormingRule rule = NormingRule::Unit;
  double alpha = 1.0;     // common alpha for NormingRule::EqualAlpha
  TailPolicy policy{};
};

inline constexpr double kDuplicateKappaTolerance = 1e-12;
inline constexpr double kGenericityTolerance = 1e-10;

namespace detail {

inline bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

inline void check_kappa(std::span<const double> kappa) {
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    if (!positive_finite(kappa[j]))
      throw Error(ErrorKind::NonPositiveEntry, "kappa must be positive and finite", j + 1);
    if (j > 0 && kappa[j] >= kappa[j - 1] * (1.0 - kDuplicateKappaTolerance))
      throw Error(ErrorKind::NonDecreasingKappa, "kappa must be strictly decreasing", j + 1);
  }
}

}  // namespace detail

/// Returns the data unchanged if kappa is positive and strictly decreasing
/// and every m is positive and finite; throws naming the first offending
/// 1-based index otherwise.
inline const SpectralData& validate(const SpectralData& data) {
  if (data.kappa.size() != data.m.size())
    throw Error(ErrorKind::LengthMismatch,
                "kappa has " + std::to_string(data.kappa.size()) + " entries, m has " +
                    std::to_string(data.m.size()),
                std::min(data.kappa.size(), data.m.size()) + 1);
  for (std::size_t j = 0; j < data.size(); ++j) {
    if (!detail::positive_finite(data.kappa[j]))
      throw Error(ErrorKind::NonPositiveEntry, "kappa must be positive and finite", j + 1);
    if (!detail::positive_finite(data.m[j]))
      throw Error(ErrorKind::NonPositiveEntry, "m must be positive and finite", j + 1);
    if (j > 0 && data.kappa[j] >= data.kappa[j - 1] * (1.0 - kDuplicateKappaTolerance))
      throw Error(ErrorKind::NonDecreasingKappa, "kappa must be strictly decreasing", j + 1);
  }
  return data;
}

/// Checks strict interlacing kappa_1 > |mu_1| > kappa_2 > |mu_2| > ... and
/// genericity (no |mu| coinciding with a kappa).
inline const ThreeSpectra& validate_three(const ThreeSpectra& data) {
  if (data.kappa.size() != data.mu.size())
    throw Error(ErrorKind::LengthMismatch,
                "kappa has " + std::to_string(data.kappa.size()) + " entries, mu has " +
                    std::to_string(data.mu.size()),
                std::min(data.kappa.size(), data.mu.size()) + 1);
  detail::check_kappa(data.kappa);
  for (std::size_t j = 0; j < data.mu.size(); ++j) {
    const double a = std::abs(data.mu[j]);
    if (!std::isfinite(a)) throw Error(ErrorKind::InterlacingViolated, "mu must be finite", j + 1);
    for (double k : data.kappa)
      if (std::abs(a - k) < kGenericityTolerance * k)
        throw Error(ErrorKind::SpecialPotential, "|mu| coincides with an eigenvalue parameter",
                    j + 1);
  }
  for (std::size_t j = 0; j < data.mu.size(); ++j) {
    const double a = std::abs(data.mu[j]);
    const double upper = data.kappa[j];
    const double lower = j + 1 < data.kappa.size() ? data.kappa[j + 1] : 0.0;
    if (!(a < upper && a > lower))
      throw Error(ErrorKind::InterlacingViolated,
                  "|mu_j| must lie strictly between kappa_{j+1} and kappa_j", j + 1);
  }
  return data;
}

/// Spectral data of the left shift q(x + tau).
inline SpectralData shift(const SpectralData& data, double tau) {
  SpectralData out = data;
  for (std::size_t j = 0; j < out.size(); ++j) out.m[j] = data.m[j] * std::exp(-data.kappa[j] * tau);
  return out;
}

/// 4 * sum_{j > n} kappa_j: the heuristic L1 budget for truncating after n terms.
inline double tail_bound(std::span<const double> kappa, std::size_t n) {
  if (n > kappa.size())
    throw Error(ErrorKind::IndexOutOfRange,
                "truncation index exceeds sequence length " + std::to_string(kappa.size()), n);
  double tail = 0.0;
  for (std::size_t j = kappa.size(); j > n; --j) tail += kappa[j - 1];
  return 4.0 * tail;
}

/// Builds a long finite instance of a preset sequence, truncated once the
/// remaining (analytic) tail 4*sum kappa_j drops to the policy tolerance.
inline SpectralData generate_sequence(SequenceKind kind, const SequenceParams& params) {
  const auto& pol = params.policy;
  if (!detail::positive_finite(params.scale) || !detail::positive_finite(pol.tolerance) ||
      pol.max_terms == 0)
    throw Error(ErrorKind::InvalidParams, "scale, tolerance and max_terms must be positive");
  if (params.rule == NormingRule::EqualAlpha && !detail::positive_finite(params.alpha))
    throw Error(ErrorKind::InvalidParams, "alpha must be positive");

  SpectralData out;
  if (kind == SequenceKind::Geometric) {
    const double r = params.ratio;
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::InvalidParams, "ratio must lie in (0, 1)");
    for (std::size_t j = 1; j <= pol.max_terms; ++j) {
      const double k = params.scale * std::pow(r, static_cast<double>(j));
      if (!detail::positive_finite(k)) break;
      out.kappa.push_back(k);
      const double tail = 4.0 * k * r / (1.0 - r);
      if (tail <= pol.tolerance) break;
    }
  } else {
    const double p = params.exponent;
    if (!(std::isfinite(p) && p > 1.0)) throw Error(ErrorKind::InvalidParams, "exponent must exceed 1");
    for (std::size_t j = 1; j <= pol.max_terms; ++j) {
      const double jd = static_cast<double>(j);
      out.kappa.push_back(params.scale * std::pow(jd, -p));
      // sum_{i>j} i^{-p} <= j^{1-p} / (p - 1)
      const double tail = 4.0 * params.scale * std::pow(jd, 1.0 - p) / (p - 1.0);
      if (tail <= pol.tolerance) break;
    }
  }
  out.m.resize(out.kappa.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out.m[j] = params.rule == NormingRule::Unit ? 1.0 : out.kappa[j] / params.alpha;
  validate(out);
  return out;
}

}  // namespace refless
