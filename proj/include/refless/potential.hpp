#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "refless/blaschke.hpp"
#include "refless/error.hpp"
#include "refless/gram.hpp"
#include "refless/linalg.hpp"
#include "refless/spectral_data.hpp"

namespace refless {

struct PotentialEvaluation {
  double x = 0.0;
  double Q = 0.0;
  double q = 0.0;
  std::vector<double> contributions;  // -4 kappa_j d_j w_j^2
};

struct JostValue {
  double x = 0.0;
  cplx lambda;
  cplx value;
  cplx derivative;
};

enum class Side { Right, Left };

namespace detail {

// d_j / s_j^2 = 1 / (1 + kappa_j / (2 d_j)), evaluated from log d_j.
inline double weight_fraction(double kappa, double log_d) {
  return 1.0 / (1.0 + std::exp(std::log(0.5 * kappa) - log_d));
}

// Q = kappa^T w and q = -4 sum kappa_j d_j w_j^2 for an assembled system,
// with d_j w_j^2 formed as (d_j / s_j^2) (s_j w_j)^2 so both factors stay O(1).
inline PotentialEvaluation evaluate_system(const GramSystem& sys, std::span<const double> kappa) {
  PotentialEvaluation ev;
  ev.x = sys.x;
  if (kappa.empty()) return ev;
  const std::vector<double> w = solve<double>(sys, kappa);
  ev.contributions.assign(kappa.size(), 0.0);
  const auto act = sys.active();
  const auto s = sys.scale();
  for (std::size_t a = 0; a < act.size(); ++a) {
    const std::size_t j = act[a];
    const double y = s[a] * w[j];
    ev.contributions[j] = -4.0 * kappa[j] * weight_fraction(kappa[j], sys.log_weight()[j]) * y * y;
  }
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    ev.Q += kappa[j] * w[j];
    ev.q += ev.contributions[j];
  }
  // Toward -inf, Q approaches kappa^T Gamma^{-1} kappa = 2 sum kappa and the
  // direct sum loses its low digits. There Q = 2 sum kappa - sum_j d_j w_j v_j with
  // v = Gamma^{-1} kappa, v_j = 2 prod_{l != j} (kappa_j + kappa_l) / (kappa_j - kappa_l).
  if (act.size() == kappa.size()) {
    double ksum = 0.0, delta = 0.0, spread = 0.0;
    for (double k : kappa) ksum += k;
    for (std::size_t a = 0; a < act.size(); ++a) {
      const std::size_t j = act[a];
      double v = 2.0;
      for (std::size_t l = 0; l < kappa.size(); ++l)
        if (l != j) v *= (kappa[j] + kappa[l]) / (kappa[j] - kappa[l]);
      const double term = weight_fraction(kappa[j], sys.log_weight()[j]) * (s[a] * w[j]) * (s[a] * v);
      delta += term;
      spread += std::abs(term);
    }
    // blend smoothly from the direct sum (spread >= ksum / 2) to the plateau form
    // (spread <= ksum / 10) so the two rounding patterns never meet in a jump
    const double r = std::clamp((0.5 - spread / ksum) / 0.4, 0.0, 1.0);
    const double theta = r * r * (3.0 - 2.0 * r);
    if (theta == 1.0) ev.Q = 2.0 * ksum - delta;
    else if (theta > 0.0) ev.Q = (1.0 - theta) * ev.Q + theta * (2.0 * ksum - delta);
  }
  return ev;
}

}  // namespace detail

inline PotentialEvaluation eval_q(const SpectralData& data, double x) {
  if (data.empty()) return PotentialEvaluation{x, 0.0, 0.0, {}};
  return detail::evaluate_system(assemble(data, x), data.kappa);
}

inline double eval_Q(const SpectralData& data, double x) { return eval_q(data, x).Q; }

namespace detail {

// logdet_shift(x + offset) - logdet_shift(x) + 2 offset sum kappa, as
// log det(I + Mt^{-1} E) with Mt the equilibrated M(x) and E = diag(d_j expm1(2 kappa_j offset) / s_j^2).
// The determinant is close to 1, so this keeps its absolute accuracy where
// logdet_shift itself is large. Dropped coordinates contribute below e^-700.
inline double logdet_increment(const GramSystem& sys, std::span<const double> kappa, double offset) {
  const auto act = sys.active();
  const std::size_t na = act.size();
  Matrix<double> b(na, na);
  std::vector<double> col(na);
  for (std::size_t c = 0; c < na; ++c) {
    const std::size_t j = act[c];
    std::fill(col.begin(), col.end(), 0.0);
    col[c] = weight_fraction(kappa[j], sys.log_weight()[j]) * std::expm1(2.0 * kappa[j] * offset);
    cholesky_solve_in_place<double>(sys.factor(), col);
    for (std::size_t r = 0; r < na; ++r) b(r, c) = col[r] + (r == c ? 1.0 : 0.0);
  }
  LuFactor<double> lu;
  if (lu_factor(b, 0.0, lu) != 0) throw Error(ErrorKind::FactorizationFailure, "singular determinant ratio");
  double acc = 0.0;
  for (std::size_t a = 0; a < na; ++a) acc += std::log(std::abs(lu.lu(a, a)));
  return acc;
}

}  // namespace detail

/// -2 d^2/dx^2 log det(I + M_raw(x)) by the 5-point central stencil. The stencil
/// weights sum to zero, so only the increments logdet_shift(x + ih) - logdet_shift(x)
/// enter; they are formed as determinant ratios against the factorization at x
/// (the part linear in ih cancels in the stencil).
inline double eval_q_kaymoses(const SpectralData& data, double x, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step h must be positive");
  if (data.empty()) return 0.0;
  const GramSystem sys = assemble(data, x);
  auto g = [&](double offset) { return detail::logdet_increment(sys, data.kappa, offset); };
  const double second = (-g(2 * h) + 16 * g(h) + 16 * g(-h) - g(-2 * h)) / (12 * h * h);
  return -2.0 * second;
}

namespace detail {

inline void check_pole(std::span<const double> kappa, cplx pole_sign_lambda) {
  // pole_sign_lambda is lambda for the right solution, -lambda for the left
  for (std::size_t j = 0; j < kappa.size(); ++j)
    if (std::abs(pole_sign_lambda + cplx(0.0, kappa[j])) <= 1e-12)
      throw Error(ErrorKind::PoleAtLambda, "lambda at a pole of the Jost solution", j + 1);
}

inline cplx exp_times(cplx exponent, cplx factor) {
  if (factor == cplx(0.0)) return 0.0;
  return std::exp(exponent + std::log(factor));
}

}  // namespace detail

/// e_+(x, lambda) = exp(i lambda x) F(x, lambda) with
/// F = 1 - sum_j kappa_j w_j / (kappa_j - i lambda) = det(D - P Gamma R) / det(D + Gamma),
/// P = diag(kappa + i lambda), R = diag(1 / (kappa - i lambda)). The determinant ratio is
/// what gets evaluated: it stays accurate where F itself is exponentially small.
inline JostValue eval_jost_right(const SpectralData& data, double x, cplx lambda) {
  detail::check_pole(data.kappa, lambda);
  if (lambda == cplx(0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be nonzero");
  if (lambda.imag() < 0.0) throw Error(ErrorKind::InvalidArgument, "right Jost solution needs Im lambda >= 0");

  const cplx il = cplx(0.0, 1.0) * lambda;
  JostValue out{x, lambda, std::exp(il * x), il * std::exp(il * x)};
  if (data.empty()) return out;

  const GramSystem sys = assemble(data, x);
  const auto act = sys.active();
  const auto s = sys.scale();
  const std::size_t na = act.size();
  const auto& kap = data.kappa;

  Matrix<cplx> b(na, na);
  for (std::size_t a = 0; a < na; ++a) {
    const double ka = kap[act[a]];
    for (std::size_t c = 0; c < na; ++c) {
      const double kc = kap[act[c]];
      b(a, c) = -(ka + il) * (ka * kc / (ka + kc)) / (kc - il) / (s[a] * s[c]);
    }
    b(a, a) += detail::weight_fraction(ka, sys.log_weight()[act[a]]);
  }
  const auto rows = equilibrate_rows(b);
  LuFactor<cplx> lu;
  cplx f = 0.0;
  if (lu_factor(b, 0.0, lu) == 0) {
    f = static_cast<double>(lu.parity);
    const auto& l = sys.factor();
    for (std::size_t a = 0; a < na; ++a) f *= lu.lu(a, a) / (rows[a] * l(a, a) * l(a, a));
  }

  // F' = u^T M^{-1} (2 K D w), u_j = kappa_j / (kappa_j - i lambda)
  const std::vector<double> w = solve(sys, kap);
  std::vector<cplx> u(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) u[j] = kap[j] / (kap[j] - il);
  const std::vector<cplx> v = solve<cplx>(sys, u);
  cplx fp = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    const std::size_t j = act[a];
    fp += 2.0 * kap[j] * detail::weight_fraction(kap[j], sys.log_weight()[j]) * (s[a] * w[j]) * (s[a] * v[j]);
  }

  out.value = detail::exp_times(il * x, f);
  out.derivative = il * out.value + detail::exp_times(il * x, fp);
  return out;
}

/// e_-(x, lambda; q) = e_+(-x, -lambda; q(-.)), the reflected potential having
/// the left norming constants as its right ones.
inline JostValue eval_jost_left(const SpectralData& data, double x, cplx lambda) {
  detail::check_pole(data.kappa, -lambda);
  if (lambda == cplx(0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be nonzero");
  if (lambda.imag() > 0.0) throw Error(ErrorKind::InvalidArgument, "left Jost solution needs Im lambda <= 0");
  const JostValue r = eval_jost_right(reflect(data), -x, -lambda);
  return JostValue{x, lambda, r.value, -r.derivative};
}

/// Half-line Jost functions at the origin from the three spectra:
/// right: prod (lambda - i mu_n) / (lambda + i kappa_n), left: prod (lambda - i mu_n) / (lambda - i kappa_n).
inline cplx jost_at_origin(const ThreeSpectra& three, cplx lambda, Side side) {
  validate_three(three);
  const double sgn = side == Side::Right ? 1.0 : -1.0;
  cplx acc = 1.0;
  for (std::size_t n = 0; n < three.size(); ++n) {
    const cplx den = lambda + sgn * cplx(0.0, three.kappa[n]);
    if (std::abs(den) <= 1e-12) throw Error(ErrorKind::PoleAtLambda, "lambda at a pole of the product", n + 1);
    acc *= (lambda - cplx(0.0, three.mu[n])) / den;
  }
  return acc;
}

/// q(x) = -4 sum_j kappa_j m_j^2 |e_+(x, i kappa_j)|^2
inline double sum_rule_q(const SpectralData& data, double x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const cplx e = eval_jost_right(data, x, cplx(0.0, data.kappa[j])).value;
    acc += data.kappa[j] * data.m[j] * data.m[j] * std::norm(e);
  }
  return -4.0 * acc;
}

/// Composite 20-point Gauss-Legendre on [-X, X] plus exponential tails
/// |f(+-X)| / rate, for integrands decaying like exp(-rate |x|).
template <class F>
double integrate_line(F&& f, double X, double rate, double panel_width) {
  using boost::math::quadrature::gauss;
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * X / panel_width));
  const double h = 2.0 * X / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = -X + static_cast<double>(p) * h;
    acc += gauss<double, 20>::integrate(f, a, a + h);
  }
  return acc + (std::abs(f(X)) + std::abs(f(-X))) / rate;
}

/// Half-width of the quadrature window: max(10, 30/kappa_N), widened so that
/// every soliton center (1/(2 kappa_j)) ln(m_j^2 / (2 kappa_j)) sits 20/kappa_N inside.
inline double quadrature_half_width(const SpectralData& data) {
  if (data.empty()) return 10.0;
  const double kn = data.kappa.back();
  double X = std::max(10.0, 30.0 / kn);
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double k = data.kappa[j];
    const double center = std::log(data.m[j] * data.m[j] / (2.0 * k)) / (2.0 * k);
    X = std::max(X, std::abs(center) + 20.0 / kn);
  }
  return X;
}

/// integral of |q| over the line; equals 4 sum kappa_j for reflectionless q.
inline double trace_integral(const SpectralData& data) {
  if (data.empty()) return 0.0;
  const double X = quadrature_half_width(data);
  return integrate_line([&](double x) { return std::abs(eval_q(data, x).q); }, X, 2.0 * data.kappa.back(),
                        0.5 / data.kappa.front());
}

/// integral of |e_+(x, i kappa_n)|^2, n 1-based; equals m_n^{-2}.
inline double jost_norm_squared(const SpectralData& data, std::size_t n) {
  if (n < 1 || n > data.size()) throw Error(ErrorKind::IndexOutOfRange, "eigenvalue index out of range", n);
  const double k = data.kappa[n - 1];
  const double X = quadrature_half_width(data);
  return integrate_line([&](double x) { return std::norm(eval_jost_right(data, x, cplx(0.0, k)).value); }, X,
                        2.0 * k, 0.5 / data.kappa.front());
}

}  // namespace refless
