#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "biheun/frobenius.hpp"
#include "biheun/hypergeom.hpp"

namespace biheun {

namespace detail {

inline const double sqrt_pi = std::sqrt(std::numbers::pi);

/// Coefficients of H_nu(x) = even(nu) 1F1(-nu/2; 1/2; x^2) - odd(nu) x 1F1(1/2 - nu/2; 3/2; x^2).
inline complex hermite_even_weight(complex nu) {
  return std::pow(complex{2.0}, nu) * sqrt_pi * recip_gamma(0.5 - nu / 2.0);
}
inline complex hermite_odd_weight(complex nu) {
  return std::pow(complex{2.0}, nu + 1.0) * sqrt_pi * recip_gamma(-nu / 2.0);
}

// N with p0 = -N, or -1 when p0 is not a non-positive integer.
inline int termination_order(complex p0) {
  if (!is_nonpositive_integer(p0, 1e-12)) return -1;
  return static_cast<int>(-std::round(p0.real()));
}

}  // namespace detail

/// Hermite function H_nu(x) of arbitrary complex order through two Kummer functions.
inline complex hermite_eval(complex nu, complex x, const ToleranceConfig& cfg = {}) {
  const complex x2 = x * x;
  complex value{};
  const complex even = detail::hermite_even_weight(nu);
  if (even != complex{}) value += even * pfq_eval(make_term({-nu / 2.0}, {0.5}), x2, cfg);
  const complex odd = detail::hermite_odd_weight(nu);
  if (odd != complex{}) value -= odd * x * pfq_eval(make_term({0.5 - nu / 2.0}, {1.5}), x2, cfg);
  return value;
}

/// d_0 .. d_{n_terms-1} of the Hermite-function expansion, d_0 = 1.
inline CoefficientSeries hermite_coefficients(const BiconfluentParams& params, int n_terms) {
  if (n_terms < 1) throw Error(ErrorKind::invalid_argument, "n_terms must be positive");
  const complex beta = params.beta();
  CoefficientSeries out{std::vector<complex>(n_terms), SeriesKind::hermite_d, Normalization::leading_unit};
  out.values[0] = 1.0;
  for (int n = 1; n < n_terms; ++n) {
    const double nd = n;
    if (std::abs(nd + beta) < 1e-12)
      throw Error(ErrorKind::resonant_order, "n + beta vanishes at n = " + std::to_string(n));
    const complex r = 2.0 * nd * (nd + beta);
    const complex q = (nd - 1.0 + params.p0) * params.p1 - params.q0;
    const complex p = nd - 2.0 + params.p0;
    complex acc = q * out.values[n - 1];
    if (n >= 2) acc += p * out.values[n - 2];
    out.values[n] = -acc / r;
  }
  return out;
}

/// Banded matrix whose eigenvalues are the admissible q0 for p0 = -N.
inline TridiagonalMinor hermite_minor(complex p1, complex q1, int N) {
  if (N < 0) throw Error(ErrorKind::invalid_argument, "N must be non-negative");
  const int n = N + 1;
  TridiagonalMinor m{std::vector<complex>(n), std::vector<complex>(n), std::vector<complex>(n)};
  for (int i = 0; i < n; ++i) {
    m.diag[i] = static_cast<double>(i - N) * p1;
    m.upper[i] = static_cast<double>(i + 1) * (2.0 * (i + 1 - N) + q1);
    if (i > 0) m.lower[i] = static_cast<double>(i - 1 - N);
  }
  return m;
}

inline SpectrumResult hermite_spectrum(complex p1, complex q1, int N, const ToleranceConfig& cfg = {}) {
  return detail::spectrum_from_minor(hermite_minor(p1, q1, N), EigenConvention::direct,
                                     SeriesKind::hermite_d, cfg);
}

/// Terminated Hermite-function expansion sum_{n<=N} d_n H_{beta+n}(s z - p1/2), p0 = -N.
class HermiteExpansion {
 public:
  HermiteExpansion(const BiconfluentParams& params, CoefficientSeries d)
      : params_(params), N_(detail::termination_order(params.p0)), d_(std::move(d)) {
    if (N_ < 0) throw Error(ErrorKind::invalid_argument, "p0 must be a non-positive integer");
    if (static_cast<int>(d_.size()) != N_ + 1)
      throw Error(ErrorKind::invalid_argument, "expected N + 1 Hermite coefficients");
    d_.kind = SeriesKind::hermite_d;
  }

  /// Coefficients from the recurrence, truncated at d_N. Off-spectrum q0
  /// gives a truncation that does not solve the equation.
  static HermiteExpansion from_params(const BiconfluentParams& params) {
    const int N = detail::termination_order(params.p0);
    if (N < 0) throw Error(ErrorKind::invalid_argument, "p0 must be a non-positive integer");
    return HermiteExpansion(params, hermite_coefficients(params, N + 1));
  }

  const BiconfluentParams& params() const noexcept { return params_; }
  int order() const noexcept { return N_; }
  const CoefficientSeries& d() const noexcept { return d_; }
  complex order_base() const { return params_.beta(); }

 private:
  BiconfluentParams params_;
  int N_;
  CoefficientSeries d_;
};

inline complex evaluate_hermite_series(const HermiteExpansion& exp, complex z, const ToleranceConfig& cfg = {}) {
  const complex beta = exp.order_base();
  const complex x = exp.params().xi(z);
  complex sum{};
  for (int n = 0; n <= exp.order(); ++n) {
    const complex dn = exp.d()[n];
    if (dn == complex{}) continue;
    sum += dn * hermite_eval(beta + static_cast<double>(n), x, cfg);
  }
  return sum;
}

/// Taylor coefficients of the expansion in plain powers of z about z = 0.
/// Entry k multiplies z^k (the s^k factor is folded in).
inline CoefficientSeries power_reexpansion(const HermiteExpansion& exp, int k_max, const ToleranceConfig& cfg = {}) {
  if (k_max < 1) throw Error(ErrorKind::invalid_argument, "k_max must be at least 1");
  const complex beta = exp.order_base();
  const complex x0 = -exp.params().p1 / 2.0;
  const complex s = exp.params().s;
  CoefficientSeries out{std::vector<complex>(k_max + 1), SeriesKind::taylor_z, Normalization::seeded};
  for (int j = 0; j <= exp.order(); ++j) {
    const complex dj = exp.d()[j];
    if (dj == complex{}) continue;
    const complex nu = beta + static_cast<double>(j);
    complex scale{1.0};  // (-nu)_k (-2 s)^k / k!
    for (int k = 0; k <= k_max; ++k) {
      if (k > 0) scale *= (-nu + static_cast<double>(k - 1)) * (-2.0 * s) / static_cast<double>(k);
      if (scale == complex{}) break;
      out.values[k] += dj * scale * hermite_eval(nu - static_cast<double>(k), x0, cfg);
    }
  }
  return out;
}

}  // namespace biheun
