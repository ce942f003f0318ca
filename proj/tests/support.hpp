#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "biheun/biheun.hpp"

namespace support {

using biheun::complex;

inline double rel(complex a, complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline complex disc(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const complex c{u(rng), u(rng)};
    if (std::abs(c) <= 1.0) return radius * c;
  }
}

/// 1/Gamma(z) by upward recurrence to Re z >= 20 and the Stirling series.
/// Deliberately unrelated to the library's Lanczos form.
inline complex recip_gamma_ref(complex z) {
  complex prod{1.0};
  complex w = z;
  while (w.real() < 20.0) {
    prod *= w;
    w += 1.0;
  }
  if (prod == complex{}) return {};
  const complex w2 = w * w;
  complex corr{};
  complex wp = w;
  const double b[] = {1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0,
                      1.0 / 156.0};
  for (double c : b) {
    corr += c / wp;
    wp *= w2;
  }
  const complex lg = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + corr;
  return prod * std::exp(-lg);
}

/// Kummer weights of H_nu = A 1F1(-nu/2; 1/2; x^2) - B x 1F1(1/2 - nu/2; 3/2; x^2), reference gamma.
inline complex even_weight_ref(complex nu) {
  return std::pow(complex{2.0}, nu) * std::sqrt(std::numbers::pi) * recip_gamma_ref(0.5 - nu / 2.0);
}
inline complex odd_weight_ref(complex nu) {
  return std::pow(complex{2.0}, nu + 1.0) * std::sqrt(std::numbers::pi) * recip_gamma_ref(-nu / 2.0);
}

/// Plain Taylor sum of 1F1 / pFq without the library's stopping logic.
inline complex pfq_ref(const std::vector<complex>& upper, const std::vector<complex>& lower, complex z, int terms = 400) {
  complex t{1.0}, sum{1.0};
  for (int k = 0; k < terms; ++k) {
    for (const auto& a : upper) t *= a + static_cast<double>(k);
    for (const auto& g : lower) t /= g + static_cast<double>(k);
    t *= z / static_cast<double>(k + 1);
    sum += t;
    if (t == complex{}) break;
  }
  return sum;
}

struct Case {
  biheun::BiconfluentParams params;
  int N;
};

/// Terminated Hermite sums for every spectrum root at orders 0..n_max.
inline std::vector<Case> hermite_cases(int n_max, complex p1, complex q1, complex s) {
  std::vector<Case> out;
  for (int N = 0; N <= n_max; ++N)
    for (const auto& q0 : biheun::hermite_spectrum(p1, q1, N).admissible_q0)
      out.push_back({biheun::BiconfluentParams(static_cast<double>(-N), p1, q0, q1, s), N});
  return out;
}

/// Polynomial solutions (q1 = 2N) for every spectrum root at orders 0..n_max.
inline std::vector<Case> frobenius_cases(int n_max, complex p0, complex p1, complex s) {
  std::vector<Case> out;
  for (int N = 0; N <= n_max; ++N)
    for (const auto& q0 : biheun::frobenius_spectrum(p0, p1, N).admissible_q0)
      out.push_back({biheun::BiconfluentParams(p0, p1, q0, 2.0 * N, s), N});
  return out;
}

/// Polynomial-family spectrum polynomials for orders 0..3, ascending in q0.
inline std::vector<complex> frobenius_explicit_polynomial(int N, complex p0, complex p1) {
  switch (N) {
    case 0: return {0.0, 1.0};
    case 1: return {-2.0 * p0, p1, 1.0};
    case 2: return {-8.0 * p0 * p1, 2.0 * p1 * p1 - 8.0 * p0 - 4.0, 3.0 * p1, 1.0};
    default:
      return {-36.0 * p0 * p1 * p1 + 36.0 * p0 * p0 + 72.0 * p0, 6.0 * (-10.0 * p0 * p1 - 6.0 * p1 + p1 * p1 * p1),
              11.0 * p1 * p1 - 20.0 * p0 - 20.0, 6.0 * p1, 1.0};
  }
}

/// Hermite-family spectrum polynomials for orders 0..3, ascending in q0.
inline std::vector<complex> hermite_explicit_polynomial(int N, complex p1, complex q1) {
  switch (N) {
    case 0: return {0.0, 1.0};
    case 1: return {q1, p1, 1.0};
    case 2: return {4.0 * p1 * q1, 2.0 * p1 * p1 + 4.0 * q1 - 4.0, 3.0 * p1, 1.0};
    default:
      return {9.0 * q1 * q1 + (18.0 * p1 * p1 - 36.0) * q1, 30.0 * p1 * q1 + 6.0 * p1 * p1 * p1 - 36.0 * p1,
              10.0 * q1 + 11.0 * p1 * p1 - 20.0, 6.0 * p1, 1.0};
  }
}

/// Gamma-ratio power series: H_nu(x) = 1/(2 Gamma(-nu)) sum (-1)^k Gamma((k - nu)/2) (2x)^k / k!
inline complex hermite_series_ref(complex nu, complex x) {
  const complex rg_nu = recip_gamma_ref(-nu);
  complex sum{}, power{1.0};
  double fact = 1.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      power *= -2.0 * x;
      fact *= k;
    }
    sum += power / fact * rg_nu / recip_gamma_ref((static_cast<double>(k) - nu) / 2.0);
  }
  return sum / 2.0;
}

/// Term-wise pFq series with coefficient weights w(k).
template <class Weight>
inline complex weighted_series(const biheun::HypergeomTerm& t, complex z, Weight w, int terms = 300) {
  complex coef{1.0}, sum = w(0);
  for (int k = 0; k < terms; ++k) {
    for (const auto& a : t.upper) coef *= a + static_cast<double>(k);
    for (const auto& g : t.lower) coef /= g + static_cast<double>(k);
    coef *= z / static_cast<double>(k + 1);
    sum += coef * w(k + 1);
  }
  return sum;
}

/// Expected C', D', C'', D'' terms of the four-term form.
struct ExpectedTerm {
  bool present = false;
  complex prefactor;  // signed, as multiplying the series (and xi)
  std::vector<complex> upper, lower;
};

/// Independent transcription of the explicit low-order forms, using the
/// recurrence values of d written out by hand and a reference gamma.
inline std::array<ExpectedTerm, 4> explicit_ghg_form(const biheun::BiconfluentParams& P, int N) {
  const complex b = P.beta(), p1 = P.p1, q0 = P.q0;
  auto rg = recip_gamma_ref;
  std::array<complex, 4> d{1.0, 0.0, 0.0, 0.0};
  if (N == 1) d[1] = (p1 + q0) / (2.0 * (1.0 + b));
  if (N == 2) {
    d[1] = (2.0 * p1 + q0) / (2.0 * (1.0 + b));
    d[2] = (2.0 + (p1 + q0) * d[1]) / (4.0 * (2.0 + b));
  }
  if (N == 3) {
    d[1] = (3.0 * p1 + q0) / (2.0 * (1.0 + b));
    d[2] = (3.0 + (2.0 * p1 + q0) * d[1]) / (4.0 * (2.0 + b));
    d[3] = (2.0 * d[1] + (p1 + q0) * d[2]) / (6.0 * (3.0 + b));
  }
  const complex A0 = std::pow(complex{2.0}, b) * std::sqrt(std::numbers::pi) * rg(0.5 - b / 2.0);
  const complex B0 = std::pow(complex{2.0}, b + 1.0) * std::sqrt(std::numbers::pi) * rg(-b / 2.0);
  const complex A1 = std::pow(complex{2.0}, b + 1.0) * std::sqrt(std::numbers::pi) * rg(-b / 2.0);
  const complex B1 = std::pow(complex{2.0}, b + 2.0) * std::sqrt(std::numbers::pi) * rg(-b / 2.0 - 0.5);

  std::array<ExpectedTerm, 4> t;
  if (N <= 1) {
    t[0] = {true, d[0] * A0, {-b / 2.0}, {0.5}};
    t[1] = {true, -d[0] * B0, {0.5 - b / 2.0}, {1.5}};
    if (N == 1) {
      t[2] = {true, d[1] * A1, {-b / 2.0 - 0.5}, {0.5}};
      t[3] = {true, -d[1] * B1, {-b / 2.0}, {1.5}};
    }
  } else if (N == 2) {
    const complex C = 1.0 + 4.0 * d[2] * (-b / 2.0 - 0.5), D = 1.0 + 4.0 * d[2] * (-b / 2.0 - 1.0);
    const complex a = -b / 2.0 - 1.0, c = -b / 2.0 - 0.5;
    t[0] = {true, A0 * C, {a, a * C + 1.0}, {0.5, a * C}};
    t[1] = {true, -B0 * D, {c, c * D + 1.0}, {1.5, c * D}};
    t[2] = {true, d[1] * A1, {-b / 2.0 - 0.5}, {0.5}};
    t[3] = {true, -d[1] * B1, {-b / 2.0}, {1.5}};
  } else {
    const complex Cp = 1.0 + 4.0 * (-b / 2.0 - 0.5) * d[2] / d[0], Dp = 1.0 + 4.0 * (-b / 2.0 - 1.0) * d[2] / d[0];
    const complex Cpp = 1.0 + 4.0 * (-b / 2.0 - 1.0) * d[3] / d[1], Dpp = 1.0 + 4.0 * (-b / 2.0 - 1.5) * d[3] / d[1];
    const complex a1 = -b / 2.0 - 1.0, a2 = -b / 2.0 - 1.5, c1 = -b / 2.0 - 0.5, c2 = -b / 2.0 - 1.0;
    t[0] = {true, A0 * d[0] * Cp, {a1, a1 * Cp + 1.0}, {0.5, a1 * Cp}};
    t[1] = {true, -B0 * d[0] * Dp, {c1, c1 * Dp + 1.0}, {1.5, c1 * Dp}};
    t[2] = {true, A1 * d[1] * Cpp, {a2, a2 * Cpp + 1.0}, {0.5, a2 * Cpp}};
    t[3] = {true, -B1 * d[1] * Dpp, {c2, c2 * Dpp + 1.0}, {1.5, c2 * Dpp}};
  }
  return t;
}

inline std::vector<complex> explicit_hermite_d(const biheun::BiconfluentParams& P, int N) {
  const complex b = P.beta(), p1 = P.p1, q0 = P.q0;
  std::vector<complex> d(N + 1);
  d[0] = 1.0;
  const double n = N;
  // general form of the low-order recurrence values with p0 = -N
  if (N >= 1) d[1] = (n * p1 + q0) / (2.0 * (1.0 + b));
  if (N >= 2) d[2] = (n + ((n - 1.0) * p1 + q0) * d[1]) / (4.0 * (2.0 + b));
  if (N >= 3) d[3] = ((n - 1.0) * d[1] + ((n - 2.0) * p1 + q0) * d[2]) / (6.0 * (3.0 + b));
  return d;
}

}  // namespace support
