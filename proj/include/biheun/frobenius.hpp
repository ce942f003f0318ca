#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biheun/numerics.hpp"

namespace biheun {

/// Constants of the biconfluent Heun equation
///   z y'' + (p0 + p1 s z - 2 s^2 z^2) y' + (q0 s + q1 s^2 z) y = 0.
struct BiconfluentParams {
  complex p0, p1, q0, q1, s;

  BiconfluentParams(complex p0_, complex p1_, complex q0_, complex q1_, complex s_ = 1.0)
      : p0(p0_), p1(p1_), q0(q0_), q1(q1_), s(s_) {
    if (s == complex{}) throw Error(ErrorKind::invalid_argument, "s must be nonzero");
  }

  complex beta() const { return p0 + q1 / 2.0; }

  /// Shifted and scaled variable xi = s z - p1 / 2.
  complex xi(complex z) const { return s * z - p1 / 2.0; }
};

enum class SeriesKind {
  frobenius_c,       // multiplies (s z)^n about z = 0
  hermite_d,         // weights of H_{beta + n}(s z - p1/2)
  shifted_ctilde,    // multiplies xi^n
  split_cprime,      // even-d part of shifted_ctilde
  split_cdoubleprime,// odd-d part of shifted_ctilde
  taylor_z,          // multiplies plain z^n about z = 0
};

enum class Normalization {
  leading_unit,   // values[0] == 1
  first_nonzero,  // values[0] == 0; first nonzero entry scaled to 1
  seeded,         // fixed by closed-form seeds, no rescaling
};

struct CoefficientSeries {
  std::vector<complex> values;
  SeriesKind kind = SeriesKind::frobenius_c;
  Normalization normalization = Normalization::leading_unit;

  std::size_t size() const noexcept { return values.size(); }
  complex operator[](std::size_t i) const { return i < values.size() ? values[i] : complex{}; }
};

/// Leading (N+1) x (N+1) block of a banded recurrence matrix.
/// lower[i] = M(i, i-1), diag[i] = M(i, i), upper[i] = M(i, i+1).
struct TridiagonalMinor {
  std::vector<complex> lower, diag, upper;

  int dimension() const noexcept { return static_cast<int>(diag.size()); }

  Eigen::MatrixXcd dense() const {
    const int n = dimension();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = diag[i];
      if (i > 0) m(i, i - 1) = lower[i];
      if (i + 1 < n) m(i, i + 1) = upper[i];
    }
    return m;
  }
};

/// Which sign the accessory parameter carries as an eigenvalue of the minor.
enum class EigenConvention {
  negated,  // -q0 is the eigenvalue: det(M + q0 I) = 0
  direct,   // q0 is the eigenvalue:  det(q0 I - M) = 0
};

struct SpectrumResult {
  int n_max = 0;
  CPoly char_poly;                        // monic in q0, degree N+1
  std::vector<complex> admissible_q0;     // sorted, with multiplicity
  std::vector<CoefficientSeries> eigenvectors;  // one per admissible_q0 entry
};

namespace detail {

inline complex diag_sign(EigenConvention conv) {
  return conv == EigenConvention::negated ? complex{1.0} : complex{-1.0};
}

// Continuant expansion of the banded determinant, kept symbolic in q0.
inline CPoly characteristic_polynomial(const TridiagonalMinor& m, EigenConvention conv) {
  // diagonal entry is q0 + sign * diag[i]; in both conventions the off-diagonal
  // product entering the continuant is lower[i] * upper[i-1]
  const complex sign = diag_sign(conv);
  CPoly prev{1.0};
  CPoly cur = CPoly{sign * m.diag[0], 1.0};
  for (int i = 1; i < m.dimension(); ++i) {
    CPoly next = CPoly{sign * m.diag[i], 1.0} * cur - prev * (m.lower[i] * m.upper[i - 1]);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur.monic();
}

// Null vector of (M + sign q0 I); back substitution with SVD fallback.
inline CoefficientSeries null_vector(const TridiagonalMinor& m, EigenConvention conv, complex q0,
                                     SeriesKind kind) {
  const int n = m.dimension();
  const complex shift = conv == EigenConvention::negated ? q0 : -q0;
  CoefficientSeries out{std::vector<complex>(n), kind, Normalization::leading_unit};
  out.values[0] = 1.0;

  bool ok = true;
  double scale = 1.0;
  for (int i = 0; i + 1 < n && ok; ++i) {
    const complex rhs = (m.diag[i] + shift) * out.values[i] + (i > 0 ? m.lower[i] * out.values[i - 1] : complex{});
    if (std::abs(m.upper[i]) < 1e-13 * (1.0 + std::abs(m.diag[i]) + std::abs(shift))) {
      ok = false;
      break;
    }
    out.values[i + 1] = -rhs / m.upper[i];
    scale = std::max(scale, std::abs(out.values[i + 1]));
  }
  if (ok) {
    const complex last = (m.diag[n - 1] + shift) * out.values[n - 1] +
                         (n > 1 ? m.lower[n - 1] * out.values[n - 2] : complex{});
    const double row_scale = (std::abs(m.diag[n - 1]) + std::abs(shift) + (n > 1 ? std::abs(m.lower[n - 1]) : 0.0) + 1.0) * scale;
    ok = std::abs(last) <= 1e-8 * row_scale;
  }
  if (ok) return out;

  Eigen::MatrixXcd a = m.dense();
  for (int i = 0; i < n; ++i) a(i, i) += shift;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  Eigen::VectorXcd v = svd.matrixV().col(n - 1);
  const double vmax = v.cwiseAbs().maxCoeff();
  int lead = 0;
  while (lead < n && std::abs(v[lead]) < 1e-8 * vmax) ++lead;
  for (int i = 0; i < n; ++i) out.values[i] = i < lead ? complex{} : v[i] / v[lead];
  out.normalization = lead == 0 ? Normalization::leading_unit : Normalization::first_nonzero;
  return out;
}

inline SpectrumResult spectrum_from_minor(const TridiagonalMinor& m, EigenConvention conv,
                                          SeriesKind kind, const ToleranceConfig& cfg) {
  SpectrumResult result;
  result.n_max = m.dimension() - 1;
  result.char_poly = characteristic_polynomial(m, conv);
  result.admissible_q0 = poly_roots(result.char_poly, cfg);
  for (std::size_t i = 0; i < result.admissible_q0.size(); ++i) {
    // repeated roots share the representative computed for the first copy
    if (i > 0 && std::abs(result.admissible_q0[i] - result.admissible_q0[i - 1]) <
                     1e-9 * (1.0 + std::abs(result.admissible_q0[i]))) {
      result.eigenvectors.push_back(result.eigenvectors.back());
      continue;
    }
    result.eigenvectors.push_back(null_vector(m, conv, result.admissible_q0[i], kind));
  }
  return result;
}

}  // namespace detail

/// Banded matrix of the power-series recurrence truncated at c_N, q1 = 2N.
inline TridiagonalMinor frobenius_minor(complex p0, complex p1, int N) {
  if (N < 0) throw Error(ErrorKind::invalid_argument, "N must be non-negative");
  const int n = N + 1;
  TridiagonalMinor m{std::vector<complex>(n), std::vector<complex>(n), std::vector<complex>(n)};
  for (int i = 0; i < n; ++i) {
    m.diag[i] = p1 * static_cast<double>(i);
    m.upper[i] = static_cast<double>(i + 1) * (static_cast<double>(i) + p0);
    if (i > 0) m.lower[i] = -2.0 * (i - 1) + 2.0 * N;
  }
  return m;
}

/// c_0 .. c_{n_terms-1} of the Frobenius solution with exponent 0, c_0 = 1.
inline CoefficientSeries frobenius_coefficients(const BiconfluentParams& params, int n_terms) {
  if (n_terms < 1) throw Error(ErrorKind::invalid_argument, "n_terms must be positive");
  CoefficientSeries out{std::vector<complex>(n_terms), SeriesKind::frobenius_c, Normalization::leading_unit};
  out.values[0] = 1.0;
  for (int n = 1; n < n_terms; ++n) {
    const double nd = n;
    const complex r = nd * (nd - 1.0 + params.p0);
    if (std::abs(r) < 1e-13 * nd * nd)
      throw Error(ErrorKind::indicial_collision,
                  "R_n vanishes at n = " + std::to_string(n) + "; the exponent-0 branch does not exist");
    const complex q = params.p1 * (nd - 1.0) + params.q0;
    const complex p = -2.0 * (nd - 2.0) + params.q1;
    complex acc = q * out.values[n - 1];
    if (n >= 2) acc += p * out.values[n - 2];
    out.values[n] = -acc / r;
  }
  return out;
}

/// Partial sum of c_n (s z)^n with the relative-term stopping rule.
inline complex evaluate_frobenius(const CoefficientSeries& coeffs, const BiconfluentParams& params,
                                  complex z, const ToleranceConfig& cfg = {}) {
  if (coeffs.kind != SeriesKind::frobenius_c)
    throw Error(ErrorKind::invalid_argument, "expected Frobenius coefficients");
  if (coeffs.values.empty()) return complex{};
  const complex x = params.s * z;
  complex sum = coeffs.values[0];
  complex power{1.0};
  int small_run = 0;
  double prev = 0.0, cur = 0.0;
  const int limit = std::min<int>(static_cast<int>(coeffs.size()), cfg.max_terms);
  for (int n = 1; n < limit; ++n) {
    power *= x;
    const complex term = coeffs.values[n] * power;
    sum += term;
    prev = cur;
    cur = std::abs(term);
    if (cur <= cfg.tol_series * std::abs(sum)) {
      if (++small_run >= 3) return sum;
    } else {
      small_run = 0;
    }
  }
  if (static_cast<int>(coeffs.size()) > cfg.max_terms && cur > prev && cur > cfg.tol_series * std::abs(sum))
    throw Error(ErrorKind::non_convergence, "Frobenius series terms growing at max_terms");
  return sum;
}

/// Accessory-parameter spectrum for polynomial solutions of degree N (q1 = 2N).
inline SpectrumResult frobenius_spectrum(complex p0, complex p1, int N, const ToleranceConfig& cfg = {}) {
  return detail::spectrum_from_minor(frobenius_minor(p0, p1, N), EigenConvention::negated,
                                     SeriesKind::frobenius_c, cfg);
}

}  // namespace biheun
