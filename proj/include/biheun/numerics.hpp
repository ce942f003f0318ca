#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biheun/error.hpp"

namespace biheun {

using complex = std::complex<double>;

/// Numerical knobs shared by every evaluation routine.
struct ToleranceConfig {
  double tol_root = 1e-10;      // residual bound on reported polynomial roots
  double tol_series = 1e-15;    // relative term cutoff for power series
  int max_terms = 2000;         // hard cap on series length
  double tol_validate = 1e-8;   // pass/fail threshold for validation reports

  void validate() const {
    if (!(tol_root > 0) || !(tol_series > 0) || !(tol_validate > 0))
      throw Error(ErrorKind::invalid_argument, "tolerances must be strictly positive");
    if (max_terms < 16)
      throw Error(ErrorKind::invalid_argument, "max_terms must be at least 16");
  }
};

namespace detail {

inline double max_abs(std::span<const complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

// Nearest integer n <= 0 when z sits on the non-positive real integers.
inline bool is_nonpositive_integer(complex z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

}  // namespace detail

/// Polynomial over complex scalars, coefficients in ascending degree order.
///
/// The stored coefficient vector is left untouched; degree() reports the
/// index of the last coefficient above 1e-14 relative to the largest one.
class CPoly {
 public:
  CPoly() = default;
  explicit CPoly(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) {}
  CPoly(std::initializer_list<complex> coeffs) : coeffs_(coeffs) {}

  static CPoly constant(complex c) { return CPoly{c}; }
  static CPoly monomial_root(complex r) { return CPoly{-r, 1.0}; }  // x - r

  const std::vector<complex>& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }
  complex operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : complex{}; }

  int degree() const {
    const double scale = detail::max_abs(coeffs_);
    if (scale == 0.0) return 0;
    for (int i = static_cast<int>(coeffs_.size()) - 1; i > 0; --i)
      if (std::abs(coeffs_[i]) >= 1e-14 * scale) return i;
    return 0;
  }

  complex leading() const { return coeffs_.empty() ? complex{} : coeffs_[degree()]; }

  complex operator()(complex x) const {
    complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  CPoly derivative() const {
    if (coeffs_.size() <= 1) return CPoly{complex{}};
    std::vector<complex> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return CPoly(std::move(d));
  }

  /// Copy with trailing coefficients below the degree threshold removed.
  CPoly trimmed() const {
    if (coeffs_.empty()) return *this;
    return CPoly(std::vector<complex>(coeffs_.begin(), coeffs_.begin() + degree() + 1));
  }

  CPoly monic() const {
    CPoly t = trimmed();
    const complex lead = t.leading();
    if (lead == complex{}) throw Error(ErrorKind::degenerate_leading_coefficient, "zero polynomial");
    for (auto& c : t.coeffs_) c /= lead;
    return t;
  }

  CPoly& operator+=(const CPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  CPoly& operator-=(const CPoly& o) { return *this += o * complex{-1.0}; }
  CPoly& operator*=(complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
  friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
  friend CPoly operator*(CPoly a, complex s) { return a *= s; }
  friend CPoly operator*(complex s, CPoly a) { return a *= s; }

  friend CPoly operator*(const CPoly& a, const CPoly& b) {
    if (a.empty() || b.empty()) return CPoly{};
    std::vector<complex> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return CPoly(std::move(r));
  }

 private:
  std::vector<complex> coeffs_;
};

/// Falling factorial x(x-1)...(x-k+1) as a polynomial in x.
inline CPoly falling_factorial_poly(int k) {
  CPoly p{1.0};
  for (int i = 0; i < k; ++i) p = p * CPoly{-static_cast<double>(i), 1.0};
  return p;
}

/// Rising factorial (a + x)_k as a polynomial in x.
inline CPoly rising_factorial_poly(complex a, int k) {
  CPoly p{1.0};
  for (int i = 0; i < k; ++i) p = p * CPoly{a + static_cast<double>(i), 1.0};
  return p;
}

/// Pochhammer symbol (a)_k = a(a+1)...(a+k-1), with (a)_0 = 1.
inline complex pochhammer(complex a, int k) {
  complex r{1.0};
  for (int i = 0; i < k; ++i) r *= a + static_cast<double>(i);
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// 1/Gamma(z), entire in z.
///
/// Lanczos approximation (g = 7, 9 coefficients) for Re z >= 1/2, reflection
/// otherwise. Arguments within 1e-12 of 0, -1, -2, ... return exactly zero.
inline complex recip_gamma(complex z) {
  static constexpr double g = 7.0;
  static constexpr std::array<double, 9> lanczos = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double pi = std::numbers::pi;

  if (detail::is_nonpositive_integer(z, 1e-12)) return complex{};

  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi; sin evaluated after removing
    // the nearest integer to keep it accurate next to the poles.
    const double n = std::round(z.real());
    const complex frac = z - n;
    const double sign = (static_cast<long long>(n) % 2 == 0) ? 1.0 : -1.0;
    const complex sine = sign * std::sin(pi * frac);
    return sine / (pi * recip_gamma(1.0 - z));
  }

  const complex w = z - 1.0;
  complex series = lanczos[0];
  for (std::size_t i = 1; i < lanczos.size(); ++i) series += lanczos[i] / (w + static_cast<double>(i));
  const complex t = w + g + 0.5;
  // Gamma(w + 1) = sqrt(2 pi) t^(w + 1/2) e^(-t) series
  const complex log_gamma = 0.5 * std::log(2.0 * pi) + (w + 0.5) * std::log(t) - t + std::log(series);
  return std::exp(-log_gamma);
}

/// Sort complex values by real part, then imaginary part. Real parts are
/// compared on a 1e-9 relative grid so conjugate pairs order stably.
inline void sort_complex(std::vector<complex>& values) {
  const double scale = std::max(1.0, detail::max_abs(values));
  const double grid = 1e-9 * scale;
  std::sort(values.begin(), values.end(), [grid](complex a, complex b) {
    const double ra = std::round(a.real() / grid), rb = std::round(b.real() / grid);
    if (ra != rb) return ra < rb;
    return a.imag() < b.imag();
  });
}

/// Roots of p, counted with multiplicity, sorted as in sort_complex.
///
/// Exact zero roots are deflated first; the rest come from the eigenvalues
/// of the companion matrix followed by a few guarded Newton steps.
inline std::vector<complex> poly_roots(const CPoly& p, const ToleranceConfig& cfg = {}) {
  if (p.empty()) throw Error(ErrorKind::degenerate_leading_coefficient, "empty coefficient list");
  const int expected = static_cast<int>(p.size()) - 1;
  const int deg = p.degree();
  if (deg < expected)
    throw Error(ErrorKind::degenerate_leading_coefficient,
                "leading coefficient vanishes: degree " + std::to_string(deg) + " < " +
                    std::to_string(expected));
  if (detail::max_abs(p.coeffs()) == 0.0)
    throw Error(ErrorKind::degenerate_leading_coefficient, "zero polynomial");

  std::vector<complex> roots;
  const auto& c = p.coeffs();
  int lo = 0;
  while (lo < deg && c[lo] == complex{}) {
    roots.emplace_back(0.0);
    ++lo;
  }
  const int m = deg - lo;
  if (m > 0) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    const complex lead = c[deg];
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) companion(i, m - 1) = -c[lo + i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    const CPoly dp = p.derivative();
    for (int i = 0; i < m; ++i) {
      complex r = solver.eigenvalues()[i];
      double res = std::abs(p(r));
      for (int it = 0; it < 4 && res > 0.0; ++it) {
        const complex d = dp(r);
        if (d == complex{}) break;
        const complex cand = r - p(r) / d;
        const double cand_res = std::abs(p(cand));
        if (!(cand_res < res)) break;
        r = cand;
        res = cand_res;
      }
      roots.push_back(r);
    }
  }
  const double bound = cfg.tol_root * (1.0 + detail::max_abs(c));
  for (const auto& r : roots)
    if (!(std::abs(p(r)) <= bound))
      throw Error(ErrorKind::non_convergence, "root residual above tol_root");
  sort_complex(roots);
  return roots;
}

}  // namespace biheun
