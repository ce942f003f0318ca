#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "biheun/numerics.hpp"

namespace biheun {

/// One generalized hypergeometric function pFq(upper; lower; .) together with
/// the scalar that multiplies it and an optional factor of xi in front.
///
/// operator_roots is normally empty. When a shifted combination sums to zero
/// the (lambda + 1; lambda) pairs cannot be normalized, and the roots are kept
/// here instead: the k-th series term is then weighted by prod(lambda_i + k),
/// which is the operator product prod(z d/dz + lambda_i) applied to the base.
struct HypergeomTerm {
  std::vector<complex> upper;
  std::vector<complex> lower;
  complex prefactor{1.0};
  int xi_power = 0;
  std::vector<complex> operator_roots;

  bool operator_form() const noexcept { return !operator_roots.empty(); }
};

inline HypergeomTerm make_term(std::vector<complex> upper, std::vector<complex> lower) {
  HypergeomTerm t;
  t.upper = std::move(upper);
  t.lower = std::move(lower);
  return t;
}

/// Left side of a contiguous shift combination: sum_n b[n] pFq(a1 + n, ...).
struct CombinationInput {
  HypergeomTerm base;
  std::vector<complex> b;

  int order() const noexcept { return static_cast<int>(b.size()) - 1; }
};

namespace detail {

inline void check_term(const HypergeomTerm& term) {
  // a lower parameter at -l is harmless only if some upper -m with m <= l
  // cuts the series before the zero denominator is reached
  for (const auto& g : term.lower) {
    if (!is_nonpositive_integer(g, 1e-12)) continue;
    const double l = -std::round(g.real());
    bool cut = false;
    for (const auto& a : term.upper)
      if (is_nonpositive_integer(a, 1e-12) && -std::round(a.real()) <= l) cut = true;
    if (!cut)
      throw Error(ErrorKind::lower_parameter_pole,
                  "lower parameter " + std::to_string(g.real()) + " hits a pole");
  }
}

inline int truncation_index(const HypergeomTerm& term) {
  int m = -1;
  for (const auto& a : term.upper) {
    if (!is_nonpositive_integer(a, 1e-12)) continue;
    const int idx = static_cast<int>(-std::round(a.real()));
    if (m < 0 || idx < m) m = idx;
  }
  return m;
}

// sum_n sum_k b_n C(n,k) / (a1)_k x(x-1)...(x-k+1), no validation
inline CPoly shift_polynomial(complex a1, const std::vector<complex>& b) {
  const int order = static_cast<int>(b.size()) - 1;
  CPoly g{complex{}};
  CPoly falling{1.0};
  for (int k = 0; k <= order; ++k) {
    complex coeff{};
    for (int n = k; n <= order; ++n) coeff += b[n] * binomial(n, k);
    g += falling * (coeff / pochhammer(a1, k));
    falling = falling * CPoly{-static_cast<double>(k), 1.0};
  }
  return g;
}

}  // namespace detail

/// Series value of term (prefactor and xi factor NOT applied).
inline complex pfq_eval(const HypergeomTerm& term, complex z, const ToleranceConfig& cfg = {}) {
  detail::check_term(term);
  const int last = detail::truncation_index(term);
  const bool terminating = last >= 0;
  if (!terminating && term.upper.size() > term.lower.size() + 1 && z != complex{})
    throw Error(ErrorKind::non_convergence, "p > q + 1 series diverges off the terminating case");

  auto weight = [&](int k) {
    complex w{1.0};
    for (const auto& lam : term.operator_roots) w *= lam + static_cast<double>(k);
    return w;
  };

  complex t{1.0};  // plain series term, without operator weights
  complex sum = weight(0);
  double prev = std::abs(sum);
  int small_run = 0;
  for (int k = 0; k + 1 < cfg.max_terms; ++k) {
    if (terminating && k >= last) return sum;
    complex num{1.0}, den{1.0};
    for (const auto& a : term.upper) num *= a + static_cast<double>(k);
    for (const auto& g : term.lower) den *= g + static_cast<double>(k);
    t *= num / den * z / static_cast<double>(k + 1);
    const complex w = t * weight(k + 1);
    sum += w;
    const double mag = std::abs(w);
    if (mag <= cfg.tol_series * std::abs(sum)) {
      if (++small_run >= 3) return sum;
    } else {
      small_run = 0;
    }
    prev = mag;
  }
  if (prev > 0.0 && !(prev <= cfg.tol_series * std::abs(sum))) {
    // decide between slow convergence and divergence from the last ratio
    complex num{1.0}, den{1.0};
    const int k = cfg.max_terms - 1;
    for (const auto& a : term.upper) num *= a + static_cast<double>(k);
    for (const auto& g : term.lower) den *= g + static_cast<double>(k);
    if (std::abs(num / den * z / static_cast<double>(k + 1)) >= 1.0)
      throw Error(ErrorKind::non_convergence, "series terms growing at max_terms");
  }
  return sum;
}

/// The polynomial g(x) = sum_n sum_k b_n C(n,k) / (a1)_k x(x-1)...(x-k+1),
/// whose negated roots are the lambda parameters of the collapsed function.
inline CPoly combination_polynomial(const CombinationInput& input) {
  if (input.b.empty()) throw Error(ErrorKind::invalid_argument, "empty weight list");
  if (input.base.upper.empty())
    throw Error(ErrorKind::invalid_argument, "base function needs an upper parameter");
  const int order = input.order();
  const complex a1 = input.base.upper.front();
  if (input.b.back() == complex{})
    throw Error(ErrorKind::invalid_argument, "highest weight b_N is zero; reduce N first");
  if (std::abs(pochhammer(a1, order)) < 1e-14)
    throw Error(ErrorKind::degenerate_parameter, "(a1)_N vanishes");

  return detail::shift_polynomial(a1, input.b);
}

/// lambda_1..lambda_N: negated roots of the combination polynomial, sorted.
inline std::vector<complex> shift_parameters(const CombinationInput& input,
                                             const ToleranceConfig& cfg = {}) {
  const CPoly g = combination_polynomial(input);
  if (input.order() == 0) return {};
  std::vector<complex> lambdas = poly_roots(g, cfg);
  for (auto& l : lambdas) l = -l;
  sort_complex(lambdas);
  return lambdas;
}

/// Direct evaluation of sum_n b_n pFq(a1 + n, a2, ...; z).
inline complex shifted_sum(const CombinationInput& input, complex z, const ToleranceConfig& cfg = {}) {
  complex sum{};
  HypergeomTerm shifted = input.base;
  shifted.prefactor = 1.0;
  shifted.xi_power = 0;
  for (int n = 0; n <= input.order(); ++n) {
    shifted.upper.front() = input.base.upper.front() + static_cast<double>(n);
    sum += input.b[n] * pfq_eval(shifted, z, cfg);
  }
  return input.base.prefactor * sum;
}

/// Collapse sum_n b_n pFq(a1 + n, ...) into a single p+N F q+N.
///
/// Normal result: upper gains lambda_i + 1, lower gains lambda_i, prefactor
/// is multiplied by sum(b). When sum(b) vanishes the roots are returned as
/// operator_roots with prefactor b_N / (a1)_N instead.
inline HypergeomTerm combine_shifted(const CombinationInput& input, const ToleranceConfig& cfg = {}) {
  const std::vector<complex> lambdas = shift_parameters(input, cfg);
  HypergeomTerm out = input.base;
  out.operator_roots.clear();
  if (input.order() == 0) {
    out.prefactor *= input.b.front();
    return out;
  }

  complex total{};
  double scale = 0.0;
  for (const auto& b : input.b) {
    total += b;
    scale += std::abs(b);
  }
  if (std::abs(total) <= 1e-12 * scale) {
    out.prefactor *= input.b.back() / pochhammer(input.base.upper.front(), input.order());
    out.operator_roots = lambdas;
    return out;
  }

  for (const auto& l : lambdas) {
    if (detail::is_nonpositive_integer(l, 1e-10))
      throw Error(ErrorKind::degenerate_root,
                  "lambda = " + std::to_string(l.real()) + " makes the (lambda+1; lambda) pair singular");
  }
  for (const auto& l : lambdas) {
    out.upper.push_back(l + 1.0);
    out.lower.push_back(l);
  }
  out.prefactor *= total;
  return out;
}

}  // namespace biheun
