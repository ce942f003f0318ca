#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biheun/hermite.hpp"
#include "biheun/hypergeom.hpp"

namespace biheun {

/// Taylor coefficients of a terminated Hermite sum in powers of
/// xi = s z - p1/2, together with their split over even and odd d_j.
struct SplitCoefficients {
  CoefficientSeries c_tilde;
  CoefficientSeries c_prime;
  CoefficientSeries c_dprime;
  int n_prime = 0;    // floor(N / 2)
  int n_dprime = -1;  // floor((N - 1) / 2); -1 means no odd d_j
  complex beta;
};

/// Closed-form values of the first two coefficients of each series.
struct SplitSeeds {
  complex ctilde0, ctilde1, cprime0, cprime1, cdprime0, cdprime1;
};

/// phi, psi drive the two-term ratios; g1/h1/g2/h2 are the root polynomials
/// of the four hypergeometric groups (C', D', C'', D'').
struct StructurePolynomials {
  CPoly phi, psi, g1, h1, g2, h2;
};

enum class TermGroup { c_prime = 0, d_prime = 1, c_dprime = 2, d_dprime = 3 };

inline std::string_view to_string(TermGroup g) {
  switch (g) {
    case TermGroup::c_prime: return "C'";
    case TermGroup::d_prime: return "D'";
    case TermGroup::c_dprime: return "C''";
    case TermGroup::d_dprime: return "D''";
  }
  return "?";
}

/// Four-term generalized-hypergeometric form of a terminated Hermite sum:
///   Phi = C' F(.; 1/2; xi^2) - D' xi F(.; 3/2; xi^2) + C'' F(.; 1/2; xi^2) - D'' xi F(.; 3/2; xi^2).
///
/// terms[g] holds the signed prefactor; constants[g] holds the unsigned C'/D'/C''/D''.
/// A group whose Hermite weights all vanish is absent (std::nullopt).
struct HypergeomCombination {
  BiconfluentParams params;
  int N = 0;
  std::array<std::optional<HypergeomTerm>, 4> terms;
  std::array<complex, 4> constants{};
  std::array<std::vector<complex>, 4> lambdas;

  const std::optional<HypergeomTerm>& term(TermGroup g) const { return terms[static_cast<int>(g)]; }
  complex xi(complex z) const { return params.xi(z); }
};

namespace detail {

struct ParityGroup {
  int offset;  // 0: even d_j, 1: odd d_j
  int M;       // highest shift index; -1 when the group is empty
  complex a;   // -(beta + offset + 2M) / 2

  complex nu_top(complex beta) const { return beta + static_cast<double>(offset + 2 * M); }
  complex d_at(const CoefficientSeries& d, int j) const { return d[offset + 2 * M - 2 * j]; }
};

inline ParityGroup parity_group(complex beta, int N, int offset) {
  const int M = offset == 0 ? N / 2 : (N >= 1 ? (N - 1) / 2 : -1);
  return ParityGroup{offset, M, -(beta + static_cast<double>(offset + 2 * M)) / 2.0};
}

inline complex checked_denominator(complex value, std::string_view what) {
  if (std::abs(value) < 1e-14)
    throw Error(ErrorKind::degenerate_parameter, std::string(what) + " vanishes");
  return value;
}

// sum_j (shift + k)_j / (2a)_{2j} d_{offset + 2M - 2j}
inline complex split_inner_sum(const ParityGroup& grp, const CoefficientSeries& d, complex shift) {
  complex sum{};
  for (int j = 0; j <= grp.M; ++j)
    sum += pochhammer(shift, j) / checked_denominator(pochhammer(2.0 * grp.a, 2 * j), "(-beta - 2N')_{2j}") *
           grp.d_at(d, j);
  return sum;
}

// factored parity coefficient at index idx
inline complex split_coefficient(const ParityGroup& grp, const CoefficientSeries& d, complex beta, int idx) {
  if (grp.M < 0) return complex{};
  const int k = idx / 2;
  const complex scale = std::pow(complex{2.0}, grp.nu_top(beta)) * sqrt_pi;
  if (idx % 2 == 0) {
    const complex pre = scale * recip_gamma(grp.a + 0.5) * pochhammer(grp.a, k) * std::pow(4.0, k) / factorial(idx);
    if (pre == complex{}) return complex{};
    return pre * split_inner_sum(grp, d, grp.a + static_cast<double>(k));
  }
  const complex pre =
      -scale * recip_gamma(grp.a) * pochhammer(grp.a + 0.5, k) * std::pow(2.0, idx) / factorial(idx);
  if (pre == complex{}) return complex{};
  return pre * split_inner_sum(grp, d, grp.a + 0.5 + static_cast<double>(k));
}

// Taylor coefficient of xi^idx in sum_j d_j H_{beta + j}(xi), via the Kummer form.
inline complex shifted_coefficient(const CoefficientSeries& d, complex beta, int idx) {
  const int m = idx / 2;
  complex sum{};
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (d[j] == complex{}) continue;
    const complex nu = beta + static_cast<double>(j);
    // (1/2)_m m! = (2m)! / 4^m and (3/2)_m m! = (2m+1)! / 4^m
    if (idx % 2 == 0)
      sum += d[j] * hermite_even_weight(nu) * pochhammer(-nu / 2.0, m) * std::pow(4.0, m) / factorial(idx);
    else
      sum -= d[j] * hermite_odd_weight(nu) * pochhammer(0.5 - nu / 2.0, m) * std::pow(4.0, m) / factorial(idx);
  }
  return sum;
}

}  // namespace detail

/// c~_k, c'_k, c''_k for k = 0..k_max.
///
/// c~ comes from the Kummer expansion of each Hermite function; c' and c''
/// are built independently from the factored parity sums, so c~ = c' + c''
/// is a genuine check rather than an identity by construction.
inline SplitCoefficients shifted_power_coefficients(const HermiteExpansion& exp, int k_max) {
  if (k_max < 0) throw Error(ErrorKind::invalid_argument, "k_max must be non-negative");
  const complex beta = exp.order_base();
  const int N = exp.order();
  const auto even = detail::parity_group(beta, N, 0);
  const auto odd = detail::parity_group(beta, N, 1);

  SplitCoefficients out;
  out.beta = beta;
  out.n_prime = even.M;
  out.n_dprime = odd.M;
  out.c_tilde = {std::vector<complex>(k_max + 1), SeriesKind::shifted_ctilde, Normalization::seeded};
  out.c_prime = {std::vector<complex>(k_max + 1), SeriesKind::split_cprime, Normalization::seeded};
  out.c_dprime = {std::vector<complex>(k_max + 1), SeriesKind::split_cdoubleprime, Normalization::seeded};
  for (int k = 0; k <= k_max; ++k) {
    out.c_tilde.values[k] = detail::shifted_coefficient(exp.d(), beta, k);
    out.c_prime.values[k] = detail::split_coefficient(even, exp.d(), beta, k);
    out.c_dprime.values[k] = detail::split_coefficient(odd, exp.d(), beta, k);
  }
  return out;
}

inline SplitSeeds split_seeds(const HermiteExpansion& exp) {
  const complex beta = exp.order_base();
  const auto& d = exp.d();
  const int N = exp.order();
  const complex two_beta = std::pow(complex{2.0}, beta);
  const double sp = detail::sqrt_pi;

  SplitSeeds s{};
  for (int j = 0; j <= N; ++j) {
    const complex two_j = std::pow(2.0, j);
    s.ctilde0 += d[j] * sp * two_beta * two_j * recip_gamma(0.5 - beta / 2.0 - j / 2.0);
    s.ctilde1 -= d[j] * sp * 2.0 * two_beta * two_j * recip_gamma(-beta / 2.0 - j / 2.0);
  }
  complex e0{}, e1{}, o0{}, o1{};
  for (int j = 0; 2 * j <= N; ++j) {
    const double w = std::pow(-4.0, j);
    e0 += w * d[2 * j] * pochhammer(0.5 + beta / 2.0, j);
    e1 += w * d[2 * j] * pochhammer(1.0 + beta / 2.0, j);
  }
  for (int j = 0; 2 * j + 1 <= N; ++j) {
    const double w = std::pow(-4.0, j);
    o0 += w * d[2 * j + 1] * pochhammer(1.0 + beta / 2.0, j);
    o1 += w * d[2 * j + 1] * pochhammer(1.5 + beta / 2.0, j);
  }
  s.cprime0 = sp * two_beta * recip_gamma(0.5 - beta / 2.0) * e0;
  s.cprime1 = -sp * 2.0 * two_beta * recip_gamma(-beta / 2.0) * e1;
  s.cdprime0 = sp * 2.0 * two_beta * recip_gamma(-beta / 2.0) * o0;
  s.cdprime1 = -sp * 4.0 * two_beta * recip_gamma(-0.5 - beta / 2.0) * o1;
  return s;
}

namespace detail {

// polynomial in z: sum_j (shift + z)_j / (2a)_{2j} d_{offset + 2M - 2j}
inline CPoly parity_polynomial(const ParityGroup& grp, const CoefficientSeries& d, complex shift) {
  if (grp.M < 0) return CPoly{};
  CPoly p{complex{}};
  for (int j = 0; j <= grp.M; ++j)
    p += rising_factorial_poly(shift, j) *
         (grp.d_at(d, j) / checked_denominator(pochhammer(2.0 * grp.a, 2 * j), "(-beta - 2N')_{2j}"));
  return p;
}

// root polynomial of one hypergeometric group: weights d / (4^n (x)_n), base alpha
inline CPoly group_polynomial(const ParityGroup& grp, const CoefficientSeries& d, complex x, complex alpha) {
  if (grp.M < 0) return CPoly{};
  std::vector<complex> b(grp.M + 1);
  for (int n = 0; n <= grp.M; ++n)
    b[n] = grp.d_at(d, n) / (std::pow(4.0, n) * checked_denominator(pochhammer(x, n), "Pochhammer weight"));
  for (int k = 1; k <= grp.M; ++k) checked_denominator(pochhammer(alpha, k), "(alpha)_k");
  return shift_polynomial(alpha, b);
}

}  // namespace detail

inline StructurePolynomials structure_polynomials(const HermiteExpansion& exp) {
  const complex beta = exp.order_base();
  const auto even = detail::parity_group(beta, exp.order(), 0);
  const auto odd = detail::parity_group(beta, exp.order(), 1);
  StructurePolynomials out;
  out.phi = detail::parity_polynomial(even, exp.d(), even.a);
  out.psi = detail::parity_polynomial(odd, exp.d(), odd.a + 0.5);
  out.g1 = detail::group_polynomial(even, exp.d(), even.a + 0.5, even.a);
  out.h1 = detail::group_polynomial(even, exp.d(), even.a, even.a + 0.5);
  out.g2 = detail::group_polynomial(odd, exp.d(), odd.a + 0.5, odd.a);
  out.h2 = detail::group_polynomial(odd, exp.d(), odd.a, odd.a + 0.5);
  return out;
}

/// Maximum relative deviation of each two-term ratio identity, keyed
/// "cprime_even", "cprime_odd", "cdprime_even", "cdprime_odd".
struct RecurrenceCheck {
  std::map<std::string, double> max_deviation;
  std::map<std::string, int> checked;

  double worst() const {
    double w = 0.0;
    for (const auto& [name, dev] : max_deviation) w = std::max(w, dev);
    return w;
  }
};

/// Verify c_{i+2} / c_i against the polynomial ratio form for each of the
/// four subsequences, for i + 2 <= k_max. Indices where |c_i| < 1e-13 or the
/// polynomial denominator vanishes are skipped.
inline RecurrenceCheck check_two_term_recurrences(const SplitCoefficients& split, const CPoly& phi,
                                                  const CPoly& psi, int k_max) {
  const auto even = detail::parity_group(split.beta, 2 * split.n_prime, 0);
  const complex ae = even.a;
  const complex ao = -(split.beta + 1.0 + 2.0 * split.n_dprime) / 2.0;

  RecurrenceCheck report;
  auto run = [&](const std::string& name, const CoefficientSeries& c, int parity, auto&& factor) {
    double worst = 0.0;
    int count = 0;
    for (int k = 0; 2 * k + parity + 2 <= k_max && 2 * k + parity + 2 < static_cast<int>(c.size()); ++k) {
      const complex cur = c[2 * k + parity];
      const complex next = c[2 * k + parity + 2];
      if (std::abs(cur) < 1e-13) continue;
      const auto [num, den] = factor(static_cast<double>(k));
      if (den == complex{}) continue;
      const complex predicted = cur * num / den;
      const double scale = std::max(std::abs(predicted), std::abs(next));
      if (scale == 0.0) {
        ++count;
        continue;
      }
      worst = std::max(worst, std::abs(next - predicted) / scale);
      ++count;
    }
    report.max_deviation[name] = worst;
    report.checked[name] = count;
  };

  run("cprime_even", split.c_prime, 0, [&](double k) {
    return std::pair{(ae + k) * phi(k + 1.0), (k + 1.0) * (k + 0.5) * phi(k)};
  });
  run("cprime_odd", split.c_prime, 1, [&](double k) {
    return std::pair{(ae + 0.5 + k) * phi(k + 1.5), (k + 1.0) * (k + 1.5) * phi(k + 0.5)};
  });
  if (split.n_dprime >= 0) {
    run("cdprime_even", split.c_dprime, 0, [&](double k) {
      return std::pair{(ao + k) * psi(k + 0.5), (k + 1.0) * (k + 0.5) * psi(k - 0.5)};
    });
    // the odd c'' sum carries psi at integer arguments: ratio psi(k+1)/psi(k)
    run("cdprime_odd", split.c_dprime, 1, [&](double k) {
      return std::pair{(ao + 0.5 + k) * psi(k + 1.0), (k + 1.0) * (k + 1.5) * psi(k)};
    });
  } else {
    report.max_deviation["cdprime_even"] = 0.0;
    report.max_deviation["cdprime_odd"] = 0.0;
    report.checked["cdprime_even"] = 0;
    report.checked["cdprime_odd"] = 0;
  }
  return report;
}

/// Rewrite a terminated Hermite sum as four generalized hypergeometric terms.
inline HypergeomCombination build_ghg_solution(const HermiteExpansion& exp, const ToleranceConfig& cfg = {}) {
  const complex beta = exp.order_base();
  const int N = exp.order();
  HypergeomCombination out{exp.params(), N, {}, {}, {}};

  struct Spec {
    TermGroup group;
    int offset;
    bool odd_kummer;  // lower parameter 3/2 and a factor xi
  };
  const std::array<Spec, 4> specs = {{{TermGroup::c_prime, 0, false},
                                      {TermGroup::d_prime, 0, true},
                                      {TermGroup::c_dprime, 1, false},
                                      {TermGroup::d_dprime, 1, true}}};

  // Weights w_n = d * (Hermite Kummer weight), i.e. prefactor times b_n
  // without the 0 * inf products at gamma poles.
  std::array<std::vector<complex>, 4> weights;
  double wmax = 0.0;
  for (const auto& sp : specs) {
    const auto grp = detail::parity_group(beta, N, sp.offset);
    auto& w = weights[static_cast<int>(sp.group)];
    for (int n = 0; n <= grp.M; ++n) {
      const complex nu = grp.nu_top(beta) - 2.0 * n;
      const complex kummer = sp.odd_kummer ? detail::hermite_odd_weight(nu) : detail::hermite_even_weight(nu);
      w.push_back(grp.d_at(exp.d(), n) * kummer);
      wmax = std::max(wmax, std::abs(w.back()));
    }
  }

  for (const auto& sp : specs) {
    const int gi = static_cast<int>(sp.group);
    auto w = weights[gi];
    for (auto& x : w)
      if (std::abs(x) <= 1e-14 * wmax) x = complex{};
    while (!w.empty() && w.back() == complex{}) w.pop_back();
    if (w.empty()) continue;

    const auto grp = detail::parity_group(beta, N, sp.offset);
    const complex alpha = grp.a + (sp.odd_kummer ? 0.5 : 0.0);
    CombinationInput input{make_term({alpha}, {sp.odd_kummer ? 1.5 : 0.5}), w};
    try {
      HypergeomTerm term = combine_shifted(input, cfg);
      term.xi_power = sp.odd_kummer ? 1 : 0;
      if (sp.odd_kummer) term.prefactor = -term.prefactor;
      complex total{};
      for (const auto& x : w) total += x;
      out.constants[gi] = total;
      out.lambdas[gi] = shift_parameters(input, cfg);
      out.terms[gi] = std::move(term);
    } catch (const Error& e) {
      throw Error(e.kind(), "group " + std::string(to_string(sp.group)) + ": " + e.what());
    }
  }
  return out;
}

inline complex evaluate_combination(const HypergeomCombination& comb, complex z, const ToleranceConfig& cfg = {}) {
  const complex xi = comb.xi(z);
  const complex xi2 = xi * xi;
  complex sum{};
  for (const auto& term : comb.terms) {
    if (!term) continue;
    complex v = term->prefactor * pfq_eval(*term, xi2, cfg);
    if (term->xi_power == 1) v *= xi;
    sum += v;
  }
  return sum;
}

}  // namespace biheun
