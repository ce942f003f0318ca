#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace biheun;
using support::rel;

namespace {

Representation frobenius_rep(const BiconfluentParams& P, int N) {
  auto c = frobenius_coefficients(P, N + 1);
  return [c, P](complex z) { return evaluate_frobenius(c, P, z); };
}

Representation hermite_rep(const HermiteExpansion& exp) {
  return [exp](complex z) { return evaluate_hermite_series(exp, z); };
}

Representation ghg_rep(const HermiteExpansion& exp) {
  auto comb = build_ghg_solution(exp);
  return [comb](complex z) { return evaluate_combination(comb, z); };
}

}  // namespace

TEST(OdeResidual, FivePointExamples) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  const Representation line = [](complex z) { return 1.0 - z; };
  for (const complex z : {complex(0.5), complex(1.2, 0.4), complex(-0.7, 1.1)})
    EXPECT_LT(std::abs(ode_residual(line, P, z)), 1e-9);

  const BiconfluentParams Q(complex(0.3, 0.1), complex(-0.4, 0.2), 0.0, 0.0, complex(1.1, -0.3));
  const Representation one = [](complex) { return complex{1.0}; };
  EXPECT_EQ(ode_residual(one, Q, complex(0.6, 0.2)), complex{});

  const BiconfluentParams G(complex(0.3, 0.1), complex(-0.4, 0.2), complex(0.5, 0.5), complex(0.7, -0.1));
  const Representation ident = [](complex z) { return z; };
  const complex z{0.8, 0.3};
  const complex expected = (G.p0 + G.p1 * z - 2.0 * z * z + (G.q0 + G.q1 * z) * z) / std::max(1.0, std::abs(z));
  EXPECT_LT(std::abs(ode_residual(ident, G, z) - expected), 1e-9);
  EXPECT_GT(std::abs(ode_residual(ident, G, z)), 0.1);
}

TEST(OdeResidual, ArgumentChecks) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  const Representation line = [](complex z) { return 1.0 - z; };
  EXPECT_THROW(ode_residual(line, P, 0.5, 1e-2), Error);
  EXPECT_THROW(ode_residual(line, P, 0.5, 1e-7), Error);
  EXPECT_THROW(ode_residual(line, P, 1e-3, 1e-3), Error);
  EXPECT_THROW(ode_residual(line, P, 0.0, ResidualOptions{}), Error);
  ResidualOptions five{DerivativeScheme::five_point};
  EXPECT_THROW(ode_residual(line, P, 0.5, ResidualOptions{DerivativeScheme::five_point, 1e-2}), Error);
  EXPECT_LT(std::abs(ode_residual(line, P, 0.5, five)), 1e-9);
}

TEST(OdeResidual, ContourSchemeIsExactForPolynomials) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  const Representation line = [](complex z) { return 1.0 - z; };
  for (const complex z : {complex(0.05), complex(1.2, 0.4), complex(-1.7, 1.1)})
    EXPECT_LT(std::abs(ode_residual(line, P, z, ResidualOptions{})), 1e-13);
  // a cubic exercises the second derivative
  const BiconfluentParams Q(complex(0.3, 0.1), complex(-0.4, 0.2), complex(0.5, 0.5), complex(0.7, -0.1), complex(0.9, 0.2));
  const Representation cubic = [](complex z) { return z * z * z; };
  const complex z{0.8, 0.3}, s = Q.s;
  const complex lhs = z * 6.0 * z + (Q.p0 + Q.p1 * s * z - 2.0 * s * s * z * z) * 3.0 * z * z +
                      (Q.q0 * s + Q.q1 * s * s * z) * z * z * z;
  EXPECT_LT(std::abs(ode_residual(cubic, Q, z, ResidualOptions{}) - lhs / std::max(1.0, std::abs(z * z * z))), 1e-12);
}

TEST(OdeReferenceSolve, PolynomialSolution) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  EXPECT_LT(std::abs(ode_reference_solve(P, 0.5, 0.5, -1.0, 1.5) - (-0.5)), 1e-8);
  EXPECT_LT(std::abs(ode_reference_solve(P, 0.5, 0.5, -1.0, complex(1.0, 1.0)) - complex(0.0, -1.0)), 1e-8);
  EXPECT_EQ(ode_reference_solve(P, complex(0.3, 0.2), complex(4.0, 1.0), 7.0, complex(0.3, 0.2)), complex(4.0, 1.0));
}

TEST(OdeReferenceSolve, StepHalvingIsStable) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  const complex a = ode_reference_solve(P, 0.5, 0.5, -1.0, complex(1.5, 0.5), 200);
  const complex b = ode_reference_solve(P, 0.5, 0.5, -1.0, complex(1.5, 0.5), 400);
  EXPECT_LT(rel(a, b), 1e-9);
}

TEST(OdeReferenceSolve, Preconditions) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  try {
    ode_reference_solve(P, -0.5, 1.5, -1.0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_path);
  }
  EXPECT_THROW(ode_reference_solve(P, 0.5, 0.5, -1.0, 1.5, 99), Error);
}

TEST(OdeReferenceSolve, MatchesFirstOrderHermiteSum) {
  const complex p1{0.3, -0.2}, q1{0.7, 0.4};
  for (const auto& q0 : hermite_spectrum(p1, q1, 1).admissible_q0) {
    const BiconfluentParams P(-1.0, p1, q0, q1);
    const auto exp = HermiteExpansion::from_params(P);
    const Representation h = hermite_rep(exp);
    const complex z0{0.6, 0.2}, z1{1.4, -0.5};
    const complex got = ode_reference_solve(P, z0, h(z0), central_derivative(h, z0), z1);
    EXPECT_LT(rel(got, h(z1)), 1e-7);
  }
}

TEST(CrossValidate, ThreeConstructionsOfOneSolution) {
  // p0 = -1 and q1 = 2 make the polynomial and Hermite spectra coincide at N = 1
  const complex p1{0.35, -0.15};
  const auto roots = frobenius_spectrum(-1.0, p1, 1).admissible_q0;
  ASSERT_EQ(roots.size(), 2u);
  for (const auto& q0 : roots) {
    const BiconfluentParams P(-1.0, p1, q0, 2.0);
    const auto exp = HermiteExpansion::from_params(P);
    const auto report = cross_validate(
        P, {{"frobenius", frobenius_rep(P, 1)}, {"hermite", hermite_rep(exp)}, {"ghg", ghg_rep(exp)}},
        {complex(0.9, 0.4), 0.7, 20, 0.1});
    EXPECT_TRUE(report.passed);
    EXPECT_EQ(report.pairwise_dev.size(), 3u);
    for (const auto& [name, dev] : report.pairwise_dev) EXPECT_LT(dev, 1e-9) << name;
    EXPECT_LT(report.residual_max, 1e-8);
    EXPECT_EQ(report.residual_by_representation.size(), 3u);
  }
}

TEST(CrossValidate, SelfComparisonAndReportShape) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  const Representation line = [](complex z) { return 1.0 - z; };
  const auto report = cross_validate(P, {{"a", line}, {"b", line}}, {complex(-0.5, 0.5), 0.3, 12, 0.1});
  EXPECT_EQ(report.pairwise_dev.at("a vs b"), 0.0);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.residual_points.size(), 12u);
  for (std::size_t i = 1; i < report.residual_points.size(); ++i)
    EXPECT_LE(std::abs(report.residual_points[i - 1].first), std::abs(report.residual_points[i].first));
}

TEST(CrossValidate, Errors) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  const Representation line = [](complex z) { return 1.0 - z; };
  try {
    cross_validate(P, {{"line", line}}, {complex(1.0), 0.3, 12, 0.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::normalization_failure);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
  EXPECT_THROW(cross_validate(P, {}, {}), Error);
}

TEST(CrossValidate, ToleranceDrivesVerdict) {
  const BiconfluentParams P(1.0, 1.0, 1.0, 2.0, 1.0);
  const Representation line = [](complex z) { return 1.0 - z; };
  const Representation bent = [](complex z) { return 1.0 - z + 1e-6 * z * z; };
  ToleranceConfig loose;
  loose.tol_validate = 1e-3;
  const SampleSpec spec{complex(-0.5, 0.5), 0.3, 12, 0.1};
  EXPECT_FALSE(cross_validate(P, {{"line", line}, {"bent", bent}}, spec).passed);
  EXPECT_TRUE(cross_validate(P, {{"line", line}, {"bent", bent}}, spec, loose).passed);
}

TEST(CrossValidate, PerturbedAccessoryParameterIsCaught) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> mag(1e-3, 1e-2), angle(0.0, 2.0 * std::numbers::pi);
  const SampleSpec spec{complex(1.0, 0.5), 0.8, 20, 0.1};
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 1 + trial % 3;
    const complex p1 = support::disc(rng), q1 = support::disc(rng);
    const auto roots = hermite_spectrum(p1, q1, N).admissible_q0;
    const complex q0 = roots[trial % roots.size()] + std::polar(mag(rng), angle(rng));
    const BiconfluentParams P(static_cast<double>(-N), p1, q0, q1);
    const auto exp = HermiteExpansion::from_params(P);
    const Representation h = hermite_rep(exp);
    const auto report =
        cross_validate(P, {{"hermite", h}, {"integration", integration_representation(P, h, spec.center)}}, spec);
    EXPECT_FALSE(report.passed);
    EXPECT_GT(report.pairwise_dev.at("hermite vs integration"), 1e-4) << "trial " << trial;
  }
}

TEST(Residual, EveryFiniteSolutionUpToOrderFour) {
  const complex p0{0.4, -0.3}, p1{0.3, -0.2}, q1{0.7, 0.4}, s{0.9, 0.3};
  const auto pts = annulus_points(0.1, 2.0, 20, 0.3);
  for (const auto& cs : support::frobenius_cases(4, p0, p1, s)) {
    const Representation f = frobenius_rep(cs.params, cs.N);
    for (const auto& z : pts) EXPECT_LT(std::abs(ode_residual(f, cs.params, z, ResidualOptions{})), 1e-8) << cs.N;
  }
  for (const auto& cs : support::hermite_cases(4, p1, q1, s)) {
    const Representation h = hermite_rep(HermiteExpansion::from_params(cs.params));
    for (const auto& z : pts) EXPECT_LT(std::abs(ode_residual(h, cs.params, z, ResidualOptions{})), 1e-8) << cs.N;
  }
}

TEST(SamplePoints, LayoutStaysInsideTheRegion) {
  const auto disc = sample_points({complex(1.0, -1.0), 0.5, 30, 0.1});
  ASSERT_EQ(disc.size(), 30u);
  for (const auto& z : disc) EXPECT_LE(std::abs(z - complex(1.0, -1.0)), 0.5);
  for (const auto& z : annulus_points(0.1, 2.0, 40)) {
    EXPECT_GE(std::abs(z), 0.1 - 1e-15);
    EXPECT_LE(std::abs(z), 2.0 + 1e-15);
  }
}
