#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "biheun/frobenius.hpp"

namespace biheun {

using Representation = std::function<complex(complex)>;

struct NamedRepresentation {
  std::string name;
  Representation fn;
};

/// Disc of sample points. Points closer to the origin than min_abs_z are
/// used for comparisons but skipped by the residual check.
struct SampleSpec {
  complex center;
  double radius = 1.0;
  int count = 20;
  double min_abs_z = 0.1;
};

struct ValidationReport {
  double residual_max = 0.0;
  std::vector<std::pair<complex, double>> residual_points;  // sorted by |z|
  std::map<std::string, double> residual_by_representation;
  std::map<std::string, double> pairwise_dev;
  double tolerance = 0.0;
  bool passed = false;

  void finalize(double tol) {
    tolerance = tol;
    std::sort(residual_points.begin(), residual_points.end(),
              [](const auto& a, const auto& b) { return std::abs(a.first) < std::abs(b.first); });
    passed = residual_max <= tol;
    for (const auto& [name, dev] : pairwise_dev) passed = passed && dev <= tol;
  }
};

/// Deterministic sunflower layout: count points filling the disc uniformly.
inline std::vector<complex> sample_points(const SampleSpec& spec) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<complex> pts;
  pts.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    const double r = spec.radius * std::sqrt((i + 0.5) / spec.count);
    pts.push_back(spec.center + std::polar(r, golden * i));
  }
  return pts;
}

/// Points on the annulus r_min <= |z| <= r_max, same sunflower ordering.
inline std::vector<complex> annulus_points(double r_min, double r_max, int count, double phase = 0.0) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<complex> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double u = (i + 0.5) / count;
    const double r = std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
    pts.push_back(std::polar(r, phase + golden * i));
  }
  return pts;
}

enum class DerivativeScheme {
  five_point,  // central differences with step h
  contour,     // trapezoidal Cauchy integral on a circle of radius r
};

struct ResidualOptions {
  DerivativeScheme scheme = DerivativeScheme::contour;
  double h = 1e-3;
  double radius = 0.05;  // clipped to |z| / 2 so the circle avoids z = 0
  int nodes = 32;
};

namespace detail {

inline complex equation_lhs(const BiconfluentParams& params, complex z, complex f0, complex d1, complex d2) {
  const complex s = params.s;
  const complex lhs = z * d2 + (params.p0 + params.p1 * s * z - 2.0 * s * s * z * z) * d1 +
                      (params.q0 * s + params.q1 * s * s * z) * f0;
  return lhs / std::max(1.0, std::abs(f0));
}

}  // namespace detail

/// Left side of the biconfluent Heun equation at z, derivatives from
/// five-point central differences, divided by max(1, |phi(z)|).
inline complex ode_residual(const Representation& phi, const BiconfluentParams& params, complex z,
                            double h = 1e-3) {
  if (h < 1e-6 || h > 1e-3) throw Error(ErrorKind::invalid_argument, "step h must lie in [1e-6, 1e-3]");
  if (std::abs(z) <= 2.0 * h) throw Error(ErrorKind::invalid_argument, "z too close to the singular point 0");
  const complex fm2 = phi(z - 2.0 * h), fm1 = phi(z - h), f0 = phi(z), fp1 = phi(z + h), fp2 = phi(z + 2.0 * h);
  const complex d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  const complex d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  return detail::equation_lhs(params, z, f0, d1, d2);
}

/// Same residual with a selectable derivative scheme. The contour scheme
/// samples phi on a circle around z and is limited by rounding at the
/// 1e-13 level instead of the ~1e-8 floor of the five-point stencil.
inline complex ode_residual(const Representation& phi, const BiconfluentParams& params, complex z,
                            const ResidualOptions& opt) {
  if (opt.scheme == DerivativeScheme::five_point) return ode_residual(phi, params, z, opt.h);
  if (z == complex{}) throw Error(ErrorKind::invalid_argument, "z = 0 is the singular point");
  const double r = std::min(opt.radius, std::abs(z) / 2.0);
  const int m = std::max(opt.nodes, 8);
  complex d1{}, d2{};
  for (int j = 0; j < m; ++j) {
    const complex w = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
    const complex v = phi(z + r * w);
    d1 += v / w;
    d2 += v / (w * w);
  }
  d1 /= m * r;
  d2 *= 2.0 / (m * r * r);
  return detail::equation_lhs(params, z, phi(z), d1, d2);
}

/// Five-point central difference of phi at z.
inline complex central_derivative(const Representation& phi, complex z, double h = 1e-3) {
  return (phi(z - 2.0 * h) - 8.0 * phi(z - h) + 8.0 * phi(z + h) - phi(z + 2.0 * h)) / (12.0 * h);
}

struct OdeState {
  complex phi, dphi;
};

namespace detail {

inline double segment_distance_to_origin(complex z0, complex z1) {
  const complex dir = z1 - z0;
  const double len2 = std::norm(dir);
  if (len2 == 0.0) return std::abs(z0);
  const double t = std::clamp(-(std::conj(z0) * dir).real() / len2, 0.0, 1.0);
  return std::abs(z0 + t * dir);
}

}  // namespace detail

/// Integrate the equation along the straight segment z0 -> z1.
///
/// Classical RK4 in the segment parameter with step-doubling error control;
/// the step never exceeds 1/steps of the segment.
inline OdeState ode_reference_integrate(const BiconfluentParams& params, complex z0, complex phi0, complex dphi0,
                                        complex z1, int steps = 200, double tol = 1e-10) {
  if (steps < 100) throw Error(ErrorKind::invalid_argument, "steps must be at least 100");
  if (z1 == z0) return {phi0, dphi0};
  if (detail::segment_distance_to_origin(z0, z1) < 1e-3)
    throw Error(ErrorKind::singular_path, "integration segment passes within 1e-3 of z = 0");

  const complex dir = z1 - z0;
  const complex s = params.s;
  auto rhs = [&](double t, const OdeState& y) {
    const complex z = z0 + t * dir;
    const complex d2 = -((params.p0 + params.p1 * s * z - 2.0 * s * s * z * z) * y.dphi +
                         (params.q0 * s + params.q1 * s * s * z) * y.phi) / z;
    return OdeState{dir * y.dphi, dir * d2};
  };
  auto rk4 = [&](double t, const OdeState& y, double dt) {
    auto add = [](const OdeState& a, const OdeState& b, double c) {
      return OdeState{a.phi + c * b.phi, a.dphi + c * b.dphi};
    };
    const OdeState k1 = rhs(t, y);
    const OdeState k2 = rhs(t + dt / 2, add(y, k1, dt / 2));
    const OdeState k3 = rhs(t + dt / 2, add(y, k2, dt / 2));
    const OdeState k4 = rhs(t + dt, add(y, k3, dt));
    return OdeState{y.phi + dt / 6 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi),
                    y.dphi + dt / 6 * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi)};
  };

  const double dt_max = 1.0 / steps;
  double t = 0.0, dt = dt_max;
  OdeState y{phi0, dphi0};
  int guard = 0;
  while (t < 1.0) {
    if (++guard > 10'000'000) throw Error(ErrorKind::non_convergence, "step size collapsed");
    dt = std::min(dt, 1.0 - t);
    const OdeState full = rk4(t, y, dt);
    const OdeState half = rk4(t + dt / 2, rk4(t, y, dt / 2), dt / 2);
    const double scale = std::max({1.0, std::abs(half.phi), std::abs(half.dphi)});
    const double err = std::max(std::abs(half.phi - full.phi), std::abs(half.dphi - full.dphi)) / (15.0 * scale);
    if (err <= tol || dt < 1e-12) {
      t += dt;
      y = {half.phi + (half.phi - full.phi) / 15.0, half.dphi + (half.dphi - full.dphi) / 15.0};
      const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
      dt = std::min(dt_max, dt * std::clamp(grow, 0.2, 2.0));
    } else {
      dt *= std::clamp(0.9 * std::pow(tol / err, 0.2), 0.1, 0.5);
    }
  }
  return y;
}

inline complex ode_reference_solve(const BiconfluentParams& params, complex z0, complex phi0, complex dphi0,
                                   complex z1, int steps = 200) {
  return ode_reference_integrate(params, z0, phi0, dphi0, z1, steps).phi;
}

/// A representation obtained by integrating the equation from z0, with
/// initial data read off seed (value and five-point derivative).
inline Representation integration_representation(const BiconfluentParams& params, const Representation& seed,
                                                  complex z0, int steps = 200) {
  const complex phi0 = seed(z0);
  const complex dphi0 = central_derivative(seed, z0);
  return [params, z0, phi0, dphi0, steps](complex z) {
    return ode_reference_solve(params, z0, phi0, dphi0, z, steps);
  };
}

/// Compare representations of one solution after scaling each to 1 at the
/// disc center, and check each against the equation.
inline ValidationReport cross_validate(const BiconfluentParams& params, const std::vector<NamedRepresentation>& reps,
                                       const SampleSpec& spec, const ToleranceConfig& cfg = {},
                                       const ResidualOptions& residual = {}) {
  if (reps.empty()) throw Error(ErrorKind::invalid_argument, "need at least one representation");
  std::vector<complex> center_values;
  for (const auto& r : reps) {
    const complex v = r.fn(spec.center);
    if (std::abs(v) < 1e-12)
      throw Error(ErrorKind::normalization_failure, "representation '" + r.name + "' vanishes at the center");
    center_values.push_back(v);
  }

  const auto points = sample_points(spec);
  std::vector<std::vector<complex>> values(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (const auto& z : points) values[i].push_back(reps[i].fn(z) / center_values[i]);

  ValidationReport report;
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      double dev = 0.0;
      for (std::size_t k = 0; k < points.size(); ++k) {
        const double scale = std::max(std::abs(values[i][k]), std::abs(values[j][k]));
        if (scale > 0.0) dev = std::max(dev, std::abs(values[i][k] - values[j][k]) / scale);
      }
      report.pairwise_dev[reps[i].name + " vs " + reps[j].name] = dev;
    }

  for (const auto& z : points) {
    if (std::abs(z) < spec.min_abs_z || std::abs(z) <= 2.0 * residual.h) continue;
    double worst = 0.0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const complex c = center_values[i];
      const Representation scaled = [&, c](complex w) { return reps[i].fn(w) / c; };
      const double r = std::abs(ode_residual(scaled, params, z, residual));
      auto& slot = report.residual_by_representation[reps[i].name];
      slot = std::max(slot, r);
      worst = std::max(worst, r);
    }
    report.residual_points.emplace_back(z, worst);
    report.residual_max = std::max(report.residual_max, worst);
  }
  report.finalize(cfg.tol_validate);
  return report;
}

}  // namespace biheun
