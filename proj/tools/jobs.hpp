#pragma once

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "biheun/biheun.hpp"

namespace biheun::cli {

using json = nlohmann::ordered_json;

inline constexpr int max_order = 12;

/// Bad user input; field names the offending flag or variable.
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// "re,im" or a bare real number.
inline complex parse_complex(const std::string& text, const std::string& field) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InputError(field, "expected 're,im', got '" + text + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw InputError(field, "expected 're,im', got '" + text + "'");
    return v;
  };
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {to_double(text), 0.0};
  if (text.find(',', comma + 1) != std::string::npos) throw InputError(field, "too many components in '" + text + "'");
  return {to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
}

struct JobSpec {
  std::string command;
  std::string family = "hermite";
  std::optional<complex> p0, p1, q0, q1;
  complex s{1.0};
  std::optional<int> N;
  int root = 0;
  std::vector<complex> z;
  SampleSpec sample{{1.0, 0.5}, 0.8, 20, 0.1};
  std::string format = "json";
  std::optional<std::string> out;
  ToleranceConfig tol;
  unsigned seed = 1;
  int draws = 200;
};

namespace detail {

// adding 0.0 folds -0.0 into +0.0 so reports do not flicker between signs
inline json to_json(complex c) { return json::array({c.real() + 0.0, c.imag() + 0.0}); }

inline json to_json(const std::vector<complex>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(to_json(c));
  return a;
}

inline json tolerance_json(const ToleranceConfig& t) {
  return json{{"tol_root", t.tol_root}, {"tol_series", t.tol_series}, {"max_terms", t.max_terms},
              {"tol_validate", t.tol_validate}};
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v + 0.0;
  return os.str();
}

inline std::string normalization_name(Normalization n) {
  switch (n) {
    case Normalization::leading_unit: return "leading_unit";
    case Normalization::first_nonzero: return "first_nonzero";
    case Normalization::seeded: return "seeded";
  }
  return "?";
}

inline int require_order(const JobSpec& job) {
  if (!job.N) throw InputError("--N", "required for '" + job.command + "'");
  if (*job.N < 0 || *job.N > max_order)
    throw InputError("--N", "must lie in [0, " + std::to_string(max_order) + "]");
  return *job.N;
}

inline complex require(const std::optional<complex>& v, const std::string& field, const JobSpec& job) {
  if (!v) throw InputError(field, "required for '" + job.command + "'");
  return *v;
}

/// A concrete solution selected by family, order and accessory parameter.
struct SolutionCase {
  std::string family;
  int N = 0;
  BiconfluentParams params{0.0, 0.0, 0.0, 0.0};
  SpectrumResult spectrum;
  bool admissible = false;
  double char_poly_residual = 0.0;
  std::optional<HermiteExpansion> hermite;
  std::optional<HypergeomCombination> combination;
  CoefficientSeries polynomial;
  std::vector<NamedRepresentation> reps;
};

inline complex horner_z(const CoefficientSeries& c, complex z) {
  complex acc{};
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

inline SolutionCase build_case(const JobSpec& job) {
  if (job.family != "hermite" && job.family != "frobenius")
    throw InputError("--family", "must be 'hermite' or 'frobenius'");
  const int N = require_order(job);
  SolutionCase sc;
  sc.family = job.family;
  sc.N = N;

  complex p0, q1;
  const complex p1 = require(job.p1, "--p1", job);
  if (job.family == "hermite") {
    q1 = require(job.q1, "--q1", job);
    p0 = static_cast<double>(-N);
    if (job.p0 && std::abs(*job.p0 - p0) > 1e-12) throw InputError("--p0", "hermite family fixes p0 = -N");
    sc.spectrum = hermite_spectrum(p1, q1, N, job.tol);
  } else {
    p0 = require(job.p0, "--p0", job);
    q1 = 2.0 * N;
    if (job.q1 && std::abs(*job.q1 - q1) > 1e-12) throw InputError("--q1", "frobenius family fixes q1 = 2N");
    sc.spectrum = frobenius_spectrum(p0, p1, N, job.tol);
  }

  complex q0;
  if (job.q0) {
    q0 = *job.q0;
  } else {
    if (job.root < 0 || job.root >= static_cast<int>(sc.spectrum.admissible_q0.size()))
      throw InputError("--root", "index out of range [0, " + std::to_string(sc.spectrum.admissible_q0.size()) + ")");
    q0 = sc.spectrum.admissible_q0[job.root];
  }
  double scale = 0.0;
  complex power{1.0};
  for (const auto& c : sc.spectrum.char_poly.coeffs()) {
    scale += std::abs(c * power);
    power *= q0;
  }
  const double value = std::abs(sc.spectrum.char_poly(q0));
  sc.char_poly_residual = value == 0.0 ? 0.0 : value / scale;
  sc.admissible = sc.char_poly_residual <= 1e-8;
  sc.params = BiconfluentParams(p0, p1, q0, q1, job.s);

  const ToleranceConfig cfg = job.tol;
  if (job.family == "hermite") {
    sc.hermite = HermiteExpansion::from_params(sc.params);
    sc.combination = build_ghg_solution(*sc.hermite, cfg);
    const auto exp = *sc.hermite;
    const auto comb = *sc.combination;
    const auto taylor = power_reexpansion(exp, 80, cfg);
    sc.reps.push_back({"hermite", [exp, cfg](complex z) { return evaluate_hermite_series(exp, z, cfg); }});
    sc.reps.push_back({"ghg", [comb, cfg](complex z) { return evaluate_combination(comb, z, cfg); }});
    sc.reps.push_back({"taylor", [taylor](complex z) { return horner_z(taylor, z); }});
  } else {
    sc.polynomial = frobenius_coefficients(sc.params, N + 1);
    const auto poly = sc.polynomial;
    const auto series = frobenius_coefficients(sc.params, 400);
    const auto params = sc.params;
    sc.reps.push_back({"polynomial", [poly, params, cfg](complex z) { return evaluate_frobenius(poly, params, z, cfg); }});
    sc.reps.push_back({"series", [series, params, cfg](complex z) { return evaluate_frobenius(series, params, z, cfg); }});
  }
  return sc;
}

inline json case_json(const SolutionCase& sc) {
  json j{{"family", sc.family},
         {"N", sc.N},
         {"params",
          {{"p0", to_json(sc.params.p0)},
           {"p1", to_json(sc.params.p1)},
           {"q0", to_json(sc.params.q0)},
           {"q1", to_json(sc.params.q1)},
           {"s", to_json(sc.params.s)},
           {"beta", to_json(sc.params.beta())}}},
         {"admissible", sc.admissible},
         {"char_poly_residual", sc.char_poly_residual}};
  return j;
}

struct Report {
  json body;
  std::string csv;
  bool passed = true;
};

inline std::string csv_header(const JobSpec& job) {
  std::ostringstream os;
  os << "# biheun " << version << " command=" << job.command << " tol_root=" << fmt(job.tol.tol_root)
     << " tol_series=" << fmt(job.tol.tol_series) << " max_terms=" << job.tol.max_terms
     << " tol_validate=" << fmt(job.tol.tol_validate) << "\n";
  return os.str();
}

inline Report spectrum_job(const JobSpec& job, bool hermite_family) {
  const int N = require_order(job);
  const complex p1 = require(job.p1, "--p1", job);
  SpectrumResult sp;
  json params;
  if (hermite_family) {
    const complex q1 = require(job.q1, "--q1", job);
    sp = hermite_spectrum(p1, q1, N, job.tol);
    params = {{"p0", to_json(complex(-N))}, {"p1", to_json(p1)}, {"q1", to_json(q1)}};
  } else {
    const complex p0 = require(job.p0, "--p0", job);
    sp = frobenius_spectrum(p0, p1, N, job.tol);
    params = {{"p0", to_json(p0)}, {"p1", to_json(p1)}, {"q1", to_json(complex(2.0 * N))}};
  }
  Report r;
  json vecs = json::array();
  std::ostringstream csv;
  csv << "root_index,q0_re,q0_im";
  for (int i = 0; i <= N; ++i) csv << ",v" << i << "_re,v" << i << "_im";
  csv << ",normalization\n";
  for (std::size_t i = 0; i < sp.admissible_q0.size(); ++i) {
    const auto& v = sp.eigenvectors[i];
    vecs.push_back({{"values", to_json(v.values)}, {"normalization", normalization_name(v.normalization)}});
    csv << i << "," << fmt(sp.admissible_q0[i].real()) << "," << fmt(sp.admissible_q0[i].imag());
    for (const auto& c : v.values) csv << "," << fmt(c.real()) << "," << fmt(c.imag());
    csv << "," << normalization_name(v.normalization) << "\n";
  }
  r.body = {{"N", N},
            {"params", params},
            {"char_poly", to_json(sp.char_poly.coeffs())},
            {"roots", to_json(sp.admissible_q0)},
            {"eigenvectors", vecs}};
  r.csv = csv.str();
  return r;
}

inline json term_json(const HypergeomTerm& t) {
  return json{{"upper", to_json(t.upper)},
              {"lower", to_json(t.lower)},
              {"prefactor", to_json(t.prefactor)},
              {"xi_power", t.xi_power},
              {"operator_roots", to_json(t.operator_roots)}};
}

inline Report construct_job(const JobSpec& job) {
  if (job.family != "hermite") throw InputError("--family", "construct requires the hermite family");
  const SolutionCase sc = build_case(job);
  const auto& comb = *sc.combination;
  Report r;
  r.passed = sc.admissible;
  json terms = json::array();
  std::ostringstream csv;
  csv << "group,field,index,re,im\n";
  auto row = [&](std::string_view g, std::string_view f, std::size_t i, complex c) {
    csv << g << "," << f << "," << i << "," << fmt(c.real()) << "," << fmt(c.imag()) << "\n";
  };
  for (int g = 0; g < 4; ++g) {
    const auto group = static_cast<TermGroup>(g);
    const auto name = to_string(group);
    if (!comb.terms[g]) {
      terms.push_back({{"group", name}, {"present", false}});
      continue;
    }
    json t = term_json(*comb.terms[g]);
    t["group"] = name;
    t["present"] = true;
    t["constant"] = to_json(comb.constants[g]);
    t["lambdas"] = to_json(comb.lambdas[g]);
    terms.push_back(t);
    const auto& term = *comb.terms[g];
    row(name, "prefactor", 0, term.prefactor);
    row(name, "constant", 0, comb.constants[g]);
    row(name, "xi_power", 0, complex(term.xi_power));
    for (std::size_t i = 0; i < term.upper.size(); ++i) row(name, "upper", i, term.upper[i]);
    for (std::size_t i = 0; i < term.lower.size(); ++i) row(name, "lower", i, term.lower[i]);
    for (std::size_t i = 0; i < term.operator_roots.size(); ++i) row(name, "operator_root", i, term.operator_roots[i]);
  }
  for (std::size_t i = 0; i < sc.hermite->d().size(); ++i) row("d", "coefficient", i, sc.hermite->d()[i]);

  // consistency with the Hermite sum on the default disc
  double dev = 0.0;
  for (const auto& z : sample_points(job.sample)) {
    const complex a = sc.reps[0].fn(z), b = sc.reps[1].fn(z);
    dev = std::max(dev, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
  }
  r.passed = r.passed && dev <= job.tol.tol_validate;

  r.body = case_json(sc);
  r.body["d"] = to_json(sc.hermite->d().values);
  r.body["xi_transform"] = {{"scale", to_json(sc.params.s)}, {"shift", to_json(-sc.params.p1 / 2.0)}};
  r.body["terms"] = terms;
  r.body["hermite_deviation"] = dev;
  r.csv = csv.str();
  return r;
}

inline Report eval_job(const JobSpec& job) {
  if (job.z.empty()) throw InputError("--z", "at least one point is required");
  const SolutionCase sc = build_case(job);
  Report r;
  r.passed = sc.admissible;
  json samples = json::array();
  std::ostringstream csv;
  csv << "z_re,z_im";
  for (const auto& rep : sc.reps) csv << "," << rep.name << "_re," << rep.name << "_im";
  csv << "\n";
  for (const auto& z : job.z) {
    json values = json::object();
    csv << fmt(z.real()) << "," << fmt(z.imag());
    for (const auto& rep : sc.reps) {
      const complex v = rep.fn(z);
      values[rep.name] = to_json(v);
      csv << "," << fmt(v.real()) << "," << fmt(v.imag());
    }
    csv << "\n";
    samples.push_back({{"z", to_json(z)}, {"values", values}});
  }
  r.body = case_json(sc);
  r.body["samples"] = samples;
  r.csv = csv.str();
  return r;
}

inline Report validate_job(const JobSpec& job) {
  if (job.sample.count < 1) throw InputError("--count", "must be positive");
  if (!(job.sample.radius > 0.0)) throw InputError("--radius", "must be positive");
  SolutionCase sc = build_case(job);
  auto reps = sc.reps;
  reps.push_back({"integration", integration_representation(sc.params, reps.front().fn, job.sample.center)});
  const ValidationReport v = cross_validate(sc.params, reps, job.sample, job.tol);

  Report r;
  r.passed = v.passed && sc.admissible;
  json points = json::array();
  for (const auto& [z, res] : v.residual_points) points.push_back({{"z", to_json(z)}, {"residual", res}});
  std::ostringstream csv;
  csv << "kind,name,value\n";
  for (const auto& [name, res] : v.residual_by_representation) csv << "residual," << name << "," << fmt(res) << "\n";
  for (const auto& [name, dev] : v.pairwise_dev) csv << "pairwise," << name << "," << fmt(dev) << "\n";
  csv << "summary,residual_max," << fmt(v.residual_max) << "\n";
  csv << "summary,passed," << (r.passed ? 1 : 0) << "\n";
  r.body = case_json(sc);
  r.body["sample"] = {{"center", to_json(job.sample.center)},
                      {"radius", job.sample.radius},
                      {"count", job.sample.count},
                      {"min_abs_z", job.sample.min_abs_z}};
  r.body["residual_max"] = v.residual_max;
  r.body["residual_by_representation"] = v.residual_by_representation;
  r.body["pairwise_dev"] = v.pairwise_dev;
  r.body["residual_points"] = points;
  r.body["passed"] = r.passed;
  r.csv = csv.str();
  return r;
}

/// Random-draw check of the contiguous shift identities: the general
/// collapse for N = 1..3, its closed-form N = 1 root and the N = 2 quadratic.
inline Report identity_job(const JobSpec& job) {
  if (job.draws < 1) throw InputError("--draws", "must be positive");
  std::mt19937_64 rng(job.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto disc = [&] {
    for (;;) {
      const complex c{unit(rng), unit(rng)};
      if (std::abs(c) <= 1.0) return c;
    }
  };
  auto rel = [](complex a, complex b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };

  double collapse = 0.0, linear = 0.0, quadratic = 0.0;
  int accepted = 0, rejected = 0;
  for (int draw = 0; draw < job.draws; ++draw) {
    const int order = 1 + draw % 3;
    CombinationInput in{make_term({disc()}, {disc() + 1.5}), {}};
    for (int n = 0; n <= order; ++n) in.b.push_back(disc());
    HypergeomTerm combined;
    try {
      combined = combine_shifted(in, job.tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_root) throw;
      ++rejected;
      --draw;
      if (rejected > 10 * job.draws) throw;
      continue;
    }
    if (combined.operator_form()) {
      ++rejected;
      --draw;
      continue;
    }
    ++accepted;
    for (int k = 0; k < 5; ++k) {
      const complex z = disc();
      collapse = std::max(collapse, rel(shifted_sum(in, z, job.tol), combined.prefactor * pfq_eval(combined, z, job.tol)));
    }
    const complex a = in.base.upper.front();
    const auto lambdas = shift_parameters(in, job.tol);
    if (order == 1) {
      linear = std::max(linear, rel(lambdas.front(), a * (1.0 + in.b[0] / in.b[1])));
    } else if (order == 2) {
      const auto& b = in.b;
      for (const auto& l : lambdas) {
        const complex v = b[2] * l * (l + 1.0) / (a * (a + 1.0)) - (b[1] + 2.0 * b[2]) * l / a + (b[0] + b[1] + b[2]);
        const double scale = std::abs(b[2] * l * (l + 1.0) / (a * (a + 1.0))) + std::abs((b[1] + 2.0 * b[2]) * l / a) +
                             std::abs(b[0] + b[1] + b[2]);
        quadratic = std::max(quadratic, std::abs(v) / scale);
      }
    }
  }
  const double tol = 1e-9;
  Report r;
  r.passed = collapse < tol && linear < tol && quadratic < tol;
  r.body = {{"seed", job.seed},
            {"draws", accepted},
            {"rejected", rejected},
            {"threshold", tol},
            {"deviations", {{"shift_collapse", collapse}, {"first_order_root", linear}, {"second_order_roots", quadratic}}},
            {"passed", r.passed}};
  std::ostringstream csv;
  csv << "identity,max_deviation,draws,passed\n";
  csv << "shift_collapse," << fmt(collapse) << "," << accepted << "," << (collapse < tol) << "\n";
  csv << "first_order_root," << fmt(linear) << "," << accepted << "," << (linear < tol) << "\n";
  csv << "second_order_roots," << fmt(quadratic) << "," << accepted << "," << (quadratic < tol) << "\n";
  r.csv = csv.str();
  return r;
}

inline std::string render(const JobSpec& job, Report r, const std::optional<Error>& failure) {
  if (job.format == "csv") {
    std::string text = csv_header(job);
    if (failure) text += std::string("# error ") + failure->what() + "\n";
    return text + r.csv;
  }
  json doc{{"version", version}, {"command", job.command}, {"tolerances", tolerance_json(job.tol)}};
  if (failure) {
    doc["status"] = "error";
    doc["error"] = {{"kind", to_string(failure->kind())}, {"message", failure->what()}};
  } else {
    doc["status"] = r.passed ? "passed" : "failed";
    doc["report"] = std::move(r.body);
  }
  return doc.dump(2) + "\n";
}

inline void add_complex(CLI::App* app, const std::string& name, std::optional<complex>& target, std::string& store,
                        const std::string& help) {
  app->add_option(name, store, help + " (re,im)")->each([&target, name](const std::string& v) {
    target = parse_complex(v, name);
  });
}

}  // namespace detail

/// Parse argv, execute one job and write the report. Returns the exit status:
/// 0 when all checks pass, 1 on numerical failure, 2 on bad input.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  JobSpec job;
  CLI::App app{"Solutions of the biconfluent Heun equation", "biheun"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  std::string p0s, p1s, q0s, q1s, ss, centers;
  std::vector<std::string> zs;
  std::optional<double> tol_validate;
  std::optional<complex> s_opt, center_opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", job.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", job.out, "also write the report to this file");
    sub->add_option("--tol-validate", tol_validate, "validation tolerance");
  };
  auto params = [&](CLI::App* sub) {
    detail::add_complex(sub, "--p0", job.p0, p0s, "p0");
    detail::add_complex(sub, "--p1", job.p1, p1s, "p1");
    detail::add_complex(sub, "--q0", job.q0, q0s, "accessory parameter q0; overrides --root");
    detail::add_complex(sub, "--q1", job.q1, q1s, "q1");
    detail::add_complex(sub, "--s", s_opt, ss, "scale s, default 1");
    sub->add_option("--N", job.N, "termination order");
  };
  auto solution = [&](CLI::App* sub) {
    params(sub);
    sub->add_option("--family", job.family, "hermite (p0 = -N) or frobenius (q1 = 2N)");
    sub->add_option("--root", job.root, "index into the sorted spectrum");
  };

  auto* spectrum = app.add_subcommand("spectrum", "q0 spectrum for polynomial solutions (q1 = 2N)");
  auto* hspectrum = app.add_subcommand("hermite-spectrum", "q0 spectrum for terminated Hermite sums (p0 = -N)");
  auto* construct = app.add_subcommand("construct", "four-term hypergeometric form of a terminated Hermite sum");
  auto* eval = app.add_subcommand("eval", "evaluate every representation at the given points");
  auto* validate = app.add_subcommand("validate", "cross-validate representations and the equation residual");
  auto* identity = app.add_subcommand("identity-check", "random checks of the contiguous shift identities");
  for (auto* sub : {spectrum, hspectrum}) {
    common(sub);
    params(sub);
  }
  for (auto* sub : {construct, eval, validate}) {
    common(sub);
    solution(sub);
  }
  eval->add_option("--z", zs, "evaluation point (re,im); repeatable");
  detail::add_complex(validate, "--center", center_opt, centers, "sample disc center");
  validate->add_option("--radius", job.sample.radius, "sample disc radius");
  validate->add_option("--count", job.sample.count, "number of sample points");
  common(identity);
  identity->add_option("--seed", job.seed, "random seed");
  identity->add_option("--draws", job.draws, "number of random parameter draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  }

  try {
    job.command = app.get_subcommands().front()->get_name();
    if (s_opt) job.s = *s_opt;
    if (job.s == complex{}) throw InputError("--s", "must be nonzero");
    if (center_opt) job.sample.center = *center_opt;
    for (const auto& z : zs) job.z.push_back(parse_complex(z, "--z"));
    if (const char* env = std::getenv("BIHEUN_TOL_VALIDATE")) {
      const complex v = parse_complex(env, "BIHEUN_TOL_VALIDATE");
      if (v.imag() != 0.0 || !(v.real() > 0.0)) throw InputError("BIHEUN_TOL_VALIDATE", "must be a positive number");
      job.tol.tol_validate = v.real();
    }
    if (tol_validate) job.tol.tol_validate = *tol_validate;
    try {
      job.tol.validate();
    } catch (const Error& e) {
      throw InputError("--tol-validate", e.what());
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  }

  detail::Report report;
  std::optional<Error> failure;
  try {
    if (job.command == "spectrum") report = detail::spectrum_job(job, false);
    else if (job.command == "hermite-spectrum") report = detail::spectrum_job(job, true);
    else if (job.command == "construct") report = detail::construct_job(job);
    else if (job.command == "eval") report = detail::eval_job(job);
    else if (job.command == "validate") report = detail::validate_job(job);
    else report = detail::identity_job(job);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "numerical failure (" << to_string(e.kind()) << "): " << e.what() << "\n";
    failure = e;
  }

  const std::string text = detail::render(job, report, failure);
  out << text;
  if (job.out) {
    std::ofstream file(*job.out, std::ios::binary);
    if (!file) {
      err << "cannot open " << *job.out << " for writing\n";
      return 2;
    }
    file << text;
  }
  if (failure) return 1;
  if (!report.passed) err << "checks failed\n";
  return report.passed ? 0 : 1;
}

}  // namespace biheun::cli
