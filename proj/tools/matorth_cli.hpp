#pragma once

// Command-line front end. run_cli() holds all logic so tests can drive it
// in-process; exit codes: 0 verdict pass, 2 verdict fail, 1 usage or parameter error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matorth/matorth.hpp"
#include "report.hpp"

namespace matorth::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

struct RunConfig {
  std::string command;
  std::string family = "hermite31";
  double a = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double k = 0.5;
  int size = 2;
  std::vector<double> nu;
  double nu_last = 1.0;
  double t0 = 0.0;
  std::string branch = "plus";
  std::string limit_rule = "printed";
  double gamma = 1.0;
  double zeta = 0.0;
  int n_max = 30;
  int n = 12;
  int order = 2;
  int basis_n_max = -1;
  double tolerance = kSymmetryTolerance;
  bool tolerance_set = false;
  double x = 0.5;
  int terms = 60;
  double from = -3.0;
  double to = 3.0;
  int points = 61;
  bool numeric = false;
  std::string output;
  std::string format = "json";
};

inline Family resolve_family(const RunConfig& c) {
  if (c.family == "hermite31") return Hermite31{c.a};
  if (c.family == "laguerre32") return Laguerre32{c.a, c.alpha};
  if (c.family == "jacobi33") return Jacobi33{c.alpha, c.beta, c.k};
  if (c.family == "general34") {
    if (c.size < 2) throw DomainError("general34: N must be at least 2");
    return General34{c.size, c.alpha, c.nu.empty() ? nu_chain_solve(c.size, c.nu_last) : c.nu};
  }
  if (c.family == "scalar-hermite") return ScalarHermite{};
  if (c.family == "scalar-laguerre") return ScalarLaguerre{c.alpha};
  if (c.family == "scalar-jacobi") return ScalarJacobi{c.alpha, c.beta};
  throw DomainError("unknown family '" + c.family + "'");
}

inline bool is_scalar(const Family& f) {
  return std::holds_alternative<ScalarHermite>(f) || std::holds_alternative<ScalarLaguerre>(f) ||
         std::holds_alternative<ScalarJacobi>(f);
}

inline Branch resolve_branch(const RunConfig& c) {
  if (c.branch == "plus") return Branch::plus;
  if (c.branch == "minus") return Branch::minus;
  throw DomainError("branch must be plus or minus");
}

inline LimitRule resolve_rule(const RunConfig& c) {
  if (c.limit_rule == "printed") return LimitRule::printed;
  if (c.limit_rule == "continuous") return LimitRule::continuous;
  throw DomainError("limit rule must be printed or continuous");
}

inline Json config_json(const RunConfig& c, const Family& f) {
  Json j = Json::object();
  j["command"] = c.command;
  j["family"] = family_name(f);
  Json p = Json::object();
  if (const auto* h = std::get_if<Hermite31>(&f)) p["a"] = h->a;
  if (const auto* l = std::get_if<Laguerre32>(&f)) {
    p["a"] = l->a;
    p["alpha"] = l->alpha;
  }
  if (const auto* q = std::get_if<Jacobi33>(&f)) {
    p["alpha"] = q->alpha;
    p["beta"] = q->beta;
    p["k"] = q->k;
  }
  if (const auto* g = std::get_if<General34>(&f)) {
    p["N"] = g->n;
    p["alpha"] = g->alpha;
    p["nu"] = g->nu;
  }
  if (const auto* s = std::get_if<ScalarLaguerre>(&f)) p["alpha"] = s->alpha;
  if (const auto* s = std::get_if<ScalarJacobi>(&f)) {
    p["alpha"] = s->alpha;
    p["beta"] = s->beta;
  }
  j["params"] = p;
  j["t0"] = c.t0;
  j["branch"] = c.branch;
  j["limit_rule"] = c.limit_rule;
  j["gamma"] = c.gamma;
  j["zeta"] = c.zeta;
  j["n_max"] = c.n_max;
  j["n"] = c.n;
  j["tolerance"] = c.tolerance;
  j["output"] = c.output.empty() ? "-" : c.output;
  j["format"] = c.format;
  return j;
}

/// Operator and atom for a family: catalog pair for matrix families, classical
/// operator and no atom for scalar ones.
struct Setup {
  Family family;
  WeightMatrix base;
  WeightMatrix weight;
  DiffOperator op;
  std::optional<Matrix> mass;
};

inline Setup make_setup(const RunConfig& c) {
  const Family f = resolve_family(c);
  const WeightMatrix base = make_family(f);
  if (is_scalar(f)) {
    if (c.zeta != 0.0) throw DomainError("scalar families carry no mass point; use --zeta 0");
    return {f, base, base.scaled(c.gamma), classical_operator(f), std::nullopt};
  }
  const auto entry = catalog(f, c.t0, resolve_branch(c), resolve_rule(c));
  const WeightMatrix w = base.with_atom(c.t0, entry.mass, c.gamma, c.zeta);
  return {f, base, w, entry.op, entry.mass};
}

inline Json mass_conditions_json(const MassConditionReport& r) {
  Json j = Json::object();
  j["annihilation"] = r.annihilation;
  j["commutation"] = r.commutation;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict;
  return j;
}

// ---------------------------------------------------------------------------
// Subcommands; each fills `report` and returns the verdict.

inline bool cmd_families(const RunConfig&, Json& report) {
  Json list = Json::array();
  auto add = [&](const char* id, const char* params, const char* domain, const char* support) {
    Json f = Json::object();
    f["id"] = id;
    f["parameters"] = params;
    f["domain"] = domain;
    f["support"] = support;
    list.push_back(f);
  };
  add("hermite31", "a", "a != 0", "(-inf, inf)");
  add("laguerre32", "a, alpha", "a != 0, alpha > -1", "(0, inf)");
  add("jacobi33", "alpha, beta, k", "alpha, beta > -1, 0 < k < beta + 1; closed form at alpha = beta = 0, k = 1/2",
      "(0, 1)");
  add("general34", "N, alpha, nu", "N >= 2, alpha > -1, nu_i != 0 on the nu-chain; t0 = 0", "(0, inf)");
  add("scalar-hermite", "", "", "(-inf, inf)");
  add("scalar-laguerre", "alpha", "alpha > -1", "(0, inf)");
  add("scalar-jacobi", "alpha, beta", "alpha, beta > -1", "(0, 1)");
  report["families"] = list;
  return true;
}

inline bool cmd_check_symmetry(const RunConfig& c, Json& report) {
  const Setup s = make_setup(c);
  report["config"] = config_json(c, s.family);
  const auto sym = moment_equation_residual(s.weight, s.op, c.n_max, c.tolerance);
  report["operator"] = operator_json(s.op);
  if (s.mass) {
    report["mass"] = matrix_json(*s.mass);
    report["mass_conditions"] = mass_conditions_json(theorem22_report(s.op, c.t0, *s.mass));
  }
  report["max_residual"] = sym.max_residual;
  report["bilinear_residual"] = bilinear_symmetry_residual(s.weight, s.op, std::min(c.n_max / 2, 10));
  Json table = Json::array();
  for (const auto& e : sym.table) {
    Json row = Json::object();
    row["l"] = e.l;
    row["n"] = e.n;
    row["relative"] = e.relative;
    table.push_back(row);
  }
  report["table"] = table;
  report["verdict"] = sym.verdict;
  return sym.verdict;
}

inline bool cmd_orthopoly(const RunConfig& c, Json& report) {
  const Setup s = make_setup(c);
  report["config"] = config_json(c, s.family);
  const auto mu = moments(s.weight, 2 * c.n + 2);
  const auto seq = monic_sequence(mu, c.n);
  const auto rec = recurrence_coeffs(seq, mu);
  Json polys = Json::array();
  for (int n = 0; n <= seq.max_degree(); ++n) {
    Json p = Json::object();
    p["n"] = n;
    p["coefficients"] = poly_json(seq.polys[n]);
    p["norm"] = matrix_json(seq.norms[n]);
    p["hankel_condition"] = seq.condition[n];
    if (n < seq.max_degree()) {
      p["E"] = matrix_json(rec.e[n]);
      p["F"] = matrix_json(rec.f[n]);
      p["recurrence_residual"] = rec.residual[n];
    }
    polys.push_back(p);
  }
  report["polynomials"] = polys;
  report["max_recurrence_residual"] = rec.max_residual;
  const bool ok = rec.max_residual <= c.tolerance;
  report["verdict"] = ok;
  return ok;
}

inline bool cmd_verify_eigen(const RunConfig& c, Json& report) {
  const Setup s = make_setup(c);
  report["config"] = config_json(c, s.family);
  const double tol = c.tolerance_set ? c.tolerance : 1e-8;
  const auto seq = monic_sequence(s.weight, c.n);
  const auto rep = verify_eigen(seq, s.op, tol);
  Json blocks = Json::array();
  for (int n = 0; n <= seq.max_degree(); ++n) {
    Json b = Json::object();
    b["n"] = n;
    b["gamma_n"] = matrix_json(rep.gamma[n]);
    b["residual"] = rep.residual[n];
    blocks.push_back(b);
  }
  report["eigenvalues"] = blocks;
  report["max_residual"] = rep.max_residual;
  report["verdict"] = rep.verdict;
  return rep.verdict;
}

inline bool cmd_find_basis(const RunConfig& c, Json& report) {
  const Family f = resolve_family(c);
  report["config"] = config_json(c, f);
  const WeightMatrix w = make_family(f).scaled(c.gamma);
  const auto space = operator_space(w, c.order, c.basis_n_max);
  Json basis = Json::array();
  const int held_out = space.n_max + 4;
  const auto mu = moments(w, held_out, std::max(held_out, kDefaultMaxMomentOrder));
  double worst = 0.0;
  for (const auto& d : space.basis) {
    basis.push_back(operator_json(d));
    worst = std::max(worst, moment_equation_residual(mu, d, held_out).max_residual);
  }
  report["order"] = c.order;
  report["n_max"] = space.n_max;
  report["dimension"] = space.basis.size();
  report["unknowns"] = space.unknowns;
  report["equations"] = space.equations;
  report["singular_values"] = std::vector<double>(space.singular_values.data(),
                                                  space.singular_values.data() + space.singular_values.size());
  report["held_out_residual"] = worst;
  report["basis"] = basis;
  const bool ok = !space.basis.empty() && worst <= std::max(c.tolerance, 1e-8);
  report["verdict"] = ok;
  return ok;
}

inline bool cmd_find_mass(const RunConfig& c, Json& report) {
  const Family f = resolve_family(c);
  report["config"] = config_json(c, f);
  const double tol = c.tolerance_set ? c.tolerance : 1e-8;
  if (c.numeric) {
    const auto basis = find_operator_basis(make_family(f), 2);
    const auto all = find_operator_and_mass_all(basis, c.t0);
    Json cands = Json::array();
    for (const auto& cand : all) {
      Json j = Json::object();
      j["operator"] = operator_json(cand.op);
      j["mass"] = matrix_json(cand.mass);
      j["residual"] = cand.residual;
      cands.push_back(j);
    }
    report["basis_dimension"] = basis.size();
    report["candidates"] = cands;
    report["verdict"] = !all.empty();
    return !all.empty();
  }
  const DiffOperator op = is_scalar(f) ? classical_operator(f)
                                       : catalog(f, c.t0, resolve_branch(c), resolve_rule(c)).op;
  const auto m = find_mass(op, c.t0);
  report["operator"] = operator_json(op);
  report["found"] = m.has_value();
  if (!m) {
    report["verdict"] = false;
    return false;
  }
  report["mass"] = matrix_json(*m);
  bool ok = theorem22_check(op, c.t0, *m, kMassTolerance * 1e3);
  if (!is_scalar(f)) {
    const Matrix ref = catalog_mass(f, c.t0, resolve_branch(c));
    const Matrix refn = ref / ref.norm();
    const double dev = (*m - refn).norm();
    report["closed_form_mass"] = matrix_json(refn);
    report["closed_form_deviation"] = dev;
    ok = ok && dev <= tol;
  }
  report["verdict"] = ok;
  return ok;
}

inline bool cmd_cone_reconstruct(const RunConfig& c, Json& report) {
  const Setup s = make_setup(c);
  report["config"] = config_json(c, s.family);
  if (!s.mass) throw DomainError("cone-reconstruct needs a matrix family with a mass point");
  const Matrix mu0 = c.gamma * moment(s.base, 0) + c.zeta * *s.mass;
  const auto rec = moment_recursion(s.op, mu0, c.n_max);
  const auto dec = cone_reconstruct(s.op, rec, s.base, c.t0, *s.mass);
  report["mu0_space_dimension"] = solve_mu0_space(s.op.coefficient(0, 0)).size();
  report["gamma"] = dec.gamma;
  report["zeta"] = dec.zeta;
  report["mu0_residual"] = dec.mu0_residual;
  report["match_residual"] = dec.match_residual;
  report["symmetry_residual"] = dec.symmetry_residual;
  report["is_weight"] = dec.is_weight;
  const double tol = c.tolerance_set ? c.tolerance : 1e-8;
  const bool ok = dec.match_residual <= tol && std::abs(dec.gamma - c.gamma) <= tol * std::max(1.0, c.gamma) &&
                  std::abs(dec.zeta - c.zeta) <= tol * std::max(1.0, std::abs(c.zeta)) && dec.is_weight;
  report["verdict"] = ok;
  return ok;
}

inline bool cmd_moments(const RunConfig& c, Json& report) {
  const Setup s = make_setup(c);
  report["config"] = config_json(c, s.family);
  const auto mu = moments(s.weight, c.n_max);
  Json list = Json::array();
  for (int n = 0; n <= mu.max_order(); ++n) list.push_back(matrix_json(mu[n]));
  report["moments"] = list;
  report["max_asymmetry"] = mu.max_asymmetry();
  const bool ok = mu.max_asymmetry() <= 1e-12;
  report["verdict"] = ok;
  return ok;
}

inline bool cmd_fourier_check(const RunConfig& c, Json& report) {
  const Family f = resolve_family(c);
  if (!std::holds_alternative<Hermite31>(f)) throw DomainError("fourier-check supports hermite31 only");
  report["config"] = config_json(c, f);
  const auto r = fourier_check(c.a, c.gamma, c.zeta, c.x, c.terms, c.t0, resolve_branch(c));
  report["x"] = c.x;
  report["terms"] = c.terms;
  report["closed_form"] = complex_matrix_json(r.closed_form);
  report["series"] = complex_matrix_json(r.series);
  report["deviation"] = r.deviation;
  report["growth"] = r.growth;
  report["growth_decays"] = r.decays;
  const double tol = c.tolerance_set ? c.tolerance : 1e-8;
  const bool ok = r.deviation <= tol && r.decays;
  report["verdict"] = ok;
  return ok;
}

// ---------------------------------------------------------------------------

inline void add_family_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--family", c.family, "hermite31 | laguerre32 | jacobi33 | general34 | scalar-hermite | "
                                        "scalar-laguerre | scalar-jacobi");
  sub->add_option("--a", c.a, "a (nu_1 for general34 when --nu is absent and N = 2)");
  sub->add_option("--alpha", c.alpha, "alpha");
  sub->add_option("--beta", c.beta, "beta");
  sub->add_option("--k", c.k, "k (jacobi33)");
  sub->add_option("--N", c.size, "size N (general34)");
  sub->add_option("--nu", c.nu, "nu_1..nu_{N-1}, comma separated")->delimiter(',');
  sub->add_option("--nu-last", c.nu_last, "nu_{N-1}; the rest follow the nu-chain");
  sub->add_option("--t0", c.t0, "mass point location");
  sub->add_option("--branch", c.branch, "plus | minus (root selecting the mass)");
  sub->add_option("--limit-rule", c.limit_rule, "printed | continuous (jacobi33 at t0 = 1)");
  sub->add_option("--gamma", c.gamma, "scale of the continuous part");
  sub->add_option("--zeta", c.zeta, "scale of the mass point");
  sub->add_option("--tol", c.tolerance, "verdict tolerance (overrides MATORTH_TOL)");
  sub->add_option("--output,-o", c.output, "report path (default: standard output)");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  if (const char* env = std::getenv("MATORTH_TOL")) {
    std::istringstream is(env);
    is.imbue(std::locale::classic());
    double t = 0.0;
    if (!(is >> t) || !(t > 0.0)) {
      err << "matorth: MATORTH_TOL must be a positive number\n";
      return kExitUsage;
    }
    c.tolerance = t;
    c.tolerance_set = true;
  }
  CLI::App app{"Matrix orthogonal polynomials: symmetry, mass points and cones", "matorth"};
  app.require_subcommand(1);
  struct Sub {
    const char* name;
    const char* help;
    bool (*fn)(const RunConfig&, Json&);
  };
  const std::vector<Sub> subs{
      {"families", "list the weight families", cmd_families},
      {"check-symmetry", "moment-equation symmetry of the catalog operator for gamma W + zeta delta M",
       cmd_check_symmetry},
      {"orthopoly", "monic orthogonal polynomials, norms and recurrence", cmd_orthopoly},
      {"verify-eigen", "eigenfunction check P_n D = Gamma_n P_n", cmd_verify_eigen},
      {"find-basis", "numeric basis of symmetric operators", cmd_find_basis},
      {"find-mass", "mass point for the catalog operator (or a numeric search)", cmd_find_mass},
      {"cone-reconstruct", "moment recursion and (gamma, zeta) reconstruction", cmd_cone_reconstruct},
      {"moments", "closed-form moments", cmd_moments},
      {"density-grid", "density entries on a grid as CSV", nullptr},
      {"fourier-check", "Fourier transform against the moment series", cmd_fourier_check},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->callback([&c, name = std::string(s.name)] { c.command = name; });
    apps.push_back(sub);
    if (std::string(s.name) == "families") {
      sub->add_option("--output,-o", c.output, "report path");
      continue;
    }
    add_family_options(sub, c);
    const std::string name = s.name;
    if (name == "check-symmetry" || name == "moments" || name == "cone-reconstruct") {
      sub->add_option("--nmax", c.n_max, "highest moment order");
    }
    if (name == "orthopoly" || name == "verify-eigen") sub->add_option("--n", c.n, "highest degree");
    if (name == "find-basis") {
      sub->add_option("--order", c.order, "operator order k");
      sub->add_option("--nmax", c.basis_n_max, "highest moment equation (default 2(k+1)N^2 + k, at most 40)");
    }
    if (name == "find-mass") sub->add_flag("--numeric", c.numeric, "search the numeric operator basis");
    if (name == "fourier-check") {
      sub->add_option("--x", c.x, "evaluation point, |x| <= 2");
      sub->add_option("--terms", c.terms, "series terms, at most 80");
    }
    if (name == "density-grid") {
      sub->add_option("--from", c.from, "first grid point");
      sub->add_option("--to", c.to, "last grid point");
      sub->add_option("--points", c.points, "number of grid points");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "matorth: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  const auto explicit_tol = [&] {
    for (auto* sub : apps) {
      if (sub->parsed() && sub->get_option_no_throw("--tol") != nullptr && sub->count("--tol") > 0) return true;
    }
    return false;
  }();
  if (explicit_tol) c.tolerance_set = true;

  std::ostringstream buffer;
  bool verdict = false;
  try {
    if (c.command == "density-grid") {
      c.format = "csv";
      const Setup s = make_setup(c);
      if (c.points < 2) throw DomainError("density-grid: need at least 2 points");
      std::vector<double> grid;
      for (int i = 0; i < c.points; ++i) grid.push_back(c.from + (c.to - c.from) * i / (c.points - 1));
      write_density_csv(s.weight, grid, buffer);
      verdict = true;
    } else {
      Json report = Json::object();
      for (const auto& s : subs) {
        if (c.command == s.name) verdict = s.fn(c, report);
      }
      write_json(report, buffer);
      buffer << "\n";
    }
  } catch (const DomainError& e) {
    err << "matorth: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeMismatch& e) {
    err << "matorth: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotPSD& e) {
    err << "matorth: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ExcludedPoint& e) {
    err << "matorth: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    // Numerical failures (ill conditioning, shared spectra, rank changes) are verdicts.
    Json report = Json::object();
    report["command"] = c.command;
    report["error"] = e.what();
    report["verdict"] = false;
    write_json(report, buffer);
    buffer << "\n";
    verdict = false;
  }
  if (c.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
      err << "matorth: cannot write " << c.output << "\n";
      return kExitUsage;
    }
    f << buffer.str();
  }
  return verdict ? kExitPass : kExitFail;
}

}  // namespace matorth::cli
