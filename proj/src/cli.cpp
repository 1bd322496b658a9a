#include "pm/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pm/errors.hpp"
#include "pm/geometry.hpp"
#include "pm/omega.hpp"
#include "pm/operators.hpp"
#include "pm/parse.hpp"
#include "pm/rational.hpp"
#include "pm/restrict.hpp"
#include "pm/star.hpp"
#include "pm/verify.hpp"

namespace pm {
namespace {

// Malformed flag values (numbers, points, expressions, sweep grammar) are
// usage errors: exit code 2, message on err. Library exceptions raised by
// the computation itself map to exit code 1 with a structured error object.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt17(std::complex<double> v) { return fmt17(v.real()) + " " + fmt17(v.imag()); }

GaussianRational parse_scalar(const std::string& flag, const std::string& text) {
  try {
    return gaussian_from_string(text);
  } catch (const SyntaxError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

ProjectiveCoord parse_slot(const std::string& flag, const std::string& text) {
  if (text == "inf") return ProjectiveCoord::infinity();
  return ProjectiveCoord::finite(parse_scalar(flag, text));
}

// "z;w" with slots "a+bi" or "inf"; the comma shorthand "x,y" names two real
// finite slots (matching the scalar flag syntax would make it one complex
// number, but a point flag always needs both coordinates).
ExtPoint2 parse_point(const std::string& flag, const std::string& text) {
  auto semi = text.find(';');
  if (semi != std::string::npos)
    return {parse_slot(flag, text.substr(0, semi)), parse_slot(flag, text.substr(semi + 1))};
  auto comma = text.find(',');
  if (comma != std::string::npos) {
    try {
      return ExtPoint2(GaussianRational(rational_from_string(text.substr(0, comma))),
                       GaussianRational(rational_from_string(text.substr(comma + 1))));
    } catch (const SyntaxError& e) {
      throw UsageError(flag + ": " + e.what());
    }
  }
  throw UsageError(flag + ": expected 'z;w' (slots 'a+bi' or 'inf') or 'x,y' with x, y real");
}

OmegaFunction parse_expr_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_expression(text);
  } catch (const SyntaxError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

DeriveMethod method_from_name(const std::string& name) {
  if (name == "definition") return DeriveMethod::definition;
  if (name == "explicit") return DeriveMethod::explicit_sum;
  if (name == "recursion") return DeriveMethod::recursion;
  if (name == "laplace") return DeriveMethod::laplace;
  if (name == "pure") return DeriveMethod::pure_linearised;
  throw UsageError("--method: unknown method '" + name + "'");
}

int env_max_terms() {
  const char* v = std::getenv("PM_MAX_TERMS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  long val = std::strtol(v, &end, 10);
  if (end == nullptr || *end != '\0' || val <= 0)
    throw UsageError("PM_MAX_TERMS: expected a positive integer");
  return static_cast<int>(val);
}

// Series evaluation knobs shared by star, star-disk, star-sphere and the
// sweep engine. The environment budget applies only when the flag is absent.
struct SeriesFlags {
  std::string hbar = "1/10";
  double tol = 1e-12;
  std::string mode = "certified";
  int max_terms = 0;
  double radius = 0.0;
  bool max_terms_given = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--hbar", hbar, "deformation parameter ('a+bi' or 'a,b')");
    cmd->add_option("--tol", tol, "absolute truncation tolerance");
    cmd->add_option("--mode", mode, "tail bound mode")
        ->check(CLI::IsMember({"certified", "successive"}));
    cmd->add_option("--max-terms", max_terms, "series term budget (overrides PM_MAX_TERMS)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--radius", radius, "Cauchy circle radius (0 = automatic)")
        ->check(CLI::NonNegativeNumber);
  }

  StarParams params() const {
    StarParams p;
    p.hbar = parse_scalar("--hbar", hbar);
    p.abs_tol = tol;
    p.mode = mode == "successive" ? TailMode::successive_term : TailMode::certified_geometric;
    p.radius = radius;
    if (max_terms_given)
      p.max_terms = max_terms;
    else if (int e = env_max_terms(); e > 0)
      p.max_terms = e;
    return p;
  }
};

void print_star_result(const StarResult& r, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << r.to_json().dump(2) << "\n";
    return;
  }
  out << "value: " << fmt17(r.value) << "\n";
  out << "tail_bound: " << fmt17(r.tail_bound) << "\n";
  out << "terms: " << r.terms_used << "\n";
  out << "mode: "
      << (r.mode == TailMode::certified_geometric ? "certified_geometric" : "successive_term")
      << "\n";
}

struct Sweep {
  double start = 0.0;
  double end = 0.0;
  bool log = true;
  int count = 1;
};

// Grammar: hbar=START:END:log|lin:COUNT.
Sweep parse_sweep(const std::string& text) {
  auto bad = [&] { return UsageError("--sweep: expected 'hbar=START:END:log|lin:COUNT', got '" + text + "'"); };
  auto eq = text.find('=');
  if (eq == std::string::npos || text.substr(0, eq) != "hbar") throw bad();
  std::vector<std::string> parts;
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (true) {
    auto colon = rest.find(':', pos);
    if (colon == std::string::npos) {
      parts.push_back(rest.substr(pos));
      break;
    }
    parts.push_back(rest.substr(pos, colon - pos));
    pos = colon + 1;
  }
  if (parts.size() != 4) throw bad();
  Sweep s;
  try {
    std::size_t used = 0;
    s.start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw bad();
    s.end = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw bad();
    s.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (parts[2] == "log")
    s.log = true;
  else if (parts[2] == "lin")
    s.log = false;
  else
    throw bad();
  if (s.count < 1) throw UsageError("--sweep: COUNT must be at least 1");
  if (!(s.start > 0.0) || !(s.end > 0.0))
    throw UsageError("--sweep: magnitudes must be positive");
  return s;
}

double sweep_magnitude(const Sweep& s, int i) {
  if (s.count == 1) return s.start;
  double t = static_cast<double>(i) / (s.count - 1);
  return s.log ? s.start * std::pow(s.end / s.start, t) : s.start + (s.end - s.start) * t;
}

void emit_error(const Error& e, const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["error"]["kind"] = e.kind();
    j["error"]["message"] = e.what();
    out << j.dump(2) << "\n";
    return;
  }
  out << "error[" << e.kind() << "]: " << e.what() << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant derivative calculus and convergent star products on the domain zw != 1",
               "pm"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string expr, f_text, g_text, at_text, z_text, method = "explicit";
  std::string slot = "z", sweep_text, ray_text = "1", suite;
  int m = 0, n = 0, big_n = 2, cutoff = 6;
  bool n_given = false;
  unsigned long long seed = 0;
  SeriesFlags series;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* c_derive = app.add_subcommand("derive", "Apply the invariant derivative D^{m,n}");
  c_derive->add_option("--expr", expr, "operand expression")->required();
  c_derive->add_option("--m", m, "z-order")->check(CLI::NonNegativeNumber);
  c_derive->add_option("--n", n, "w-order")->check(CLI::NonNegativeNumber);
  c_derive->add_option("--method", method, "evaluation pathway")
      ->check(CLI::IsMember({"definition", "explicit", "recursion", "laplace", "pure"}));
  add_format(c_derive);

  CLI::App* c_tilde = app.add_subcommand("tilde", "Apply the conjugate-weight derivative");
  c_tilde->add_option("--expr", expr, "operand expression")->required();
  c_tilde->add_option("--m", m, "z-order")->check(CLI::NonNegativeNumber);
  c_tilde->add_option("--n", n, "w-order")->check(CLI::NonNegativeNumber);
  add_format(c_tilde);

  CLI::App* c_poly = app.add_subcommand("poly", "Factorization polynomial P_{m,n}");
  c_poly->add_option("--m", m, "z-order")->required()->check(CLI::NonNegativeNumber);
  CLI::Option* poly_n =
      c_poly->add_option("--n", n, "w-order (defaults to --m)")->check(CLI::NonNegativeNumber);
  add_format(c_poly);

  CLI::App* c_kernel = app.add_subcommand("kernel", "Kernel generators of a pure derivative");
  c_kernel->add_option("--n", n, "annihilated order (kernel of the (n+1)-st pure derivative)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  c_kernel->add_option("--slot", slot, "pure slot")->check(CLI::IsMember({"z", "w"}));
  c_kernel->add_option("--cutoff", cutoff, "monomial grid cutoff")->check(CLI::PositiveNumber);
  add_format(c_kernel);

  CLI::App* c_star = app.add_subcommand("star", "Evaluate f * g at a point");
  c_star->add_option("--f", f_text, "left operand")->required();
  c_star->add_option("--g", g_text, "right operand")->required();
  c_star->add_option("--at", at_text, "evaluation point 'z;w' or 'x,y'")->required();
  series.attach(c_star);
  add_format(c_star);

  CLI::App* c_disk = app.add_subcommand("star-disk", "Diagonal star product on the unit disk");
  c_disk->add_option("--f", f_text, "left operand (two-variable expression)")->required();
  c_disk->add_option("--g", g_text, "right operand (two-variable expression)")->required();
  c_disk->add_option("--z", z_text, "diagonal base point ('a+bi' or 'a,b')")->required();
  series.attach(c_disk);
  add_format(c_disk);

  CLI::App* c_sphere = app.add_subcommand("star-sphere", "Diagonal star product on the sphere");
  c_sphere->add_option("--f", f_text, "left operand (two-variable expression)")->required();
  c_sphere->add_option("--g", g_text, "right operand (two-variable expression)")->required();
  c_sphere->add_option("--z", z_text, "diagonal base point ('a+bi' or 'a,b')")->required();
  series.attach(c_sphere);
  add_format(c_sphere);

  CLI::App* c_asym = app.add_subcommand("asym", "Semiclassical coefficients and remainder sweeps");
  c_asym->add_option("--f", f_text, "left operand")->required();
  c_asym->add_option("--g", g_text, "right operand")->required();
  c_asym->add_option("--N", big_n, "expansion order")->check(CLI::NonNegativeNumber);
  c_asym->add_option("--sweep", sweep_text, "magnitude sweep 'hbar=START:END:log|lin:COUNT'");
  c_asym->add_option("--at", at_text, "evaluation point (required with --sweep)");
  c_asym->add_option("--ray", ray_text, "ray direction multiplying each magnitude");
  series.attach(c_asym);
  add_format(c_asym);

  CLI::App* c_poisson = app.add_subcommand("poisson", "Poisson bracket {f, g}");
  c_poisson->add_option("--f", f_text, "left operand")->required();
  c_poisson->add_option("--g", g_text, "right operand")->required();
  add_format(c_poisson);

  CLI::App* c_eval = app.add_subcommand("eval", "Evaluate an expression at a point");
  c_eval->add_option("--expr", expr, "expression")->required();
  c_eval->add_option("--at", at_text, "evaluation point 'z;w' or 'x,y'")->required();
  add_format(c_eval);

  CLI::App* c_verify = app.add_subcommand("verify", "Run a property suite");
  c_verify->add_option("suite", suite, "suite name")->required();
  c_verify->add_option("--seed", seed, "corpus generator seed");
  add_format(c_verify);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  n_given = poly_n->count() > 0;
  series.max_terms_given =
      c_star->count("--max-terms") + c_disk->count("--max-terms") +
          c_sphere->count("--max-terms") + c_asym->count("--max-terms") >
      0;

  try {
    if (c_derive->parsed()) {
      OmegaFunction r =
          pm_derive(parse_expr_flag("--expr", expr), m, n, method_from_name(method));
      if (format == "json")
        out << r.to_json().dump(2) << "\n";
      else
        out << r.str() << "\n";
    } else if (c_tilde->parsed()) {
      OmegaFunction r = pm_tilde(parse_expr_flag("--expr", expr), m, n);
      if (format == "json")
        out << r.to_json().dump(2) << "\n";
      else
        out << r.str() << "\n";
    } else if (c_poly->parsed()) {
      IntPolynomial p = laplace_poly(m, n_given ? n : m);
      if (format == "json") {
        nlohmann::ordered_json j;
        j["m"] = m;
        j["n"] = n_given ? n : m;
        j["coefficients"] = nlohmann::ordered_json::array();
        for (const Integer& c : p.coeffs) j["coefficients"].push_back(c.get_str());
        out << j.dump(2) << "\n";
      } else {
        out << "[";
        for (std::size_t i = 0; i < p.coeffs.size(); ++i)
          out << (i ? ", " : "") << p.coeffs[i].get_str();
        out << "]\n";
      }
    } else if (c_kernel->parsed()) {
      std::vector<OmegaFunction> basis = kernel_basis(n, slot[0], cutoff);
      KernelRankReport rank = kernel_rank_check(n, slot[0], cutoff);
      if (format == "json") {
        nlohmann::ordered_json j;
        j["n"] = n;
        j["slot"] = slot;
        j["cutoff"] = cutoff;
        j["generators"] = nlohmann::ordered_json::array();
        for (const OmegaFunction& g : basis) j["generators"].push_back(g.to_json());
        j["space_dim"] = rank.space_dim;
        j["rank"] = rank.rank;
        j["kernel_dim"] = rank.kernel_dim;
        j["expected_dim"] = rank.expected_dim;
        j["complete"] = rank.complete;
        out << j.dump(2) << "\n";
      } else {
        out << "generators: " << basis.size() << "\n";
        for (const OmegaFunction& g : basis) out << g.str() << "\n";
        out << "space_dim: " << rank.space_dim << "\n";
        out << "rank: " << rank.rank << "\n";
        out << "kernel_dim: " << rank.kernel_dim << "\n";
        out << "expected_dim: " << rank.expected_dim << "\n";
        out << "complete: " << (rank.complete ? "true" : "false") << "\n";
      }
    } else if (c_star->parsed()) {
      StarResult r = star_eval(parse_expr_flag("--f", f_text), parse_expr_flag("--g", g_text),
                               parse_point("--at", at_text), series.params());
      print_star_result(r, format, out);
    } else if (c_disk->parsed() || c_sphere->parsed()) {
      DiagonalPoint base;
      base.z = parse_scalar("--z", z_text);
      base.target = c_disk->parsed() ? Target::disk : Target::sphere;
      OmegaFunction f = parse_expr_flag("--f", f_text);
      OmegaFunction g = parse_expr_flag("--g", g_text);
      StarResult r = c_disk->parsed() ? star_disk(f, g, base, series.params())
                                      : star_sphere(f, g, base, series.params());
      print_star_result(r, format, out);
    } else if (c_asym->parsed()) {
      OmegaFunction f = parse_expr_flag("--f", f_text);
      OmegaFunction g = parse_expr_flag("--g", g_text);
      std::vector<OmegaFunction> coeffs = asym_coeffs(f, g, big_n);
      if (sweep_text.empty()) {
        if (format == "json") {
          nlohmann::ordered_json j;
          j["N"] = big_n;
          j["coefficients"] = nlohmann::ordered_json::array();
          for (const OmegaFunction& c : coeffs) j["coefficients"].push_back(c.to_json());
          out << j.dump(2) << "\n";
        } else {
          for (std::size_t k = 0; k < coeffs.size(); ++k)
            out << "a_" << k << ": " << coeffs[k].str() << "\n";
        }
      } else {
        Sweep sw = parse_sweep(sweep_text);
        if (at_text.empty()) throw UsageError("--sweep requires --at");
        ExtPoint2 p = parse_point("--at", at_text);
        GaussianRational ray = parse_scalar("--ray", ray_text);
        if (ray.is_zero()) throw UsageError("--ray: must be nonzero");
        std::vector<GaussianRational> cvals;
        cvals.reserve(coeffs.size());
        for (const OmegaFunction& c : coeffs) cvals.push_back(c.evaluate(p));
        StarParams params = series.params();
        out << "hbar_abs,hbar_re,hbar_im,value_re,value_im,remainder\n";
        for (int i = 0; i < sw.count; ++i) {
          // Rational(double) is exact, so the grid point survives verbatim
          // into the exact series arithmetic.
          GaussianRational h = GaussianRational(Rational(sweep_magnitude(sw, i))) * ray;
          params.hbar = h;
          StarResult r = star_eval(f, g, p, params);
          GaussianRational partial;
          for (std::size_t k = 0; k < cvals.size(); ++k) partial += cvals[k] * h.pow(static_cast<long>(k));
          double rem = r.exact ? std::abs((r.value_exact - partial).to_complex())
                               : std::abs(r.value - partial.to_complex());
          std::complex<double> hc = h.to_complex();
          out << fmt17(std::abs(hc)) << "," << fmt17(hc.real()) << "," << fmt17(hc.imag())
              << "," << fmt17(r.value.real()) << "," << fmt17(r.value.imag()) << ","
              << fmt17(rem) << "\n";
        }
      }
    } else if (c_poisson->parsed()) {
      OmegaFunction r =
          poisson_bracket(parse_expr_flag("--f", f_text), parse_expr_flag("--g", g_text));
      if (format == "json")
        out << r.to_json().dump(2) << "\n";
      else
        out << r.str() << "\n";
    } else if (c_eval->parsed()) {
      OmegaFunction f = parse_expr_flag("--expr", expr);
      GaussianRational v = f.evaluate(parse_point("--at", at_text));
      if (format == "json") {
        nlohmann::ordered_json j;
        j["exact"] = v.str();
        j["approx"] = {v.to_complex().real(), v.to_complex().imag()};
        out << j.dump(2) << "\n";
      } else {
        out << "exact: " << v.str() << "\n";
        out << "approx: " << fmt17(v.to_complex()) << "\n";
      }
    } else if (c_verify->parsed()) {
      SuiteReport rep = run_suite(suite, seed);
      if (format == "json")
        out << rep.to_json().dump(2) << "\n";
      else
        out << rep.text();
      return rep.pass() ? 0 : 1;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    emit_error(e, format, out);
    return 1;
  }
}

}  // namespace pm
