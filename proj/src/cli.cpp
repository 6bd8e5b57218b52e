#include "zsk/cli.hpp"

#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "zsk/csv.hpp"
#include "zsk/error.hpp"
#include "zsk/execution.hpp"
#include "zsk/expression.hpp"
#include "zsk/gzeta.hpp"
#include "zsk/quadrature.hpp"
#include "zsk/theta_lattice.hpp"

namespace zsk::cli {

namespace {

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view item) {
  const std::string text(trim(item));
  if (text.empty()) throw parse_error("empty number");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) throw parse_error("malformed number '" + text + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Globals {
  unsigned threads = 1;
  std::int64_t chunk = 1 << 14;
  std::string format;
  std::string output;
  bool no_timing = false;

  [[nodiscard]] Execution exec() const {
    Execution e;
    e.threads = threads;
    e.chunk = chunk;
    return e;
  }
};

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_rows_csv(std::ostream& out, const json& rows) {
  if (rows.empty()) return;
  std::vector<std::string> header;
  for (const auto& item : rows.front().items()) header.push_back(item.key());
  write_csv_row(out, header);
  for (const json& row : rows) {
    std::vector<std::string> cells;
    for (const std::string& key : header) cells.push_back(row.contains(key) ? csv_cell(row.at(key)) : "");
    write_csv_row(out, cells);
  }
}

/// Writes the report as JSON, or its rows as CSV; csv overrides the generic row writer.
void emit(const json& report, const Globals& g, const std::string& default_format, std::ostream& out,
          const std::function<void(std::ostream&)>& csv = {}) {
  const std::string format = g.format.empty() ? default_format : g.format;
  auto write = [&](std::ostream& os) {
    if (format == "json") {
      os << report.dump(2) << '\n';
    } else if (csv) {
      csv(os);
    } else {
      write_rows_csv(os, report.at("rows"));
    }
  };
  if (g.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(g.output, std::ios::binary);
  if (!file) throw std::ios_base::failure("cannot open " + g.output);
  write(file);
  file.flush();
  if (!file) throw std::ios_base::failure("write failed: " + g.output);
}

json header(const char* command, const Globals& g) {
  json r;
  r["schema"] = 1;
  r["command"] = command;
  r["threads"] = g.threads;
  r["chunk"] = g.chunk;
  return r;
}

Expression parse_x_expression(const std::string& text, const char* what) {
  Expression e = Expression::parse(text);
  if (e.lattice_dimension() > 0 || e.uses(Expression::Var::s)) {
    throw parse_error(std::string(what) + ": only the variable x is allowed");
  }
  return e;
}

RealMap real_map(const Expression& e) {
  return [e](double x) { return e.evaluate(x); };
}

HomogeneousSummand expression_summand(const Expression& e) {
  if (e.uses(Expression::Var::x)) throw parse_error("summand: use n1..n4 and s, not x");
  const int dim = e.lattice_dimension();
  if (dim == 0) throw parse_error("summand: uses none of n1..n4");
  auto eval = [e, dim](LatticePoint n, cplx s) {
    std::array<double, 4> v{};
    for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(n[static_cast<std::size_t>(i)]);
    return e.evaluate(v, s);
  };
  return {dim, std::move(eval), e.to_string()};
}

std::optional<ModulusOfContinuity> parse_lipschitz(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const std::vector<double> v = parse_real_list(text);
  if (v.size() != 2) throw parse_error("--lipschitz expects a,C");
  return ModulusOfContinuity::lipschitz(v[0], v[1]);
}

PeriodicFunction periodic_from(const Expression& e, const std::optional<ModulusOfContinuity>& modulus) {
  if (modulus) return PeriodicFunction(real_map(e), *modulus);
  return PeriodicFunction(real_map(e));
}

std::string modulus_label(const std::optional<ModulusOfContinuity>& modulus) {
  if (!modulus) return "smooth";
  return "lipschitz(" + short_number(modulus->parameter()) + "," + short_number(modulus->constant().value_or(0.0)) +
         ")";
}

/// A comma-separated list flag; config files may also give it as an array.
CLI::Option* add_list_option(CLI::App* app, const std::string& name, std::string& target, const std::string& help) {
  return app->add_option(name, target, help)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join);
}

// ---------------------------------------------------------------- schemes

struct SchemeFlags {
  std::string scheme = "plain";
  int M = 2;
  CLI::Option* M_opt = nullptr;
  int N = 2;
  int L = 1;
  CLI::Option* L_opt = nullptr;
  std::string phi;
  std::string dphi;
  std::string preset = "dyadic";
};

void add_scheme_options(CLI::App* app, SchemeFlags& f, bool with_M) {
  app->add_option("--scheme", f.scheme, "plain, transformed, lattice, cf, rational or derivative")
      ->check(CLI::IsMember({"plain", "transformed", "lattice", "cf", "rational", "derivative"}));
  if (with_M) f.M_opt = app->add_option("--M", f.M, "Base M (default 2; 3 for rational and derivative)");
  app->add_option("--N", f.N, "Second base N (rational, derivative)");
  f.L_opt = app->add_option("--L", f.L, "L (cf default 1, derivative default 2)");
  app->add_option("--phi", f.phi, "Substitution phi(x) for the transformed scheme");
  app->add_option("--dphi", f.dphi, "Derivative phi'(x) for the transformed scheme");
  app->add_option("--lattice-preset", f.preset, "dyadic or identity")->check(CLI::IsMember({"dyadic", "identity"}));
}

int default_M(const SchemeFlags& f) { return f.scheme == "rational" || f.scheme == "derivative" ? 3 : 2; }

int chosen_M(const SchemeFlags& f) { return f.M_opt && f.M_opt->count() > 0 ? f.M : default_M(f); }

NodeScheme build_scheme(const SchemeFlags& f, int M) {
  const bool has_L = f.L_opt && f.L_opt->count() > 0;
  if (f.scheme == "plain") return PlainScheme{M};
  if (f.scheme == "transformed") {
    if (f.phi.empty() || f.dphi.empty()) throw parse_error("transformed scheme needs --phi and --dphi");
    return TransformedScheme{M, real_map(parse_x_expression(f.phi, "--phi")),
                             real_map(parse_x_expression(f.dphi, "--dphi"))};
  }
  if (f.scheme == "lattice") return f.preset == "dyadic" ? LatticeScheme::dyadic_rationals(M) : LatticeScheme::identity(M);
  if (f.scheme == "cf") {
    ContinuedFractionScheme s;
    s.M = M;
    s.L = has_L ? f.L : 1;
    return s;
  }
  if (f.scheme == "rational") return RationalBaseScheme{M, f.N};
  return DerivativeFormScheme{M, f.N, has_L ? f.L : 2};
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  std::string suite;
  std::string z;
  std::string w = "0,0.3";
  std::string J;
  double a = 2.0;
  double b = 0.0;
  int M = 2;
  CLI::Option* M_opt = nullptr;
  int N = 1;
  CLI::Option* N_opt = nullptr;
  int n_min = -120;
  int n_max = 60;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double spread_tol = 1e-2;
  std::string summand;
  std::string Ms = "2,3";
  std::string box = "400";
};

json verify_row(const std::string& suite, const std::string& name, std::optional<double> z, double value,
                double target, double error, const char* kind, double tol, bool pass) {
  json row;
  row["suite"] = suite;
  row["case"] = name;
  row["z"] = z ? json(*z) : json(nullptr);
  row["value"] = value;
  row["target"] = target;
  row["error"] = error;
  row["error_kind"] = kind;
  row["tolerance"] = tol;
  row["pass"] = pass;
  return row;
}

void verify_closed_form(const VerifyFlags& f, json& rows) {
  const LatticeRange range{f.n_min, f.n_max};
  for (double z : parse_real_list(f.z.empty() ? "0,0.25,0.5,0.75" : f.z)) {
    for (const ClosedFormRow& r : closed_form_suite(z, range)) {
      rows.push_back(verify_row("closed-form", "identity " + std::to_string(r.id), z, r.value, r.target, r.abs_err,
                                "abs", f.abs_tol, r.abs_err <= f.abs_tol));
    }
  }
}

void lattice_rows(const char* suite, const LatticeSumResult& r, const std::string& name, double tol, json& rows) {
  const double rel = r.abs_err / std::fabs(r.target);
  rows.push_back(verify_row(suite, name, r.z, r.value, r.target, rel, "rel", tol, rel <= tol));
}

void verify_lattice(const VerifyFlags& f, const Execution& exec, json& rows) {
  const LatticeRange range{f.n_min, f.n_max};
  const int M = f.M_opt->count() > 0 ? f.M : 2;
  const int N = f.N_opt->count() > 0 ? f.N : 1;
  for (int J : parse_int_list(f.J.empty() ? "0" : f.J)) {
    for (double z : parse_real_list(f.z.empty() ? "0" : f.z)) {
      const std::string name = "a=" + short_number(f.a) + " b=" + short_number(f.b) + " M=" + std::to_string(M) +
                               " N=" + std::to_string(N) + " J=" + std::to_string(J);
      const LatticeSumResult r = N == 1 ? lattice_sum_single(PhiParams{f.a, f.b, M, J}, z, range, exec)
                                        : lattice_sum_pair(f.a, f.b, M, N, J, z, range, exec);
      lattice_rows("lattice", r, name, f.rel_tol, rows);
    }
  }
}

void verify_abstract_j(const VerifyFlags& f, const Execution& exec, json& rows) {
  const LatticeRange range{f.n_min, f.n_max};
  const int M = f.M_opt->count() > 0 ? f.M : 3;
  const int N = f.N_opt->count() > 0 ? f.N : 2;
  for (int J : parse_int_list(f.J.empty() ? "0,1,2" : f.J)) {
    for (double w : parse_real_list(f.w)) {
      const std::string name = "M=" + std::to_string(M) + " N=" + std::to_string(N) + " J=" + std::to_string(J);
      lattice_rows("abstract-J", lattice_sum_pair(1.0, 0.0, M, N, J, w, range, exec), name, f.rel_tol, rows);
    }
  }
}

void verify_gzeta(const VerifyFlags& f, const Execution& exec, json& rows) {
  const HomogeneousSummand Z =
      f.summand.empty() ? zeta_hat2(2, {{1.0, 1.0}}, {1.0}) : expression_summand(Expression::parse(f.summand));
  GzetaOptions opts;
  opts.exec = exec;
  const InvarianceReport report = gzeta_invariance_check(Z, parse_int_list(f.Ms), parse_count(f.box), opts);
  const double reference = report.rows.front().ratio;
  for (const InvarianceRow& row : report.rows) {
    const double error = std::fabs(row.ratio - reference);
    const bool pass = row.ratio > 0.0 && report.spread <= f.spread_tol;
    rows.push_back(verify_row("gzeta", Z.name + " M=" + std::to_string(row.M), std::nullopt, row.ratio, reference,
                              error, "abs", f.spread_tol, pass));
  }
}

int cmd_verify(const VerifyFlags& f, const Globals& g, std::ostream& out) {
  const Stopwatch watch(!g.no_timing);
  const Execution exec = g.exec();
  exec.validate();
  json rows = json::array();
  const bool all = f.suite == "all";
  if (all || f.suite == "closed-form") verify_closed_form(f, rows);
  if (all || f.suite == "lattice") verify_lattice(f, exec, rows);
  if (all || f.suite == "abstract-J") verify_abstract_j(f, exec, rows);
  if (all || f.suite == "gzeta") verify_gzeta(f, exec, rows);

  bool pass = true;
  for (const json& row : rows) pass = pass && row.at("pass").get<bool>();
  json report = header("verify", g);
  report["suite"] = f.suite;
  report["rows"] = rows;
  report["pass"] = pass;
  report["seconds"] = watch.seconds();
  emit(report, g, "json", out);
  return pass ? exit_ok : exit_tolerance;
}

// ---------------------------------------------------------------- integrate

struct IntegrateFlags {
  std::string expression;
  SchemeFlags scheme;
  std::string groups = "1e6";
  std::string lipschitz;
  bool convergence = false;
  double expect = 0.0;
  CLI::Option* expect_opt = nullptr;
  double tol = 1e-6;
};

json integrate_row(const QuadratureResult& r) {
  json row;
  row["groups"] = r.groups_used;
  row["value"] = r.value;
  row["tail_estimate"] = r.tail_estimate;
  row["tail_kind"] = r.tail_is_bound ? "bound" : "heuristic";
  return row;
}

int cmd_integrate(const IntegrateFlags& f, const Globals& g, std::ostream& out) {
  const Expression e = parse_x_expression(f.expression, "integrand");
  const auto modulus = parse_lipschitz(f.lipschitz);
  const std::int64_t groups = parse_count(f.groups);
  const NodeScheme scheme = build_scheme(f.scheme, chosen_M(f.scheme));
  QuadratureOptions opts;
  opts.exec = g.exec();
  opts.exec.validate();

  const Stopwatch watch(!g.no_timing);
  const PeriodicFunction fn = periodic_from(e, modulus);
  json rows = json::array();
  if (f.convergence) {
    for (std::int64_t n = 1000; n < groups; n *= 10) rows.push_back(integrate_row(integrate(fn, scheme, n, opts)));
  }
  const QuadratureResult r = integrate(fn, scheme, groups, opts);
  rows.push_back(integrate_row(r));

  json report = header("integrate", g);
  report["expression"] = e.to_string();
  report["scheme"] = scheme_name(scheme);
  report["modulus"] = modulus_label(modulus);
  report["value"] = r.value;
  report["tail_estimate"] = r.tail_estimate;
  report["tail_kind"] = r.tail_is_bound ? "bound" : "heuristic";
  report["groups"] = r.groups_used;
  bool pass = true;
  if (f.expect_opt->count() > 0) {
    pass = std::fabs(r.value - f.expect) <= f.tol;
    report["expected"] = f.expect;
    report["tolerance"] = f.tol;
    report["pass"] = pass;
  }
  report["rows"] = rows;
  report["seconds"] = watch.seconds();
  emit(report, g, "json", out);
  return pass ? exit_ok : exit_tolerance;
}

// ---------------------------------------------------------------- nodes

struct NodesFlags {
  SchemeFlags scheme;
  std::string count = "16";
};

int cmd_nodes(const NodesFlags& f, const Globals& g, std::ostream& out) {
  const NodeScheme scheme = build_scheme(f.scheme, chosen_M(f.scheme));
  const std::vector<NodeRecord> records = node_stream(scheme, parse_count(f.count));
  json rows = json::array();
  for (const NodeRecord& r : records) {
    json row;
    row["group"] = r.group;
    row["k"] = r.k;
    row["family"] = r.family;
    row["node"] = r.node;
    row["weight"] = r.weight;
    row["G"] = r.g_value;
    rows.push_back(row);
  }
  json report = header("nodes", g);
  report["scheme"] = scheme_name(scheme);
  report["rows"] = rows;
  emit(report, g, "csv", out, [&](std::ostream& os) { write_nodes_csv(os, scheme, records); });
  return exit_ok;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  std::string target = "integrate";
  std::string f = "sin(2*pi*x)^2";
  SchemeFlags scheme;
  std::string Ms;
  std::string groups = "1e3,1e4,1e5,1e6";
  double reference = 0.0;
  CLI::Option* reference_opt = nullptr;
  std::string lipschitz;
  std::string identity = "1";
  std::string z = "0:1:0.1";
  int n_min = -120;
  int n_max = 60;
};

std::vector<std::int64_t> parse_count_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (double v : parse_real_list(text)) out.push_back(parse_count(format_number(v)));
  return out;
}

int cmd_sweep(const SweepFlags& f, const Globals& g, std::ostream& out, std::ostream& err) {
  json rows = json::array();
  std::string trend;
  if (f.target == "integrate") {
    const Expression e = parse_x_expression(f.f, "integrand");
    const auto modulus = parse_lipschitz(f.lipschitz);
    const std::vector<std::int64_t> grid = parse_count_list(f.groups);
    const std::vector<int> Ms = f.Ms.empty() ? std::vector<int>{default_M(f.scheme)} : parse_int_list(f.Ms);
    const PeriodicFunction fn = periodic_from(e, modulus);
    const double reference = f.reference_opt->count() > 0 ? f.reference : periodic_trapezoid_integral(fn, 1 << 16);
    QuadratureOptions opts;
    opts.exec = g.exec();
    opts.exec.validate();
    bool decreasing = true;
    for (int M : Ms) {
      const NodeScheme scheme = build_scheme(f.scheme, M);
      double previous = INFINITY;
      for (std::int64_t groups : grid) {
        const QuadratureResult r = integrate(fn, scheme, groups, opts);
        const double error = std::fabs(r.value - reference);
        decreasing = decreasing && error < previous;
        previous = error;
        json row;
        row["M"] = M;
        row["groups"] = groups;
        row["value"] = r.value;
        row["error"] = error;
        row["tail_estimate"] = r.tail_estimate;
        rows.push_back(row);
      }
    }
    trend = decreasing ? "error decreasing" : "error not monotone";
  } else if (f.target == "closed-form") {
    const LatticeRange range{f.n_min, f.n_max};
    const std::vector<int> ids = parse_int_list(f.identity);
    for (int id : ids) {
      if (id < 1 || id > 4) throw parse_error("--identity must be in 1..4");
    }
    double worst = 0.0;
    for (int id : ids) {
      for (double z : parse_real_list(f.z)) {
        const ClosedFormRow r = closed_form_suite(z, range)[static_cast<std::size_t>(id - 1)];
        worst = std::max(worst, r.abs_err);
        json row;
        row["identity"] = id;
        row["z"] = z;
        row["value"] = r.value;
        row["abs_err"] = r.abs_err;
        rows.push_back(row);
      }
    }
    trend = worst <= 1e-10 ? "value constant within 1e-10" : "value varies (max abs_err " + format_number(worst) + ")";
  } else {
    throw parse_error("--target must be integrate or closed-form");
  }

  json report = header("sweep", g);
  report["target"] = f.target;
  report["rows"] = rows;
  report["trend"] = trend;
  emit(report, g, "csv", out);
  const std::string format = g.format.empty() ? "csv" : g.format;
  if (format == "csv") (g.output.empty() ? err : out) << "trend: " << trend << '\n';
  return exit_ok;
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) throw parse_error("empty list");
  for (std::string_view item : split(text, ',')) {
    const std::vector<std::string_view> range = split(item, ':');
    if (range.size() == 1) {
      out.push_back(parse_real(item));
      continue;
    }
    if (range.size() != 3) throw parse_error("range must be lo:hi:step");
    const double lo = parse_real(range[0]), hi = parse_real(range[1]), step = parse_real(range[2]);
    if (!(step > 0.0) || !(hi > lo)) throw parse_error("range needs lo < hi and step > 0");
    const double count = std::ceil((hi - lo) / step - 1e-9);
    if (count > 1e6) throw parse_error("range has too many points");
    for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(lo + i * step);
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (double v : parse_real_list(text)) {
    if (v != std::round(v) || std::fabs(v) > 1e9) throw parse_error("expected integers, got " + format_number(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::int64_t parse_count(std::string_view text) {
  const double v = parse_real(text);
  if (v != std::round(v) || v < 1.0 || v > 9e15) throw parse_error("expected a positive integer count");
  return static_cast<std::int64_t>(v);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Series quadrature and lattice identity toolkit", "zsk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read key=value options from a file");

  Globals g;
  g.threads = default_threads();
  app.add_option("--threads", g.threads, "Worker threads (default ZSK_THREADS or 1)")->check(CLI::Range(1u, 1024u));
  app.add_option("--chunk", g.chunk, "Groups per reduction chunk")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", g.output, "Write the report to a file");
  app.add_flag("--no-timing", g.no_timing, "Report 0 seconds, for byte-identical reports");

  VerifyFlags vf;
  CLI::App* verify = app.add_subcommand("verify", "Check lattice and zeta identities against their targets");
  verify->add_option("suite", vf.suite, "closed-form, lattice, abstract-J, gzeta or all")
      ->required()
      ->check(CLI::IsMember({"closed-form", "lattice", "abstract-J", "gzeta", "all"}));
  add_list_option(verify, "--z", vf.z, "Shift list");
  add_list_option(verify, "--w", vf.w, "Shift list for abstract-J");
  add_list_option(verify, "--J", vf.J, "Derivative orders");
  verify->add_option("--a", vf.a, "Exponent a");
  verify->add_option("--b", vf.b, "Weight exponent b");
  vf.M_opt = verify->add_option("--M", vf.M, "Base M");
  vf.N_opt = verify->add_option("--N", vf.N, "Second base N (1 for the single-base sum)");
  verify->add_option("--n-min", vf.n_min, "Lowest lattice index");
  verify->add_option("--n-max", vf.n_max, "Highest lattice index");
  verify->add_option("--abs-tol", vf.abs_tol, "Tolerance of the closed-form rows");
  verify->add_option("--rel-tol", vf.rel_tol, "Relative tolerance of lattice and abstract-J rows");
  verify->add_option("--spread-tol", vf.spread_tol, "Tolerance on the spread of gzeta ratios");
  verify->add_option("--summand", vf.summand, "Homogeneous summand in n1..n4 and s");
  add_list_option(verify, "--Ms", vf.Ms, "Bases for the gzeta invariance check");
  verify->add_option("--box", vf.box, "Lattice box for gzeta");

  IntegrateFlags inf;
  CLI::App* integ = app.add_subcommand("integrate", "Integrate a periodic expression in x over one period");
  integ->add_option("expression", inf.expression, "Integrand in x")->required();
  add_scheme_options(integ, inf.scheme, true);
  integ->add_option("--groups", inf.groups, "Number of groups");
  add_list_option(integ, "--lipschitz", inf.lipschitz, "Declare a Lipschitz modulus a,C");
  integ->add_flag("--convergence", inf.convergence, "Also report values at decades of groups");
  inf.expect_opt = integ->add_option("--expect", inf.expect, "Expected value; exit 2 when missed");
  integ->add_option("--tol", inf.tol, "Tolerance for --expect");

  NodesFlags nf;
  CLI::App* nodes = app.add_subcommand("nodes", "Dump nodes and weights of a scheme");
  add_scheme_options(nodes, nf.scheme, true);
  nodes->add_option("--count", nf.count, "Number of node records");

  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "Tabulate a quantity over a parameter grid");
  sweep->add_option("--target", sf.target, "integrate or closed-form");
  sweep->add_option("--f", sf.f, "Integrand in x");
  add_scheme_options(sweep, sf.scheme, false);
  add_list_option(sweep, "--M", sf.Ms, "List of bases");
  add_list_option(sweep, "--groups", sf.groups, "List of group counts");
  sf.reference_opt = sweep->add_option("--reference", sf.reference, "Exact integral (default: trapezoid oracle)");
  add_list_option(sweep, "--lipschitz", sf.lipschitz, "Declare a Lipschitz modulus a,C");
  add_list_option(sweep, "--identity", sf.identity, "Closed-form identity ids");
  add_list_option(sweep, "--z", sf.z, "Shift list or lo:hi:step");
  sweep->add_option("--n-min", sf.n_min, "Lowest lattice index");
  sweep->add_option("--n-max", sf.n_max, "Highest lattice index");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_config;
  }

  try {
    if (verify->parsed()) return cmd_verify(vf, g, out);
    if (integ->parsed()) return cmd_integrate(inf, g, out);
    if (nodes->parsed()) return cmd_nodes(nf, g, out);
    return cmd_sweep(sf, g, out, err);
  } catch (const parse_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const evaluation_error& e) {
    err << "evaluation error: " << e.what() << '\n';
    return exit_evaluation;
  } catch (const convergence_error& e) {
    err << "evaluation error: " << e.what() << '\n';
    return exit_evaluation;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
}

}  // namespace zsk::cli
