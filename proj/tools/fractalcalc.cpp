// fractalcalc: staircase tables, gamma-dimension, F^alpha derivatives and integrals, fractal
// ODE solving and the worked examples, from the command line.
//
// Exit codes: 0 success, 2 input error, 3 numeric error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "fractalcalc/demos.hpp"
#include "fractalcalc/errors.hpp"
#include "fractalcalc/io.hpp"

using namespace fractalcalc;

namespace {

constexpr int kInputError = 2;
constexpr int kNumericError = 3;

struct Config {
  std::string set = "cantor:m=2,r=0.3333333333333333";
  std::optional<double> alpha;
  std::optional<int> depth;
  std::string out;
  std::string format = "csv";
  std::size_t grid = 101;
};

void add_common(CLI::App* cmd, Config& cfg, bool with_grid = true) {
  cmd->add_option("--set", cfg.set, "Cantor set, cantor:m=<int>,r=<real>[,a=<real>,b=<real>,depth=<int>]");
  cmd->add_option("--alpha", cfg.alpha, "Staircase order (default: the set's dimension)");
  cmd->add_option("--depth", cfg.depth, "Construction depth (default: FRACTALCALC_DEPTH, then the set's)")
      ->check(CLI::Range(1, 200));
  cmd->add_option("--out", cfg.out, "Output path (prefix for solve and demo)");
  cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  if (with_grid) cmd->add_option("--grid", cfg.grid, "Number of samples")->check(CLI::Range(2, 10000000));
}

std::optional<int> depth_from_env() {
  const char* env = std::getenv("FRACTALCALC_DEPTH");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 200) throw InputError(std::string("FRACTALCALC_DEPTH: not a depth: '") + env + "'");
  return static_cast<int>(v);
}

// The explicit flag wins over the environment, which wins over the set's own depth.
CantorSpec resolve_spec(CantorSpec spec, const Config& cfg) {
  if (const auto d = cfg.depth ? cfg.depth : depth_from_env()) spec.depth_max = *d;
  spec.validate();
  return spec;
}

Staircase make_staircase(const Config& cfg) {
  StaircaseOptions opts;
  opts.alpha = cfg.alpha;
  return Staircase(resolve_spec(CantorSpec::parse(cfg.set), cfg), opts);
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string csv(const Table& t) {
  std::ostringstream s;
  write_csv(s, t);
  return s.str();
}

std::string table_json(const Table& t, json extra) {
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    json col = json::array();
    for (const auto& row : t.rows) col.push_back(row[c]);
    extra[t.header[c]] = col;
  }
  return extra.dump(2) + "\n";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Classical g(t) for deriv and integrate.
const std::map<std::string, RealFn>& test_functions() {
  static const std::map<std::string, RealFn> fns{
      {"one", [](double) { return 1.0; }},
      {"identity", [](double t) { return t; }},
      {"square", [](double t) { return t * t; }},
      {"exp", [](double t) { return std::exp(t); }},
      {"sin", [](double t) { return std::sin(t); }},
      {"cos", [](double t) { return std::cos(t); }},
      {"texp", [](double t) { return t * std::exp(t); }},
  };
  return fns;
}

const RealFn& lookup(const std::string& name) {
  const auto& fns = test_functions();
  const auto it = fns.find(name);
  if (it == fns.end()) throw InputError("unknown function '" + name + "'");
  return it->second;
}

void cmd_staircase(const Config& cfg) {
  const Staircase s = make_staircase(cfg);
  const Table t = staircase_table(s, cfg.grid);
  emit(cfg.out, cfg.format == "csv" ? csv(t) : table_json(t, {{"staircase", staircase_to_json(s)}}));
}

void cmd_dim(const Config& cfg) {
  const CantorSpec spec = resolve_spec(CantorSpec::parse(cfg.set), cfg);
  const double gamma = gamma_dimension(spec, spec.a, spec.b);
  if (cfg.format == "csv") {
    emit(cfg.out,
         "gamma_dimension,similarity_dimension\n" + format_real(gamma) + "," + format_real(spec.alpha()) + "\n");
  } else {
    const json j{{"set", spec_to_json(spec)}, {"gamma_dimension", gamma}, {"similarity_dimension", spec.alpha()}};
    emit(cfg.out, j.dump(2) + "\n");
  }
}

void cmd_deriv(const Config& cfg, const std::string& fn, const std::vector<double>& at) {
  const Staircase s = make_staircase(cfg);
  const FractalFn f = conjugate_lift(lookup(fn), s);
  const std::vector<double> xs = at.empty() ? demo_grid(s, cfg.grid) : at;
  Table t{{"x", "f", "dF", "S"}, {}};
  for (double x : xs) t.rows.push_back({x, f(x), f_alpha_derivative(f, x), s.eval(x)});
  emit(cfg.out, cfg.format == "csv" ? csv(t) : table_json(t, {{"function", fn}}));
}

void cmd_integrate(const Config& cfg, const std::string& fn, std::optional<double> from, std::optional<double> to,
                   std::size_t cells) {
  const Staircase s = make_staircase(cfg);
  const double a = from.value_or(s.spec().a);
  const double b = to.value_or(s.spec().b);
  const IntegralResult r = f_alpha_integral(conjugate_lift(lookup(fn), s), a, b, cells);
  const double nan = std::nan("");
  if (cfg.format == "csv") {
    Table t{{"a", "b", "cells", "value", "lower", "upper"},
            {{a, b, static_cast<double>(cells), r.value, r.lower.value_or(nan), r.upper.value_or(nan)}}};
    emit(cfg.out, csv(t));
  } else {
    json j{{"function", fn}, {"a", a}, {"b", b}, {"cells", cells}, {"value", r.value}};
    j["lower"] = r.lower ? json(*r.lower) : json(nullptr);
    j["upper"] = r.upper ? json(*r.upper) : json(nullptr);
    emit(cfg.out, j.dump(2) + "\n");
  }
}

void cmd_solve(const Config& cfg, const std::string& path, bool set_given, bool alpha_given) {
  json j = read_json(path);
  if (!j.is_object()) throw InputError(path + ": problem file must hold a JSON object");
  if (set_given) j["set"] = cfg.set;
  if (alpha_given) j["alpha"] = *cfg.alpha;
  if (cfg.depth || depth_from_env()) {
    const CantorSpec spec = resolve_spec(j.contains("set") ? spec_from_json(j["set"]) : CantorSpec::triadic(), cfg);
    j["set"] = spec_to_json(spec);
  }
  const FODEProblem p = problem_from_json(j);
  const FODESolution sol = solve(p);
  const std::string table = csv(solution_table(sol, cfg.grid));
  const std::string doc = solution_to_json(sol).dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << (cfg.format == "csv" ? table : doc);
    return;
  }
  emit(cfg.out + ".json", doc);
  emit(cfg.out + ".csv", table);
}

void cmd_sample(const Config& cfg, const std::string& path) {
  const FODESolution sol = solution_from_json(read_json(path));
  emit(cfg.out, csv(solution_table(sol, cfg.grid)));
}

void cmd_demo(const Config& cfg, const std::string& name, const std::string& family, std::size_t samples) {
  if (family.size() != 1) throw InputError("--family must be A or B");
  const CantorSpec spec = resolve_spec(CantorSpec::parse(cfg.set), cfg);
  const DemoReport r = run_demo(name, spec, samples, family[0]);
  const std::string summary = demo_summary(r).dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << (cfg.format == "csv" ? csv(r.table) : summary);
    return;
  }
  emit(cfg.out + ".csv", csv(r.table));
  emit(cfg.out + ".json", summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"F^alpha-calculus on Cantor-like sets and fractal differential equations"};
  app.require_subcommand(1);
  Config cfg;

  auto* staircase = app.add_subcommand("staircase", "Table of the integral staircase S(x)");
  add_common(staircase, cfg);

  auto* dim = app.add_subcommand("dim", "Estimate the gamma-dimension of the set");
  add_common(dim, cfg, false);

  std::string fn = "exp";
  std::vector<double> at;
  auto* deriv = app.add_subcommand("deriv", "F^alpha-derivative of g(S(x)) for a named g");
  add_common(deriv, cfg);
  deriv->add_option("--fn", fn, "one, identity, square, exp, sin, cos or texp");
  deriv->add_option("--at", at, "Points to evaluate at (default: a grid of set points and gap probes)");

  std::optional<double> from;
  std::optional<double> to;
  std::size_t cells = kDefaultCells;
  auto* integrate = app.add_subcommand("integrate", "F^alpha-integral of g(S(x)) for a named g");
  add_common(integrate, cfg, false);
  integrate->add_option("--fn", fn, "one, identity, square, exp, sin, cos or texp");
  integrate->add_option("--from", from, "Lower limit (default a)");
  integrate->add_option("--to", to, "Upper limit (default b)");
  integrate->add_option("--cells", cells, "Quadrature cells")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 26));

  std::string problem;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a fractal ODE problem file");
  add_common(solve_cmd, cfg);
  solve_cmd->add_option("problem", problem, "Problem JSON file")->required();

  std::string solution;
  auto* sample = app.add_subcommand("sample", "Re-sample a saved solution JSON as x,S,f");
  add_common(sample, cfg);
  sample->add_option("solution", solution, "Solution JSON written by solve")->required();

  std::string demo_name;
  std::string family = "B";
  auto* demo = app.add_subcommand("demo", "Run a worked example");
  std::size_t demo_samples = 129;
  add_common(demo, cfg, false);
  demo->add_option("--grid", demo_samples, "Number of construction-point samples")->check(CLI::Range(2, 100000));
  demo->add_option("name", demo_name, "oscillator4, resonant3, vop3 or spring_mass")->required();
  demo->add_option("--family", family, "Spring-mass initial values, A or B");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*staircase) cmd_staircase(cfg);
    if (*dim) cmd_dim(cfg);
    if (*deriv) cmd_deriv(cfg, fn, at);
    if (*integrate) cmd_integrate(cfg, fn, from, to, cells);
    if (*solve_cmd) {
      cmd_solve(cfg, problem, solve_cmd->count("--set") > 0, solve_cmd->count("--alpha") > 0);
    }
    if (*sample) cmd_sample(cfg, solution);
    if (*demo) cmd_demo(cfg, demo_name, family, demo_samples);
  } catch (const InputError& e) {
    std::cerr << "fractalcalc: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "fractalcalc: malformed input: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericError& e) {
    std::cerr << "fractalcalc: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fractalcalc: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "fractalcalc: " << e.what() << "\n";
    return kNumericError;
  }
  return 0;
}
