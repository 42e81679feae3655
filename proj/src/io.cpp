#include "fractalcalc/io.hpp"

#include <cstdio>
#include <ostream>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_real(row[i]);
    out << '\n';
  }
}

namespace {

double number_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw InputError(std::string("expected number field '") + key + "'");
  return j.at(key).get<double>();
}

int integer_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw InputError(std::string("expected integer field '") + key + "'");
  }
  return j.at(key).get<int>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(std::string(what) + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError(std::string(where) + ": unknown field '" + key + "'");
  }
}

json quasi_to_json(const QuasiPolynomial& q) {
  json terms = json::array();
  for (const auto& t : q.terms()) {
    terms.push_back({{"lambda", t.lambda}, {"mu", t.mu}, {"cos_poly", t.cos_poly}, {"sin_poly", t.sin_poly}});
  }
  return terms;
}

QuasiPolynomial quasi_from_json(const json& j) {
  if (!j.is_array()) throw InputError("closed-form terms must be an array");
  std::vector<ExpTrigTerm> terms;
  for (const auto& t : j) {
    terms.push_back({number_at(t, "lambda"), number_at(t, "mu"), numbers(t.at("cos_poly"), "cos_poly"),
                     numbers(t.at("sin_poly"), "sin_poly")});
  }
  return QuasiPolynomial(std::move(terms));
}

}  // namespace

json spec_to_json(const CantorSpec& spec) {
  return {{"a", spec.a}, {"b", spec.b}, {"m", spec.m}, {"r", spec.r}, {"depth_max", spec.depth_max}};
}

CantorSpec spec_from_json(const json& j) {
  if (j.is_string()) return CantorSpec::parse(j.get<std::string>());
  if (!j.is_object()) throw InputError("set must be an object or a 'cantor:...' string");
  reject_unknown(j, {"a", "b", "m", "r", "depth_max"}, "set");
  CantorSpec spec;
  spec.a = j.contains("a") ? number_at(j, "a") : spec.a;
  spec.b = j.contains("b") ? number_at(j, "b") : spec.b;
  spec.m = integer_at(j, "m");
  spec.r = number_at(j, "r");
  spec.depth_max = j.contains("depth_max") ? integer_at(j, "depth_max") : (spec.m == 1 ? 50 : 40);
  spec.validate();
  return spec;
}

json staircase_to_json(const Staircase& s) {
  return {{"set", spec_to_json(s.spec())},
          {"alpha", s.alpha()},
          {"a0", s.a0()},
          {"normalization", s.normalization()},
          {"depth", s.depth()}};
}

Staircase staircase_from_json(const json& j) {
  StaircaseOptions opts;
  opts.alpha = number_at(j, "alpha");
  opts.a0 = number_at(j, "a0");
  opts.normalization = number_at(j, "normalization");
  opts.depth = integer_at(j, "depth");
  return Staircase(spec_from_json(j.at("set")), opts);
}

FODEProblem problem_from_json(const json& j) {
  if (!j.is_object()) throw InputError("problem file must hold a JSON object");
  reject_unknown(j, {"coeffs", "forcing", "ics", "x0", "set", "alpha", "a0", "cells"}, "problem");
  if (!j.contains("coeffs")) throw InputError("problem: missing 'coeffs'");

  const CantorSpec spec = j.contains("set") ? spec_from_json(j.at("set")) : CantorSpec::triadic();
  StaircaseOptions opts;
  if (j.contains("alpha")) opts.alpha = number_at(j, "alpha");
  if (j.contains("a0")) opts.a0 = number_at(j, "a0");

  FODEProblem p{.coeffs = numbers(j.at("coeffs"), "coeffs"),
                .forcing = std::nullopt,
                .ics = std::nullopt,
                .x0 = j.contains("x0") ? number_at(j, "x0") : spec.a,
                .staircase = Staircase(spec, opts)};
  if (j.contains("ics")) {
    auto ics = numbers(j.at("ics"), "ics");
    if (!ics.empty()) p.ics = std::move(ics);
  }
  if (j.contains("cells")) {
    const int cells = integer_at(j, "cells");
    if (cells <= 0) throw InputError("problem: 'cells' must be positive");
    p.cells = static_cast<std::size_t>(cells);
  }
  if (j.contains("forcing")) {
    const json& f = j.at("forcing");
    if (!f.is_object() || (f.contains("atoms") == f.contains("expr"))) {
      throw InputError("forcing must be an object with exactly one of 'atoms' or 'expr'");
    }
    ForcingTerm term;
    if (f.contains("expr")) {
      if (!f.at("expr").is_string()) throw InputError("forcing.expr must be a string");
      term.expr = builtin_forcing(f.at("expr").get<std::string>());
    } else {
      if (!f.at("atoms").is_array()) throw InputError("forcing.atoms must be an array");
      for (const auto& a : f.at("atoms")) {
        if (!a.is_object()) throw InputError("forcing atom must be an object");
        reject_unknown(a, {"poly", "lambda", "mu", "trig"}, "forcing atom");
        ForcingAtom atom;
        atom.poly = numbers(a.at("poly"), "atom poly");
        atom.lambda = a.contains("lambda") ? number_at(a, "lambda") : 0.0;
        atom.mu = a.contains("mu") ? number_at(a, "mu") : 0.0;
        if (a.contains("trig")) {
          if (!a.at("trig").is_string()) throw InputError("atom trig must be a string");
          atom.trig = parse_trig(a.at("trig").get<std::string>());
        }
        term.atoms.push_back(std::move(atom));
      }
    }
    p.forcing = std::move(term);
  }
  p.validate();
  return p;
}

json solution_to_json(const FODESolution& sol) {
  json basis = json::array();
  for (const auto& b : sol.basis) {
    basis.push_back({{"k", b.k}, {"lambda", b.lambda}, {"mu", b.mu}, {"trig", to_string(b.trig)}});
  }
  json particular;
  if (const auto* uc = std::get_if<QuasiPolynomial>(&sol.particular)) {
    particular = {{"kind", "closed_form"}, {"terms", quasi_to_json(*uc)}};
  } else if (const auto* vop = std::get_if<VopParticular>(&sol.particular)) {
    particular = {{"kind", "variation_of_parameters"},
                  {"expr", vop->forcing.name},
                  {"x0", vop->x0},
                  {"leading", vop->leading},
                  {"cells", vop->cells}};
  } else {
    particular = {{"kind", "none"}};
  }
  json hom = nullptr;
  if (sol.hom_coeffs) hom = *sol.hom_coeffs;
  return {{"staircase", staircase_to_json(sol.staircase)},
          {"coeffs", sol.coeffs},
          {"basis", basis},
          {"hom_coeffs", hom},
          {"particular", particular}};
}

FODESolution solution_from_json(const json& j) {
  if (!j.is_object()) throw InputError("solution file must hold a JSON object");
  FODESolution sol{{}, std::nullopt, std::monostate{}, staircase_from_json(j.at("staircase")),
                   numbers(j.at("coeffs"), "coeffs")};
  for (const auto& b : j.at("basis")) {
    sol.basis.push_back({integer_at(b, "k"), number_at(b, "lambda"), number_at(b, "mu"),
                         parse_trig(b.at("trig").get<std::string>())});
  }
  if (!j.at("hom_coeffs").is_null()) sol.hom_coeffs = numbers(j.at("hom_coeffs"), "hom_coeffs");
  const json& p = j.at("particular");
  const std::string kind = p.at("kind").get<std::string>();
  if (kind == "closed_form") {
    sol.particular = quasi_from_json(p.at("terms"));
  } else if (kind == "variation_of_parameters") {
    sol.particular = VopParticular::make(sol.basis, number_at(p, "leading"),
                                         builtin_forcing(p.at("expr").get<std::string>()), number_at(p, "x0"),
                                         static_cast<std::size_t>(integer_at(p, "cells")));
  } else if (kind != "none") {
    throw InputError("unknown particular kind '" + kind + "'");
  }
  return sol;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  xs.back() = hi;
  return xs;
}

Table staircase_table(const Staircase& s, std::size_t n) {
  Table t{{"x", "S"}, {}};
  for (double x : uniform_grid(s.spec().a, s.spec().b, n)) t.rows.push_back({x, s.eval(x)});
  return t;
}

Table solution_table(const FODESolution& sol, std::size_t n) {
  double lo = sol.staircase.spec().a;
  if (const auto* vop = std::get_if<VopParticular>(&sol.particular)) {
    if (std::isfinite(vop->forcing.t_min)) lo = vop->x0;
  }
  Table t{{"x", "S", "f"}, {}};
  for (double x : uniform_grid(lo, sol.staircase.spec().b, n)) {
    t.rows.push_back({x, sol.staircase.eval(x), sol(x)});
  }
  return t;
}

}  // namespace fractalcalc
