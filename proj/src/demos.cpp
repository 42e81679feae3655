#include "fractalcalc/demos.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

double DemoReport::extra(const std::string& key) const {
  for (const auto& [k, v] : extras) {
    if (k == key) return v;
  }
  throw InputError("demo report has no entry '" + key + "'");
}

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"oscillator4", "resonant3", "vop3", "spring_mass"};
  return names;
}

std::vector<double> demo_grid(const Staircase& s, std::size_t samples) {
  if (samples < 2) throw InputError("demo grid needs at least 2 samples");
  int level = 0;
  std::vector<double> pts = s.construction_points(0);
  while (pts.size() < samples && level < 24) pts = s.construction_points(++level);
  std::vector<double> grid;
  for (std::size_t i = 0; i < samples && i < pts.size(); ++i) {
    const std::size_t idx = (i * (pts.size() - 1) + (samples - 1) / 2) / (samples - 1);
    grid.push_back(pts[std::min(idx, pts.size() - 1)]);
  }
  const auto probes = s.gap_midpoints(3);
  grid.insert(grid.end(), probes.begin(), probes.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double vop3_printed_form(double t) { return -t * std::exp(t) * std::log(std::abs(t)); }

double vop3_particular_form(double t) {
  return -0.5 * std::exp(t) * std::log(t) + 0.5 * std::exp(-t) * std::expint(2.0 * t);
}

double vop3_anchor(const Staircase& s) {
  for (double x : s.construction_points(6)) {
    if (s.eval(x) > 0.01) return x;
  }
  throw DomainError("vop3: no level-6 construction point with S > 0.01");
}

namespace {

FODEProblem problem(std::vector<double> coeffs, const Staircase& s) {
  FODEProblem p;
  p.coeffs = std::move(coeffs);
  p.staircase = s;
  p.x0 = s.spec().a;
  return p;
}

DemoReport report(std::string name, const Staircase& s, Table table) {
  DemoReport r;
  r.name = std::move(name);
  r.spec = s.spec();
  r.table = std::move(table);
  return r;
}

Table sample(const FODESolution& sol, const std::vector<double>& grid) {
  Table t{{"x", "S", "f"}, {}};
  for (double x : grid) t.rows.push_back({x, sol.staircase.eval(x), sol(x)});
  return t;
}

double max_residual_on(const FODESolution& sol, const FODEProblem& p, const std::vector<double>& grid) {
  double worst = 0.0;
  for (double x : grid) {
    if (sol.staircase.contains(x)) worst = std::max(worst, residual(sol, p, x));
  }
  return worst;
}

DemoReport oscillator4(const Staircase& s, std::size_t samples) {
  const FODEProblem p = problem({1, 0, 2, 0, 1}, s);
  const FODESolution sol = solve(p);
  const auto grid = demo_grid(s, samples);
  DemoReport r = report("oscillator4", s, sample(sol, grid));
  for (const auto& row : r.table.rows) {
    const double t = row[1];
    const double expected = std::cos(t) + std::sin(t) + t * std::cos(t) + t * std::sin(t);
    r.max_deviation = std::max(r.max_deviation, std::abs(row[2] - expected));
  }
  r.max_residual = max_residual_on(sol, p, grid);
  return r;
}

DemoReport resonant3(const Staircase& s, std::size_t samples) {
  FODEProblem p = problem({1, -3, 3, -1}, s);
  p.forcing = ForcingTerm{{ForcingAtom{{4.0}, 1.0, 0.0, Trig::none}}, std::nullopt};
  const FODESolution sol = solve(p);
  const auto grid = demo_grid(s, samples);
  DemoReport r = report("resonant3", s, sample(sol, grid));
  for (const auto& row : r.table.rows) {
    const double t = row[1];
    const double expected = (1.0 + t + t * t + 2.0 / 3.0 * t * t * t) * std::exp(t);
    r.max_deviation = std::max(r.max_deviation, std::abs(row[2] - expected));
  }
  r.max_residual = max_residual_on(sol, p, grid);

  // A is the t^3 e^t coefficient of the particular solution.
  double a = 0.0;
  for (const auto& term : std::get<QuasiPolynomial>(sol.particular).terms()) {
    if (term.lambda == 1.0 && term.mu == 0.0 && term.cos_poly.size() > 3) a = term.cos_poly[3];
  }
  r.extras.emplace_back("A", a);
  return r;
}

DemoReport vop3(const Staircase& s, std::size_t samples) {
  const double x0 = vop3_anchor(s);
  const double t0 = s.eval(x0);
  FODEProblem p = problem({1, -1, -1, 1}, s);
  p.forcing = ForcingTerm{{}, builtin_forcing("inv_square_exp")};
  p.x0 = x0;
  const FODESolution sol = solve(p);
  const auto& vop = std::get<VopParticular>(sol.particular);

  std::vector<double> grid;
  for (double x : demo_grid(s, samples)) {
    if (s.eval(x) >= t0) grid.push_back(x);
  }
  DemoReport r = report("vop3", s, Table{{"x", "S", "f"}, {}});
  std::vector<double> ts;
  std::vector<double> printed;
  std::vector<double> particular;
  for (double x : grid) {
    const double t = s.eval(x);
    const double big_f = vop.value(x, s);
    r.table.rows.push_back({x, t, sol.closed_form().eval(t) + big_f});
    ts.push_back(t);
    printed.push_back(big_f - vop3_printed_form(t));
    particular.push_back(big_f - vop3_particular_form(t));
  }
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
  };
  r.max_deviation = max_abs(project_out_homogeneous(sol.basis, ts, printed));

  // The residual needs a numeric derivative per order of the quadrature part: use at most
  // 16 set points of the grid.
  std::vector<double> in_set;
  for (double x : grid) {
    if (s.contains(x)) in_set.push_back(x);
  }
  std::vector<double> probe;
  const std::size_t count = std::min<std::size_t>(16, in_set.size());
  for (std::size_t i = 0; i < count; ++i) {
    probe.push_back(in_set[count == 1 ? 0 : i * (in_set.size() - 1) / (count - 1)]);
  }
  r.max_residual = max_residual_on(sol, p, probe);
  r.extras = {{"x0", x0},
              {"S_x0", t0},
              {"max_deviation_particular_form", max_abs(project_out_homogeneous(sol.basis, ts, particular))},
              {"residual_points", static_cast<double>(probe.size())}};
  return r;
}

// Two masses, k1 = 3, k2 = 2: u1'' + (k1 + k2) u1 = k2 u2 and u2'' + k2 u2 = k2 u1, in fractal
// time. Eliminating u2 gives u1'''' + (k1 + 2 k2) u1'' + k1 k2 u1 = 0.
DemoReport spring_mass(const Staircase& s, std::size_t samples, char family) {
  constexpr double k1 = 3.0;
  constexpr double k2 = 2.0;
  // (u1, u1', u2, u2') at x = a; A is the reference (cos S, 2 cos S) pair, B the
  // (-2 cos sqrt6 S, cos sqrt6 S) pair.
  std::array<double, 4> state;
  if (family == 'A') {
    state = {1.0, 0.0, 2.0, 0.0};
  } else if (family == 'B') {
    state = {-2.0, 0.0, 1.0, 0.0};
  } else {
    throw InputError(std::string("spring_mass: unknown initial-value family '") + family + "'");
  }
  const double u1_2 = k2 * state[2] - (k1 + k2) * state[0];
  const double u1_3 = k2 * state[3] - (k1 + k2) * state[1];
  FODEProblem p = problem({1.0, 0.0, k1 + 2.0 * k2, 0.0, k1 * k2}, s);
  p.ics = std::vector<double>{state[0], state[1], u1_2, u1_3};
  const FODESolution sol = solve(p);
  const QuasiPolynomial u1 = sol.closed_form();
  const QuasiPolynomial u2 = (1.0 / k2) * (u1.derivative(2) + (k1 + k2) * u1);

  const auto grid = demo_grid(s, samples);
  DemoReport r = report("spring_mass", s, Table{{"x", "S", "f", "u2"}, {}});
  const double w = family == 'A' ? 1.0 : std::sqrt(6.0);
  const double c1 = family == 'A' ? 1.0 : -2.0;
  const double c2 = family == 'A' ? 2.0 : 1.0;
  double coupling = 0.0;
  double reconstruction = 0.0;
  const FractalFn u1_fn = sol.as_fractal_fn();
  const FractalFn u1_dd = derivative_fn(derivative_fn(u1_fn));
  for (double x : grid) {
    const double t = s.eval(x);
    const double v1 = u1.eval(t);
    const double v2 = u2.eval(t);
    r.table.rows.push_back({x, t, v1, v2});
    r.max_deviation = std::max({r.max_deviation, std::abs(v1 - c1 * std::cos(w * t)), std::abs(v2 - c2 * std::cos(w * t))});
    if (!s.contains(x)) continue;
    const double eq1 = u1.derivative(2).eval(t) + (k1 + k2) * v1 - k2 * v2;
    const double eq2 = u2.derivative(2).eval(t) + k2 * v2 - k2 * v1;
    coupling = std::max({coupling, std::abs(eq1), std::abs(eq2)});
    // u2 again, from numeric fractal derivatives of u1.
    reconstruction = std::max(reconstruction, std::abs((u1_dd(x) + (k1 + k2) * u1_fn(x)) / k2 - c2 * std::cos(w * t)));
  }
  r.max_residual = std::max(max_residual_on(sol, p, grid), coupling);
  r.extras = {{"k1", k1},
              {"k2", k2},
              {"family", family == 'A' ? 0.0 : 1.0},
              {"coupling_residual", coupling},
              {"reconstruction_error", reconstruction}};
  return r;
}

}  // namespace

DemoReport run_demo(const std::string& name, const CantorSpec& spec, std::size_t samples, char family) {
  const Staircase s(spec);
  DemoReport r;
  if (name == "oscillator4") {
    r = oscillator4(s, samples);
  } else if (name == "resonant3") {
    r = resonant3(s, samples);
  } else if (name == "vop3") {
    r = vop3(s, samples);
  } else if (name == "spring_mass") {
    r = spring_mass(s, samples, family);
  } else {
    throw InputError("unknown demo '" + name + "' (expected oscillator4, resonant3, vop3 or spring_mass)");
  }
  r.grid_size = r.table.rows.size();
  return r;
}

json demo_summary(const DemoReport& report) {
  json j{{"demo", report.name},
         {"set", spec_to_json(report.spec)},
         {"grid_size", report.grid_size},
         {"max_residual", report.max_residual},
         {"max_deviation", report.max_deviation}};
  for (const auto& [k, v] : report.extras) j[k] = v;
  return j;
}

}  // namespace fractalcalc
