#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fractalcalc/io.hpp"

namespace fractalcalc {

/// Result of one worked example: the sampled solution plus how well it satisfies its equation
/// and how far it is from the published closed form.
struct DemoReport {
  std::string name;
  CantorSpec spec;
  Table table;  // x,S,f[,u2]
  double max_residual = 0.0;
  double max_deviation = 0.0;
  std::size_t grid_size = 0;
  std::vector<std::pair<std::string, double>> extras;  // demo-specific figures, in report order

  double extra(const std::string& key) const;
};

/// oscillator4, resonant3, vop3, spring_mass.
const std::vector<std::string>& demo_names();

/// `samples` construction points of the coarsest level that has that many, evenly thinned,
/// plus one probe in the middle of every gap from the first three levels. Sorted.
std::vector<double> demo_grid(const Staircase& s, std::size_t samples);

/// Runs a demo on the given set. `family` picks the spring-mass initial values ('A' or 'B').
/// Unknown names and families throw InputError.
DemoReport run_demo(const std::string& name, const CantorSpec& spec = CantorSpec::triadic(),
                    std::size_t samples = 129, char family = 'B');

json demo_summary(const DemoReport& report);

/// Closed forms for the vop3 example: the one quoted with it, -t e^t ln|t|, and a
/// particular solution of the same equation, -e^t ln(t) / 2 + e^{-t} Ei(2t) / 2.
double vop3_printed_form(double t);
double vop3_particular_form(double t);

/// First level-6 construction point with S(x) > 0.01.
double vop3_anchor(const Staircase& s);

}  // namespace fractalcalc
