#pragma once

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fractalcalc/fode.hpp"

namespace fractalcalc {

using json = nlohmann::json;

/// 17 significant digits, round-trippable.
std::string format_real(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header row always present, `\n` line endings.
void write_csv(std::ostream& out, const Table& table);

json spec_to_json(const CantorSpec& spec);
/// Accepts the JSON object form or the `cantor:...` string form.
CantorSpec spec_from_json(const json& j);

json staircase_to_json(const Staircase& s);
Staircase staircase_from_json(const json& j);

/// Parses a problem file. Schema violations throw InputError.
FODEProblem problem_from_json(const json& j);

json solution_to_json(const FODESolution& sol);
FODESolution solution_from_json(const json& j);

/// Uniform x-grid of n points on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// `x,S` table.
Table staircase_table(const Staircase& s, std::size_t n);

/// `x,S,f` table; quadrature-backed solutions with a singular forcing are sampled on [x0, b].
Table solution_table(const FODESolution& sol, std::size_t n);

}  // namespace fractalcalc
