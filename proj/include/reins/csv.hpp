#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "reins/grid.hpp"
#include "reins/hjb.hpp"
#include "reins/model.hpp"
#include "reins/simulator.hpp"

namespace reins {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trippable text for a double ("%.17g").
std::string format_double(double v);

void write_value_csv(const std::string& path, const GridFunction& value);
void write_strategy_csv(const std::string& path, const Strategy& strategy, const ModelParams& params);
void write_residual_csv(const std::string& path, const GridFunction& residual);
void write_report_csv(const std::string& path, const PolicyIterationReport& report);

struct McRow {
  double x0;
  McEstimate estimate;
};
void write_mc_csv(const std::string& path, const std::vector<McRow>& rows);

struct AsymptoticRow {
  double delta;
  double u_closed_form;  // NaN when there is no closed form
  double u_numeric;
  double gamma;
};
void write_asymptotics_csv(const std::string& path, const std::vector<AsymptoticRow>& rows);

/// Reads a strategy file with header "x,u[,...]" whose x column must match
/// the nodes of `grid`.
Strategy read_strategy_csv(const std::string& path, const Grid& grid);

}  // namespace reins
