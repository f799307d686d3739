#include "reins/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace reins {

namespace {

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw CsvError("write to " + path + " failed");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& text, const std::string& path, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw CsvError(path + ":" + std::to_string(line) + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_value_csv(const std::string& path, const GridFunction& value) {
  auto out = open_for_writing(path);
  out << "x,V\n";
  for (Index i = 0; i < value.grid().size(); ++i) {
    out << format_double(value.grid().node(i)) << ',' << format_double(value[i]) << '\n';
  }
  finish(out, path);
}

void write_strategy_csv(const std::string& path, const Strategy& strategy, const ModelParams& params) {
  auto out = open_for_writing(path);
  out << "x,u,c_of_u\n";
  for (Index i = 0; i < strategy.grid().size(); ++i) {
    out << format_double(strategy.grid().node(i)) << ',' << format_double(strategy[i]) << ','
        << format_double(premium(params, strategy[i])) << '\n';
  }
  finish(out, path);
}

void write_residual_csv(const std::string& path, const GridFunction& residual) {
  auto out = open_for_writing(path);
  out << "x,residual\n";
  for (Index i = 0; i < residual.grid().size(); ++i) {
    out << format_double(residual.grid().node(i)) << ',' << format_double(residual[i]) << '\n';
  }
  finish(out, path);
}

void write_report_csv(const std::string& path, const PolicyIterationReport& report) {
  auto out = open_for_writing(path);
  out << "iter,sup_change,max_residual\n";
  for (std::size_t k = 0; k < report.iterates.size(); ++k) {
    const auto& it = report.iterates[k];
    out << k << ',' << format_double(it.sup_change) << ',' << format_double(it.max_residual) << '\n';
  }
  finish(out, path);
}

void write_mc_csv(const std::string& path, const std::vector<McRow>& rows) {
  auto out = open_for_writing(path);
  out << "x0,mean,std_error,n_paths,horizon,truncation_bound\n";
  for (const auto& r : rows) {
    out << format_double(r.x0) << ',' << format_double(r.estimate.mean) << ',' << format_double(r.estimate.std_error)
        << ',' << r.estimate.n_paths << ',' << format_double(r.estimate.horizon) << ','
        << format_double(r.estimate.truncation_bound) << '\n';
  }
  finish(out, path);
}

void write_asymptotics_csv(const std::string& path, const std::vector<AsymptoticRow>& rows) {
  auto out = open_for_writing(path);
  out << "delta,u_star_closed_form,u_star_numeric,gamma_at_u_star\n";
  for (const auto& r : rows) {
    out << format_double(r.delta) << ',' << (std::isnan(r.u_closed_form) ? "" : format_double(r.u_closed_form))
        << ',' << format_double(r.u_numeric) << ',' << format_double(r.gamma) << '\n';
  }
  finish(out, path);
}

Strategy read_strategy_csv(const std::string& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open strategy file " + path);
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "x" || header[1] != "u") {
    throw CsvError(path + ": header must start with x,u");
  }
  Eigen::VectorXd controls(grid.size());
  Index count = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() < 2) throw CsvError(path + ":" + std::to_string(line_no) + ": expected at least 2 fields");
    if (count >= grid.size()) throw CsvError(path + ": more rows than grid nodes (" + std::to_string(grid.size()) + ")");
    const double x = parse_double(fields[0], path, line_no);
    const double expected = grid.node(count);
    if (std::abs(x - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw CsvError(path + ":" + std::to_string(line_no) + ": x=" + fields[0] + " does not match grid node " +
                     format_double(expected));
    }
    controls[count++] = parse_double(fields[1], path, line_no);
  }
  if (count != grid.size()) {
    throw CsvError(path + ": " + std::to_string(count) + " rows, grid has " + std::to_string(grid.size()) + " nodes");
  }
  try {
    return Strategy(grid, std::move(controls));
  } catch (const DomainError& e) {
    throw CsvError(path + ": " + e.what());
  }
}

}  // namespace reins
