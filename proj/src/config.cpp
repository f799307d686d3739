#include "reins/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace reins {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key, "expected a finite number");
  return d;
}

template <class T>
void read_optional(const json& obj, const std::string& where, const std::string& key, T& out) {
  if (!obj.contains(key)) return;
  if constexpr (std::is_same_v<T, std::optional<double>>) {
    if (obj.at(key).is_null()) {
      out.reset();
      return;
    }
    out = get_number(obj, where, key);
  } else if constexpr (std::is_floating_point_v<T>) {
    out = get_number(obj, where, key);
  } else {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key, "expected an integer");
    out = v.get<T>();
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}

Model RunConfig::model() const {
  Model m;
  m.params = params;
  m.claims = claims;
  m.penalty = penalty == PenaltyFunction::Kind::W2 ? PenaltyFunction::w2() : PenaltyFunction::w1();
  return m;
}

Grid RunConfig::make_grid() const { return Grid(grid.x_lo, grid.x_hi, grid.n_points); }

PolicyIterationConfig RunConfig::policy_iteration_config(unsigned threads) const {
  PolicyIterationConfig c;
  c.tol_value = solver.tol_value;
  c.tol_residual = solver.tol_residual;
  c.max_iters = solver.max_iters;
  c.improvement.control_grid_size = solver.control_grid_size;
  c.improvement.refine_tol = solver.refine_tol;
  c.improvement.threads = threads;
  return c;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, "", {"model", "claims", "penalty", "grid", "solver", "mc", "asymptotics", "output"});
  RunConfig cfg;
  try {
    if (!doc.contains("model")) throw ConfigError("model", "missing section");
    if (!doc.contains("claims")) throw ConfigError("claims", "missing section");

    const auto& claims = doc.at("claims");
    reject_unknown(claims, "claims", {"kind", "rate", "shape"});
    if (!claims.contains("kind") || !claims.at("kind").is_string()) throw ConfigError("claims.kind", "expected a string");
    const auto kind = claims.at("kind").get<std::string>();
    try {
      if (kind == "exponential") {
        if (claims.contains("shape")) throw ConfigError("claims.shape", "not a parameter of the exponential law");
        cfg.claims = ClaimDistribution::exponential(claims.contains("rate") ? get_number(claims, "claims", "rate") : 1.0);
      } else if (kind == "pareto") {
        if (claims.contains("rate")) throw ConfigError("claims.rate", "not a parameter of the pareto law");
        if (!claims.contains("shape")) throw ConfigError("claims.shape", "missing");
        cfg.claims = ClaimDistribution::pareto(get_number(claims, "claims", "shape"));
      } else {
        throw ConfigError("claims.kind", "expected \"exponential\" or \"pareto\", got \"" + kind + "\"");
      }
    } catch (const DomainError& e) {
      throw ConfigError("claims", e.what());
    }

    const auto& model = doc.at("model");
    reject_unknown(model, "model", {"lambda", "beta", "eta", "theta", "delta"});
    for (const char* key : {"lambda", "eta", "theta", "delta"}) {
      if (!model.contains(key)) throw ConfigError(std::string("model.") + key, "missing");
    }
    cfg.params.lambda = get_number(model, "model", "lambda");
    cfg.params.eta = get_number(model, "model", "eta");
    cfg.params.theta = get_number(model, "model", "theta");
    cfg.params.delta = get_number(model, "model", "delta");
    cfg.params.beta = cfg.claims.mean();
    if (model.contains("beta")) {
      const double beta = get_number(model, "model", "beta");
      if (std::abs(beta - cfg.claims.mean()) > 1e-12 * std::max(1.0, beta)) {
        std::ostringstream os;
        os << "beta " << beta << " differs from the mean " << cfg.claims.mean() << " of " << cfg.claims.name();
        throw ConfigError("model.beta", os.str());
      }
      cfg.params.beta = beta;
    }
    try {
      cfg.params.validate();
    } catch (const DomainError& e) {
      throw ConfigError("model", e.what());
    }

    if (doc.contains("penalty")) {
      const auto& pen = doc.at("penalty");
      reject_unknown(pen, "penalty", {"kind"});
      if (!pen.contains("kind") || !pen.at("kind").is_string()) throw ConfigError("penalty.kind", "expected a string");
      const auto pk = pen.at("kind").get<std::string>();
      if (pk == "w1") {
        cfg.penalty = PenaltyFunction::Kind::W1;
      } else if (pk == "w2") {
        cfg.penalty = PenaltyFunction::Kind::W2;
      } else {
        throw ConfigError("penalty.kind", "expected \"w1\" or \"w2\", got \"" + pk + "\"");
      }
    }

    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      reject_unknown(g, "grid", {"x_lo", "x_hi", "n_points"});
      read_optional(g, "grid", "x_lo", cfg.grid.x_lo);
      read_optional(g, "grid", "x_hi", cfg.grid.x_hi);
      read_optional(g, "grid", "n_points", cfg.grid.n_points);
    }
    try {
      (void)cfg.make_grid();
    } catch (const DomainError& e) {
      throw ConfigError("grid", e.what());
    }

    if (doc.contains("solver")) {
      const auto& s = doc.at("solver");
      reject_unknown(s, "solver",
                     {"tol_value", "tol_residual", "max_iters", "control_grid_size", "refine_tol", "phi_lo", "phi_hi"});
      read_optional(s, "solver", "tol_value", cfg.solver.tol_value);
      read_optional(s, "solver", "tol_residual", cfg.solver.tol_residual);
      read_optional(s, "solver", "max_iters", cfg.solver.max_iters);
      read_optional(s, "solver", "control_grid_size", cfg.solver.control_grid_size);
      read_optional(s, "solver", "refine_tol", cfg.solver.refine_tol);
      read_optional(s, "solver", "phi_lo", cfg.solver.phi_lo);
      read_optional(s, "solver", "phi_hi", cfg.solver.phi_hi);
    }
    if (cfg.solver.max_iters < 1) throw ConfigError("solver.max_iters", "must be at least 1");
    if (cfg.solver.control_grid_size < 1) throw ConfigError("solver.control_grid_size", "must be at least 1");
    if (cfg.solver.refine_tol < 0.0) throw ConfigError("solver.refine_tol", "must be nonnegative");
    const double bound = cfg.model().penalty.bound();
    for (const auto& [name, v] : {std::pair{"solver.phi_lo", cfg.solver.phi_lo}, std::pair{"solver.phi_hi", cfg.solver.phi_hi}}) {
      if (v && !(*v >= 0.0 && *v <= bound)) throw ConfigError(name, "must lie in [0, penalty bound]");
    }
    for (const auto& [name, v] : {std::pair{"solver.tol_value", cfg.solver.tol_value}, std::pair{"solver.tol_residual", cfg.solver.tol_residual}}) {
      if (v && !(*v > 0.0)) throw ConfigError(name, "must be positive");
    }

    if (doc.contains("mc")) {
      const auto& m = doc.at("mc");
      reject_unknown(m, "mc", {"n_paths", "horizon", "abs_tol", "seed"});
      read_optional(m, "mc", "n_paths", cfg.mc.n_paths);
      read_optional(m, "mc", "horizon", cfg.mc.horizon);
      read_optional(m, "mc", "abs_tol", cfg.mc.abs_tol);
      read_optional(m, "mc", "seed", cfg.mc.seed);
    }
    if (cfg.mc.n_paths < 2) throw ConfigError("mc.n_paths", "must be at least 2");
    if (cfg.mc.horizon && !(*cfg.mc.horizon > 0.0)) throw ConfigError("mc.horizon", "must be positive");
    if (!(cfg.mc.abs_tol > 0.0)) throw ConfigError("mc.abs_tol", "must be positive");
    if (!cfg.mc.horizon && !(cfg.params.delta > 0.0)) {
      throw ConfigError("mc.horizon", "required when model.delta is 0");
    }

    if (doc.contains("asymptotics")) {
      const auto& a = doc.at("asymptotics");
      reject_unknown(a, "asymptotics", {"deltas"});
      if (a.contains("deltas")) {
        if (!a.at("deltas").is_array()) throw ConfigError("asymptotics.deltas", "expected an array");
        for (const auto& d : a.at("deltas")) {
          if (!d.is_number() || !(d.get<double>() >= 0.0)) {
            throw ConfigError("asymptotics.deltas", "expected nonnegative numbers");
          }
          cfg.asymptotic_deltas.push_back(d.get<double>());
        }
      }
    }
    if (cfg.asymptotic_deltas.empty()) cfg.asymptotic_deltas.push_back(cfg.params.delta);

    if (doc.contains("output")) {
      if (!doc.at("output").is_string()) throw ConfigError("output", "expected a string");
      cfg.output = doc.at("output").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("invalid value: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string normalized_config(const RunConfig& cfg) {
  json doc;
  doc["model"] = {{"lambda", cfg.params.lambda},
                  {"beta", cfg.params.beta},
                  {"eta", cfg.params.eta},
                  {"theta", cfg.params.theta},
                  {"delta", cfg.params.delta}};
  if (const auto* e = std::get_if<Exponential>(&cfg.claims.law())) {
    doc["claims"] = {{"kind", "exponential"}, {"rate", e->rate}};
  } else {
    doc["claims"] = {{"kind", "pareto"}, {"shape", std::get<Pareto>(cfg.claims.law()).shape}};
  }
  doc["penalty"] = {{"kind", cfg.penalty == PenaltyFunction::Kind::W2 ? "w2" : "w1"}};
  doc["grid"] = {{"x_lo", cfg.grid.x_lo}, {"x_hi", cfg.grid.x_hi}, {"n_points", cfg.grid.n_points}};
  doc["solver"] = {{"tol_value", optional_json(cfg.solver.tol_value)},
                   {"tol_residual", optional_json(cfg.solver.tol_residual)},
                   {"max_iters", cfg.solver.max_iters},
                   {"control_grid_size", cfg.solver.control_grid_size},
                   {"refine_tol", cfg.solver.refine_tol},
                   {"phi_lo", optional_json(cfg.solver.phi_lo)},
                   {"phi_hi", optional_json(cfg.solver.phi_hi)}};
  doc["mc"] = {{"n_paths", cfg.mc.n_paths},
               {"horizon", optional_json(cfg.mc.horizon)},
               {"abs_tol", cfg.mc.abs_tol},
               {"seed", cfg.mc.seed}};
  doc["asymptotics"] = {{"deltas", cfg.asymptotic_deltas}};
  doc["output"] = cfg.output;
  return doc.dump(2) + "\n";
}

}  // namespace reins
