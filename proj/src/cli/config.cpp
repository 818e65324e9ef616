// SPDX-License-Identifier: Apache-2.0
#include "fastrk/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fastrk::cli {

namespace {

using nlohmann::json;

template <typename T>
struct EnumName {
  const char* name;
  T value;
};

constexpr EnumName<ProblemKind> kProblemNames[] = {
    {"scalar", ProblemKind::Scalar},
    {"diagonal", ProblemKind::Diagonal},
    {"heat1d", ProblemKind::Heat1d},
    {"heat2d-robin", ProblemKind::Heat2dRobin},
};
constexpr EnumName<TableauKind> kTableauNames[] = {
    {"implicit-euler", TableauKind::ImplicitEuler},
    {"radau-iia-2", TableauKind::RadauIIA2},
    {"radau-iia-3", TableauKind::RadauIIA3},
};
constexpr EnumName<ParamStrategy> kStrategyNames[] = {
    {"experiment", ParamStrategy::Experiment},
    {"theory", ParamStrategy::Theory},
};
constexpr EnumName<ForcingKind> kForcingNames[] = {
    {"one", ForcingKind::One},
    {"sin2", ForcingKind::Sin2},
};

template <typename T, std::size_t N>
const char* enum_name(const EnumName<T> (&table)[N], T v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

template <typename T, std::size_t N>
T enum_value(const EnumName<T> (&table)[N], const std::string& s,
             const char* what) {
  for (const auto& e : table)
    if (s == e.name) return e.value;
  std::ostringstream msg;
  msg << "invalid " << what << " '" << s << "'; expected one of:";
  for (const auto& e : table) msg << " " << e.name;
  throw ConfigError(msg.str());
}

/// Pulls known keys out of a JSON object and complains about leftovers.
class StrictObject {
 public:
  StrictObject(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  ~StrictObject() = default;

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("unknown key '" + it.key() + "' in " + where_);
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const char* key) const { return j_.at(key); }

  void get_int(const char* key, int& out, long long lo, long long hi) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer())
      throw ConfigError(std::string(key) + " must be an integer");
    const long long n = v.get<long long>();
    if (n < lo || n > hi) range_error(key, lo, hi);
    out = static_cast<int>(n);
  }

  void get_opt_int(const char* key, std::optional<int>& out, long long lo,
                   long long hi) {
    int tmp = 0;
    const bool present = has(key);
    if (!present) return;
    seen_.insert(key);
    const json& v = at(key);
    if (!v.is_number_integer())
      throw ConfigError(std::string(key) + " must be an integer");
    const long long n = v.get<long long>();
    if (n < lo || n > hi) range_error(key, lo, hi);
    tmp = static_cast<int>(n);
    out = tmp;
  }

  void get_double(const char* key, double& out, bool positive = false) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(std::string(key) + " must be finite");
    if (positive && !(x > 0.0))
      throw ConfigError(std::string(key) + " must be positive");
    out = x;
  }

  void get_opt_double(const char* key, std::optional<double>& out,
                      bool positive = false) {
    double tmp = 0.0;
    if (!has(key)) return;
    get_seen_double(key, tmp, positive);
    out = tmp;
  }

  void get_bool(const char* key, bool& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
    out = v.get<bool>();
  }

  void get_u64(const char* key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)))
      throw ConfigError(std::string(key) + " must be a nonnegative integer");
    out = v.get<std::uint64_t>();
  }

  template <typename T, std::size_t N>
  void get_enum(const char* key, const EnumName<T> (&table)[N], T& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
    out = enum_value(table, v.get<std::string>(), key);
  }

  void get_double_list(const char* key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(std::string(key) + " must be an array");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>()))
        throw ConfigError(std::string(key) + " entries must be finite numbers");
      out.push_back(e.get<double>());
    }
  }

 private:
  void get_seen_double(const char* key, double& out, bool positive) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(std::string(key) + " must be finite");
    if (positive && !(x > 0.0))
      throw ConfigError(std::string(key) + " must be positive");
    out = x;
  }

  [[noreturn]] void range_error(const char* key, long long lo, long long hi) const {
    std::ostringstream msg;
    msg << key << " must lie in [" << lo << ", " << hi << "]";
    throw ConfigError(msg.str());
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void validate(const RunConfig& cfg) {
  if (!(cfg.eps_target > 0.0 && cfg.eps_target < 1.0))
    throw ConfigError("eps_target must lie in (0, 1)");
  if (cfg.diagonal.entries.empty() && cfg.diagonal.count < 1)
    throw ConfigError("diagonal.count must be >= 1");
  if (cfg.diagonal.min > cfg.diagonal.max)
    throw ConfigError("diagonal.min must not exceed diagonal.max");
  cfg.step_size();  // throws on h/t_final inconsistency
}

}  // namespace

double RunConfig::step_size() const {
  if (h && t_final) {
    if (std::abs(n_steps * *h - *t_final) > 1e-9 * std::max(1.0, std::abs(*t_final)))
      throw ConfigError("n_steps * h is inconsistent with t_final");
    return *h;
  }
  if (h) return *h;
  return t_final.value_or(20.0) / n_steps;
}

RunConfig RunConfig::profile(const std::string& name) {
  if (name == "reference") return RunConfig{};
  throw ConfigError("unknown profile '" + name + "'; available: reference");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  StrictObject top(j, "config");
  top.get_enum("problem", kProblemNames, cfg.problem);
  top.get_enum("tableau", kTableauNames, cfg.tableau);
  top.get_int("n_steps", cfg.n_steps, 1, 1000000000LL);
  top.get_opt_double("t_final", cfg.t_final, /*positive=*/true);
  top.get_opt_double("h", cfg.h, /*positive=*/true);
  top.get_int("base", cfg.base, 2, 1000);
  top.get_opt_int("k_max", cfg.k_max, 1, 100000);
  top.get_enum("strategy", kStrategyNames, cfg.strategy);
  top.get_double("eps_target", cfg.eps_target, /*positive=*/true);
  top.get_opt_int("direct_levels", cfg.direct_levels, 1, 64);
  top.get_bool("symmetry", cfg.symmetry);
  top.get_int("threads", cfg.threads, 1, 1024);
  top.get_u64("seed", cfg.seed);
  top.get_enum("forcing", kForcingNames, cfg.forcing);
  top.get_double("u0_scale", cfg.u0_scale);

  if (top.has("scalar")) {
    StrictObject o(top.at("scalar"), "scalar");
    o.get_double("a", cfg.scalar.a);
    o.finish();
  }
  if (top.has("diagonal")) {
    StrictObject o(top.at("diagonal"), "diagonal");
    o.get_double_list("entries", cfg.diagonal.entries);
    o.get_int("count", cfg.diagonal.count, 1, 100000000);
    o.get_double("min", cfg.diagonal.min);
    o.get_double("max", cfg.diagonal.max);
    o.finish();
  }
  if (top.has("heat1d")) {
    StrictObject o(top.at("heat1d"), "heat1d");
    o.get_int("dim", cfg.heat1d.dim, 1, 100000000);
    o.finish();
  }
  if (top.has("heat2d")) {
    StrictObject o(top.at("heat2d"), "heat2d");
    o.get_int("nx", cfg.heat2d.nx, 1, 100000);
    o.get_int("ny", cfg.heat2d.ny, 1, 100000);
    o.get_double("lx", cfg.heat2d.lx, /*positive=*/true);
    o.get_double("ly", cfg.heat2d.ly, /*positive=*/true);
    o.get_double("rho", cfg.heat2d.rho);
    o.get_double("beta_amplitude", cfg.heat2d.beta_amplitude);
    o.finish();
  }
  top.finish();

  if (cfg.heat2d.rho < 0.0) throw ConfigError("heat2d.rho must be nonnegative");
  validate(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  j["problem"] = enum_name(kProblemNames, cfg.problem);
  j["tableau"] = enum_name(kTableauNames, cfg.tableau);
  j["n_steps"] = cfg.n_steps;
  j["t_final"] = cfg.t_final ? json(*cfg.t_final) : json(nullptr);
  j["h"] = cfg.h ? json(*cfg.h) : json(nullptr);
  j["base"] = cfg.base;
  j["k_max"] = cfg.k_max ? json(*cfg.k_max) : json(nullptr);
  j["strategy"] = enum_name(kStrategyNames, cfg.strategy);
  j["eps_target"] = cfg.eps_target;
  j["direct_levels"] = cfg.direct_levels ? json(*cfg.direct_levels) : json(nullptr);
  j["symmetry"] = cfg.symmetry;
  j["threads"] = cfg.threads;
  j["seed"] = cfg.seed;
  j["forcing"] = enum_name(kForcingNames, cfg.forcing);
  j["u0_scale"] = cfg.u0_scale;
  j["scalar"] = {{"a", cfg.scalar.a}};
  j["diagonal"] = {{"entries", cfg.diagonal.entries},
                   {"count", cfg.diagonal.count},
                   {"min", cfg.diagonal.min},
                   {"max", cfg.diagonal.max}};
  j["heat1d"] = {{"dim", cfg.heat1d.dim}};
  j["heat2d"] = {{"nx", cfg.heat2d.nx},
                 {"ny", cfg.heat2d.ny},
                 {"lx", cfg.heat2d.lx},
                 {"ly", cfg.heat2d.ly},
                 {"rho", cfg.heat2d.rho},
                 {"beta_amplitude", cfg.heat2d.beta_amplitude}};
  return j.dump(2) + "\n";
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

const char* to_string(ProblemKind p) { return enum_name(kProblemNames, p); }
const char* to_string(ForcingKind f) { return enum_name(kForcingNames, f); }
const char* to_string(ParamStrategy s) { return enum_name(kStrategyNames, s); }
const char* to_string(TableauKind t) { return enum_name(kTableauNames, t); }

}  // namespace fastrk::cli
