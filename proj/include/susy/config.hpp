#pragma once

// Run configuration shared by the CLI subcommands, with a strict JSON form.

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "susy/core.hpp"
#include "susy/elliptic.hpp"
#include "susy/seeds.hpp"

namespace susy {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double x_min = -15.0;
  double x_max = 15.0;
  int n_points = 4001;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// One scanned parameter: `steps` evenly spaced values from..to inclusive.
struct ScanAxis {
  std::string name;  // epsilon, C1.., D1..
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  friend bool operator==(const ScanAxis&, const ScanAxis&) = default;

  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < steps; ++i) v.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
    return v;
  }
};

inline constexpr int config_schema = 1;

struct RunConfig {
  SeedFamily family = SeedFamily::FreeParticle;
  double m = 0.5;
  std::optional<double> epsilon;
  std::optional<cplx> delta;  // Lame only, alternative to epsilon
  int k = 2;
  std::vector<double> C;  // k-2 or k-1 entries; C_{k-1} is the spectator
  std::vector<double> D;  // k-1 entries
  std::optional<GridSpec> grid;
  std::vector<double> potential;  // numeric family: V0 at the grid points
  std::string output;             // empty: standard output
  std::string format = "csv";
  bool crosscheck = true;
  bool check_chain = true;
  bool normalize = false;
  std::vector<ScanAxis> scan;
  long long scan_cap = 100000;
  double e_min = -2.0, e_max = 4.0;
  int n_energies = 400;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  void validate() const {
    if (k < 2) throw ConfigError("k must be at least 2");
    if (!(m > 0.0 && m < 1.0)) throw ConfigError("m must lie in (0, 1)");
    if (epsilon.has_value() == delta.has_value()) throw ConfigError("give exactly one of epsilon and delta");
    if (delta && family != SeedFamily::Lame) throw ConfigError("delta is only meaningful for the Lame family");
    if (epsilon && !std::isfinite(*epsilon)) throw ConfigError("epsilon must be finite");
    const auto need = static_cast<std::size_t>(k - 1);
    if (C.size() != need && C.size() + 1 != need)
      throw ConfigError("C needs k-2 entries (or k-1 with the spectator C_{k-1}), got " + std::to_string(C.size()));
    if (D.size() != need) throw ConfigError("D needs k-1 entries, got " + std::to_string(D.size()));
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (grid) {
      if (!(grid->x_max > grid->x_min)) throw ConfigError("grid needs x_max > x_min");
      if (grid->n_points < static_cast<int>(Grid::min_points))
        throw ConfigError("grid needs at least " + std::to_string(Grid::min_points) + " points");
    }
    if (family == SeedFamily::NumericPotential &&
        potential.size() != resolved_grid().size())
      throw ConfigError("numeric family needs one potential value per grid point");
    for (const auto& a : scan) {
      if (a.steps < 0) throw ConfigError("scan steps must be non-negative");
      if (!valid_axis(a.name)) throw ConfigError("unknown scan parameter '" + a.name + "'");
    }
    if (scan_cap < 0) throw ConfigError("scan cap must be non-negative");
    if (n_energies < 2 || !(e_max > e_min)) throw ConfigError("band sweep needs e_max > e_min and >= 2 energies");
  }

  bool valid_axis(const std::string& n) const {
    if (n == "epsilon") return true;
    if (n.size() < 2 || (n[0] != 'C' && n[0] != 'D')) return false;
    try {
      std::size_t used = 0;
      const int i = std::stoi(n.substr(1), &used);
      return used == n.size() - 1 && i >= 1 && i <= k - 1;
    } catch (...) {
      return false;
    }
  }

  Grid resolved_grid() const {
    if (grid) return Grid(grid->x_min, grid->x_max, static_cast<std::size_t>(grid->n_points));
    if (family == SeedFamily::Lame) {
      const double K = elliptic_K(m);
      return Grid(-4.0 * K, 4.0 * K, 4001);
    }
    return Grid(-15.0, 15.0, 4001);
  }

  double resolved_epsilon() const {
    if (epsilon) return *epsilon;
    const cplx e = epsilon_from_delta(*delta, make_lattice(m));
    if (std::abs(e.imag()) > 1e-12 * std::max(1.0, std::abs(e)))
      throw ConfigError("delta gives a complex factorization energy");
    return e.real();
  }

  /// Spectator C_{k-1} when given, else 0. It drops out of W_k.
  double spectator() const { return C.size() == static_cast<std::size_t>(k - 1) ? C.back() : 0.0; }

  ChainParameters chain_parameters() const {
    ChainParameters p;
    p.epsilon = resolved_epsilon();
    p.k = k;
    p.C = C;
    if (p.C.size() + 1 == static_cast<std::size_t>(k - 1)) p.C.push_back(0.0);
    p.D = D;
    p.validate();
    return p;
  }

  SeedRequest seed_request() const {
    SeedRequest r;
    r.family = family;
    r.epsilon = resolved_epsilon();
    r.m = m;
    r.k = k;
    r.grid = resolved_grid();
    if (family == SeedFamily::NumericPotential) {
      SampledFunction V(r.grid);
      for (std::size_t i = 0; i < V.size(); ++i) V[i] = potential[i];
      r.potential_samples = std::move(V);
    }
    return r;
  }
};

/// Figure-caption vector: (m, eps, C_1..C_{k-2}, D_1..D_{k-1}), optionally
/// followed by the spectator C_{k-1}. Applies to cfg in place.
inline void apply_caption(RunConfig& cfg, const std::vector<double>& values) {
  const auto k = static_cast<std::size_t>(cfg.k);
  const std::size_t base = 2 + (k - 2) + (k - 1);
  if (values.size() != base && values.size() != base + 1)
    throw ConfigError("caption for k=" + std::to_string(k) + " needs " + std::to_string(base) + " or " +
                      std::to_string(base + 1) + " numbers, got " + std::to_string(values.size()));
  cfg.m = values[0];
  cfg.epsilon = values[1];
  cfg.delta.reset();
  cfg.C.assign(values.begin() + 2, values.begin() + 2 + static_cast<long>(k - 2));
  cfg.D.assign(values.begin() + 2 + static_cast<long>(k - 2), values.begin() + static_cast<long>(base));
  if (values.size() == base + 1) cfg.C.push_back(values.back());
}

// ---------------------------------------------------------------------------
// JSON

inline SeedFamily parse_family(const std::string& s) {
  if (s == "free" || s == "free_particle") return SeedFamily::FreeParticle;
  if (s == "lame") return SeedFamily::Lame;
  if (s == "numeric") return SeedFamily::NumericPotential;
  throw ConfigError("unknown family '" + s + "' (free, lame, numeric)");
}

inline nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["schema"] = config_schema;
  j["family"] = to_string(c.family);
  j["m"] = c.m;
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  if (c.delta) j["delta"] = json::array({c.delta->real(), c.delta->imag()});
  j["k"] = c.k;
  j["C"] = c.C;
  j["D"] = c.D;
  if (c.grid) j["grid"] = {{"x_min", c.grid->x_min}, {"x_max", c.grid->x_max}, {"n_points", c.grid->n_points}};
  if (!c.potential.empty()) j["potential"] = c.potential;
  j["output"] = c.output;
  j["format"] = c.format;
  j["crosscheck"] = c.crosscheck;
  j["check_chain"] = c.check_chain;
  j["normalize"] = c.normalize;
  json axes = json::array();
  for (const auto& a : c.scan) axes.push_back({{"name", a.name}, {"from", a.from}, {"to", a.to}, {"steps", a.steps}});
  j["scan"] = axes;
  j["scan_cap"] = c.scan_cap;
  j["bands"] = {{"e_min", c.e_min}, {"e_max", c.e_max}, {"n_energies", c.n_energies}};
  return j;
}

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get_as(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

/// Missing keys keep their defaults; unknown keys are errors.
inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown(j,
                         {"schema", "family", "m", "epsilon", "delta", "k", "C", "D", "grid", "potential", "output",
                          "format", "crosscheck", "check_chain", "normalize", "scan", "scan_cap", "bands"},
                         "config");
  if (!j.contains("schema")) throw ConfigError("config lacks the 'schema' field");
  if (detail::get_as<int>(j, "schema") != config_schema)
    throw ConfigError("unsupported config schema " + j.at("schema").dump());
  RunConfig c;
  if (j.contains("family")) c.family = parse_family(detail::get_as<std::string>(j, "family"));
  if (j.contains("m")) c.m = detail::get_as<double>(j, "m");
  if (j.contains("epsilon")) c.epsilon = detail::get_as<double>(j, "epsilon");
  if (j.contains("delta")) {
    const auto& d = j.at("delta");
    if (d.is_number()) {
      c.delta = cplx(d.get<double>(), 0.0);
    } else if (d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number()) {
      c.delta = cplx(d[0].get<double>(), d[1].get<double>());
    } else {
      throw ConfigError("delta must be a number or [re, im]");
    }
  }
  if (j.contains("k")) c.k = detail::get_as<int>(j, "k");
  if (j.contains("C")) c.C = detail::get_as<std::vector<double>>(j, "C");
  if (j.contains("D")) c.D = detail::get_as<std::vector<double>>(j, "D");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) throw ConfigError("grid must be an object");
    detail::reject_unknown(g, {"x_min", "x_max", "n_points"}, "grid");
    GridSpec s;
    s.x_min = detail::get_as<double>(g, "x_min");
    s.x_max = detail::get_as<double>(g, "x_max");
    s.n_points = detail::get_as<int>(g, "n_points");
    c.grid = s;
  }
  if (j.contains("potential")) c.potential = detail::get_as<std::vector<double>>(j, "potential");
  if (j.contains("output")) c.output = detail::get_as<std::string>(j, "output");
  if (j.contains("format")) c.format = detail::get_as<std::string>(j, "format");
  if (j.contains("crosscheck")) c.crosscheck = detail::get_as<bool>(j, "crosscheck");
  if (j.contains("check_chain")) c.check_chain = detail::get_as<bool>(j, "check_chain");
  if (j.contains("normalize")) c.normalize = detail::get_as<bool>(j, "normalize");
  if (j.contains("scan")) {
    const auto& s = j.at("scan");
    if (!s.is_array()) throw ConfigError("scan must be an array of axes");
    for (const auto& a : s) {
      if (!a.is_object()) throw ConfigError("scan axis must be an object");
      detail::reject_unknown(a, {"name", "from", "to", "steps"}, "scan axis");
      c.scan.push_back({detail::get_as<std::string>(a, "name"), detail::get_as<double>(a, "from"),
                        detail::get_as<double>(a, "to"), detail::get_as<int>(a, "steps")});
    }
  }
  if (j.contains("scan_cap")) c.scan_cap = detail::get_as<long long>(j, "scan_cap");
  if (j.contains("bands")) {
    const auto& b = j.at("bands");
    if (!b.is_object()) throw ConfigError("bands must be an object");
    detail::reject_unknown(b, {"e_min", "e_max", "n_energies"}, "bands");
    if (b.contains("e_min")) c.e_min = detail::get_as<double>(b, "e_min");
    if (b.contains("e_max")) c.e_max = detail::get_as<double>(b, "e_max");
    if (b.contains("n_energies")) c.n_energies = detail::get_as<int>(b, "n_energies");
  }
  return c;
}

inline RunConfig config_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_string(ss.str());
}

}  // namespace susy
