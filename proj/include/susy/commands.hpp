#pragma once

// The five CLI operations. Each returns an exit code: 0 success, 2 singular
// transform or failed checks (data still written). Errors are thrown and
// mapped to 1 by the caller.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "susy/config.hpp"
#include "susy/spectral.hpp"
#include "susy/transform.hpp"
#include "susy/wronskian.hpp"

namespace susy {

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_flagged = 2 };

/// 17 significant digits, enough for any double to round-trip.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes through a temporary in the same directory and renames it into
/// place. An empty path means standard output.
inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::random_device rd;
  const fs::path tmp = target.string() + ".tmp" + std::to_string(rd() % 1000000u);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path + ": " + ec.message());
  }
}

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline std::string render_checks(const std::vector<CheckRow>& rows, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    nlohmann::json j;
    j["schema"] = config_schema;
    j["checks"] = nlohmann::json::array();
    bool all = true;
    for (const auto& r : rows) {
      j["checks"].push_back({{"name", r.name}, {"value", r.value}, {"tolerance", r.tolerance}, {"pass", r.pass}});
      all = all && r.pass;
    }
    j["all_pass"] = all;
    os << j.dump(2) << "\n";
  } else {
    os << "check,value,tolerance,pass\n";
    for (const auto& r : rows)
      os << '"' << r.name << "\"," << fmt17(r.value) << "," << fmt17(r.tolerance) << "," << (r.pass ? "true" : "false")
         << "\n";
  }
  return os.str();
}

/// Per-family tolerances used by verify and identities.
struct FamilyTolerances {
  double seed_wronskian = 1e-9;
  double seed_residual;
  double chain;
  double methods;
  double identities;
  double psi;
};

inline FamilyTolerances tolerances_for(SeedFamily f) {
  switch (f) {
    case SeedFamily::FreeParticle: return {1e-9, 1e-6, 1e-7, 1e-8, 1e-9, 1e-6};
    case SeedFamily::Lame: return {1e-9, 1e-4, 1e-4, 1e-7, 1e-7, 1e-4};
    case SeedFamily::NumericPotential: return {1e-9, 1e-4, 1e-4, 1e-7, 1e-6, 1e-4};
  }
  return {1e-9, 1e-4, 1e-4, 1e-7, 1e-7, 1e-4};
}

// ---------------------------------------------------------------------------
// transform

struct TransformOutcome {
  Pipeline pipeline;
  NormalizabilityReport normalizability;
  double max_imag_W = 0.0;
  int exit_code = exit_ok;
};

inline TransformOutcome run_transform(const RunConfig& cfg) {
  cfg.validate();
  const auto params = cfg.chain_parameters();
  auto seed = make_seed(cfg.seed_request());
  TransformOutcome o{run_pipeline(seed, params, cfg.crosscheck), {}, 0.0, exit_ok};
  o.max_imag_W = relative_imag(o.pipeline.result.W_k);
  if (!o.pipeline.result.singular() && o.pipeline.result.psi_k.all_finite())
    o.normalizability = normalizability_check(o.pipeline.result.psi_k);
  o.exit_code = o.pipeline.result.singular() ? exit_flagged : exit_ok;
  return o;
}

inline nlohmann::json transform_diagnostics(const RunConfig& cfg, const TransformOutcome& o) {
  const auto& r = o.pipeline.result;
  nlohmann::json d;
  d["method"] = r.diagnostics.method;
  d["crosscheck"] = r.diagnostics.crosscheck;
  d["chain_residuals"] = r.diagnostics.chain_residuals;
  d["psi_residual"] = std::isfinite(r.diagnostics.psi_residual) ? nlohmann::json(r.diagnostics.psi_residual)
                                                                 : nlohmann::json(nullptr);
  d["max_imag_Vk"] = r.diagnostics.max_imag_Vk;
  d["max_imag_psi"] = r.diagnostics.max_imag_psi;
  d["max_imag_W"] = o.max_imag_W;
  d["singular"] = r.singular();
  auto br = nlohmann::json::array();
  for (const auto& b : r.singularities) br.push_back({b.left, b.right});
  d["singularities"] = br;
  if (!r.singular()) {
    d["state"] = to_string(o.normalizability.kind);
    d["tail_fraction"] = o.normalizability.tail_fraction;
    d["edge_ratio"] = o.normalizability.edge_ratio;
  }
  d["spectator"] = {{"C_k-1", cfg.spectator()}, {"effect", "no-effect"}};
  if (o.pipeline.seed.delta) {
    const cplx dl = *o.pipeline.seed.delta;
    d["delta"] = {dl.real(), dl.imag()};
  }
  return d;
}

inline std::string render_transform(const RunConfig& cfg, const TransformOutcome& o) {
  const auto& r = o.pipeline.result;
  const SampledFunction psi = cfg.normalize ? l2_normalized(r.psi_k) : r.psi_k;
  const Grid& g = r.V0.grid();
  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema"] = config_schema;
    j["config"] = to_json(cfg);
    std::vector<double> x, V0, Vk, pr, pi_, wr, wi;
    for (std::size_t i = 0; i < g.size(); ++i) {
      x.push_back(g.x(i));
      V0.push_back(r.V0[i].real());
      Vk.push_back(r.Vk[i].real());
      pr.push_back(psi[i].real());
      pi_.push_back(psi[i].imag());
      wr.push_back(r.W_k[i].real());
      wi.push_back(r.W_k[i].imag());
    }
    j["data"] = {{"x", x}, {"V0", V0}, {"Vk", Vk}, {"psi_k_re", pr}, {"psi_k_im", pi_}, {"W_re", wr}, {"W_im", wi}};
    j["diagnostics"] = transform_diagnostics(cfg, o);
    os << j.dump() << "\n";
  } else {
    os << "x,V0,Vk,psi_k_re,psi_k_im,W_re,W_im\n";
    for (std::size_t i = 0; i < g.size(); ++i)
      os << fmt17(g.x(i)) << ',' << fmt17(r.V0[i].real()) << ',' << fmt17(r.Vk[i].real()) << ','
         << fmt17(psi[i].real()) << ',' << fmt17(psi[i].imag()) << ',' << fmt17(r.W_k[i].real()) << ','
         << fmt17(r.W_k[i].imag()) << '\n';
  }
  return os.str();
}

inline int cmd_transform(const RunConfig& cfg, std::ostream& log = std::cerr) {
  const auto o = run_transform(cfg);
  write_output(cfg.output, render_transform(cfg, o));
  const auto& r = o.pipeline.result;
  if (r.singular()) {
    log << "singular: W_" << cfg.k << " vanishes in";
    for (const auto& b : r.singularities) log << " [" << fmt17(b.left) << ", " << fmt17(b.right) << "]";
    log << "\n";
  } else {
    log << "non-singular; psi residual " << r.diagnostics.psi_residual << ", added state "
        << to_string(o.normalizability.kind) << "\n";
  }
  return o.exit_code;
}

// ---------------------------------------------------------------------------
// verify

inline std::vector<CheckRow> verify_checks(const RunConfig& cfg) {
  cfg.validate();
  const auto tol = tolerances_for(cfg.family);
  const auto params = cfg.chain_parameters();
  auto req = cfg.seed_request();
  req.k = std::max(cfg.k, 3);  // identities need two parametric derivatives
  const auto seed = make_seed(req);
  std::vector<CheckRow> rows;
  auto add = [&](std::string name, double v, double t) { rows.push_back({std::move(name), v, t, v <= t}); };

  add("seed W(u,v)=1", seed_wronskian_error(seed), tol.seed_wronskian);
  add("seed residual u", schrodinger_residual(seed.u_derivs[0], seed.V0(), params.epsilon), tol.seed_residual);
  add("seed residual v", schrodinger_residual(seed.v_derivs[0], seed.V0(), params.epsilon), tol.seed_residual);
  for (const auto& c : identity_suite(seed)) add("identity " + c.name, c.deviation, tol.identities);

  // Trim seed orders back to k for the transform itself.
  SeedEvaluation s = seed;
  const auto n = static_cast<std::size_t>(cfg.k);
  for (auto* v : {&s.u_derivs, &s.v_derivs, &s.ux_derivs, &s.vx_derivs})
    if (v->size() > n) v->erase(v->begin() + static_cast<long>(n), v->end());
  const auto pl = run_pipeline(s, params, true);
  if (cfg.check_chain)
    for (std::size_t j = 0; j < pl.chain.residuals.size(); ++j)
      add("chain link " + std::to_string(j + 1), pl.chain.residuals[j], tol.chain);
  if (pl.bundle.methods_run.size() > 1) add("wronskian method agreement", pl.bundle.crosscheck, tol.methods);
  add("W_k non-vanishing", static_cast<double>(pl.result.singularities.size()), 0.0);
  if (!pl.result.singular()) add("added state residual", pl.result.diagnostics.psi_residual, tol.psi);
  return rows;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& log = std::cerr) {
  const auto rows = verify_checks(cfg);
  write_output(cfg.output, render_checks(rows, cfg.format));
  const bool all = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
  int failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  log << (all ? "all checks pass" : std::to_string(failed) + " check(s) failed") << "\n";
  return all ? exit_ok : exit_flagged;
}

// ---------------------------------------------------------------------------
// identities

inline std::vector<CheckRow> identity_checks(const RunConfig& cfg) {
  cfg.validate();
  const auto tol = tolerances_for(cfg.family);
  auto req = cfg.seed_request();
  req.k = std::max(cfg.k, 4);
  const auto seed = make_seed(req);
  std::vector<CheckRow> rows;
  for (const auto& c : identity_suite(seed)) rows.push_back({c.name, c.deviation, tol.identities, c.deviation <= tol.identities});
  if (cfg.family == SeedFamily::Lame)
    for (const auto& c : elliptic_identity_suite(make_lattice(cfg.m)))
      rows.push_back({c.name, c.deviation, 1e-9, c.deviation <= 1e-9});
  return rows;
}

inline int cmd_identities(const RunConfig& cfg, std::ostream& log = std::cerr) {
  const auto rows = identity_checks(cfg);
  write_output(cfg.output, render_checks(rows, cfg.format));
  const bool all = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
  log << (all ? "all identities hold" : "identity deviations above tolerance") << "\n";
  return all ? exit_ok : exit_flagged;
}

// ---------------------------------------------------------------------------
// scan

/// Cartesian product of the scan axes applied on top of the base parameters.
inline std::vector<ChainParameters> scan_parameter_sets(const RunConfig& cfg) {
  cfg.validate();
  long double total = 1;
  for (const auto& a : cfg.scan) total *= a.steps;
  if (total > static_cast<long double>(cfg.scan_cap))
    throw ConfigError("scan would produce " + std::to_string(static_cast<long long>(total)) +
                      " records, above the cap of " + std::to_string(cfg.scan_cap));
  std::vector<ChainParameters> out;
  if (total == 0) return out;
  const ChainParameters base = cfg.chain_parameters();
  std::vector<std::vector<double>> vals;
  for (const auto& a : cfg.scan) vals.push_back(a.values());
  std::vector<std::size_t> idx(cfg.scan.size(), 0);
  while (true) {
    ChainParameters p = base;
    for (std::size_t a = 0; a < cfg.scan.size(); ++a) {
      const auto& name = cfg.scan[a].name;
      const double v = vals[a][idx[a]];
      if (name == "epsilon") p.epsilon = v;
      else {
        const auto i = static_cast<std::size_t>(std::stoi(name.substr(1)) - 1);
        (name[0] == 'C' ? p.C : p.D)[i] = v;
      }
    }
    out.push_back(p);
    std::size_t a = cfg.scan.size();
    while (a > 0) {
      --a;
      if (++idx[a] < vals[a].size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (cfg.scan.empty()) return out;
  }
}

inline std::string render_scan(const std::vector<ScanRecord>& recs, int k) {
  std::vector<std::size_t> order(recs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return recs[a].min_abs_W > recs[b].min_abs_W; });
  std::ostringstream os;
  os << "epsilon";
  for (int i = 1; i < k; ++i) os << ",C" << i;
  for (int i = 1; i < k; ++i) os << ",D" << i;
  os << ",singular,n_zeros,min_abs_W,error\n";
  for (auto i : order) {
    const auto& r = recs[i];
    os << fmt17(r.params.epsilon.real());
    for (double c : r.params.C) os << ',' << fmt17(c);
    for (double d : r.params.D) os << ',' << fmt17(d);
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    os << ',' << (r.singular ? "true" : "false") << ',' << r.n_zeros << ',' << fmt17(r.min_abs_W) << ",\"" << err
       << "\"\n";
  }
  return os.str();
}

inline int cmd_scan(const RunConfig& cfg, std::ostream& log = std::cerr) {
  const auto sets = scan_parameter_sets(cfg);
  const auto recs = singularity_scan(cfg.seed_request(), sets);
  write_output(cfg.output, render_scan(recs, cfg.k));
  std::size_t sing = 0, err = 0;
  for (const auto& r : recs) {
    sing += r.singular ? 1 : 0;
    err += r.error.empty() ? 0 : 1;
  }
  log << recs.size() << " records, " << sing << " singular, " << err << " failed\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------
// bands

inline int cmd_bands(const RunConfig& cfg, std::ostream& log = std::cerr) {
  if (!(cfg.m > 0.0 && cfg.m < 1.0)) throw ConfigError("m must lie in (0, 1)");
  if (cfg.n_energies < 2 || !(cfg.e_max > cfg.e_min))
    throw ConfigError("band sweep needs e_max > e_min and >= 2 energies");
  const auto sw = band_sweep(cfg.m, cfg.e_min, cfg.e_max, cfg.n_energies);
  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema"] = config_schema;
    j["m"] = cfg.m;
    j["edges"] = sw.edges;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : sw.rows)
      j["rows"].push_back({{"energy", r.energy},
                           {"delta", {r.delta.real(), r.delta.imag()}},
                           {"quasimomentum", {r.quasimomentum.real(), r.quasimomentum.imag()}},
                           {"class", to_string(r.classification)}});
    os << j.dump(2) << "\n";
  } else {
    os << "energy,delta_re,delta_im,kappa_re,kappa_im,class\n";
    for (const auto& r : sw.rows)
      os << fmt17(r.energy) << ',' << fmt17(r.delta.real()) << ',' << fmt17(r.delta.imag()) << ','
         << fmt17(r.quasimomentum.real()) << ',' << fmt17(r.quasimomentum.imag()) << ','
         << to_string(r.classification) << '\n';
  }
  write_output(cfg.output, os.str());
  log << "band edges:";
  for (double e : sw.edges) log << ' ' << fmt17(e);
  log << "\n";
  return exit_ok;
}

}  // namespace susy
