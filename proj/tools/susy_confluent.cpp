// susy_confluent: k-confluent SUSY transformations from the command line.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "susy/susy.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string family;
  std::vector<double> m, epsilon, delta;
  int k = 0;
  std::vector<double> C, D, caption;
  std::vector<double> xmin, xmax;
  int n = 0;
  std::string out, format, potential_file, dump_config;
  bool normalize = false, no_crosscheck = false;
  std::vector<std::string> axes;
  long long cap = -1;
  std::vector<double> emin, emax;
  int energies = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON run configuration");
  sub->add_option("--family", f.family, "free | lame | numeric");
  sub->add_option("--m", f.m, "Lame parameter m in (0,1)")->expected(1);
  sub->add_option("--epsilon", f.epsilon, "factorization energy")->expected(1);
  sub->add_option("--delta", f.delta, "Lame delta as re [im]")->expected(1, 2);
  sub->add_option("--k", f.k, "chain length");
  sub->add_option("--C", f.C, "C_1 .. C_{k-2} [C_{k-1}]");
  sub->add_option("--D", f.D, "D_1 .. D_{k-1}");
  sub->add_option("--caption", f.caption, "m eps C_1..C_{k-2} D_1..D_{k-1} [spectator]; needs --k");
  sub->add_option("--xmin", f.xmin)->expected(1);
  sub->add_option("--xmax", f.xmax)->expected(1);
  sub->add_option("--n", f.n, "grid points");
  sub->add_option("--potential-file", f.potential_file, "numeric family: V0 per grid point, one per line");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "csv | json");
  sub->add_option("--dump-config", f.dump_config, "write the effective configuration as JSON");
}

std::vector<double> read_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw susy::ConfigError("cannot open potential file " + path);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    double last = 0.0, x = 0.0;
    bool any = false;
    while (ls >> x) {
      last = x;
      any = true;
    }
    if (!any) {
      if (v.empty()) continue;  // header
      throw susy::ConfigError("unreadable line in potential file: " + line);
    }
    v.push_back(last);
  }
  return v;
}

susy::ScanAxis parse_axis(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw susy::ConfigError("scan axis must look like NAME:FROM:TO:STEPS, got " + s);
  try {
    return {parts[0], std::stod(parts[1]), std::stod(parts[2]), std::stoi(parts[3])};
  } catch (const std::exception&) {
    throw susy::ConfigError("bad number in scan axis " + s);
  }
}

susy::RunConfig build_config(const Flags& f) {
  susy::RunConfig c = f.config_path.empty() ? susy::RunConfig{} : susy::load_config(f.config_path);
  if (f.config_path.empty()) c.epsilon = -1.0;
  if (!f.family.empty()) c.family = susy::parse_family(f.family);
  if (!f.m.empty()) c.m = f.m[0];
  if (f.k > 0) {
    c.k = f.k;
    if (f.C.empty() && c.C.size() + 1 < static_cast<std::size_t>(c.k - 1)) c.C.assign(static_cast<std::size_t>(c.k - 2), 0.0);
    if (f.D.empty() && c.D.size() != static_cast<std::size_t>(c.k - 1)) c.D.assign(static_cast<std::size_t>(c.k - 1), 0.0);
  } else if (f.config_path.empty()) {
    c.C.assign(static_cast<std::size_t>(c.k - 1), 0.0);
    c.D.assign(static_cast<std::size_t>(c.k - 1), 0.0);
  }
  if (!f.epsilon.empty()) {
    c.epsilon = f.epsilon[0];
    c.delta.reset();
  }
  if (!f.delta.empty()) {
    c.delta = susy::cplx(f.delta[0], f.delta.size() > 1 ? f.delta[1] : 0.0);
    c.epsilon.reset();
  }
  if (!f.C.empty()) c.C = f.C;
  if (!f.D.empty()) c.D = f.D;
  if (!f.caption.empty()) susy::apply_caption(c, f.caption);
  if (!f.xmin.empty() || !f.xmax.empty() || f.n > 0) {
    const susy::Grid g = c.resolved_grid();
    susy::GridSpec s{g.x_min(), g.x_max(), static_cast<int>(g.size())};
    if (!f.xmin.empty()) s.x_min = f.xmin[0];
    if (!f.xmax.empty()) s.x_max = f.xmax[0];
    if (f.n > 0) s.n_points = f.n;
    c.grid = s;
  }
  if (!f.potential_file.empty()) c.potential = read_potential(f.potential_file);
  if (!f.out.empty()) c.output = f.out;
  if (!f.format.empty()) c.format = f.format;
  if (f.normalize) c.normalize = true;
  if (f.no_crosscheck) c.crosscheck = false;
  if (!f.axes.empty()) {
    c.scan.clear();
    for (const auto& a : f.axes) c.scan.push_back(parse_axis(a));
  }
  if (f.cap >= 0) c.scan_cap = f.cap;
  if (!f.emin.empty()) c.e_min = f.emin[0];
  if (!f.emax.empty()) c.e_max = f.emax[0];
  if (f.energies > 0) c.n_energies = f.energies;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-confluent SUSY transformations of the free particle and the single-gap Lame potential"};
  app.require_subcommand(1);
  Flags f;

  auto* transform = app.add_subcommand("transform", "compute V_k, psi_k and W_k on a grid");
  auto* verify = app.add_subcommand("verify", "seed, identity, chain, method and residual checks");
  auto* scan = app.add_subcommand("scan", "singularity scan over parameter ranges");
  auto* bands = app.add_subcommand("bands", "Lame band classification sweep");
  auto* identities = app.add_subcommand("identities", "Wronskian and elliptic identity suite");
  for (auto* s : {transform, verify, scan, bands, identities}) add_common(s, f);
  transform->add_flag("--normalize", f.normalize, "L2-normalize psi_k over the window");
  transform->add_flag("--no-crosscheck", f.no_crosscheck, "skip the second Wronskian method");
  scan->add_option("--axis", f.axes, "NAME:FROM:TO:STEPS (NAME = epsilon, C<i>, D<i>), repeatable");
  scan->add_option("--cap", f.cap, "maximum number of records");
  bands->add_option("--emin", f.emin)->expected(1);
  bands->add_option("--emax", f.emax)->expected(1);
  bands->add_option("--energies", f.energies, "number of sampled energies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : susy::exit_error;
  }

  try {
    susy::RunConfig cfg = build_config(f);
    if (bands->parsed() && !f.family.empty() && cfg.family != susy::SeedFamily::Lame)
      throw susy::ConfigError("bands applies to the Lame family only");
    if (!f.dump_config.empty()) susy::write_output(f.dump_config, susy::to_json(cfg).dump(2) + "\n");
    if (transform->parsed()) return susy::cmd_transform(cfg);
    if (verify->parsed()) return susy::cmd_verify(cfg);
    if (scan->parsed()) return susy::cmd_scan(cfg);
    if (bands->parsed()) return susy::cmd_bands(cfg);
    if (identities->parsed()) return susy::cmd_identities(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return susy::exit_error;
  }
  return susy::exit_error;
}
