// Configuration-driven experiment runner. Every module is exposed as a
// subcommand; `run` executes the stages in dependency order. Identical
// config + seed produces byte-identical CSV outputs.
//
// Exit codes: 0 pass, 1 validation failure, 2 config error, 3 numerical
// error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbpi/mbpi.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mbpi;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ProcessSpec process;
  std::vector<double> t_grid{1.0, 3.0, 10.0, 30.0, 100.0};
  std::vector<double> s_grid{0.0, 0.25, 0.5, 0.75, 0.9};
  std::size_t J = 1024;         // intensity-table truncation
  std::size_t N = 32;           // coefficient order for measures
  double radius = 0.0;          // 0 = regime default (0.7 / 0.5)
  std::uint64_t replications = 10000;
  std::uint64_t seed = 1;
  std::uint64_t population_cap = 10'000'000;
  double horizon = 1.0;
  std::uint64_t mc_targets = 10;  // estimate p_0j for j = 0..mc_targets
  unsigned jobs = 1;
  std::string out_dir = "out";
  std::vector<std::string> validators;
};

SlowlyVaryingSpec sv_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "constant")
    return SlowlyVaryingSpec::constant(j.at("c").get<double>());
  if (family == "log_power")
    return SlowlyVaryingSpec::log_power(j.at("c").get<double>(),
                                        j.at("p").get<double>());
  if (family == "with_remainder")
    return SlowlyVaryingSpec::with_remainder(j.at("c").get<double>(),
                                             j.at("rho").get<double>(),
                                             j.at("d").get<double>());
  throw ConfigError("unknown slowly-varying family '" + family + "'");
}

json sv_to_json(const SlowlyVaryingSpec& sv) {
  switch (sv.family) {
    case SvFamily::Constant:
      return {{"family", "constant"}, {"c", sv.scale}};
    case SvFamily::LogPower:
      return {{"family", "log_power"}, {"c", sv.scale}, {"p", sv.log_exp}};
    case SvFamily::WithRemainder:
      return {{"family", "with_remainder"},
              {"c", sv.scale},
              {"rho", sv.rem_decay},
              {"d", sv.rem_amp}};
  }
  return {};
}

const std::set<std::string> kKnownValidators = {
    "thm1", "thm2", "thm4", "cor1", "schroder", "invariance", "ratio_limit"};

// Parse-time regime guard: each validator names the condition it needs.
void check_validator_regime(const ExperimentConfig& cfg,
                            const std::string& v) {
  const double gamma = cfg.process.gamma();
  if ((v == "thm1" || v == "schroder") && !(gamma > 0.0))
    throw ConfigError("validator '" + v + "': gamma > 0 required, config has gamma = " +
                      std::to_string(gamma));
  if ((v == "thm2" || v == "thm4" || v == "cor1") && !(gamma < 0.0))
    throw ConfigError("validator '" + v + "': gamma < 0 required, config has gamma = " +
                      std::to_string(gamma));
  if (v == "thm2" || v == "thm4" || v == "cor1") {
    try {
      require_transient_balanced(cfg.process);
    } catch (const RegimeError& e) {
      throw ConfigError("validator '" + v + "': " + e.what());
    }
  }
  if (v == "invariance" && !(gamma > 0.0)) {
    // pi-side invariance needs the balanced transient guards
    try {
      require_transient_balanced(cfg.process);
    } catch (const RegimeError& e) {
      throw ConfigError(std::string("validator 'invariance': ") + e.what());
    }
  }
}

ExperimentConfig parse_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    const json& p = j.at("process");
    cfg.process.nu = p.at("nu").get<double>();
    cfg.process.delta = p.at("delta").get<double>();
    if (p.contains("L")) cfg.process.L = sv_from_json(p.at("L"));
    if (p.contains("ell")) cfg.process.ell = sv_from_json(p.at("ell"));

    if (j.contains("grids")) {
      const json& g = j.at("grids");
      if (g.contains("t")) cfg.t_grid = g.at("t").get<std::vector<double>>();
      if (g.contains("s")) cfg.s_grid = g.at("s").get<std::vector<double>>();
    }
    if (j.contains("truncation")) {
      const json& tr = j.at("truncation");
      if (tr.contains("J")) cfg.J = tr.at("J").get<std::size_t>();
      if (tr.contains("N")) cfg.N = tr.at("N").get<std::size_t>();
      if (tr.contains("radius")) cfg.radius = tr.at("radius").get<double>();
    }
    if (j.contains("mc")) {
      const json& mc = j.at("mc");
      if (mc.contains("replications"))
        cfg.replications = mc.at("replications").get<std::uint64_t>();
      if (mc.contains("seed")) cfg.seed = mc.at("seed").get<std::uint64_t>();
      if (mc.contains("population_cap"))
        cfg.population_cap = mc.at("population_cap").get<std::uint64_t>();
      if (mc.contains("horizon")) cfg.horizon = mc.at("horizon").get<double>();
      if (mc.contains("targets"))
        cfg.mc_targets = mc.at("targets").get<std::uint64_t>();
    }
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("validators"))
      cfg.validators = j.at("validators").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }

  try {
    cfg.process.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (double s : cfg.s_grid)
    if (!(0.0 <= s && s < 1.0))
      throw ConfigError("s grid values must lie in [0,1)");
  for (const std::string& v : cfg.validators) {
    if (!kKnownValidators.count(v))
      throw ConfigError("unknown validator '" + v + "'");
    check_validator_regime(cfg, v);
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  return {{"process",
           {{"nu", cfg.process.nu},
            {"delta", cfg.process.delta},
            {"L", sv_to_json(cfg.process.L)},
            {"ell", sv_to_json(cfg.process.ell)}}},
          {"grids", {{"t", cfg.t_grid}, {"s", cfg.s_grid}}},
          {"truncation",
           {{"J", cfg.J}, {"N", cfg.N}, {"radius", cfg.radius}}},
          {"mc",
           {{"replications", cfg.replications},
            {"seed", cfg.seed},
            {"population_cap", cfg.population_cap},
            {"horizon", cfg.horizon},
            {"targets", cfg.mc_targets}}},
          {"out", cfg.out_dir},
          {"validators", cfg.validators}};
}

// Every output file carries the full spec, grids, tolerances, and seed.
void write_header(std::ostream& os, const ExperimentConfig& cfg) {
  os << "# spec nu=" << cfg.process.nu << " delta=" << cfg.process.delta
     << " gamma=" << cfg.process.gamma() << " L=" << cfg.process.L.describe()
     << " ell=" << cfg.process.ell.describe() << '\n';
  os << "# grid t=";
  for (std::size_t k = 0; k < cfg.t_grid.size(); ++k)
    os << (k ? ";" : "") << cfg.t_grid[k];
  os << " s=";
  for (std::size_t k = 0; k < cfg.s_grid.size(); ++k)
    os << (k ? ";" : "") << cfg.s_grid[k];
  os << '\n';
  os << "# truncation J=" << cfg.J << " N=" << cfg.N
     << " radius=" << cfg.radius << '\n';
  os << "# tolerances ode_rel=1e-10 quad_abs=1e-10\n";
  os << "# seed=" << cfg.seed << " replications=" << cfg.replications
     << " cap=" << cfg.population_cap << '\n';
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  std::ofstream os(fs::path(cfg.out_dir) / name);
  if (!os) throw ConfigError("cannot write to " + cfg.out_dir + "/" + name);
  os << std::setprecision(12);
  write_header(os, cfg);
  return os;
}

double measure_radius(const ExperimentConfig& cfg) {
  if (cfg.radius > 0.0) return cfg.radius;
  return cfg.process.gamma() > 0.0 ? 0.7 : 0.5;
}

// ---- stages -------------------------------------------------------------

void stage_laws(const ExperimentConfig& cfg) {
  const IntensityTable table = build_intensities(cfg.process, cfg.J);
  auto os = open_out(cfg, "laws.csv");
  os << "# tail_mass_a=" << table.tail_mass_a
     << " tail_mass_b=" << table.tail_mass_b
     << " criticality_defect=" << criticality_defect(cfg.process) << '\n';
  table.write_csv(os);
  std::cout << "laws: J=" << cfg.J << " tail_mass_a=" << table.tail_mass_a
            << " tail_mass_b=" << table.tail_mass_b << '\n';
}

void stage_solve(const ExperimentConfig& cfg) {
  auto os = open_out(cfg, "flow.csv");
  os << "t,s,F,R,tau,M,calN,p00\n";
  for (double t : cfg.t_grid)
    for (double s : cfg.s_grid) {
      const FlowPoint fp = solve_F(cfg.process, t, s);
      os << t << ',' << s << ',' << fp.F << ',' << fp.R << ',';
      if (t > 0.0) {
        const NormingFunctions n = norming(cfg.process, t, s);
        os << n.tau << ',' << n.M << ',' << n.calN;
      } else {
        os << "nan,nan,nan";
      }
      os << ',' << transition_gf(cfg.process, 0, t, s) << '\n';
    }
  std::cout << "solve: " << cfg.t_grid.size() * cfg.s_grid.size()
            << " flow points\n";
}

void stage_invariant(const ExperimentConfig& cfg) {
  const double radius = measure_radius(cfg);
  const bool recurrent = cfg.process.gamma() > 0.0;
  const InvariantMeasure m =
      recurrent ? build_w_measure(cfg.process, 2 * cfg.N, radius)
                : build_pi_measure(cfg.process, 2 * cfg.N, radius);

  auto os = open_out(cfg, "measure.csv");
  os << "# kind=" << (recurrent ? "w" : "pi")
     << " value_at_zero=" << m.value_at_zero << '\n';
  os << "j,coefficient\n";
  for (std::size_t j = 0; j <= cfg.N; ++j)
    os << j << ',' << m.coeffs.coeffs[j] << '\n';

  const double t_check = cfg.t_grid.empty() ? 1.0 : cfg.t_grid.front();
  const InvarianceCheck chk =
      check_invariance(m, cfg.process, t_check, cfg.N);
  auto os2 = open_out(cfg, "invariance.csv");
  os2 << "# t=" << t_check << " max_residual=" << chk.max_residual
      << " truncation_bound=" << chk.truncation_bound
      << " conclusive=" << (chk.conclusive ? 1 : 0)
      << " pass=" << (chk.pass(1e-4) ? 1 : 0) << '\n';
  os2 << "j,residual\n";
  for (std::size_t j = 0; j < chk.residuals.size(); ++j)
    os2 << j << ',' << chk.residuals[j] << '\n';
  std::cout << "invariant: kind=" << (recurrent ? "w" : "pi")
            << " max_residual=" << chk.max_residual
            << " bound=" << chk.truncation_bound << '\n';
}

// returns the number of failed validators
int stage_validate(const ExperimentConfig& cfg) {
  int failures = 0;
  for (const std::string& v : cfg.validators) {
    if (v == "schroder") {
      double worst = 0.0;
      for (double tau : {0.1, 1.0, 10.0})
        for (double s : cfg.s_grid)
          worst = std::max(worst,
                           std::abs(check_schroder(cfg.process, tau, s)));
      const bool ok = worst < 1e-6;
      auto os = open_out(cfg, "schroder.csv");
      os << "# report=schroder max_residual=" << worst
         << " pass=" << (ok ? 1 : 0) << '\n';
      os << "tau,s,residual\n";
      for (double tau : {0.1, 1.0, 10.0})
        for (double s : cfg.s_grid)
          os << tau << ',' << s << ','
             << check_schroder(cfg.process, tau, s) << '\n';
      std::cout << "schroder: " << (ok ? "PASS" : "FAIL")
                << " max_residual=" << worst << '\n';
      if (!ok) ++failures;
      continue;
    }
    if (v == "invariance") {
      stage_invariant(cfg);
      continue;
    }

    ValidationReport rep;
    if (v == "thm1") rep = validate_thm1(cfg.process, cfg.t_grid);
    else if (v == "thm2") rep = validate_thm2(cfg.process, cfg.t_grid);
    else if (v == "thm4")
      rep = validate_thm4(cfg.process, cfg.t_grid, cfg.s_grid);
    else if (v == "cor1") rep = validate_cor1(cfg.process, cfg.t_grid);
    else if (v == "ratio_limit")
      rep = check_ratio_limit(cfg.process, cfg.t_grid,
                              std::min<std::size_t>(cfg.N, 16));
    auto os = open_out(cfg, rep.id + ".csv");
    rep.write_csv(os);
    std::cout << rep.summary() << '\n';
    if (!rep.pass) ++failures;
  }
  return failures;
}

void stage_simulate(const ExperimentConfig& cfg) {
  SimConfig sim;
  sim.table = build_intensities(cfg.process, cfg.J);
  sim.horizon = cfg.horizon;
  sim.replications = cfg.replications;
  sim.seed = cfg.seed;
  sim.population_cap = cfg.population_cap;
  sim.jobs = cfg.jobs;

  auto os = open_out(cfg, "mc.csv");
  os << "i,j,t,estimate,stderr,bias,censored_fraction\n";
  for (std::uint64_t j = 0; j <= cfg.mc_targets; ++j) {
    const McEstimate e = estimate_pij(sim, j);
    os << e.initial_state << ',' << j << ',' << e.horizon << ','
       << e.estimate << ',' << e.stderr_ << ',' << e.bias_bound << ','
       << e.censored_fraction << '\n';
  }
  std::cout << "simulate: " << cfg.replications << " replications, targets 0.."
            << cfg.mc_targets << '\n';
}

void stage_report(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::ofstream os(fs::path(cfg.out_dir) / "summary.txt");
  write_header(os, cfg);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cfg.out_dir))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    os << p.filename().string() << ":";
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line) && line.rfind("#", 0) == 0)
      if (line.find("report=") != std::string::npos ||
          line.find("pass=") != std::string::npos ||
          line.find("max_residual=") != std::string::npos)
        os << "  " << line.substr(1);
    os << '\n';
  }
  std::cout << "report: " << files.size() << " artifacts summarized in "
            << (fs::path(cfg.out_dir) / "summary.txt").string() << '\n';
}

void echo_spec(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::ofstream os(fs::path(cfg.out_dir) / "spec.json");
  os << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical branching-with-immigration laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  unsigned jobs = 1;
  bool seed_set = false;

  app.add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  app.add_option("--out", out_override, "output directory override");
  app.add_option("--seed", seed_override, "master seed override")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--jobs", jobs, "worker threads");

  auto* cmd_laws = app.add_subcommand("laws", "intensity tables");
  auto* cmd_solve = app.add_subcommand("solve", "backward flow and norming");
  auto* cmd_inv = app.add_subcommand("invariant", "limit measure + invariance");
  auto* cmd_val = app.add_subcommand("validate", "asymptotic validators");
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo estimates");
  auto* cmd_rep = app.add_subcommand("report", "summarize prior outputs");
  auto* cmd_run = app.add_subcommand("run", "full pipeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    cfg = parse_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_set) cfg.seed = seed_override;
    cfg.jobs = jobs;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    echo_spec(cfg);
    int failures = 0;
    if (cmd_laws->parsed()) stage_laws(cfg);
    if (cmd_solve->parsed()) stage_solve(cfg);
    if (cmd_inv->parsed()) stage_invariant(cfg);
    if (cmd_val->parsed()) failures += stage_validate(cfg);
    if (cmd_sim->parsed()) stage_simulate(cfg);
    if (cmd_rep->parsed()) stage_report(cfg);
    if (cmd_run->parsed() && cfg.validators.empty()) {
      std::cout << "run: no validators requested, spec echoed to "
                << cfg.out_dir << "/spec.json\n";
    } else if (cmd_run->parsed()) {
      stage_laws(cfg);
      stage_solve(cfg);
      failures += stage_validate(cfg);
      if (cfg.replications > 0) stage_simulate(cfg);
      stage_report(cfg);
    }
    if (failures > 0) {
      std::cerr << failures << " validator(s) failed\n";
      return 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
