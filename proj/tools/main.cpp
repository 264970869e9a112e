// Command-line driver: trajectory runs, rule atlases, swarm optimization,
// and three-level validation, all emitting reproducible CSV/PGM/JSON files.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rqca/evolve.hpp"
#include "rqca/fullmodel.hpp"
#include "rqca/io.hpp"
#include "rqca/model.hpp"
#include "rqca/observables.hpp"
#include "rqca/states.hpp"
#include "rqca/types.hpp"
#include "rqca/vqo.hpp"

namespace {

using nlohmann::json;
using namespace rqca;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

model::RuleSet rule_from_flags(const std::vector<double>& entries,
                               const std::string& units, double gamma) {
  if (entries.size() != 6) {
    throw CLI::ValidationError("--rules", "expected exactly 6 entries");
  }
  std::array<double, 6> v{};
  std::copy(entries.begin(), entries.end(), v.begin());
  return model::make_rule(
      v, units == "pi" ? model::RuleUnits::Pi : model::RuleUnits::Raw, gamma);
}

Matrix initial_density(const std::string& init, const model::Lattice& lat) {
  if (init == "central-superposition") {
    return states::density(states::central_superposition_ket(lat.n_sites));
  }
  const std::uint64_t bits = model::parse_bitstring(init, lat.n_sites);
  return states::basis_density(lat.dim(), Index(bits));
}

std::string default_init(std::size_t n) {
  std::string s(n, '0');
  s[(n - 1) / 2] = '1';
  return s;
}

json rules_json(const model::RuleSet& r) {
  return io::rule_to_json(r, model::RuleUnits::Raw);
}

// ---- evolve ----

struct EvolveConfig {
  std::vector<double> rules;
  std::string units = "pi";
  double gamma = 0.0;
  std::size_t n = 0;
  std::string boundary = "open";
  std::string init;
  std::string mode = "continuous";
  double t_max = 20.0;
  std::size_t steps = 20;
  std::string step_unit = "full";
  std::string first = "A";
  double sample_interval = 0.25;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::string csv_path = "trajectory.csv";
  std::string pgm_path;
  std::string checkpoint_path;
};

int run_evolve(const EvolveConfig& cfg) {
  const model::RuleSet rule = rule_from_flags(cfg.rules, cfg.units, cfg.gamma);
  model::validate_rules(rule);
  const model::Lattice lat(cfg.n, cfg.boundary == "open"
                                      ? model::Boundary::Open
                                      : model::Boundary::Periodic);
  const std::string init = cfg.init.empty() ? std::string(cfg.n, '0') : cfg.init;
  const Matrix rho0 = initial_density(init, lat);

  numerics::IntegratorOptions integ;
  integ.rtol = cfg.rtol;
  integ.atol = cfg.atol;

  evolve::EvolutionRecord rec;
  if (cfg.mode == "continuous") {
    evolve::EvolutionOptions opts;
    opts.sample_interval = cfg.sample_interval;
    opts.integrator = integ;
    rec = evolve::propagate(rho0, evolve::Liouvillian(rule, lat), cfg.t_max,
                            opts);
  } else {
    evolve::DiscreteOptions opts;
    opts.unit = cfg.step_unit == "half" ? evolve::StepUnit::Half
                                        : evolve::StepUnit::Full;
    opts.first = cfg.first == "B" ? model::Sublattice::B : model::Sublattice::A;
    opts.integrator = integ;
    rec = evolve::propagate_discrete(rho0, rule, rule, lat, cfg.steps, opts);
  }

  io::write_text_file(cfg.csv_path, io::trajectory_csv(rec));
  if (!cfg.pgm_path.empty()) {
    io::write_pgm(cfg.pgm_path, io::magnetization_image(rec));
  }
  if (!cfg.checkpoint_path.empty()) {
    io::write_checkpoint(cfg.checkpoint_path, rec.final_state, int(cfg.n));
  }

  const auto cov = obs::covariance(rec.final_state, lat.n_sites, lat.boundary);
  std::cout << "samples=" << rec.times.size()
            << " final_nn_cov=" << io::format_double(cov.mean_nn)
            << " final_trace_residual="
            << io::format_double(rec.trace_residual.back()) << "\n";
  return kExitOk;
}

// ---- atlas ----

struct AtlasConfig {
  std::string rules_file;
  bool all_digital = false;
  std::string out_dir;
  std::size_t n = 9;
  std::string boundary = "open";
  std::string init;
  double t_max = 20.0;
  double sample_interval = 0.25;
  std::size_t steps = 20;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
};

std::vector<model::RuleSet> atlas_rules(const AtlasConfig& cfg) {
  std::vector<model::RuleSet> rules;
  if (cfg.all_digital) {
    for (unsigned bits = 0; bits < 64; ++bits) {
      std::array<double, 6> v{};
      for (int k = 0; k < 3; ++k) {
        v[k] = (bits >> k) & 1 ? 1.0 : 0.0;
        v[3 + k] = (bits >> (3 + k)) & 1 ? 2.0 : 0.0;
      }
      rules.push_back(model::make_rule(v, model::RuleUnits::Pi));
    }
    return rules;
  }
  std::ifstream in(cfg.rules_file);
  if (!in) throw std::runtime_error("cannot open rules file: " + cfg.rules_file);
  json doc = json::parse(in);
  if (!doc.is_array()) throw std::invalid_argument("rules file must be a JSON array");
  for (const auto& item : doc) rules.push_back(io::rule_from_json(item));
  return rules;
}

struct AtlasRow {
  bool ok = false;
  std::string error;
  bool unitary = false;
  double final_nn_cov = 0.0;
  double final_mean_abs_z = 0.0;
  double steady_residual = 0.0;
  io::GrayImage discrete_img;
  io::GrayImage continuous_img;
};

int run_atlas(const AtlasConfig& cfg) {
  const auto rules = atlas_rules(cfg);
  if (rules.empty()) throw std::invalid_argument("no rules to run");
  const model::Lattice lat(cfg.n, cfg.boundary == "open"
                                      ? model::Boundary::Open
                                      : model::Boundary::Periodic);
  const std::string init = cfg.init.empty() ? default_init(cfg.n) : cfg.init;
  const Matrix rho0 = initial_density(init, lat);

  numerics::IntegratorOptions integ;
  integ.rtol = cfg.rtol;
  integ.atol = cfg.atol;

  std::vector<AtlasRow> rows(rules.size());
  parallel_for(rules.size(), cfg.workers, [&](std::size_t i) {
    AtlasRow& row = rows[i];
    try {
      const model::RuleSet& rule = rules[i];
      model::validate_rules(rule);
      row.unitary = rule.phi[0] == 0.0 && rule.phi[1] == 0.0 &&
                    rule.phi[2] == 0.0 && rule.gamma == 0.0;

      evolve::DiscreteOptions dopts;
      dopts.integrator = integ;
      const auto drec =
          evolve::propagate_discrete(rho0, rule, rule, lat, cfg.steps, dopts);
      row.discrete_img = io::magnetization_image(drec);

      evolve::EvolutionOptions copts;
      copts.sample_interval = cfg.sample_interval;
      copts.integrator = integ;
      const evolve::Liouvillian liou(rule, lat);
      const auto crec = evolve::propagate(rho0, liou, cfg.t_max, copts);
      row.continuous_img = io::magnetization_image(crec);

      row.final_nn_cov =
          obs::covariance(crec.final_state, lat.n_sites, lat.boundary).mean_nn;
      row.final_mean_abs_z =
          obs::magnetization(crec.final_state, lat.n_sites).cwiseAbs().mean();
      row.steady_residual = liou.residual(crec.final_state);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path dir(cfg.out_dir);
  std::string index = "rule,theta0,theta1,theta2,phi0,phi1,phi2,unitary,status,"
                      "final_nn_cov,final_mean_abs_z,steady_residual\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "%03zu", i);
    const AtlasRow& row = rows[i];
    std::vector<std::string> cells{id};
    for (int k = 0; k < 3; ++k) cells.push_back(io::format_double(rules[i].theta[k]));
    for (int k = 0; k < 3; ++k) cells.push_back(io::format_double(rules[i].phi[k]));
    cells.push_back(row.unitary ? "1" : "0");
    cells.push_back(row.ok ? "ok" : "failed");
    cells.push_back(io::format_double(row.ok ? row.final_nn_cov : 0.0));
    cells.push_back(io::format_double(row.ok ? row.final_mean_abs_z : 0.0));
    cells.push_back(io::format_double(row.ok ? row.steady_residual : 0.0));
    index += io::csv_line(cells);
    if (!row.ok) {
      ++failures;
      std::cerr << "atlas: rule " << id << " failed: " << row.error << "\n";
      continue;
    }
    io::write_pgm((dir / ("rule_" + std::string(id) + "_discrete.pgm")).string(),
                  row.discrete_img);
    io::write_pgm((dir / ("rule_" + std::string(id) + "_continuous.pgm")).string(),
                  row.continuous_img);
  }
  io::write_text_file((dir / "index.csv").string(), index);
  std::cout << "rules=" << rules.size() << " failures=" << failures << "\n";
  return kExitOk;
}

// ---- optimize ----

struct OptimizeConfig {
  std::size_t n = 6;
  std::string boundary = "periodic";
  std::string objective = "max-nn-cov";
  std::size_t pop = 10;
  std::size_t iters = 100;
  std::uint64_t seed = 0;
  std::vector<double> gammas;
  double curve_t_max = 100.0;
  double curve_dt = 1.0;
  std::string out_dir = ".";
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
};

int run_optimize(const OptimizeConfig& cfg) {
  vqo::OptimizeSetup setup;
  setup.lattice = model::Lattice(cfg.n, cfg.boundary == "open"
                                            ? model::Boundary::Open
                                            : model::Boundary::Periodic);
  setup.objective = cfg.objective == "min-nn-cov"
                        ? vqo::Objective::MinimizeNnCovariance
                        : vqo::Objective::MaximizeNnCovariance;
  setup.swarm.population = cfg.pop;
  setup.swarm.iterations = cfg.iters;
  setup.swarm.seed = cfg.seed;
  setup.swarm.workers = cfg.workers;
  if (!cfg.gammas.empty()) setup.curve_gammas = cfg.gammas;
  setup.curve_t_max = cfg.curve_t_max;
  setup.curve_dt = cfg.curve_dt;

  const auto rep = vqo::optimize_and_report(setup);

  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path dir(cfg.out_dir);

  std::string trace = "iteration,individual,cost\n";
  for (std::size_t it = 0; it < rep.trace.costs.size(); ++it) {
    for (std::size_t p = 0; p < rep.trace.costs[it].size(); ++p) {
      trace += io::csv_line({std::to_string(it), std::to_string(p),
                             io::format_double(rep.trace.costs[it][p])});
    }
  }
  io::write_text_file((dir / "trace.csv").string(), trace);

  std::string curves = "t";
  for (const auto& c : rep.curves) {
    const std::string tag = io::format_double(c.gamma);
    curves += ",F_fixed_gamma=" + tag + ",F_opt_gamma=" + tag;
  }
  curves += "\n";
  if (!rep.curves.empty()) {
    for (std::size_t s = 0; s < rep.curves.front().times.size(); ++s) {
      std::vector<std::string> cells{
          io::format_double(rep.curves.front().times[s])};
      for (const auto& c : rep.curves) {
        cells.push_back(io::format_double(c.fixed_phase[s]));
        cells.push_back(io::format_double(c.optimized[s]));
      }
      curves += io::csv_line(cells);
    }
  }
  io::write_text_file((dir / "curves.csv").string(), curves);

  json report;
  report["objective"] = cfg.objective;
  report["seed"] = cfg.seed;
  report["population"] = cfg.pop;
  report["iterations"] = cfg.iters;
  report["best_cost"] = rep.trace.best_cost;
  report["best_params"] = rep.trace.best_params;
  report["best_rules"] = rules_json(rep.best_rules);
  report["steady"] = {{"residual", rep.steady.residual},
                      {"elapsed", rep.steady.elapsed},
                      {"converged", rep.steady.converged},
                      {"cross_checked", rep.steady.cross_checked},
                      {"nullspace_dim", rep.steady.nullspace_dim}};
  report["mean_nn_covariance"] = rep.mean_nn_covariance;
  report["target_fidelity"] = {{"fixed_phase_pi", rep.target_fixed},
                               {"optimized", rep.target_best.fidelity},
                               {"optimal_phase", rep.target_best.phase}};
  json jcurves = json::array();
  for (const auto& c : rep.curves) {
    double peak_fixed = 0.0, peak_opt = 0.0;
    double t99 = -1.0;
    for (std::size_t s = 0; s < c.times.size(); ++s) {
      peak_fixed = std::max(peak_fixed, c.fixed_phase[s]);
      peak_opt = std::max(peak_opt, c.optimized[s]);
      if (t99 < 0.0 && c.optimized[s] >= 0.99) t99 = c.times[s];
    }
    jcurves.push_back({{"gamma", c.gamma},
                       {"peak_fixed", peak_fixed},
                       {"peak_optimized", peak_opt},
                       {"first_t_above_0.99", t99}});
  }
  report["curves"] = jcurves;
  io::write_text_file((dir / "report.json").string(), report.dump(2) + "\n");

  std::cout << "best_cost=" << io::format_double(rep.trace.best_cost)
            << " steady_residual=" << io::format_double(rep.steady.residual)
            << " target_fidelity_opt="
            << io::format_double(rep.target_best.fidelity) << "\n";
  return kExitOk;
}

// ---- validate ----

struct ValidateConfig {
  std::size_t n = 3;
  double v = 50.0 * model::pi;
  double big_gamma = 10.0 * model::pi;
  std::vector<double> rules{0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  std::string units = "pi";
  std::string init;
  double t_max = 5.0;
  double sample_interval = 0.25;
  double rtol = 1e-8;
  double atol = 1e-10;
  std::string out_path;
};

int run_validate(const ValidateConfig& cfg) {
  const model::RuleSet rule = rule_from_flags(cfg.rules, cfg.units, 0.0);
  fullmodel::ThreeLevelParams params;
  params.n_sites = cfg.n;
  params.v = cfg.v;
  params.big_gamma = cfg.big_gamma;
  params.theta = rule.theta;
  for (int k = 0; k < 3; ++k) {
    // The flag carries the effective depump rate; the three-level drive
    // amplitude realizing it is phi = sqrt(phi_eff * Gamma).
    params.phi[k] = std::sqrt(rule.phi[k] * cfg.big_gamma);
  }

  const std::string init = cfg.init.empty() ? default_init(cfg.n) : cfg.init;
  const std::uint64_t bits = model::parse_bitstring(init, cfg.n);

  numerics::IntegratorOptions integ;
  integ.rtol = cfg.rtol;
  integ.atol = cfg.atol;

  const auto trend = fullmodel::effective_convergence_trend(
      params, bits, cfg.t_max, cfg.sample_interval, integ);

  std::vector<std::string> warnings;
  const double drive_scale = std::max(
      {params.theta[0], params.theta[1], params.theta[2], params.phi[0],
       params.phi[1], params.phi[2], 1e-300});
  if (params.v < 10.0 * drive_scale) {
    warnings.push_back("interaction V is not >= 10x the drive amplitudes; "
                       "blockade leakage expected");
  }
  if (params.v < 10.0 * params.big_gamma) {
    warnings.push_back("interaction V is not >= 10x Gamma; tone separation "
                       "is marginal");
  }
  for (int k = 0; k < 3; ++k) {
    if (rule.phi[k] > 0.0 && params.big_gamma < 10.0 * rule.phi[k]) {
      warnings.push_back("Gamma is not >= 10x the effective depump rate phi" +
                         std::to_string(k) +
                         "; adiabatic elimination is marginal");
    }
  }

  json report;
  report["n"] = cfg.n;
  report["v"] = cfg.v;
  report["big_gamma"] = cfg.big_gamma;
  report["rules"] = rules_json(rule);
  report["three_level_phi"] = {params.phi[0], params.phi[1], params.phi[2]};
  report["init"] = init;
  report["t_max"] = cfg.t_max;
  json series = json::array();
  for (std::size_t i = 0; i < trend.v_values.size(); ++i) {
    series.push_back({{"v", trend.v_values[i]},
                      {"max_population_dev", trend.max_devs[i]},
                      {"max_magnetization_dev", 2.0 * trend.max_devs[i]},
                      {"rms_population_dev", trend.rms_devs[i]}});
  }
  report["deviations"] = series;
  report["strictly_decreasing"] = trend.decreasing;
  report["warnings"] = warnings;

  const std::string text = report.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(cfg.out_path, text);
    std::cout << "max_magnetization_dev="
              << io::format_double(2.0 * trend.max_devs.front())
              << " strictly_decreasing=" << (trend.decreasing ? "1" : "0")
              << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative quantum cellular automata on qubit chains: "
               "simulation, rule atlases, and steady-state optimization"};
  app.require_subcommand(1);

  EvolveConfig ev;
  auto* evolve_cmd = app.add_subcommand(
      "evolve", "Propagate one rule set and write trajectory files");
  evolve_cmd->add_option("--rules", ev.rules,
                         "theta0,theta1,theta2,phi0,phi1,phi2")
      ->required()->delimiter(',');
  evolve_cmd->add_option("--units", ev.units, "rule units")
      ->check(CLI::IsMember({"pi", "raw"}));
  evolve_cmd->add_option("--gamma", ev.gamma, "unconditional decay rate")
      ->check(CLI::NonNegativeNumber);
  evolve_cmd->add_option("--n", ev.n, "number of sites")->required();
  evolve_cmd->add_option("--boundary", ev.boundary, "boundary condition")
      ->check(CLI::IsMember({"open", "periodic"}));
  evolve_cmd->add_option("--init", ev.init,
                         "initial bitstring or central-superposition");
  evolve_cmd->add_option("--mode", ev.mode, "evolution mode")
      ->check(CLI::IsMember({"continuous", "discrete"}));
  evolve_cmd->add_option("--tmax", ev.t_max, "continuous end time")
      ->check(CLI::NonNegativeNumber);
  evolve_cmd->add_option("--steps", ev.steps, "discrete step count");
  evolve_cmd->add_option("--step-unit", ev.step_unit,
                         "discrete step granularity")
      ->check(CLI::IsMember({"full", "half"}));
  evolve_cmd->add_option("--first-sublattice", ev.first, "first updated block")
      ->check(CLI::IsMember({"A", "B"}));
  evolve_cmd->add_option("--sample-interval", ev.sample_interval,
                         "continuous sampling step")
      ->check(CLI::PositiveNumber);
  evolve_cmd->add_option("--rtol", ev.rtol, "integrator relative tolerance");
  evolve_cmd->add_option("--atol", ev.atol, "integrator absolute tolerance");
  evolve_cmd->add_option("--csv", ev.csv_path, "trajectory CSV path");
  evolve_cmd->add_option("--pgm", ev.pgm_path, "magnetization heatmap path");
  evolve_cmd->add_option("--checkpoint", ev.checkpoint_path,
                         "final density matrix dump path");

  AtlasConfig at;
  auto* atlas_cmd = app.add_subcommand(
      "atlas", "Sweep rule sets and write heatmap pairs plus an index");
  auto* rules_file_opt =
      atlas_cmd->add_option("--rules-file", at.rules_file,
                            "JSON array of rule manifests");
  atlas_cmd->add_flag("--all-digital", at.all_digital,
                      "sweep all 64 digital rule combinations")
      ->excludes(rules_file_opt);
  atlas_cmd->add_option("--out-dir", at.out_dir, "output directory")->required();
  atlas_cmd->add_option("--n", at.n, "number of sites");
  atlas_cmd->add_option("--boundary", at.boundary, "boundary condition")
      ->check(CLI::IsMember({"open", "periodic"}));
  atlas_cmd->add_option("--init", at.init, "initial bitstring");
  atlas_cmd->add_option("--tmax", at.t_max, "continuous end time")
      ->check(CLI::NonNegativeNumber);
  atlas_cmd->add_option("--sample-interval", at.sample_interval,
                        "continuous sampling step")
      ->check(CLI::PositiveNumber);
  atlas_cmd->add_option("--steps", at.steps, "discrete step count");
  atlas_cmd->add_option("--workers", at.workers, "parallel rule evaluations")
      ->check(CLI::PositiveNumber);

  OptimizeConfig op;
  auto* optimize_cmd = app.add_subcommand(
      "optimize", "Particle-swarm search over rule parameters");
  optimize_cmd->add_option("--n", op.n, "number of sites");
  optimize_cmd->add_option("--boundary", op.boundary, "boundary condition")
      ->check(CLI::IsMember({"open", "periodic"}));
  optimize_cmd->add_option("--objective", op.objective, "cost direction")
      ->check(CLI::IsMember({"max-nn-cov", "min-nn-cov"}));
  optimize_cmd->add_option("--pop", op.pop, "swarm population");
  optimize_cmd->add_option("--iters", op.iters, "swarm iterations");
  optimize_cmd->add_option("--seed", op.seed, "master RNG seed")
      ->envname("QCA_SEED");
  optimize_cmd->add_option("--gamma", op.gammas,
                           "decay rates for fidelity curves (repeatable)")
      ->allow_extra_args(false);
  optimize_cmd->add_option("--curve-tmax", op.curve_t_max,
                           "fidelity curve end time")
      ->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--curve-dt", op.curve_dt,
                           "fidelity curve sampling step")
      ->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--out-dir", op.out_dir, "output directory");
  optimize_cmd->add_option("--workers", op.workers,
                           "parallel cost evaluations")
      ->check(CLI::PositiveNumber);

  ValidateConfig va;
  auto* validate_cmd = app.add_subcommand(
      "validate", "Compare the three-level chain against the effective rules");
  validate_cmd->add_option("--n", va.n, "number of sites (<= 5 recommended)");
  validate_cmd->add_option("--v", va.v, "Rydberg interaction strength")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--big-gamma", va.big_gamma, "e-state decay rate")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--rules", va.rules,
                           "theta0,theta1,theta2,phi0,phi1,phi2")
      ->delimiter(',');
  validate_cmd->add_option("--units", va.units, "rule units")
      ->check(CLI::IsMember({"pi", "raw"}));
  validate_cmd->add_option("--init", va.init, "initial bitstring");
  validate_cmd->add_option("--tmax", va.t_max, "comparison end time")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--sample-interval", va.sample_interval,
                           "comparison sampling step")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--rtol", va.rtol, "integrator relative tolerance");
  validate_cmd->add_option("--atol", va.atol, "integrator absolute tolerance");
  validate_cmd->add_option("--out", va.out_path,
                           "report path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (evolve_cmd->parsed()) return run_evolve(ev);
    if (atlas_cmd->parsed()) return run_atlas(at);
    if (optimize_cmd->parsed()) return run_optimize(op);
    return run_validate(va);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const numerics::IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
