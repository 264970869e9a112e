#ifndef RQCA_VQO_HPP
#define RQCA_VQO_HPP

// Variational steering of steady states: a global-best particle swarm over
// rule parameters, the nearest-neighbor-covariance steady-state cost, and a
// report builder that reruns the optimum at tight tolerances and traces
// target fidelities with and without Rydberg decay.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rqca/evolve.hpp"
#include "rqca/model.hpp"
#include "rqca/numerics.hpp"
#include "rqca/observables.hpp"
#include "rqca/parallel.hpp"
#include "rqca/states.hpp"
#include "rqca/types.hpp"

namespace rqca::vqo {

// ---- particle swarm ----

struct SwarmConfig {
  std::size_t population = 10;
  std::size_t iterations = 100;
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  double velocity_clamp = 0.5;  // fraction of the box width per dimension
  std::vector<std::pair<double, double>> bounds;
  std::uint64_t seed = 0;
  bool maximize = true;
  std::size_t workers = 1;
};

struct SwarmTrace {
  std::vector<std::vector<double>> costs;  // [iteration][particle]
  std::vector<double> best_cost_history;   // per iteration, monotone
  std::vector<double> best_params;
  double best_cost = 0.0;
  std::vector<std::uint64_t> particle_seeds;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d4d498f5e625c9ull;
  return x ^ (x >> 31);
}

}  // namespace detail

inline SwarmTrace pso_optimize(
    const std::function<double(const std::vector<double>&)>& cost,
    const SwarmConfig& cfg) {
  if (!cost) throw std::invalid_argument("pso_optimize: cost not callable");
  if (cfg.population < 2) {
    throw std::invalid_argument("pso_optimize: population must be >= 2");
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("pso_optimize: iterations must be >= 1");
  }
  if (cfg.bounds.empty()) {
    throw std::invalid_argument("pso_optimize: bounds must be set");
  }
  for (const auto& [lo, hi] : cfg.bounds) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("pso_optimize: bad bound pair");
    }
  }
  if (!(cfg.velocity_clamp > 0.0)) {
    throw std::invalid_argument("pso_optimize: velocity_clamp must be > 0");
  }

  const std::size_t dim = cfg.bounds.size();
  const std::size_t pop = cfg.population;
  auto better = [&](double a, double b) {
    return cfg.maximize ? a > b : a < b;
  };

  SwarmTrace trace;
  trace.particle_seeds.resize(pop);
  std::vector<std::mt19937_64> rng(pop);
  for (std::size_t i = 0; i < pop; ++i) {
    trace.particle_seeds[i] =
        detail::splitmix64(cfg.seed ^ detail::splitmix64(i + 1));
    rng[i].seed(trace.particle_seeds[i]);
  }
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  std::vector<std::vector<double>> x(pop, std::vector<double>(dim));
  std::vector<std::vector<double>> vel(pop, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < pop; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      const auto& [lo, hi] = cfg.bounds[d];
      x[i][d] = lo + u01(rng[i]) * (hi - lo);
    }
  }

  std::vector<double> costs(pop);
  auto evaluate_all = [&]() {
    parallel_for(pop, cfg.workers, [&](std::size_t i) { costs[i] = cost(x[i]); });
    trace.costs.push_back(costs);
  };

  evaluate_all();
  std::vector<std::vector<double>> pbest = x;
  std::vector<double> pbest_cost = costs;
  std::size_t gbest = 0;
  for (std::size_t i = 1; i < pop; ++i) {
    if (better(pbest_cost[i], pbest_cost[gbest])) gbest = i;
  }
  std::vector<double> gbest_x = pbest[gbest];
  double gbest_cost = pbest_cost[gbest];
  trace.best_cost_history.push_back(gbest_cost);

  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    // Sequential update phase: all randomness is drawn here, one stream per
    // particle, so parallel evaluation cannot perturb determinism.
    for (std::size_t i = 0; i < pop; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        const auto& [lo, hi] = cfg.bounds[d];
        const double r1 = u01(rng[i]);
        const double r2 = u01(rng[i]);
        double v = cfg.inertia * vel[i][d] +
                   cfg.cognitive * r1 * (pbest[i][d] - x[i][d]) +
                   cfg.social * r2 * (gbest_x[d] - x[i][d]);
        const double vmax = cfg.velocity_clamp * (hi - lo);
        v = std::clamp(v, -vmax, vmax);
        vel[i][d] = v;
        x[i][d] = std::clamp(x[i][d] + v, lo, hi);
      }
    }
    evaluate_all();
    for (std::size_t i = 0; i < pop; ++i) {
      if (better(costs[i], pbest_cost[i])) {
        pbest_cost[i] = costs[i];
        pbest[i] = x[i];
      }
      if (better(pbest_cost[i], gbest_cost)) {
        gbest_cost = pbest_cost[i];
        gbest_x = pbest[i];
      }
    }
    trace.best_cost_history.push_back(gbest_cost);
  }

  trace.best_params = gbest_x;
  trace.best_cost = gbest_cost;
  return trace;
}

// ---- steady-state cost ----

struct SteadyCostSetup {
  model::Lattice lattice{6, model::Boundary::Periodic};
  Matrix rho0;
  double gamma = 0.0;
  evolve::SteadyStateOptions steady{};
  double failure_cost = -1e9;  // returned when the integrator gives up
};

inline model::RuleSet rules_from_params(const std::vector<double>& params,
                                        double gamma = 0.0) {
  if (params.size() != 6) {
    throw std::invalid_argument("rules_from_params: expected 6 parameters");
  }
  model::RuleSet r;
  for (int k = 0; k < 3; ++k) {
    r.theta[k] = params[k];
    r.phi[k] = params[3 + k];
  }
  r.gamma = gamma;
  return r;
}

// Mean nearest-neighbor Z covariance of the steady state reached from
// setup.rho0 under the six raw rule parameters (theta_0..2, phi_0..2).
inline double cost_steady_nn_covariance(const std::vector<double>& params,
                                        const SteadyCostSetup& setup) {
  const model::RuleSet rules = rules_from_params(params, setup.gamma);
  try {
    const evolve::Liouvillian liou(rules, setup.lattice);
    const auto ss = evolve::steady_state(setup.rho0, liou, setup.steady);
    return obs::covariance(ss.state, setup.lattice.n_sites,
                           setup.lattice.boundary)
        .mean_nn;
  } catch (const numerics::IntegrationError&) {
    return setup.failure_cost;
  }
}

// ---- optimization report ----

enum class Objective { MaximizeNnCovariance, MinimizeNnCovariance };

struct FidelityCurve {
  double gamma = 0.0;
  std::vector<double> times;
  std::vector<double> fixed_phase;  // target phase pi
  std::vector<double> optimized;    // phase-optimized
};

struct OptimizeSetup {
  model::Lattice lattice{6, model::Boundary::Periodic};
  Objective objective = Objective::MaximizeNnCovariance;
  SwarmConfig swarm{};  // bounds default to [0, 2pi]^6 when empty
  Matrix rho0;          // defaults to the all-ground basis state when empty
  std::vector<double> curve_gammas{0.0, 2.513e-3, 7.54e-3};
  double curve_t_max = 100.0;
  double curve_dt = 1.0;
  evolve::SteadyStateOptions cost_steady{
      1e-4, 150.0, 2.0, {1e-4, 1e-7}, false};
  evolve::SteadyStateOptions final_steady{
      1e-8, 500.0, 1.0, {1e-8, 1e-10}, false};
};

struct OptimizationReport {
  SwarmTrace trace;
  model::RuleSet best_rules;
  evolve::SteadyStateResult steady;  // tight rerun at the optimum
  double mean_nn_covariance = 0.0;
  obs::PhaseFidelity target_best;  // GHZ (maximize) or AF cat (minimize)
  double target_fixed = 0.0;       // same target at phase pi
  std::vector<FidelityCurve> curves;
};

inline OptimizationReport optimize_and_report(const OptimizeSetup& setup) {
  const std::size_t n = setup.lattice.n_sites;
  OptimizeSetup cfg = setup;
  if (cfg.swarm.bounds.empty()) {
    cfg.swarm.bounds.assign(6, {0.0, 2.0 * model::pi});
  }
  if (cfg.rho0.size() == 0) {
    cfg.rho0 = states::basis_density(cfg.lattice.dim(), 0);
  }
  const bool maximize = (cfg.objective == Objective::MaximizeNnCovariance);
  cfg.swarm.maximize = maximize;

  SteadyCostSetup cost_setup{cfg.lattice, cfg.rho0, 0.0, cfg.cost_steady,
                             maximize ? -1e9 : 1e9};
  auto cost = [&](const std::vector<double>& p) {
    return cost_steady_nn_covariance(p, cost_setup);
  };

  OptimizationReport rep;
  rep.trace = pso_optimize(cost, cfg.swarm);
  rep.best_rules = rules_from_params(rep.trace.best_params);

  const evolve::Liouvillian liou(rep.best_rules, cfg.lattice);
  rep.steady = evolve::steady_state(cfg.rho0, liou, cfg.final_steady);
  rep.mean_nn_covariance =
      obs::covariance(rep.steady.state, n, cfg.lattice.boundary).mean_nn;

  const auto [af0, af1] = states::af_indices(n);
  const Index t0 = maximize ? 0 : Index(af0);
  const Index t1 = maximize ? (Index(1) << n) - 1 : Index(af1);
  rep.target_best = obs::fidelity_cat_best(rep.steady.state, t0, t1);
  const Vector target_pi = states::cat_ket(Index(1) << n, t0, t1, model::pi);
  rep.target_fixed = obs::fidelity_pure(rep.steady.state, target_pi);

  for (double g : cfg.curve_gammas) {
    model::RuleSet rules = rep.best_rules;
    rules.gamma = g;
    const evolve::Liouvillian lg(rules, cfg.lattice);
    evolve::EvolutionOptions eopts;
    eopts.sample_interval = cfg.curve_dt;
    eopts.integrator = cfg.cost_steady.integrator;
    eopts.store_states = true;
    const auto recd = evolve::propagate(cfg.rho0, lg, cfg.curve_t_max, eopts);
    FidelityCurve curve;
    curve.gamma = g;
    curve.times = recd.times;
    for (const Matrix& st : recd.states) {
      curve.fixed_phase.push_back(obs::fidelity_pure(st, target_pi));
      curve.optimized.push_back(obs::fidelity_cat_best(st, t0, t1).fidelity);
    }
    rep.curves.push_back(std::move(curve));
  }
  return rep;
}

}  // namespace rqca::vqo

#endif
