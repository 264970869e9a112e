#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rqca/observables.hpp"
#include "rqca/states.hpp"
#include "rqca/vqo.hpp"

using namespace rqca;
using Catch::Approx;

namespace {

double neg_quadratic(const std::vector<double>& x, double target) {
  double s = 0.0;
  for (double v : x) s -= (v - target) * (v - target);
  return s;
}

}  // namespace

TEST_CASE("the swarm finds a quadratic optimum", "[vqo]") {
  vqo::SwarmConfig cfg;
  cfg.population = 10;
  cfg.iterations = 100;
  cfg.bounds.assign(6, {0.0, 1.0});
  cfg.seed = 7;
  const auto trace =
      vqo::pso_optimize([](const auto& x) { return neg_quadratic(x, 0.3); },
                        cfg);
  REQUIRE(trace.best_params.size() == 6);
  for (double v : trace.best_params) CHECK(v == Approx(0.3).margin(1e-2));
  CHECK(trace.best_cost == Approx(0.0).margin(1e-3));
}

TEST_CASE("the swarm minimizes when asked", "[vqo]") {
  vqo::SwarmConfig cfg;
  cfg.population = 8;
  cfg.iterations = 80;
  cfg.bounds.assign(3, {-1.0, 2.0});
  cfg.seed = 11;
  cfg.maximize = false;
  const auto trace = vqo::pso_optimize(
      [](const auto& x) { return -neg_quadratic(x, 0.7); }, cfg);
  for (double v : trace.best_params) CHECK(v == Approx(0.7).margin(1e-2));
  for (std::size_t k = 1; k < trace.best_cost_history.size(); ++k) {
    CHECK(trace.best_cost_history[k] <= trace.best_cost_history[k - 1]);
  }
}

TEST_CASE("the swarm trace is reproducible and well-shaped", "[vqo]") {
  vqo::SwarmConfig cfg;
  cfg.population = 5;
  cfg.iterations = 12;
  cfg.bounds.assign(4, {0.0, 2.0});
  cfg.seed = 42;
  auto cost = [](const auto& x) { return neg_quadratic(x, 1.2); };
  const auto a = vqo::pso_optimize(cost, cfg);
  const auto b = vqo::pso_optimize(cost, cfg);

  REQUIRE(a.costs.size() == cfg.iterations + 1);
  for (const auto& row : a.costs) REQUIRE(row.size() == cfg.population);
  REQUIRE(a.best_cost_history.size() == cfg.iterations + 1);
  for (std::size_t k = 1; k < a.best_cost_history.size(); ++k) {
    CHECK(a.best_cost_history[k] >= a.best_cost_history[k - 1]);
  }
  CHECK(a.best_cost == a.best_cost_history.back());

  CHECK(a.costs == b.costs);
  CHECK(a.best_params == b.best_params);
  CHECK(a.particle_seeds == b.particle_seeds);

  vqo::SwarmConfig other = cfg;
  other.seed = 43;
  const auto c = vqo::pso_optimize(cost, other);
  CHECK(c.costs[0] != a.costs[0]);
}

TEST_CASE("every evaluated position respects the bounds", "[vqo]") {
  vqo::SwarmConfig cfg;
  cfg.population = 6;
  cfg.iterations = 30;
  cfg.bounds = {{-1.0, 0.5}, {2.0, 3.0}};
  cfg.seed = 3;
  std::vector<std::vector<double>> seen;
  const auto trace = vqo::pso_optimize(
      [&](const auto& x) {
        seen.push_back(x);
        return neg_quadratic(x, 0.0);
      },
      cfg);
  REQUIRE(seen.size() == cfg.population * (cfg.iterations + 1));
  for (const auto& x : seen) {
    REQUIRE(x.size() == 2);
    CHECK(x[0] >= -1.0);
    CHECK(x[0] <= 0.5);
    CHECK(x[1] >= 2.0);
    CHECK(x[1] <= 3.0);
  }
  CHECK(trace.best_params[1] == Approx(2.0));
}

TEST_CASE("swarm configuration is validated", "[vqo]") {
  auto cost = [](const auto& x) { return x[0]; };
  vqo::SwarmConfig cfg;
  cfg.bounds.assign(1, {0.0, 1.0});

  vqo::SwarmConfig bad = cfg;
  bad.population = 1;
  CHECK_THROWS_AS(vqo::pso_optimize(cost, bad), std::invalid_argument);
  bad = cfg;
  bad.iterations = 0;
  CHECK_THROWS_AS(vqo::pso_optimize(cost, bad), std::invalid_argument);
  bad = cfg;
  bad.bounds.clear();
  CHECK_THROWS_AS(vqo::pso_optimize(cost, bad), std::invalid_argument);
  bad = cfg;
  bad.bounds[0] = {1.0, 1.0};
  CHECK_THROWS_AS(vqo::pso_optimize(cost, bad), std::invalid_argument);
  bad = cfg;
  bad.velocity_clamp = 0.0;
  CHECK_THROWS_AS(vqo::pso_optimize(cost, bad), std::invalid_argument);
  CHECK_THROWS_AS(vqo::pso_optimize({}, cfg), std::invalid_argument);
}

TEST_CASE("rule parameters map onto rule sets", "[vqo]") {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto rules = vqo::rules_from_params(p, 0.05);
  for (int k = 0; k < 3; ++k) {
    CHECK(rules.theta[k] == p[std::size_t(k)]);
    CHECK(rules.phi[k] == p[std::size_t(3 + k)]);
  }
  CHECK(rules.gamma == 0.05);
  CHECK_THROWS_AS(vqo::rules_from_params({0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("trivial rule parameters cost zero covariance", "[vqo]") {
  vqo::SteadyCostSetup setup;
  setup.lattice = model::Lattice(6, model::Boundary::Periodic);
  setup.rho0 = states::basis_density(64, 0);
  setup.steady = evolve::SteadyStateOptions{1e-6, 300.0, 2.0,
                                            {1e-5, 1e-8}, false};
  const double all_zero =
      vqo::cost_steady_nn_covariance({0, 0, 0, 0, 0, 0}, setup);
  CHECK(all_zero == Approx(0.0).margin(1e-9));
  const double depump_only = vqo::cost_steady_nn_covariance(
      {0, 0, 0, 2.0 * model::pi, 0, 0}, setup);
  CHECK(depump_only == Approx(0.0).margin(1e-9));
}

TEST_CASE("the optimization report is internally consistent", "[vqo]") {
  vqo::OptimizeSetup setup;
  setup.lattice = model::Lattice(4, model::Boundary::Periodic);
  setup.swarm.population = 4;
  setup.swarm.iterations = 3;
  setup.swarm.seed = 2;
  setup.curve_gammas = {0.0};
  setup.curve_t_max = 5.0;
  setup.curve_dt = 1.0;
  const auto rep = vqo::optimize_and_report(setup);

  REQUIRE(rep.trace.costs.size() == 4);
  for (const auto& row : rep.trace.costs) REQUIRE(row.size() == 4);
  for (int k = 0; k < 3; ++k) {
    CHECK(rep.best_rules.theta[k] == rep.trace.best_params[std::size_t(k)]);
    CHECK(rep.best_rules.phi[k] == rep.trace.best_params[std::size_t(3 + k)]);
  }
  CHECK(rep.best_rules.gamma == 0.0);

  evolve::validate_density(rep.steady.state);
  const double cov =
      obs::covariance(rep.steady.state, 4, model::Boundary::Periodic).mean_nn;
  CHECK(rep.mean_nn_covariance == Approx(cov).margin(1e-14));

  CHECK(rep.target_best.fidelity >= rep.target_fixed - 1e-12);
  CHECK(rep.target_best.fidelity <= 1.0 + 1e-9);

  REQUIRE(rep.curves.size() == 1);
  const auto& curve = rep.curves[0];
  CHECK(curve.gamma == 0.0);
  REQUIRE(curve.times.size() == 6);
  CHECK(curve.times.front() == 0.0);
  CHECK(curve.times.back() == Approx(5.0));
  REQUIRE(curve.fixed_phase.size() == 6);
  REQUIRE(curve.optimized.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(curve.optimized[k] >= curve.fixed_phase[k] - 1e-12);
    CHECK(curve.optimized[k] >= -1e-12);
    CHECK(curve.optimized[k] <= 1.0 + 1e-9);
  }
}

TEST_CASE("the minimizing objective targets the AF cat", "[vqo]") {
  vqo::OptimizeSetup setup;
  setup.lattice = model::Lattice(4, model::Boundary::Periodic);
  setup.objective = vqo::Objective::MinimizeNnCovariance;
  setup.swarm.population = 3;
  setup.swarm.iterations = 2;
  setup.swarm.seed = 9;
  setup.curve_gammas = {};
  const auto rep = vqo::optimize_and_report(setup);
  CHECK(rep.curves.empty());
  for (std::size_t k = 1; k < rep.trace.best_cost_history.size(); ++k) {
    CHECK(rep.trace.best_cost_history[k] <=
          rep.trace.best_cost_history[k - 1]);
  }
  const auto [a0, a1] = states::af_indices(4);
  const auto direct = obs::fidelity_cat_best(rep.steady.state, Index(a0),
                                             Index(a1));
  CHECK(rep.target_best.fidelity == Approx(direct.fidelity).margin(1e-12));
}
