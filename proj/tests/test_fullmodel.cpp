#include <catch2/catch_amalgamated.hpp>

#include "rqca/fullmodel.hpp"
#include "rqca/states.hpp"

using namespace rqca;
using Catch::Approx;

TEST_CASE("bit patterns embed into the three-level basis", "[fullmodel]") {
  CHECK(fullmodel::embed_bits(0b00, 2) == 0);
  CHECK(fullmodel::embed_bits(0b10, 2) == 3);  // site 1 in r
  CHECK(fullmodel::embed_bits(0b01, 2) == 1);  // site 2 in r
  CHECK(fullmodel::embed_bits(0b11, 2) == 4);
  CHECK(fullmodel::embed_bits(0b101, 3) == 10);
}

TEST_CASE("three-level parameters are validated", "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 8;
  CHECK_THROWS_AS(fullmodel::detail::validate(p), std::invalid_argument);
  p.n_sites = 2;
  p.boundary = model::Boundary::Periodic;
  CHECK_THROWS_AS(fullmodel::detail::validate(p), std::invalid_argument);
}

TEST_CASE("the bare g-r drive performs a Rabi oscillation", "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 1;
  p.theta = {1.2, 0.0, 0.0};
  const Matrix rho0 = states::basis_density(3, 0);
  const auto rec = fullmodel::propagate_full(rho0, p, 2.0, 0.25);
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    const double expect = std::pow(std::sin(0.5 * 1.2 * rec.times[k]), 2);
    CHECK(rec.rydberg[k](0) == Approx(expect).margin(1e-7));
    CHECK(rec.excited[k](0) == Approx(0.0).margin(1e-10));
  }
}

TEST_CASE("the e level decays at the bare linewidth", "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 1;
  p.big_gamma = 2.3;
  const Matrix rho0 = states::basis_density(3, 2);
  const auto rec = fullmodel::propagate_full(rho0, p, 1.5, 0.25);
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    const double expect = std::exp(-p.big_gamma * rec.times[k]);
    CHECK(rec.excited[k](0) == Approx(expect).margin(1e-7));
  }
  CHECK(rec.final_state(0, 0).real() ==
        Approx(1.0 - std::exp(-p.big_gamma * 1.5)).margin(1e-7));
  CHECK(rec.trace_residual.back() < 1e-9);
}

TEST_CASE("the r-e drive depumps at the adiabatic rate", "[fullmodel]") {
  // With Gamma much faster than the drive, the r population decays at the
  // effective rate phi^2 / Gamma.
  fullmodel::ThreeLevelParams p;
  p.n_sites = 1;
  p.big_gamma = 40.0;
  p.phi = {2.0, 0.0, 0.0};
  const double eff = p.phi[0] * p.phi[0] / p.big_gamma;
  const Matrix rho0 = states::basis_density(3, 1);
  const auto rec = fullmodel::propagate_full(rho0, p, 8.0, 1.0);
  for (std::size_t k = 1; k < rec.times.size(); ++k) {
    const double expect = std::exp(-eff * rec.times[k]);
    CHECK(rec.rydberg[k](0) == Approx(expect).epsilon(0.08));
  }
}

TEST_CASE("strong interactions reproduce the blockade", "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 2;
  p.v = 200.0 * model::pi;
  p.big_gamma = 10.0 * model::pi;
  p.theta = {model::pi, 0.0, 0.0};
  const auto rep = fullmodel::compare_effective(p, 0b00, 2.0, 0.25);
  CHECK(rep.max_dev < 0.05);
  CHECK(rep.effective_rules.theta[0] == Approx(model::pi));
}

TEST_CASE("facilitation drives only next to an excitation", "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 2;
  p.v = 100.0 * model::pi;
  p.big_gamma = 10.0 * model::pi;
  p.theta = {0.0, model::pi, 0.0};
  const auto rep = fullmodel::compare_effective(p, 0b10, 3.0, 0.25);
  CHECK(rep.max_dev < 0.1);
  // The facilitated chain |10> <-> |11> <-> |01> has equal couplings pi/2, so
  // the site populations follow (1 +- c)(3 -+ c)/4 with c = cos(pi t / sqrt2).
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    const double c = std::cos(model::pi * rep.times[k] / std::sqrt(2.0));
    CHECK(rep.eff_excited(k, 0) ==
          Approx(0.25 * (1.0 + c) * (3.0 - c)).margin(1e-6));
    CHECK(rep.eff_excited(k, 1) ==
          Approx(0.25 * (1.0 - c) * (3.0 + c)).margin(1e-6));
  }
}

TEST_CASE("conditional depumping matches its effective rate", "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 2;
  p.v = 100.0 * model::pi;
  p.big_gamma = 20.0 * model::pi;
  p.phi = {0.0, std::sqrt(0.5 * model::pi * p.big_gamma), 0.0};
  const auto rep = fullmodel::compare_effective(p, 0b11, 3.0, 0.25);
  CHECK(rep.effective_rules.phi[1] == Approx(0.5 * model::pi));
  CHECK(rep.max_dev < 0.1);
}

TEST_CASE("the effective description improves with the interaction",
          "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 2;
  p.v = 50.0 * model::pi;
  p.big_gamma = 10.0 * model::pi;
  p.theta = {0.0, model::pi, 0.0};
  const auto trend = fullmodel::effective_convergence_trend(p, 0b10, 2.0, 0.25);
  REQUIRE(trend.max_devs.size() == 3);
  CHECK(trend.decreasing);
  CHECK(trend.v_values[2] == Approx(4.0 * p.v));
}

TEST_CASE("a depump drive requires a linewidth", "[fullmodel]") {
  fullmodel::ThreeLevelParams p;
  p.n_sites = 2;
  p.v = 50.0 * model::pi;
  p.phi = {1.0, 0.0, 0.0};
  p.big_gamma = 0.0;
  CHECK_THROWS_AS(fullmodel::compare_effective(p, 0b00, 1.0),
                  std::invalid_argument);
}
