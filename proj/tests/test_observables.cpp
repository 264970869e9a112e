#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rqca/model.hpp"
#include "rqca/observables.hpp"
#include "rqca/states.hpp"
#include "test_helpers.hpp"

using namespace rqca;
using Catch::Approx;

TEST_CASE("magnetization of basis states is the bit pattern", "[observables]") {
  const Matrix rho = states::basis_density(16, model::parse_bitstring("1010", 4));
  const RealVector z = obs::magnetization(rho, 4);
  CHECK(z(0) == Approx(1.0));
  CHECK(z(1) == Approx(-1.0));
  CHECK(z(2) == Approx(1.0));
  CHECK(z(3) == Approx(-1.0));
  CHECK_THROWS_AS(obs::magnetization(rho, 3), std::invalid_argument);
}

TEST_CASE("magnetization is linear in the state", "[observables]") {
  std::mt19937_64 rng(5);
  const Matrix a = testutil::random_density(8, rng);
  const Matrix b = testutil::random_density(8, rng);
  const RealVector mixed = obs::magnetization(0.3 * a + 0.7 * b, 3);
  const RealVector sum =
      0.3 * obs::magnetization(a, 3) + 0.7 * obs::magnetization(b, 3);
  CHECK((mixed - sum).norm() < 1e-12);
}

TEST_CASE("covariance vanishes on product states", "[observables]") {
  Vector site(2);
  site << cd{0.6, 0.0}, cd{0.8, 0.0};
  Vector psi = site;
  for (int j = 1; j < 4; ++j) {
    Vector next(psi.size() * 2);
    next << site(0) * psi, site(1) * psi;
    psi = next / next.norm();
  }
  const auto rep = obs::covariance(states::density(psi), 4,
                                   model::Boundary::Open);
  RealMatrix off = rep.c;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rep.mean_nn == Approx(0.0).margin(1e-12));
  // The diagonal keeps the single-site variance 1 - <Z>^2.
  CHECK(rep.c(0, 0) == Approx(1.0 - 0.28 * 0.28));
}

TEST_CASE("covariance of cat states saturates the bond average",
          "[observables]") {
  const Matrix ghz = states::density(states::ghz_ket(4));
  CHECK(obs::covariance(ghz, 4, model::Boundary::Open).mean_nn == Approx(1.0));
  CHECK(obs::covariance(ghz, 4, model::Boundary::Periodic).mean_nn ==
        Approx(1.0));
  const Matrix af = states::density(states::af_ket(4));
  CHECK(obs::covariance(af, 4, model::Boundary::Periodic).mean_nn ==
        Approx(-1.0));
}

TEST_CASE("covariance bond count differs between boundaries", "[observables]") {
  // Entangling the two end sites puts all correlation on the ring seam, so
  // only the periodic bond average sees it.
  const Matrix rho = states::density(states::cat_ket(
      8, model::parse_bitstring("100", 3), model::parse_bitstring("001", 3),
      0.0));
  const auto open = obs::covariance(rho, 3, model::Boundary::Open);
  const auto ring = obs::covariance(rho, 3, model::Boundary::Periodic);
  CHECK(open.mean_nn == Approx((open.c(0, 1) + open.c(1, 2)) / 2.0));
  CHECK(open.mean_nn == Approx(0.0).margin(1e-12));
  CHECK(ring.mean_nn ==
        Approx((ring.c(0, 1) + ring.c(1, 2) + ring.c(2, 0)) / 3.0));
  CHECK(ring.mean_nn == Approx(-1.0 / 3.0));
}

TEST_CASE("purity spans pure to maximally mixed", "[observables]") {
  std::mt19937_64 rng(13);
  CHECK(obs::purity(states::density(testutil::random_ket(8, rng))) ==
        Approx(1.0));
  CHECK(obs::purity(Matrix::Identity(8, 8) / 8.0) == Approx(1.0 / 8.0));
}

TEST_CASE("pure-state fidelity is the quadratic form", "[observables]") {
  std::mt19937_64 rng(17);
  const Matrix rho = testutil::random_density(8, rng);
  const Vector psi = testutil::random_ket(8, rng);
  const double f = obs::fidelity_pure(rho, psi);
  CHECK(f == Approx((psi.adjoint() * rho * psi)(0, 0).real()));
  CHECK(f >= 0.0);
  CHECK(f <= 1.0);
}

TEST_CASE("phase-optimized cat fidelity recovers a planted phase",
          "[observables]") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-model::pi + 1e-6, model::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const double planted = u(rng);
    const Matrix rho = states::density(states::cat_ket(16, 2, 13, planted));
    const auto best = obs::fidelity_cat_best(rho, 2, 13);
    CHECK(best.fidelity == Approx(1.0).margin(1e-12));
    CHECK(best.phase == Approx(planted).margin(1e-9));
  }
}

TEST_CASE("phase-optimized fidelity dominates every fixed phase",
          "[observables]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = testutil::random_density(16, rng, 4);
    const auto best = obs::fidelity_cat_best(rho, 0, 15);
    for (int k = 0; k < 64; ++k) {
      const double phase = -model::pi + 2.0 * model::pi * k / 64.0;
      const Vector target = states::cat_ket(16, 0, 15, phase);
      CHECK(best.fidelity >= obs::fidelity_pure(rho, target) - 1e-12);
    }
    const Vector at_best = states::cat_ket(16, 0, 15, best.phase);
    CHECK(obs::fidelity_pure(rho, at_best) == Approx(best.fidelity));
  }
}

TEST_CASE("phase convention stays in the half-open interval", "[observables]") {
  const Matrix rho = states::density(states::cat_ket(4, 0, 3, model::pi));
  const auto best = obs::fidelity_cat_best(rho, 0, 3);
  CHECK(best.phase <= model::pi);
  CHECK(best.phase > -model::pi);
  CHECK(best.fidelity == Approx(1.0));
}

TEST_CASE("named cat fidelities agree with the generic one", "[observables]") {
  std::mt19937_64 rng(29);
  const Matrix rho = testutil::random_density(16, rng, 5);
  const auto ghz = obs::fidelity_ghz_best(rho, 4);
  const auto generic = obs::fidelity_cat_best(rho, 0, 15);
  CHECK(ghz.fidelity == Approx(generic.fidelity));
  const auto [af0, af1] = states::af_indices(4);
  const auto af = obs::fidelity_af_best(rho, 4);
  CHECK(af.fidelity ==
        Approx(obs::fidelity_cat_best(rho, Index(af0), Index(af1)).fidelity));
}
