#ifndef RQCA_TEST_HELPERS_HPP
#define RQCA_TEST_HELPERS_HPP

// Reference constructions for oracle tests, written against the operator
// definitions directly (dense Kronecker products over the full chain) so
// they share no code path with the bitwise builders under test.

#include <random>
#include <vector>

#include "rqca/model.hpp"
#include "rqca/numerics.hpp"
#include "rqca/types.hpp"

namespace testutil {

using namespace rqca;

inline Matrix eye2() { return Matrix::Identity(2, 2); }

inline Matrix proj(int occ) {
  Matrix p = Matrix::Zero(2, 2);
  p(occ, occ) = 1.0;
  return p;
}

inline Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  return x;
}

inline Matrix lowering() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

// Site 1 is the leftmost Kronecker factor (most significant bit).
inline Matrix chain_operator(std::size_t n,
                             const std::vector<std::pair<std::size_t, Matrix>>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t j = 1; j <= n; ++j) {
    Matrix local = eye2();
    for (const auto& [site, m] : factors) {
      if (site == j) local = m * local;
    }
    out = numerics::kron(out, local);
  }
  return out;
}

// P^a_{j-1} M_j P^b_{j+1} with fictitious ground neighbors at open edges:
// a missing neighbor contributes 1 when the required occupation is 0 and
// kills the term otherwise.
inline Matrix conditioned_term(const model::Lattice& lat, std::size_t j,
                               int a, int b, const Matrix& m) {
  const std::size_t n = lat.n_sites;
  std::vector<std::pair<std::size_t, Matrix>> factors{{j, m}};
  if (j == 1 && lat.boundary == model::Boundary::Open) {
    if (a != 0) return Matrix::Zero(lat.dim(), lat.dim());
  } else {
    const std::size_t left = (j == 1) ? n : j - 1;
    factors.push_back({left, proj(a)});
  }
  if (j == lat.n_sites && lat.boundary == model::Boundary::Open) {
    if (b != 0) return Matrix::Zero(lat.dim(), lat.dim());
  } else {
    const std::size_t right = (j == lat.n_sites) ? 1 : j + 1;
    factors.push_back({right, proj(b)});
  }
  return chain_operator(n, factors);
}

inline std::vector<std::size_t> rule_sites(const model::RuleSet& rules,
                                           const model::Lattice& lat) {
  if (rules.site_mask) return *rules.site_mask;
  std::vector<std::size_t> all;
  for (std::size_t j = 1; j <= lat.n_sites; ++j) all.push_back(j);
  return all;
}

inline Matrix reference_hamiltonian(const model::RuleSet& rules,
                                    const model::Lattice& lat) {
  Matrix h = Matrix::Zero(lat.dim(), lat.dim());
  for (std::size_t j : rule_sites(rules, lat)) {
    for (int a = 0; a <= 1; ++a) {
      for (int b = 0; b <= 1; ++b) {
        const double amp = rules.theta[a + b];
        if (amp == 0.0) continue;
        h += 0.5 * amp * conditioned_term(lat, j, a, b, pauli_x());
      }
    }
  }
  return h;
}

inline std::vector<Matrix> reference_jumps(const model::RuleSet& rules,
                                           const model::Lattice& lat) {
  std::vector<Matrix> out;
  for (std::size_t j : rule_sites(rules, lat)) {
    const bool left_edge = j == 1 && lat.boundary == model::Boundary::Open;
    const bool right_edge =
        j == lat.n_sites && lat.boundary == model::Boundary::Open;
    for (int a = 0; a <= (left_edge ? 0 : 1); ++a) {
      for (int b = 0; b <= (right_edge ? 0 : 1); ++b) {
        const double rate = rules.phi[a + b];
        if (rate <= 0.0) continue;
        out.push_back(std::sqrt(rate) *
                      conditioned_term(lat, j, a, b, lowering()));
      }
    }
  }
  if (rules.gamma > 0.0) {
    for (std::size_t j = 1; j <= lat.n_sites; ++j) {
      out.push_back(std::sqrt(rules.gamma) *
                    chain_operator(lat.n_sites, {{j, lowering()}}));
    }
  }
  return out;
}

// Dissipator superoperator from a jump list; order-insensitive fingerprint.
inline Matrix reference_dissipator(const std::vector<Matrix>& jumps, Index dim) {
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix s = Matrix::Zero(dim * dim, dim * dim);
  for (const Matrix& l : jumps) {
    const Matrix ldl = l.adjoint() * l;
    s += numerics::kron(l.conjugate(), l) - 0.5 * numerics::kron(id, ldl) -
         0.5 * numerics::kron(ldl.transpose(), id);
  }
  return s;
}

// ---- random inputs ----

inline Vector random_ket(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = cd{g(rng), g(rng)};
  return v / v.norm();
}

inline Matrix random_density(Index dim, std::mt19937_64& rng, int rank = 3) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Matrix rho = Matrix::Zero(dim, dim);
  double total = 0.0;
  for (int r = 0; r < rank; ++r) {
    const double w = u(rng);
    const Vector psi = random_ket(dim, rng);
    rho += w * (psi * psi.adjoint());
    total += w;
  }
  return rho / total;
}

inline model::RuleSet random_rules(std::mt19937_64& rng, bool unitary,
                                   double gamma_max = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * model::pi);
  model::RuleSet r;
  for (int k = 0; k < 3; ++k) {
    r.theta[k] = u(rng);
    r.phi[k] = unitary ? 0.0 : u(rng);
  }
  if (!unitary && gamma_max > 0.0) {
    std::uniform_real_distribution<double> ug(0.0, gamma_max);
    r.gamma = ug(rng);
  }
  return r;
}

}  // namespace testutil

#endif
