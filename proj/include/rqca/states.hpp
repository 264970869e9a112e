#ifndef RQCA_STATES_HPP
#define RQCA_STATES_HPP

// Constructors for the initial and target states used throughout: basis
// kets, two-component cat states (GHZ and antiferromagnetic flavors), and
// the central-superposition product state that seeds the discrete GHZ
// protocol.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "rqca/model.hpp"
#include "rqca/types.hpp"

namespace rqca::states {

inline Vector basis_ket(Index dim, Index idx) {
  if (idx < 0 || idx >= dim) {
    throw std::invalid_argument("basis_ket: index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(idx) = 1.0;
  return v;
}

inline Matrix density(const Vector& psi) { return psi * psi.adjoint(); }

inline Matrix basis_density(Index dim, Index idx) {
  Matrix rho = Matrix::Zero(dim, dim);
  rho(idx, idx) = 1.0;
  return rho;
}

// (|i0> + e^{i phase} |i1>) / sqrt(2)
inline Vector cat_ket(Index dim, Index i0, Index i1, double phase) {
  if (i0 == i1) {
    throw std::invalid_argument("cat_ket: components must differ");
  }
  Vector v = Vector::Zero(dim);
  if (i0 < 0 || i0 >= dim || i1 < 0 || i1 >= dim) {
    throw std::invalid_argument("cat_ket: index out of range");
  }
  const double inv = 1.0 / std::sqrt(2.0);
  v(i0) = inv;
  v(i1) = std::polar(inv, phase);
  return v;
}

// (|0...0> + e^{i phase} |1...1>) / sqrt(2); phase = pi gives the GHZ_- state.
inline Vector ghz_ket(std::size_t n, double phase = model::pi) {
  if (n < 1 || n > 12) {
    throw std::invalid_argument("ghz_ket: n must be in [1, 12]");
  }
  const Index dim = Index(1) << n;
  return cat_ket(dim, 0, dim - 1, phase);
}

// Basis indices of the two antiferromagnetic patterns |0101...> and
// |1010...> (site 1 ground first).
inline std::pair<std::uint64_t, std::uint64_t> af_indices(std::size_t n) {
  if (n < 2 || n > 12) {
    throw std::invalid_argument("af_indices: n must be in [2, 12]");
  }
  std::uint64_t even_sites = 0;  // excited on sites 2, 4, ...
  std::uint64_t odd_sites = 0;   // excited on sites 1, 3, ...
  for (std::size_t j = 1; j <= n; ++j) {
    const std::uint64_t mask = std::uint64_t(1) << (n - j);
    if (j % 2 == 0) {
      even_sites |= mask;
    } else {
      odd_sites |= mask;
    }
  }
  return {even_sites, odd_sites};
}

// (|0101...> + e^{i phase} |1010...>) / sqrt(2)
inline Vector af_ket(std::size_t n, double phase = model::pi) {
  const auto [a, b] = af_indices(n);
  return cat_ket(Index(1) << n, Index(a), Index(b), phase);
}

// |0...0 (|0>+|1>)/sqrt2 0...0> with the superposed site at the chain center;
// n must be odd.
inline Vector central_superposition_ket(std::size_t n) {
  if (n < 1 || n > 12 || n % 2 == 0) {
    throw std::invalid_argument(
        "central_superposition_ket: n must be odd and in [1, 12]");
  }
  const Index dim = Index(1) << n;
  Vector v = Vector::Zero(dim);
  const double inv = 1.0 / std::sqrt(2.0);
  v(0) = inv;
  v(Index(1) << ((n - 1) / 2)) = inv;
  return v;
}

}  // namespace rqca::states

#endif
