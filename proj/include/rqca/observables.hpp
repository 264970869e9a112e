#ifndef RQCA_OBSERVABLES_HPP
#define RQCA_OBSERVABLES_HPP

// Diagnostics extracted from density matrices: site magnetizations, the
// Z-basis covariance matrix with its nearest-neighbor mean, purity, and
// fidelities against pure targets including phase-optimized two-component
// cat states.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rqca/model.hpp"
#include "rqca/states.hpp"
#include "rqca/types.hpp"

namespace rqca::obs {

namespace detail {

inline void check_square_dim(const Matrix& rho, std::size_t n) {
  if (n < 1 || n > 12) {
    throw std::invalid_argument("observables: n_sites must be in [1, 12]");
  }
  if (rho.rows() != rho.cols() || rho.rows() != (Index(1) << n)) {
    throw std::invalid_argument("observables: density dimension != 2^n");
  }
}

}  // namespace detail

// <Z_j> per site from the diagonal populations; Z|1> = +|1>.
inline RealVector magnetization(const Matrix& rho, std::size_t n) {
  detail::check_square_dim(rho, n);
  const Index dim = rho.rows();
  RealVector z = RealVector::Zero(n);
  for (Index b = 0; b < dim; ++b) {
    const double p = rho(b, b).real();
    for (std::size_t j = 1; j <= n; ++j) {
      z(j - 1) += ((b >> (n - j)) & 1) ? p : -p;
    }
  }
  return z;
}

struct CovarianceReport {
  RealMatrix c;        // C_ij = <Z_i Z_j> - <Z_i><Z_j>
  double mean_nn = 0;  // nearest-neighbor bond average
};

inline CovarianceReport covariance(const Matrix& rho, std::size_t n,
                                   model::Boundary boundary) {
  detail::check_square_dim(rho, n);
  const Index dim = rho.rows();
  RealVector z = RealVector::Zero(n);
  RealMatrix zz = RealMatrix::Zero(n, n);
  for (Index b = 0; b < dim; ++b) {
    const double p = rho(b, b).real();
    for (std::size_t i = 1; i <= n; ++i) {
      const double zi = ((b >> (n - i)) & 1) ? 1.0 : -1.0;
      z(i - 1) += p * zi;
      for (std::size_t j = i; j <= n; ++j) {
        const double zj = ((b >> (n - j)) & 1) ? 1.0 : -1.0;
        zz(i - 1, j - 1) += p * zi * zj;
      }
    }
  }
  CovarianceReport rep;
  rep.c = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double m = (i <= j) ? zz(i, j) : zz(j, i);
      rep.c(i, j) = m - z(i) * z(j);
    }
  }
  if (n >= 2) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += rep.c(i, i + 1);
    std::size_t bonds = n - 1;
    if (boundary == model::Boundary::Periodic) {
      acc += rep.c(n - 1, 0);
      bonds = n;
    }
    rep.mean_nn = acc / double(bonds);
  }
  return rep;
}

inline double purity(const Matrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("purity: matrix must be square");
  }
  return (rho * rho).trace().real();
}

// <psi| rho |psi>, clamped into [0, 1].
inline double fidelity_pure(const Matrix& rho, const Vector& psi) {
  if (rho.rows() != rho.cols() || rho.rows() != psi.size()) {
    throw std::invalid_argument("fidelity_pure: dimension mismatch");
  }
  const double f = psi.dot(rho * psi).real();
  return std::clamp(f, 0.0, 1.0);
}

struct PhaseFidelity {
  double fidelity = 0.0;
  double phase = 0.0;  // optimizing phase, in (-pi, pi]
};

// Best fidelity against (|i0> + e^{i phi} |i1>) / sqrt(2) over phi:
// F = (rho_i0i0 + rho_i1i1) / 2 + |rho_i0i1|, attained at phi = -arg(rho_i0i1).
inline PhaseFidelity fidelity_cat_best(const Matrix& rho, Index i0, Index i1) {
  if (rho.rows() != rho.cols() || i0 < 0 || i1 < 0 || i0 >= rho.rows() ||
      i1 >= rho.rows() || i0 == i1) {
    throw std::invalid_argument("fidelity_cat_best: bad component indices");
  }
  const double a = rho(i0, i0).real();
  const double b = rho(i1, i1).real();
  const cd c = rho(i0, i1);
  PhaseFidelity out;
  out.fidelity = std::clamp(0.5 * (a + b) + std::abs(c), 0.0, 1.0);
  out.phase = (std::abs(c) > 0.0) ? -std::arg(c) : 0.0;
  if (out.phase <= -model::pi) out.phase += 2.0 * model::pi;
  return out;
}

inline PhaseFidelity fidelity_ghz_best(const Matrix& rho, std::size_t n) {
  detail::check_square_dim(rho, n);
  return fidelity_cat_best(rho, 0, rho.rows() - 1);
}

inline PhaseFidelity fidelity_af_best(const Matrix& rho, std::size_t n) {
  detail::check_square_dim(rho, n);
  const auto [a, b] = states::af_indices(n);
  return fidelity_cat_best(rho, Index(a), Index(b));
}

}  // namespace rqca::obs

#endif
