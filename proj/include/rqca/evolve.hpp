#ifndef RQCA_EVOLVE_HPP
#define RQCA_EVOLVE_HPP

// Master-equation evolution: a compiled sparse Lindblad generator, continuous
// propagation with sampled diagnostics, block-partitioned discrete stepping
// over the two sublattices, steady-state search by long-time integration with
// an optional nullspace cross-check, and dense superoperator assembly.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "rqca/model.hpp"
#include "rqca/numerics.hpp"
#include "rqca/observables.hpp"
#include "rqca/types.hpp"

namespace rqca::evolve {

// ---- generator ----

// d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^+ - {L_k^+ L_k, rho} / 2),
// evaluated on an explicit density matrix.
inline Matrix lindblad_rhs(const Matrix& rho, const Matrix& h,
                           const std::vector<Matrix>& jumps) {
  if (h.rows() != h.cols() || rho.rows() != rho.cols() ||
      rho.rows() != h.rows()) {
    throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  }
  Matrix out = -iu * (h * rho - rho * h);
  for (const Matrix& l : jumps) {
    if (l.rows() != h.rows() || l.cols() != h.cols()) {
      throw std::invalid_argument("lindblad_rhs: jump dimension mismatch");
    }
    const Matrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

namespace detail {

inline SparseMatrix sparsify(const Matrix& a) {
  std::vector<Eigen::Triplet<cd>> trips;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != cd(0.0, 0.0)) trips.emplace_back(i, j, a(i, j));
    }
  }
  SparseMatrix s(a.rows(), a.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  s.makeCompressed();
  return s;
}

}  // namespace detail

// Sparse-compiled Lindblad generator. The stored operator is the
// non-Hermitian half H_nh = H - (i/2) sum L^+ L, so one application costs a
// single sparse product plus the jump sandwiches. Density inputs are assumed
// Hermitian; the -i(A rho - (A rho)^+) form then equals the full generator
// and keeps the derivative exactly Hermitian.
class Liouvillian {
 public:
  struct Workspace {
    Matrix a, b;
  };

  Liouvillian(const Matrix& h, const std::vector<Matrix>& jumps) {
    if (h.rows() != h.cols()) {
      throw std::invalid_argument("Liouvillian: H must be square");
    }
    if (!numerics::is_hermitian(h, 1e-9)) {
      throw std::invalid_argument("Liouvillian: H must be Hermitian");
    }
    dim_ = h.rows();
    Matrix acc = h;
    jumps_.reserve(jumps.size());
    jump_dags_.reserve(jumps.size());
    for (const Matrix& l : jumps) {
      if (l.rows() != dim_ || l.cols() != dim_) {
        throw std::invalid_argument("Liouvillian: jump dimension mismatch");
      }
      acc -= (0.5 * iu) * (l.adjoint() * l);
      jumps_.push_back(detail::sparsify(l));
      jump_dags_.push_back(detail::sparsify(l.adjoint()));
    }
    hnh_ = detail::sparsify(acc);
    n_sites_ = 0;
    for (std::size_t n = 1; n <= 12; ++n) {
      if ((Index(1) << n) == dim_) n_sites_ = n;
    }
  }

  Liouvillian(const model::RuleSet& rules, const model::Lattice& lat)
      : Liouvillian(model::build_hamiltonian(rules, lat),
                    model::build_jump_operators(rules, lat)) {
    n_sites_ = lat.n_sites;
  }

  Index dim() const { return dim_; }
  std::size_t n_sites() const { return n_sites_; }
  const SparseMatrix& non_hermitian_hamiltonian() const { return hnh_; }
  const std::vector<SparseMatrix>& jump_ops() const { return jumps_; }

  void apply(const Matrix& rho, Matrix& out, Workspace& ws) const {
    ws.a.noalias() = hnh_ * rho;
    out = -iu * (ws.a - ws.a.adjoint());
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      ws.b.noalias() = jumps_[k] * rho;
      out.noalias() += ws.b * jump_dags_[k];
    }
  }

  Matrix apply(const Matrix& rho) const {
    Workspace ws;
    Matrix out;
    apply(rho, out, ws);
    return out;
  }

  // ||L[rho]||_F, the stationarity residual.
  double residual(const Matrix& rho) const { return apply(rho).norm(); }

 private:
  SparseMatrix hnh_;
  std::vector<SparseMatrix> jumps_, jump_dags_;
  Index dim_ = 0;
  std::size_t n_sites_ = 0;
};

// ---- validation ----

inline void validate_density(const Matrix& rho, double tol = 1e-10) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw std::invalid_argument("density matrix must be square");
  }
  if (!numerics::is_hermitian(rho, tol)) {
    throw std::invalid_argument("density matrix must be Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > tol ||
      std::abs(rho.trace().imag()) > tol) {
    throw std::invalid_argument("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("density matrix must be positive");
  }
}

// ---- continuous propagation ----

struct EvolutionOptions {
  double sample_interval = 1.0;
  numerics::IntegratorOptions integrator{};
  bool store_states = false;
};

struct EvolutionRecord {
  std::vector<double> times;
  std::vector<RealVector> magnetization;  // empty when dim is not 2^n
  std::vector<double> trace_residual;     // |tr rho - 1| per sample
  std::vector<Matrix> states;             // filled when store_states
  Matrix final_state;
};

namespace detail {

inline std::vector<double> sample_grid(double t_max, double dt) {
  std::vector<double> ts{0.0};
  for (double t = dt; t < t_max - 1e-9 * std::max(1.0, t_max); t += dt) {
    ts.push_back(t);
  }
  if (t_max > 0.0) ts.push_back(t_max);
  return ts;
}

inline void record_sample(EvolutionRecord& rec, double t, const Matrix& rho,
                          std::size_t n_sites, bool store) {
  rec.times.push_back(t);
  rec.trace_residual.push_back(std::abs(rho.trace() - cd(1.0, 0.0)));
  if (n_sites > 0) {
    rec.magnetization.push_back(obs::magnetization(rho, n_sites));
  }
  if (store) rec.states.push_back(rho);
}

}  // namespace detail

inline EvolutionRecord propagate(const Matrix& rho0, const Liouvillian& liou,
                                 double t_max,
                                 const EvolutionOptions& opts = {}) {
  validate_density(rho0);
  if (rho0.rows() != liou.dim()) {
    throw std::invalid_argument("propagate: state/generator dimension mismatch");
  }
  if (!(t_max >= 0.0) || !(opts.sample_interval > 0.0)) {
    throw std::invalid_argument("propagate: bad time parameters");
  }
  EvolutionRecord rec;
  Liouvillian::Workspace ws;
  numerics::RhsFn rhs = [&](double, const Matrix& y, Matrix& dy) {
    liou.apply(y, dy, ws);
  };
  const auto grid = detail::sample_grid(t_max, opts.sample_interval);
  auto res = numerics::integrate_observe(
      rhs, rho0, 0.0, t_max, grid, opts.integrator,
      [&](double t, const Matrix& y) {
        detail::record_sample(rec, t, y, liou.n_sites(), opts.store_states);
        return true;
      });
  rec.final_state = std::move(res.y);
  return rec;
}

// ---- discrete block-partitioned stepping ----

// One unit-time masked update: the given rules restricted to one sublattice
// (intersected with any caller-set mask), integrated over t in [0, 1].
inline Matrix sublattice_step(const Matrix& rho, const model::RuleSet& rules,
                              const model::Lattice& lat,
                              model::Sublattice which,
                              const numerics::IntegratorOptions& integ = {}) {
  // Relaxed tolerance so chained steps tolerate accumulated integrator drift.
  validate_density(rho, 1e-6);
  model::RuleSet masked = rules;
  std::vector<std::size_t> sites;
  for (std::size_t j : model::detail::active_sites(rules, lat)) {
    if (model::Lattice::sublattice_of(j) == which) sites.push_back(j);
  }
  masked.site_mask = std::move(sites);
  const Liouvillian liou(masked, lat);
  if (rho.rows() != liou.dim()) {
    throw std::invalid_argument("sublattice_step: dimension mismatch");
  }
  Liouvillian::Workspace ws;
  numerics::RhsFn rhs = [&](double, const Matrix& y, Matrix& dy) {
    liou.apply(y, dy, ws);
  };
  return numerics::integrate_observe(rhs, rho, 0.0, 1.0, {}, integ, nullptr).y;
}

// One full block-partitioned step M = exp(L_B) exp(L_A): sublattice A first.
inline Matrix discrete_step(const Matrix& rho, const model::RuleSet& rules_a,
                            const model::RuleSet& rules_b,
                            const model::Lattice& lat,
                            const numerics::IntegratorOptions& integ = {}) {
  Matrix mid = sublattice_step(rho, rules_a, lat, model::Sublattice::A, integ);
  return sublattice_step(mid, rules_b, lat, model::Sublattice::B, integ);
}

enum class StepUnit { Full, Half };

struct DiscreteOptions {
  StepUnit unit = StepUnit::Full;
  model::Sublattice first = model::Sublattice::A;
  numerics::IntegratorOptions integrator{};
  bool store_states = false;
};

// Repeated discrete stepping; record times are step counts. With
// StepUnit::Half each step is a single sublattice update, alternating from
// `first`; with StepUnit::Full each step applies `first` then the other.
inline EvolutionRecord propagate_discrete(const Matrix& rho0,
                                          const model::RuleSet& rules_a,
                                          const model::RuleSet& rules_b,
                                          const model::Lattice& lat,
                                          std::size_t steps,
                                          const DiscreteOptions& opts = {}) {
  validate_density(rho0);
  if (rho0.rows() != lat.dim()) {
    throw std::invalid_argument("propagate_discrete: dimension mismatch");
  }
  EvolutionRecord rec;
  Matrix rho = rho0;
  detail::record_sample(rec, 0.0, rho, lat.n_sites, opts.store_states);
  auto rules_for = [&](model::Sublattice s) -> const model::RuleSet& {
    return (s == model::Sublattice::A) ? rules_a : rules_b;
  };
  auto other = [](model::Sublattice s) {
    return (s == model::Sublattice::A) ? model::Sublattice::B
                                       : model::Sublattice::A;
  };
  model::Sublattice next = opts.first;
  for (std::size_t s = 1; s <= steps; ++s) {
    if (opts.unit == StepUnit::Full) {
      rho = sublattice_step(rho, rules_for(next), lat, next, opts.integrator);
      const auto second = other(next);
      rho = sublattice_step(rho, rules_for(second), lat, second,
                            opts.integrator);
    } else {
      rho = sublattice_step(rho, rules_for(next), lat, next, opts.integrator);
      next = other(next);
    }
    detail::record_sample(rec, double(s), rho, lat.n_sites, opts.store_states);
  }
  rec.final_state = std::move(rho);
  return rec;
}

// ---- steady state ----

// KrylovExpm marches with exact-exponential substeps built from an Arnoldi
// basis; it has no step-size stability limit, which matters for strongly
// dissipative rules. AdaptiveOde reuses the trajectory integrator. Both
// follow the same path from rho0 and stop on the same residual grid.
enum class SteadyMarch { KrylovExpm, AdaptiveOde };

struct SteadyStateOptions {
  double tol = 1e-8;  // residual threshold on ||L[rho]||_F
  double t_max = 500.0;
  double check_interval = 1.0;
  numerics::IntegratorOptions integrator{};
  bool cross_check_nullspace = false;
  SteadyMarch march = SteadyMarch::KrylovExpm;
};

struct SteadyStateResult {
  Matrix state;
  double residual = 0.0;
  double elapsed = 0.0;
  bool converged = false;
  // Nullspace cross-check (only attempted for dim <= 64 on convergence).
  bool cross_checked = false;
  int nullspace_dim = 0;
  double cross_check_distance = std::numeric_limits<double>::quiet_NaN();
};

// Dense column-stacking superoperator: vec(L[rho]) = S vec(rho).
inline Matrix build_superoperator(const Matrix& h,
                                  const std::vector<Matrix>& jumps) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("build_superoperator: H must be square");
  }
  if (h.rows() > 64) {
    throw std::invalid_argument(
        "build_superoperator: dimension exceeds the supported 64");
  }
  const Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = -iu * (numerics::kron(id, h) - numerics::kron(h.transpose(), id));
  for (const Matrix& l : jumps) {
    if (l.rows() != d || l.cols() != d) {
      throw std::invalid_argument("build_superoperator: jump dim mismatch");
    }
    const Matrix ldl = l.adjoint() * l;
    s += numerics::kron(l.conjugate(), l) -
         0.5 * numerics::kron(id, ldl) -
         0.5 * numerics::kron(ldl.transpose(), id);
  }
  return s;
}

namespace detail {

// Arnoldi basis of density-matrix-shaped vectors under the Frobenius inner
// product, used to apply exp(tau L) without forming the superoperator.
struct KrylovWorkspace {
  std::vector<Matrix> basis;
  Matrix w;
  Liouvillian::Workspace apply_ws;
};

// Advances rho by exp(span L) to relative accuracy tol. The basis is built
// once per substep; shrinking tau after a rejection only re-exponentiates
// the small Hessenberg matrix. The local error uses the two-term augmented
// exponential estimate; the generator is trace-nonincreasing in norm, so
// accepted local errors bound the propagated global error.
inline void krylov_step(const Liouvillian& liou, Matrix& rho, double span,
                        double tol, int max_basis, double t_now,
                        KrylovWorkspace& ws) {
  if (!(span > 0.0)) return;
  if (max_basis < 4) throw std::invalid_argument("krylov_step: basis too small");
  const Index d = rho.rows();
  if (Index(ws.basis.size()) < Index(max_basis) + 1) {
    ws.basis.resize(std::size_t(max_basis) + 1);
  }

  double remaining = span;
  double tau = span;
  while (remaining > 1e-14 * span) {
    const double beta = rho.norm();
    if (beta == 0.0) return;

    ws.basis[0] = rho / beta;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(max_basis + 1, max_basis);
    int m = 0;
    bool happy = false;
    for (int j = 0; j < max_basis; ++j) {
      liou.apply(ws.basis[std::size_t(j)], ws.w, ws.apply_ws);
      for (int i = 0; i <= j; ++i) {
        const cd hij =
            (ws.basis[std::size_t(i)].conjugate().cwiseProduct(ws.w)).sum();
        h(i, j) = hij;
        ws.w.noalias() -= hij * ws.basis[std::size_t(i)];
      }
      const double hnext = ws.w.norm();
      h(j + 1, j) = hnext;
      m = j + 1;
      if (hnext <= 1e-12 * (h.topLeftCorner(m, m).norm() + 1.0)) {
        happy = true;
        break;
      }
      ws.basis[std::size_t(j) + 1] = ws.w / hnext;
    }
    double avnorm = 0.0;
    if (!happy) {
      liou.apply(ws.basis[std::size_t(m)], ws.w, ws.apply_ws);
      avnorm = ws.w.norm();
    } else {
      tau = remaining;
    }

    Matrix f;
    double err_loc = 0.0;
    for (;;) {
      Eigen::MatrixXcd haug = Eigen::MatrixXcd::Zero(m + 2, m + 2);
      haug.topLeftCorner(m, m) = h.topLeftCorner(m, m);
      haug(m, m - 1) = h(m, m - 1);
      haug(m + 1, m) = cd{1.0, 0.0};
      f = numerics::expm(Matrix(tau * haug));
      if (happy) {
        err_loc = 0.0;
        break;
      }
      const double err1 = beta * std::abs(f(m, 0));
      const double err2 = beta * std::abs(f(m + 1, 0)) * avnorm;
      if (err1 > 10.0 * err2) {
        err_loc = err2;
      } else if (err1 > err2) {
        err_loc = err1 * err2 / (err1 - err2);
      } else {
        err_loc = err1;
      }
      if (err_loc <= tol * beta) break;
      tau *= 0.5;
      if (!(tau > 1e-12 * span)) {
        throw numerics::IntegrationError(
            "krylov_step: substep collapsed below resolution",
            t_now + (span - remaining), rho);
      }
    }

    ws.w = Matrix::Zero(d, d);
    for (int k = 0; k < m; ++k) ws.w.noalias() += f(k, 0) * ws.basis[std::size_t(k)];
    rho = beta * ws.w;
    remaining -= tau;
    if (err_loc < 0.01 * tol * beta) tau *= 2.0;
    tau = std::min(tau, remaining);
  }
}

// vec(L[rho]) = S vec(rho) assembled from the compiled generator pieces:
// L[rho] = -i(H_nh rho - rho H_nh^+) + sum L rho L^+.
inline Matrix superoperator_of(const Liouvillian& liou) {
  const Index d = liou.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix hnh = Matrix(liou.non_hermitian_hamiltonian());
  Matrix s = -iu * (numerics::kron(id, hnh) - numerics::kron(hnh.conjugate(), id));
  for (const SparseMatrix& lsp : liou.jump_ops()) {
    const Matrix l = Matrix(lsp);
    s += numerics::kron(l.conjugate(), l);
  }
  return s;
}

}  // namespace detail

inline SteadyStateResult steady_state(const Matrix& rho0,
                                      const Liouvillian& liou,
                                      const SteadyStateOptions& opts = {}) {
  validate_density(rho0);
  if (rho0.rows() != liou.dim()) {
    throw std::invalid_argument("steady_state: dimension mismatch");
  }
  if (!(opts.tol > 0.0) || !(opts.t_max >= 0.0) ||
      !(opts.check_interval > 0.0)) {
    throw std::invalid_argument("steady_state: bad options");
  }

  SteadyStateResult out;
  Liouvillian::Workspace ws;
  Matrix deriv;

  liou.apply(rho0, deriv, ws);
  out.residual = deriv.norm();
  const bool krylov =
      opts.march == SteadyMarch::KrylovExpm && liou.dim() <= 1024;
  if (out.residual < opts.tol) {
    out.state = rho0;
    out.converged = true;
  } else if (krylov) {
    // Basis memory scales as max_basis * dim^2; shrink it for large chains.
    const int max_basis = liou.dim() <= 512 ? 36 : 16;
    const double step_tol = std::max(opts.integrator.rtol, 1e-13);
    detail::KrylovWorkspace kws;
    Matrix rho = rho0;
    double t = 0.0;
    while (t < opts.t_max - 1e-12 * opts.t_max) {
      const double span = std::min(opts.check_interval, opts.t_max - t);
      detail::krylov_step(liou, rho, span, step_tol, max_basis, t, kws);
      t += span;
      rho = 0.5 * (rho + rho.adjoint()).eval();
      const double tr = rho.trace().real();
      if (tr > 0.0) rho /= tr;
      liou.apply(rho, deriv, ws);
      out.residual = deriv.norm();
      if (out.residual < opts.tol) {
        out.converged = true;
        break;
      }
    }
    out.state = std::move(rho);
    out.elapsed = t;
  } else {
    numerics::RhsFn rhs = [&](double, const Matrix& y, Matrix& dy) {
      liou.apply(y, dy, ws);
    };
    const auto grid = detail::sample_grid(opts.t_max, opts.check_interval);
    auto res = numerics::integrate_observe(
        rhs, rho0, 0.0, opts.t_max, grid, opts.integrator,
        [&](double, const Matrix& y) {
          liou.apply(y, deriv, ws);
          out.residual = deriv.norm();
          return out.residual >= opts.tol;
        });
    out.state = std::move(res.y);
    out.elapsed = res.t;
    out.converged = res.stopped_early;
  }

  if (out.converged && opts.cross_check_nullspace && liou.dim() <= 64) {
    const Matrix s = detail::superoperator_of(liou);
    int ndim = 0;
    const Vector v = numerics::dominant_nullvector(s, &ndim);
    out.nullspace_dim = ndim;
    if (ndim == 1) {
      Matrix candidate =
          Eigen::Map<const Matrix>(v.data(), liou.dim(), liou.dim());
      candidate = 0.5 * (candidate + candidate.adjoint()).eval();
      const cd tr = candidate.trace();
      if (std::abs(tr) > 1e-10) {
        candidate /= tr;
        out.cross_checked = true;
        out.cross_check_distance = (candidate - out.state).norm();
      }
    }
  }
  return out;
}

}  // namespace rqca::evolve

#endif
