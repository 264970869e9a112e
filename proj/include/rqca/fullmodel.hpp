#ifndef RQCA_FULLMODEL_HPP
#define RQCA_FULLMODEL_HPP

// Time-dependent three-level chain (g, r, e) used to validate the effective
// two-level rules: multitone drives on the g-r and r-e transitions with
// e^{i k V t} phase factors, a nearest-neighbor Rydberg interaction
// V n^r n^r, and e-state decay at rate Gamma. Site digits follow the same
// site-1-most-significant ordering as the two-level model, with
// (g, r, e) = (0, 1, 2).

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "rqca/evolve.hpp"
#include "rqca/model.hpp"
#include "rqca/numerics.hpp"
#include "rqca/types.hpp"

namespace rqca::fullmodel {

struct ThreeLevelParams {
  std::size_t n_sites = 1;
  double v = 0.0;          // Rydberg pair interaction
  double big_gamma = 0.0;  // e-state decay rate
  std::array<double, 3> theta{0.0, 0.0, 0.0};  // g-r drive tones
  std::array<double, 3> phi{0.0, 0.0, 0.0};    // r-e drive tones
  model::Boundary boundary = model::Boundary::Open;
};

namespace detail {

inline Index pow3(std::size_t n) {
  Index d = 1;
  for (std::size_t i = 0; i < n; ++i) d *= 3;
  return d;
}

inline void validate(const ThreeLevelParams& p) {
  if (p.n_sites < 1 || p.n_sites > 7) {
    throw std::invalid_argument("ThreeLevelParams: n_sites must be in [1, 7]");
  }
  if (p.boundary == model::Boundary::Periodic && p.n_sites < 3) {
    throw std::invalid_argument("ThreeLevelParams: periodic needs n >= 3");
  }
  if (!(p.v >= 0.0) || !(p.big_gamma >= 0.0)) {
    throw std::invalid_argument("ThreeLevelParams: rates must be >= 0");
  }
  for (int k = 0; k < 3; ++k) {
    if (!std::isfinite(p.theta[k]) || !std::isfinite(p.phi[k])) {
      throw std::invalid_argument("ThreeLevelParams: non-finite amplitude");
    }
  }
}

inline int digit(Index b, std::size_t j, std::size_t n) {
  return int((b / pow3(n - j)) % 3);
}

// Static operator pieces: collective |g><r| and |e><r| sums, the interaction
// and e-population diagonals, and the decay jumps sqrt(Gamma) |g><e|_j.
struct ThreeLevelOps {
  SparseMatrix s_gr, s_rg, s_er, s_re;
  RealVector inter_diag, e_diag;
  std::vector<SparseMatrix> jumps, jump_dags;
  Index dim = 0;
};

inline ThreeLevelOps build_ops(const ThreeLevelParams& p) {
  validate(p);
  const std::size_t n = p.n_sites;
  const Index dim = pow3(n);
  ThreeLevelOps ops;
  ops.dim = dim;
  ops.inter_diag = RealVector::Zero(dim);
  ops.e_diag = RealVector::Zero(dim);

  std::vector<Eigen::Triplet<cd>> gr, er;
  for (Index b = 0; b < dim; ++b) {
    for (std::size_t j = 1; j <= n; ++j) {
      const Index place = pow3(n - j);
      const int d = digit(b, j, n);
      if (d == 1) {
        gr.emplace_back(b - place, b, 1.0);      // |g><r|
        er.emplace_back(b + place, b, 1.0);      // |e><r|
      } else if (d == 2) {
        ops.e_diag(b) += 1.0;
      }
    }
    for (std::size_t j = 1; j + 1 <= n; ++j) {
      if (digit(b, j, n) == 1 && digit(b, j + 1, n) == 1) {
        ops.inter_diag(b) += 1.0;
      }
    }
    if (p.boundary == model::Boundary::Periodic && n >= 3 &&
        digit(b, n, n) == 1 && digit(b, 1, n) == 1) {
      ops.inter_diag(b) += 1.0;
    }
  }
  auto to_sparse = [dim](const std::vector<Eigen::Triplet<cd>>& t) {
    SparseMatrix s(dim, dim);
    s.setFromTriplets(t.begin(), t.end());
    s.makeCompressed();
    return s;
  };
  ops.s_gr = to_sparse(gr);
  ops.s_er = to_sparse(er);
  ops.s_rg = SparseMatrix(ops.s_gr.adjoint());
  ops.s_re = SparseMatrix(ops.s_er.adjoint());

  if (p.big_gamma > 0.0) {
    const double amp = std::sqrt(p.big_gamma);
    for (std::size_t j = 1; j <= n; ++j) {
      const Index place = pow3(n - j);
      std::vector<Eigen::Triplet<cd>> t;
      for (Index b = 0; b < dim; ++b) {
        if (digit(b, j, n) == 2) t.emplace_back(b - 2 * place, b, amp);
      }
      ops.jumps.push_back(to_sparse(t));
      ops.jump_dags.push_back(SparseMatrix(ops.jumps.back().adjoint()));
    }
  }
  return ops;
}

inline cd tone(const std::array<double, 3>& amps, double v, double t) {
  cd c = 0.5 * amps[0];
  if (amps[1] != 0.0) c += 0.5 * amps[1] * std::polar(1.0, v * t);
  if (amps[2] != 0.0) c += 0.5 * amps[2] * std::polar(1.0, 2.0 * v * t);
  return c;
}

}  // namespace detail

// H(t) = sum_k [theta_k/2 e^{ikVt} S_gr + phi_k/2 e^{ikVt} S_er + h.c.]
//        + V sum_<ij> n^r_i n^r_j
inline Matrix hamiltonian_at(double t, const ThreeLevelParams& p) {
  const auto ops = detail::build_ops(p);
  const cd cgr = detail::tone(p.theta, p.v, t);
  const cd cer = detail::tone(p.phi, p.v, t);
  Matrix h = cgr * Matrix(ops.s_gr) + std::conj(cgr) * Matrix(ops.s_rg) +
             cer * Matrix(ops.s_er) + std::conj(cer) * Matrix(ops.s_re);
  for (Index b = 0; b < ops.dim; ++b) h(b, b) += p.v * ops.inter_diag(b);
  return h;
}

// Three-level basis index of a g/r bit pattern (1 = Rydberg).
inline Index embed_bits(std::uint64_t bits, std::size_t n) {
  if (n < 1 || n > 7) {
    throw std::invalid_argument("embed_bits: n must be in [1, 7]");
  }
  if (bits >> n) {
    throw std::invalid_argument("embed_bits: bits out of range");
  }
  Index idx = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if ((bits >> (n - j)) & 1u) idx += detail::pow3(n - j);
  }
  return idx;
}

struct ThreeLevelRecord {
  std::vector<double> times;
  std::vector<RealVector> rydberg;  // <n^r_j> per sample
  std::vector<RealVector> excited;  // <n^e_j> per sample
  std::vector<double> trace_residual;
  Matrix final_state;
};

inline ThreeLevelRecord propagate_full(
    const Matrix& rho0, const ThreeLevelParams& p, double t_max,
    double sample_interval = 0.25,
    const numerics::IntegratorOptions& integ = {}) {
  const auto ops = detail::build_ops(p);
  evolve::validate_density(rho0);
  if (rho0.rows() != ops.dim) {
    throw std::invalid_argument("propagate_full: dimension mismatch");
  }
  if (!(t_max >= 0.0) || !(sample_interval > 0.0)) {
    throw std::invalid_argument("propagate_full: bad time parameters");
  }

  numerics::IntegratorOptions opts = integ;
  const bool fast_tones =
      (p.theta[1] != 0.0 || p.theta[2] != 0.0 || p.phi[1] != 0.0 ||
       p.phi[2] != 0.0) &&
      p.v > 0.0;
  if (fast_tones) {
    opts.max_step = std::min(opts.max_step, 0.1 / (2.0 * p.v));
  }

  // A(t) = H(t) - (i/2) Gamma sum n^e_j; the drive part is assembled per
  // evaluation from the static collective operators.
  Vector diag_c(ops.dim);
  for (Index b = 0; b < ops.dim; ++b) {
    diag_c(b) = cd(p.v * ops.inter_diag(b), -0.5 * p.big_gamma * ops.e_diag(b));
  }

  Matrix work, tmp;
  numerics::RhsFn rhs = [&](double t, const Matrix& y, Matrix& dy) {
    const cd cgr = detail::tone(p.theta, p.v, t);
    const cd cer = detail::tone(p.phi, p.v, t);
    tmp.noalias() = ops.s_gr * y;
    work = cgr * tmp;
    tmp.noalias() = ops.s_rg * y;
    work += std::conj(cgr) * tmp;
    tmp.noalias() = ops.s_er * y;
    work += cer * tmp;
    tmp.noalias() = ops.s_re * y;
    work += std::conj(cer) * tmp;
    work += diag_c.asDiagonal() * y;
    dy = -iu * (work - work.adjoint());
    for (std::size_t k = 0; k < ops.jumps.size(); ++k) {
      tmp.noalias() = ops.jumps[k] * y;
      dy.noalias() += tmp * ops.jump_dags[k];
    }
  };

  ThreeLevelRecord rec;
  const std::size_t n = p.n_sites;
  auto sample = [&](double t, const Matrix& y) {
    rec.times.push_back(t);
    rec.trace_residual.push_back(std::abs(y.trace() - cd(1.0, 0.0)));
    RealVector rr = RealVector::Zero(n), ee = RealVector::Zero(n);
    for (Index b = 0; b < ops.dim; ++b) {
      const double pb = y(b, b).real();
      for (std::size_t j = 1; j <= n; ++j) {
        const int d = detail::digit(b, j, n);
        if (d == 1) rr(j - 1) += pb;
        if (d == 2) ee(j - 1) += pb;
      }
    }
    rec.rydberg.push_back(std::move(rr));
    rec.excited.push_back(std::move(ee));
    return true;
  };

  const auto grid = evolve::detail::sample_grid(t_max, sample_interval);
  auto res =
      numerics::integrate_observe(rhs, rho0, 0.0, t_max, grid, opts, sample);
  rec.final_state = std::move(res.y);
  return rec;
}

// ---- effective-model comparison ----

struct DeviationReport {
  std::vector<double> times;
  RealMatrix full_rydberg;   // samples x sites, three-level <n^r_j>
  RealMatrix eff_excited;    // samples x sites, two-level (1 + <Z_j>) / 2
  double max_dev = 0.0;
  double rms_dev = 0.0;
  model::RuleSet effective_rules;
};

// Runs the three-level chain and the effective two-level rules from the same
// g/r bit pattern and compares site-resolved Rydberg populations. The
// effective depump rates are phi_k^2 / Gamma.
inline DeviationReport compare_effective(
    const ThreeLevelParams& p, std::uint64_t bits, double t_max,
    double sample_interval = 0.25,
    const numerics::IntegratorOptions& integ = {}) {
  detail::validate(p);
  for (int k = 0; k < 3; ++k) {
    if (p.phi[k] != 0.0 && !(p.big_gamma > 0.0)) {
      throw std::invalid_argument(
          "compare_effective: phi drive requires big_gamma > 0");
    }
  }

  const std::size_t n = p.n_sites;
  const Matrix rho_full =
      states::basis_density(detail::pow3(n), embed_bits(bits, n));
  const auto full = propagate_full(rho_full, p, t_max, sample_interval, integ);

  model::RuleSet rules;
  rules.theta = p.theta;
  for (int k = 0; k < 3; ++k) {
    rules.phi[k] =
        (p.phi[k] != 0.0) ? p.phi[k] * p.phi[k] / p.big_gamma : 0.0;
  }
  const model::Lattice lat(n, p.boundary);
  evolve::EvolutionOptions eopts;
  eopts.sample_interval = sample_interval;
  eopts.integrator = integ;
  const auto eff = evolve::propagate(
      states::basis_density(lat.dim(), Index(bits)),
      evolve::Liouvillian(rules, lat), t_max, eopts);

  if (full.times.size() != eff.times.size()) {
    throw std::runtime_error("compare_effective: sample grids diverged");
  }

  DeviationReport rep;
  rep.effective_rules = rules;
  rep.times = full.times;
  const std::size_t m = full.times.size();
  rep.full_rydberg = RealMatrix(m, n);
  rep.eff_excited = RealMatrix(m, n);
  double sq = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t j = 0; j < n; ++j) {
      const double pf = full.rydberg[s](j);
      const double pe = 0.5 * (1.0 + eff.magnetization[s](j));
      rep.full_rydberg(s, j) = pf;
      rep.eff_excited(s, j) = pe;
      const double d = std::abs(pf - pe);
      rep.max_dev = std::max(rep.max_dev, d);
      sq += d * d;
    }
  }
  rep.rms_dev = std::sqrt(sq / double(m * n));
  return rep;
}

struct TrendReport {
  std::vector<double> v_values;
  std::vector<double> max_devs;
  std::vector<double> rms_devs;
  bool decreasing = false;
};

// Deviation against the effective model at V, 2V, 4V (drives and Gamma
// fixed); the effective description must improve as V grows.
inline TrendReport effective_convergence_trend(
    const ThreeLevelParams& p, std::uint64_t bits, double t_max,
    double sample_interval = 0.25,
    const numerics::IntegratorOptions& integ = {},
    const std::vector<double>& factors = {1.0, 2.0, 4.0}) {
  if (!(p.v > 0.0)) {
    throw std::invalid_argument("effective_convergence_trend: needs v > 0");
  }
  TrendReport rep;
  for (double f : factors) {
    ThreeLevelParams q = p;
    q.v = p.v * f;
    const auto dev = compare_effective(q, bits, t_max, sample_interval, integ);
    rep.v_values.push_back(q.v);
    rep.max_devs.push_back(dev.max_dev);
    rep.rms_devs.push_back(dev.rms_dev);
  }
  rep.decreasing = true;
  for (std::size_t i = 0; i + 1 < rep.max_devs.size(); ++i) {
    if (!(rep.max_devs[i + 1] < rep.max_devs[i])) rep.decreasing = false;
  }
  return rep;
}

}  // namespace rqca::fullmodel

#endif
