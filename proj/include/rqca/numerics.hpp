#ifndef RQCA_NUMERICS_HPP
#define RQCA_NUMERICS_HPP

// Dense linear-algebra utilities and the ODE machinery shared by the
// evolution drivers: Kronecker products, a Pade-13 scaling-and-squaring
// matrix exponential, an adaptive Adams-Bashforth-Moulton (PECE) integrator
// with an RK4 starter and cubic Hermite dense output, and nullspace
// extraction for superoperators.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rqca/types.hpp"

namespace rqca::numerics {

// ---- basic helpers ----

inline bool is_hermitian(const Matrix& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// ---- matrix exponential ----

// Pade-13 scaling and squaring; the squaring count comes from the 1-norm.
inline Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("expm: matrix must be square");
  }
  if (a.rows() > 4096) {
    throw std::invalid_argument("expm: dimension exceeds the supported 4096");
  }
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);
  if (!a.allFinite()) {
    throw std::invalid_argument("expm: matrix has non-finite entries");
  }

  constexpr double theta13 = 5.371920351148152;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  const Matrix as = a / std::exp2(static_cast<double>(squarings));

  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};

  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
            b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * id;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

// ---- integrator ----

enum class Method { AdaptiveAdams, FixedRk4 };

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  Method method = Method::AdaptiveAdams;
};

// Raised when the adaptive step size collapses; carries the last accepted
// time and state for diagnostics.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_time, Matrix last_state)
      : std::runtime_error(what),
        last_time_(last_time),
        last_state_(std::move(last_state)) {}

  double last_time() const { return last_time_; }
  const Matrix& last_state() const { return last_state_; }

 private:
  double last_time_;
  Matrix last_state_;
};

// Right-hand side f(t, y, dy): writes the derivative into dy.
using RhsFn = std::function<void(double, const Matrix&, Matrix&)>;
// Sample observer; returning false stops the integration at that sample.
using SampleFn = std::function<bool(double, const Matrix&)>;

struct ObserveResult {
  Matrix y;
  double t = 0.0;
  bool stopped_early = false;
  std::size_t n_rhs_evals = 0;
  std::size_t n_steps = 0;
};

namespace detail {

inline double scaled_max_error(const Matrix& diff, const Matrix& ya,
                               const Matrix& yb, double rtol, double atol) {
  const auto d = diff.cwiseAbs().array();
  const auto w = atol + rtol * ya.cwiseAbs().cwiseMax(yb.cwiseAbs()).array();
  return (d / w).maxCoeff();
}

// Cubic Hermite interpolation on [ta, ta+h] with endpoint derivatives.
inline void hermite(double theta, double h, const Matrix& ya, const Matrix& fa,
                    const Matrix& yb, const Matrix& fb, Matrix& out) {
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + theta;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  out = h00 * ya + (h * h10) * fa + h01 * yb + (h * h11) * fb;
}

}  // namespace detail

// Integrates dy/dt = f(t, y) from t0 to t1 and invokes on_sample at each of
// the (sorted, in-range) sample_times via dense output. The observer may stop
// the run early by returning false; the result then holds the sampled state.
inline ObserveResult integrate_observe(const RhsFn& rhs, const Matrix& y0,
                                       double t0, double t1,
                                       const std::vector<double>& sample_times,
                                       const IntegratorOptions& opts,
                                       const SampleFn& on_sample) {
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) {
    throw std::invalid_argument("integrate: tolerances must be positive");
  }
  if (!(opts.max_step > 0.0)) {
    throw std::invalid_argument("integrate: max_step must be positive");
  }
  if (t1 < t0) {
    throw std::invalid_argument("integrate: t1 must not precede t0");
  }
  if (y0.size() == 0) {
    throw std::invalid_argument("integrate: empty initial state");
  }
  const double span = t1 - t0;
  const double eps_t =
      1e-10 * std::max({1.0, std::abs(t0), std::abs(t1)});
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double s = sample_times[i];
    if (s < t0 - eps_t || s > t1 + eps_t) {
      throw std::invalid_argument("integrate: sample time outside [t0, t1]");
    }
    if (i > 0 && s < sample_times[i - 1]) {
      throw std::invalid_argument("integrate: sample times must be sorted");
    }
  }

  ObserveResult result;
  std::size_t si = 0;

  if (span <= eps_t) {
    for (; si < sample_times.size(); ++si) {
      if (!on_sample(sample_times[si], y0)) break;
    }
    result.y = y0;
    result.t = t1;
    return result;
  }

  const bool fixed = (opts.method == Method::FixedRk4);
  if (fixed && !std::isfinite(opts.max_step)) {
    throw std::invalid_argument("integrate: FixedRk4 requires finite max_step");
  }

  Matrix y = y0;
  double t = t0;
  // f history at uniform spacing hist_h; fm0 is f(t, y).
  Matrix fm0, fm1, fm2, fm3;
  int have = 0;
  double hist_h = 0.0;
  Matrix k2, k3, k4, ytmp, ypred, fpred, ynew, fnew, interp;

  auto eval = [&](double tt, const Matrix& yy, Matrix& out) {
    rhs(tt, yy, out);
    ++result.n_rhs_evals;
  };

  eval(t, y, fm0);
  have = 1;

  const double hmin = std::max(eps_t, 1e-12 * span);
  double h;
  if (fixed) {
    h = opts.max_step;
  } else {
    const double ny = y.cwiseAbs().maxCoeff();
    const double nf = fm0.cwiseAbs().maxCoeff();
    h = 0.01 * (ny * opts.rtol + opts.atol) / (nf * opts.rtol + opts.atol);
    h = std::min({h, span / 10.0, opts.max_step});
    h = std::max(h, 8.0 * hmin);
  }

  bool stopped = false;
  // Emits samples falling in (t, tb]; returns false when the observer stops.
  auto emit_span = [&](double tb) -> bool {
    const double hs = tb - t;
    while (si < sample_times.size() && sample_times[si] <= tb + eps_t) {
      const double s = std::min(sample_times[si], tb);
      const double theta =
          std::clamp(hs > 0.0 ? (s - t) / hs : 1.0, 0.0, 1.0);
      detail::hermite(theta, hs, y, fm0, ynew, fnew, interp);
      ++si;
      if (!on_sample(s, interp)) {
        result.y = interp;
        result.t = s;
        result.stopped_early = true;
        stopped = true;
        return false;
      }
    }
    return true;
  };

  Matrix ymid, fmid;
  // One RK4 stage set from (ta, ya, fa) over hs into yout.
  auto rk4_core = [&](double ta, const Matrix& ya, const Matrix& fa, double hs,
                      Matrix& yout) {
    ytmp = ya + (0.5 * hs) * fa;
    eval(ta + 0.5 * hs, ytmp, k2);
    ytmp = ya + (0.5 * hs) * k2;
    eval(ta + 0.5 * hs, ytmp, k3);
    ytmp = ya + hs * k3;
    eval(ta + hs, ytmp, k4);
    yout = ya + (hs / 6.0) * (fa + 2.0 * k2 + 2.0 * k3 + k4);
  };

  // Advances by hs with one RK4 step from (t, y, fm0) into (ynew, fnew).
  auto rk4_step = [&](double hs, double tb) {
    rk4_core(t, y, fm0, hs, ynew);
    eval(tb, ynew, fnew);
  };

  // Starter step: two half-width RK4 substeps so the uncontrolled local
  // error stays well under the tolerance budget of the ABM steps.
  auto rk4_starter_step = [&](double hs, double tb) {
    rk4_core(t, y, fm0, 0.5 * hs, ymid);
    eval(t + 0.5 * hs, ymid, fmid);
    rk4_core(t + 0.5 * hs, ymid, fmid, 0.5 * hs, ynew);
    eval(tb, ynew, fnew);
  };

  // Commits (ynew, fnew) as the state at tb and rotates the f history.
  auto commit = [&](double hs, double tb) {
    y.swap(ynew);
    fm3.swap(fm2);
    fm2.swap(fm1);
    fm1.swap(fm0);
    fm0.swap(fnew);
    t = tb;
    ++result.n_steps;
    if (have >= 1 && hs == hist_h) {
      have = std::min(have + 1, 4);
    } else {
      have = 2;  // fm0 and fm1 are hs apart
      hist_h = hs;
    }
  };

  int small_err_streak = 0;
  int growth_cooldown = 0;

  // RK4 steps commit without an error estimate, so a state that left the
  // finite domain must be caught here; the only recovery is a smaller step.
  auto reject_nonfinite = [&](double hs) {
    h = 0.5 * hs;
    if (h < hmin) {
      throw IntegrationError(
          "integrate: non-finite state with the step already at the minimum"
          " at t = " + std::to_string(t),
          t, y);
    }
    have = 1;
    small_err_streak = 0;
    growth_cooldown = 8;
  };

  while (t1 - t > eps_t && !stopped) {
    const double remaining = t1 - t;

    if (fixed) {
      const double hs = std::min(h, remaining);
      const double tb = (remaining <= h + eps_t) ? t1 : t + hs;
      rk4_step(hs, tb);
      if (!emit_span(tb)) break;
      commit(hs, tb);
      continue;
    }

    if (have < 4) {
      const double hs = std::min(h, remaining);
      const double tb = (remaining <= h + eps_t) ? t1 : t + hs;
      rk4_starter_step(hs, tb);
      if (!ynew.allFinite() || !fnew.allFinite()) {
        reject_nonfinite(hs);
        continue;
      }
      if (!emit_span(tb)) break;
      commit(hs, tb);
      continue;
    }

    if (remaining <= h + eps_t) {
      // Finish with a single truncated RK4 step.
      rk4_step(remaining, t1);
      if (!ynew.allFinite() || !fnew.allFinite()) {
        reject_nonfinite(remaining);
        continue;
      }
      if (!emit_span(t1)) break;
      commit(remaining, t1);
      continue;
    }

    // ABM4 predict-evaluate-correct-evaluate step.
    const double tb = t + h;
    ypred = y + (h / 24.0) * (55.0 * fm0 - 59.0 * fm1 + 37.0 * fm2 - 9.0 * fm3);
    eval(tb, ypred, fpred);
    ynew = y + (h / 24.0) * (9.0 * fpred + 19.0 * fm0 - 5.0 * fm1 + fm2);
    const double err =
        (19.0 / 270.0) *
        detail::scaled_max_error(ynew - ypred, y, ynew, opts.rtol, opts.atol);

    // Accept below 0.5 rather than 1.0: the halving-only step control has no
    // continuous safety factor, so the margin lives here.
    if (!(err <= 0.5)) {
      h *= 0.5;
      if (h < hmin) {
        throw IntegrationError(
            "integrate: step size collapsed below " + std::to_string(hmin) +
                " at t = " + std::to_string(t),
            t, y);
      }
      have = 1;  // restart the starter at the halved step
      small_err_streak = 0;
      growth_cooldown = 8;
      continue;
    }

    eval(tb, ynew, fnew);
    if (!emit_span(tb)) break;
    commit(h, tb);

    small_err_streak = (err < 0.008) ? small_err_streak + 1 : 0;
    if (growth_cooldown > 0) --growth_cooldown;
    if (small_err_streak >= 4 && growth_cooldown == 0 &&
        2.0 * h <= opts.max_step && 2.0 * h <= (t1 - t)) {
      h *= 2.0;
      have = 1;
      small_err_streak = 0;
      growth_cooldown = 4;
    }
  }

  if (!stopped) {
    for (; si < sample_times.size(); ++si) {
      if (!on_sample(sample_times[si], y)) break;
    }
    result.y = std::move(y);
    result.t = t1;
  }
  return result;
}

// Trajectory variant: returns (time, state) pairs at the sample times, or at
// {t0, t1} when none are given.
inline std::vector<std::pair<double, Matrix>> integrate(
    const RhsFn& rhs, const Matrix& y0, double t0, double t1,
    const std::vector<double>& sample_times = {},
    const IntegratorOptions& opts = {}) {
  const std::vector<double> ts =
      sample_times.empty() ? std::vector<double>{t0, t1} : sample_times;
  std::vector<std::pair<double, Matrix>> out;
  out.reserve(ts.size());
  integrate_observe(rhs, y0, t0, t1, ts, opts,
                    [&](double s, const Matrix& ys) {
                      out.emplace_back(s, ys);
                      return true;
                    });
  return out;
}

// ---- nullspace extraction ----

// Returns the unit eigenvector whose eigenvalue is closest to zero. Errors
// unless some |lambda| < 1e-6 * ||A||_F and the residual certifies at
// 1e-8 * ||A||_F. nullspace_dim (optional) receives the count of eigenvalues
// under the 1e-6 threshold.
inline Vector dominant_nullvector(const Matrix& a, int* nullspace_dim = nullptr) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("dominant_nullvector: matrix must be square");
  }
  if (a.rows() > 4096) {
    throw std::invalid_argument(
        "dominant_nullvector: dimension exceeds the supported 4096");
  }
  const double anorm = a.norm();
  if (anorm == 0.0) {
    // The zero map annihilates everything; any unit vector qualifies.
    if (nullspace_dim) *nullspace_dim = static_cast<int>(a.rows());
    Vector v = Vector::Zero(a.rows());
    v(0) = 1.0;
    return v;
  }

  Eigen::ComplexEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("dominant_nullvector: eigendecomposition failed");
  }
  Index best = 0;
  int count = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    const double mag = std::abs(es.eigenvalues()(i));
    if (mag < std::abs(es.eigenvalues()(best))) best = i;
    if (mag < 1e-6 * anorm) ++count;
  }
  if (nullspace_dim) *nullspace_dim = count;
  if (std::abs(es.eigenvalues()(best)) >= 1e-6 * anorm) {
    throw std::runtime_error(
        "dominant_nullvector: no eigenvalue below 1e-6 * ||A||");
  }
  Vector v = es.eigenvectors().col(best);
  v.normalize();
  if ((a * v).norm() > 1e-8 * anorm) {
    throw std::runtime_error(
        "dominant_nullvector: residual exceeds 1e-8 * ||A||");
  }
  return v;
}

}  // namespace rqca::numerics

#endif
