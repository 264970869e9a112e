#ifndef RQCA_MODEL_HPP
#define RQCA_MODEL_HPP

// Lattice and rule definitions for the effective two-level chain: neighbor-
// conditioned drive Hamiltonians, conditional depump and decay jump
// operators, the classical update oracle for digital unitary rules, and the
// physical-to-model unit conversion.
//
// Conventions: sites are 1-based; site 1 occupies the most significant bit of
// a basis index, so bit_j(b) = (b >> (N - j)) & 1. Z|1> = +|1>. Sublattice A
// holds the odd sites. Open boundaries read fictitious |0> neighbors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqca/types.hpp"

namespace rqca::model {

inline constexpr double pi = 3.14159265358979323846;

enum class Boundary { Open, Periodic };
enum class Sublattice { A, B };

// ---- lattice ----

struct Lattice {
  std::size_t n_sites;
  Boundary boundary;

  Lattice(std::size_t n, Boundary b) : n_sites(n), boundary(b) {
    if (n < 1 || n > 12) {
      throw std::invalid_argument("Lattice: n_sites must be in [1, 12]");
    }
    if (b == Boundary::Periodic && n < 3) {
      throw std::invalid_argument("Lattice: periodic chains need n_sites >= 3");
    }
  }

  Index dim() const { return Index(1) << n_sites; }

  bool excited(std::uint64_t b, std::size_t j) const {
    return (b >> (n_sites - j)) & 1u;
  }

  std::uint64_t flip_mask(std::size_t j) const {
    return std::uint64_t(1) << (n_sites - j);
  }

  // Occupation of the left/right neighbor of site j in basis state b; open
  // edges report the fictitious |0> neighbor.
  int left_occupation(std::uint64_t b, std::size_t j) const {
    if (j > 1) return excited(b, j - 1) ? 1 : 0;
    if (boundary == Boundary::Periodic) return excited(b, n_sites) ? 1 : 0;
    return 0;
  }

  int right_occupation(std::uint64_t b, std::size_t j) const {
    if (j < n_sites) return excited(b, j + 1) ? 1 : 0;
    if (boundary == Boundary::Periodic) return excited(b, 1) ? 1 : 0;
    return 0;
  }

  static Sublattice sublattice_of(std::size_t j) {
    return (j % 2 == 1) ? Sublattice::A : Sublattice::B;
  }

  std::vector<std::size_t> sites(Sublattice s) const {
    std::vector<std::size_t> out;
    for (std::size_t j = (s == Sublattice::A) ? 1 : 2; j <= n_sites; j += 2) {
      out.push_back(j);
    }
    return out;
  }
};

// ---- bitstring helpers ----

inline std::uint64_t parse_bitstring(const std::string& s) {
  if (s.empty() || s.size() > 12) {
    throw std::invalid_argument("parse_bitstring: length must be in [1, 12]");
  }
  std::uint64_t b = 0;
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("parse_bitstring: only '0'/'1' allowed");
    }
    b = (b << 1) | std::uint64_t(c == '1');
  }
  return b;
}

inline std::uint64_t parse_bitstring(const std::string& s, std::size_t n) {
  if (s.size() != n) {
    throw std::invalid_argument("parse_bitstring: expected " +
                                std::to_string(n) + " characters");
  }
  return parse_bitstring(s);
}

inline std::string format_bitstring(std::uint64_t b, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t j = 1; j <= n; ++j) {
    if ((b >> (n - j)) & 1u) s[j - 1] = '1';
  }
  return s;
}

// ---- rules ----

// theta[k]: drive amplitude applied to a site with k excited neighbors.
// phi[k]: conditional depump rate (the adiabatically eliminated e-channel).
// gamma: unconditional decay rate, always emitted for every lattice site.
// site_mask: optional 1-based site restriction for the driven terms.
struct RuleSet {
  std::array<double, 3> theta{0.0, 0.0, 0.0};
  std::array<double, 3> phi{0.0, 0.0, 0.0};
  double gamma = 0.0;
  std::optional<std::vector<std::size_t>> site_mask;
};

enum class RuleUnits { Pi, Raw };

inline RuleSet make_rule(const std::array<double, 6>& v, RuleUnits units,
                         double gamma = 0.0) {
  const double scale = (units == RuleUnits::Pi) ? pi : 1.0;
  RuleSet r;
  for (int k = 0; k < 3; ++k) {
    r.theta[k] = v[k] * scale;
    r.phi[k] = v[3 + k] * scale;
  }
  r.gamma = gamma;
  return r;
}

inline void validate_rules(const RuleSet& r) {
  for (int k = 0; k < 3; ++k) {
    if (!std::isfinite(r.theta[k]) || !std::isfinite(r.phi[k])) {
      throw std::invalid_argument("RuleSet: non-finite rule entry");
    }
    if (r.phi[k] < 0.0) {
      throw std::invalid_argument("RuleSet: depump rates must be >= 0");
    }
  }
  if (!std::isfinite(r.gamma) || r.gamma < 0.0) {
    throw std::invalid_argument("RuleSet: gamma must be finite and >= 0");
  }
}

inline bool is_digital(const RuleSet& r, double tol = 1e-12) {
  auto near = [tol](double x, double v) { return std::abs(x - v) <= tol; };
  for (int k = 0; k < 3; ++k) {
    if (!near(r.theta[k], 0.0) && !near(r.theta[k], pi)) return false;
    if (!near(r.phi[k], 0.0) && !near(r.phi[k], 2.0 * pi)) return false;
  }
  return true;
}

namespace detail {

inline std::vector<std::size_t> active_sites(const RuleSet& r,
                                             const Lattice& lat) {
  if (!r.site_mask) {
    std::vector<std::size_t> all(lat.n_sites);
    for (std::size_t j = 1; j <= lat.n_sites; ++j) all[j - 1] = j;
    return all;
  }
  std::vector<std::size_t> out = *r.site_mask;
  for (std::size_t j : out) {
    if (j < 1 || j > lat.n_sites) {
      throw std::invalid_argument("RuleSet: site_mask entry outside lattice");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// ---- operator builders ----

// H = (1/2) sum_j theta[k_j] P_{j-1} X_j P_{j+1} summed over neighbor
// occupations; at open edges only the fictitious-|0> branch contributes.
inline Matrix build_hamiltonian(const RuleSet& rules, const Lattice& lat) {
  validate_rules(rules);
  const Index dim = lat.dim();
  Matrix h = Matrix::Zero(dim, dim);
  for (std::size_t j : detail::active_sites(rules, lat)) {
    const std::uint64_t mask = lat.flip_mask(j);
    for (std::uint64_t b = 0; b < std::uint64_t(dim); ++b) {
      const int k = lat.left_occupation(b, j) + lat.right_occupation(b, j);
      const double th = rules.theta[k];
      if (th != 0.0) h(b ^ mask, b) += 0.5 * th;
    }
  }
  return h;
}

// One jump operator per (site, alpha, beta) with phi[alpha+beta] > 0, each
// sqrt(phi^k) P^alpha |0><1|_j P^beta, plus one sqrt(gamma) |0><1|_j per
// lattice site when gamma > 0 (decay ignores the site mask).
inline std::vector<Matrix> build_jump_operators(const RuleSet& rules,
                                                const Lattice& lat) {
  validate_rules(rules);
  const Index dim = lat.dim();
  std::vector<Matrix> out;
  for (std::size_t j : detail::active_sites(rules, lat)) {
    const std::uint64_t mask = lat.flip_mask(j);
    const bool left_edge = (j == 1 && lat.boundary == Boundary::Open);
    const bool right_edge = (j == lat.n_sites && lat.boundary == Boundary::Open);
    for (int alpha = 0; alpha <= (left_edge ? 0 : 1); ++alpha) {
      for (int beta = 0; beta <= (right_edge ? 0 : 1); ++beta) {
        const double rate = rules.phi[alpha + beta];
        if (rate <= 0.0) continue;
        Matrix l = Matrix::Zero(dim, dim);
        for (std::uint64_t b = 0; b < std::uint64_t(dim); ++b) {
          if (!lat.excited(b, j)) continue;
          if (lat.left_occupation(b, j) != alpha) continue;
          if (lat.right_occupation(b, j) != beta) continue;
          l(b ^ mask, b) = std::sqrt(rate);
        }
        out.push_back(std::move(l));
      }
    }
  }
  if (rules.gamma > 0.0) {
    for (std::size_t j = 1; j <= lat.n_sites; ++j) {
      const std::uint64_t mask = lat.flip_mask(j);
      Matrix l = Matrix::Zero(dim, dim);
      for (std::uint64_t b = 0; b < std::uint64_t(dim); ++b) {
        if (lat.excited(b, j)) l(b ^ mask, b) = std::sqrt(rules.gamma);
      }
      out.push_back(std::move(l));
    }
  }
  return out;
}

// ---- classical update oracle ----

// For digital unitary rules (theta in {0, pi}, no dissipation) a sublattice
// update acts classically on basis states: site j flips iff theta[k] = pi
// with k counted from the frozen complementary sublattice. Periodic chains
// with odd N have no such sublattice split and are rejected.
inline std::uint64_t classical_rule_oracle(const RuleSet& rules,
                                           std::uint64_t bits, Sublattice s,
                                           const Lattice& lat) {
  validate_rules(rules);
  auto near = [](double x, double v) { return std::abs(x - v) <= 1e-9; };
  for (int k = 0; k < 3; ++k) {
    if (!near(rules.theta[k], 0.0) && !near(rules.theta[k], pi)) {
      throw std::invalid_argument(
          "classical_rule_oracle: rule is not digital unitary");
    }
    if (rules.phi[k] != 0.0) {
      throw std::invalid_argument(
          "classical_rule_oracle: depump rates must vanish");
    }
  }
  if (rules.gamma != 0.0) {
    throw std::invalid_argument("classical_rule_oracle: gamma must vanish");
  }
  if (lat.boundary == Boundary::Periodic && lat.n_sites % 2 == 1) {
    throw std::invalid_argument(
        "classical_rule_oracle: periodic odd chains have no sublattice split");
  }
  if (bits >= std::uint64_t(lat.dim())) {
    throw std::invalid_argument("classical_rule_oracle: bits out of range");
  }
  const auto active = detail::active_sites(rules, lat);
  std::uint64_t out = bits;
  for (std::size_t j : active) {
    if (Lattice::sublattice_of(j) != s) continue;
    const int k = lat.left_occupation(bits, j) + lat.right_occupation(bits, j);
    if (near(rules.theta[k], pi)) out ^= lat.flip_mask(j);
  }
  return out;
}

// ---- unit conversion ----

// Physical parameters in angular frequency (rad/s). One model time unit is
// tau = pi / theta, a full conditional pi-rotation.
struct PhysicalParams {
  double theta = 2.0 * pi * 1e6;
  double phi = 0.0;
  double v = 2.0 * pi * 50e6;
  double big_gamma = 0.0;
  double gamma = 0.0;
};

struct ModelScaling {
  double tau = 0.0;  // seconds per model time unit
  double theta = 0.0;
  double phi = 0.0;
  double v = 0.0;
  double big_gamma = 0.0;
  double gamma = 0.0;
  std::vector<std::string> warnings;
};

inline ModelScaling physical_to_model(const PhysicalParams& p) {
  if (!(p.theta > 0.0) || !std::isfinite(p.theta)) {
    throw std::invalid_argument("physical_to_model: theta must be positive");
  }
  if (p.phi < 0.0 || p.v < 0.0 || p.big_gamma < 0.0 || p.gamma < 0.0) {
    throw std::invalid_argument("physical_to_model: rates must be >= 0");
  }
  ModelScaling m;
  m.tau = pi / p.theta;
  m.theta = p.theta * m.tau;
  m.phi = p.phi * m.tau;
  m.v = p.v * m.tau;
  m.big_gamma = p.big_gamma * m.tau;
  m.gamma = p.gamma * m.tau;
  if (p.big_gamma > 0.0 && p.v < 10.0 * p.big_gamma) {
    m.warnings.push_back("blockade regime marginal: V < 10 * Gamma");
  }
  if (p.big_gamma > 0.0 && p.big_gamma <= p.theta) {
    m.warnings.push_back("depump adiabaticity marginal: Gamma <= theta");
  }
  if (p.big_gamma > 0.0 && p.big_gamma <= p.phi) {
    m.warnings.push_back("depump adiabaticity marginal: Gamma <= phi");
  }
  if (p.big_gamma == 0.0 && p.phi > 0.0) {
    m.warnings.push_back("phi drive without e-state linewidth");
  }
  if (p.gamma >= p.theta) {
    m.warnings.push_back("Rydberg decay comparable to the drive");
  }
  return m;
}

}  // namespace rqca::model

#endif
