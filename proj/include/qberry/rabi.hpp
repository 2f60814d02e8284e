#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "qberry/errors.hpp"
#include "qberry/gates.hpp"
#include "qberry/state.hpp"

namespace qberry {

// hbar = 1 throughout; frequencies in rad/s, durations in s.
struct RabiParams {
  double omega0 = 0.0;    // precession frequency (identity term)
  double omega = 1.0;     // Rabi frequency
  double duration = 0.0;
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;
using Vec3 = std::array<double, 3>;

/// H = (1/2)(omega0 * I + omega * n.sigma).
inline Matrix2 hamiltonian_matrix(const RabiParams& p, const Vec3& n) {
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(std::abs(len - 1.0) <= 1e-9)) {
    throw InvalidInputError("hamiltonian_matrix: direction must be a unit vector");
  }
  const Complex i{0.0, 1.0};
  const double h0 = 0.5 * p.omega0;
  const double h = 0.5 * p.omega;
  return {{{h0 + h * n[2], h * (n[0] - i * n[1])}, {h * (n[0] + i * n[1]), h0 - h * n[2]}}};
}

struct CoefficientPair {
  Complex c0;
  Complex c1;
};

/// Resonant Rabi evolution of the qubit coefficients:
///   C0(t) = C0 cos(wt/2) + i C1 sin(wt/2)
///   C1(t) = i C0 sin(wt/2) + C1 cos(wt/2)
/// The omega0 term only contributes a global phase and is not applied here.
inline CoefficientPair evolve_coefficients(Complex c0, Complex c1, const RabiParams& p) {
  if (!detail::is_finite(c0) || !detail::is_finite(c1)) {
    throw InvalidInputError("evolve_coefficients: non-finite coefficient");
  }
  if (!(std::abs(std::norm(c0) + std::norm(c1) - 1.0) <= 1e-9)) {
    throw InvalidInputError("evolve_coefficients: |c0|^2 + |c1|^2 must be 1");
  }
  if (!std::isfinite(p.omega) || !std::isfinite(p.duration) || p.duration < 0.0) {
    throw InvalidInputError("evolve_coefficients: omega must be finite and duration >= 0");
  }
  const double half = 0.5 * p.omega * p.duration;
  const double c = std::cos(half);
  const Complex is{0.0, std::sin(half)};
  return {c0 * c + is * c1, is * c0 + c1 * c};
}

enum class PulseKind { Pi, HalfPi, Custom };

class PulseSpec {
 public:
  static PulseSpec pi(double omega, double omega0 = 0.0) {
    require_omega(omega);
    return PulseSpec(PulseKind::Pi, {omega0, omega, kPi / omega});
  }
  static PulseSpec half_pi(double omega, double omega0 = 0.0) {
    require_omega(omega);
    return PulseSpec(PulseKind::HalfPi, {omega0, omega, kPi / (2.0 * omega)});
  }
  static PulseSpec custom(const RabiParams& p) {
    require_omega(p.omega);
    if (!(p.duration >= 0.0) || !std::isfinite(p.duration)) {
      throw InvalidInputError("PulseSpec: duration must be finite and >= 0");
    }
    return PulseSpec(PulseKind::Custom, p);
  }

  PulseKind kind() const noexcept { return kind_; }
  const RabiParams& params() const noexcept { return params_; }

 private:
  PulseSpec(PulseKind kind, RabiParams p) : kind_(kind), params_(p) {}

  static void require_omega(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
      throw InvalidInputError("PulseSpec: omega must be > 0");
    }
  }

  PulseKind kind_;
  RabiParams params_;
};

inline PureState apply_pulse(const PureState& s, const PulseSpec& pulse) {
  if (s.num_qubits() != 1) throw InvalidInputError("apply_pulse: single-qubit state required");
  const auto [c0, c1] = evolve_coefficients(s[0], s[1], pulse.params());
  return PureState::from_amplitudes({c0, c1});
}

/// Geometric and dynamical phases of a pulse sequence; total is always their sum.
class PhaseLedger {
 public:
  PhaseLedger() = default;
  PhaseLedger(double geometric, double dynamical)
      : geometric_(geometric), dynamical_(dynamical), total_(geometric + dynamical) {}

  double geometric() const noexcept { return geometric_; }
  double dynamical() const noexcept { return dynamical_; }
  double total() const noexcept { return total_; }
  double geometric_magnitude() const noexcept { return std::abs(geometric_); }

  PhaseLedger operator+(const PhaseLedger& o) const {
    return {geometric_ + o.geometric_, dynamical_ + o.dynamical_};
  }

 private:
  double geometric_ = 0.0;
  double dynamical_ = 0.0;
  double total_ = 0.0;
};

/// Global phase -omega0 t / 2 from the identity term of H, which the
/// coefficient evolution leaves out.
inline PhaseLedger pulse_phase_ledger(const PulseSpec& pulse) {
  const auto& p = pulse.params();
  return {0.0, -0.5 * p.omega0 * p.duration};
}

/// Half-angle bookkeeping of the two-pi-pulse echo: a = (phi+chi)/2 and
/// b = (phi-chi)/2, each reduced into (-pi, pi].
struct EchoAngles {
  double half_sum;
  double half_diff;
};

inline EchoAngles echo_angles(const SpinorParams& p) {
  if (!std::isfinite(p.phi) || !std::isfinite(p.chi)) {
    throw InvalidInputError("spin echo: non-finite phi or chi");
  }
  return {wrap_pi(0.5 * (p.phi + p.chi)), wrap_pi(0.5 * (p.phi - p.chi))};
}

/// First pulse requires (phi+chi)/2 = -pi/2 (with theta = pi), the second
/// (phi-chi)/2 = +pi/2 (with theta = 0).
inline bool echo_conditions_hold(const SpinorParams& p, double tol = 1e-12) {
  const auto [a, b] = echo_angles(p);
  return std::abs(a + 0.5 * kPi) <= tol && std::abs(b - 0.5 * kPi) <= tol;
}

/// The (phi, chi) that satisfy both echo matching conditions: phi = 0, chi = -pi.
inline SpinorParams matched_echo_params() { return {0.0, 0.0, -kPi, 0.5}; }

/// Phases accumulated over the echo round trip. Dynamical = a + b (= phi) and
/// vanishes under matching; geometric = a - b (= chi), -pi under matching.
inline PhaseLedger spin_echo_ledger(const SpinorParams& p) {
  const auto [a, b] = echo_angles(p);
  return {a - b, a + b};
}

}  // namespace qberry
