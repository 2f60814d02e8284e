#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "qberry/errors.hpp"
#include "qberry/state.hpp"

namespace qberry {

enum class GateKind { Hadamard, Phase };

/// A bound single-qubit gate. Phase angles are reduced into (-4pi, 4pi].
class Gate {
 public:
  static Gate hadamard() { return Gate(GateKind::Hadamard, 0.0); }

  static Gate phase(double angle) {
    if (!std::isfinite(angle)) throw InvalidInputError("Phase gate: non-finite angle");
    double r = std::remainder(angle, 8.0 * kPi);
    if (r <= -4.0 * kPi) r += 8.0 * kPi;
    return Gate(GateKind::Phase, r);
  }

  GateKind kind() const noexcept { return kind_; }
  // Zero for Hadamard.
  double angle() const noexcept { return angle_; }

  friend bool operator==(const Gate&, const Gate&) = default;

 private:
  Gate(GateKind kind, double angle) : kind_(kind), angle_(angle) {}

  GateKind kind_;
  double angle_;
};

inline PureState apply_gate(const Gate& g, const PureState& s) {
  if (s.num_qubits() != 1) throw InvalidInputError("apply_gate: single-qubit state required");
  const Complex a0 = s[0];
  const Complex a1 = s[1];
  switch (g.kind()) {
    case GateKind::Hadamard: {
      const double r = 1.0 / std::sqrt(2.0);
      return PureState::from_amplitudes({r * (a0 + a1), r * (a0 - a1)});
    }
    case GateKind::Phase:
      return PureState::from_amplitudes({a0, std::polar(1.0, g.angle()) * a1});
  }
  throw InvalidInputError("apply_gate: unknown gate kind");
}

enum class Orientation { Up, Down };

inline const char* to_string(Orientation o) { return o == Orientation::Up ? "up" : "down"; }

/// Orientation angles of a quantized spinor plus its monopole strength.
struct SpinorParams {
  double theta = 0.0;
  double phi = 0.0;
  double chi = 0.0;
  double mu = 0.5;
};

inline void require_theta(double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw RangeError("theta out of [0, pi]");
}

inline void validate(const SpinorParams& p) {
  require_theta(p.theta);
  if (!std::isfinite(p.phi) || !std::isfinite(p.chi) || !std::isfinite(p.mu)) {
    throw InvalidInputError("SpinorParams: non-finite phi, chi or mu");
  }
}

// Which exponent the Down spinor carries on its |1> component. FullAngle is
// the conjugate of the Up spinor; HalfAngle is the variant that appears in
// the Bell-state derivation (e^{i phi/2} inside, e^{-i(phi+chi)/2} outside),
// kept for sensitivity checks.
enum class DownBracket { FullAngle, HalfAngle };

/// Up:   [cos(t/2)|0> + sin(t/2) e^{-i phi}|1>] e^{ i(phi-chi)/2}
/// Down: [sin(t/2)|0> + cos(t/2) e^{+i phi}|1>] e^{-i(phi-chi)/2}
/// The trailing factor is applied only when include_overall_phase is set.
inline PureState prepare_spinor(const SpinorParams& p, Orientation orientation,
                                bool include_overall_phase,
                                DownBracket bracket = DownBracket::FullAngle) {
  validate(p);
  const double c = std::cos(p.theta / 2.0);
  const double s = std::sin(p.theta / 2.0);
  if (orientation == Orientation::Up) {
    const Complex overall = include_overall_phase ? std::polar(1.0, (p.phi - p.chi) / 2.0) : 1.0;
    return PureState::from_amplitudes({overall * c, overall * s * std::polar(1.0, -p.phi)});
  }
  if (bracket == DownBracket::HalfAngle) {
    const Complex overall = include_overall_phase ? std::polar(1.0, -(p.phi + p.chi) / 2.0) : 1.0;
    return PureState::from_amplitudes({overall * s, overall * c * std::polar(1.0, p.phi / 2.0)});
  }
  const Complex overall = include_overall_phase ? std::polar(1.0, -(p.phi - p.chi) / 2.0) : 1.0;
  return PureState::from_amplitudes({overall * s, overall * c * std::polar(1.0, p.phi)});
}

}  // namespace qberry
