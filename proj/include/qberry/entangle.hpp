#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qberry/berry.hpp"
#include "qberry/errors.hpp"
#include "qberry/gates.hpp"
#include "qberry/state.hpp"

namespace qberry {

// Two-spin states use |down> = |0> and |up> = |1>, so the coefficient order
// (dd, du, ud, uu) coincides with the qubit basis order (00, 01, 10, 11).

/// Weights of alpha|up,down> - beta|down,up>.
class BellCoefficients {
 public:
  BellCoefficients(Complex alpha, Complex beta) {
    const std::array<Complex, 2> ab{alpha, beta};
    const double scale = detail::normalization_scale(ab, "BellCoefficients");
    alpha_ = alpha * scale;
    beta_ = beta * scale;
  }

  static BellCoefficients equal_weight() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r};
  }

  Complex alpha() const noexcept { return alpha_; }
  Complex beta() const noexcept { return beta_; }

 private:
  Complex alpha_;
  Complex beta_;
};

struct BipartiteCoefficients {
  Complex a_dd;
  Complex a_du;
  Complex a_ud;
  Complex a_uu;

  static BipartiteCoefficients from_state(const PureState& s) {
    if (s.num_qubits() != 2) {
      throw InvalidInputError("BipartiteCoefficients: two-qubit state required");
    }
    return {s[0], s[1], s[2], s[3]};
  }

  PureState to_state() const { return PureState::from_amplitudes({a_dd, a_du, a_ud, a_uu}); }
};

/// (|1>|0> - |0>|1>)/sqrt 2.
inline PureState bell_singlet_qubits() {
  const double r = 1.0 / std::sqrt(2.0);
  return PureState::from_amplitudes({0.0, -r, r, 0.0});
}

inline PureState bell_state(const BellCoefficients& c) {
  return PureState::from_amplitudes({0.0, -c.beta(), c.alpha(), 0.0});
}

struct BellEvolution {
  PureState state;
  double relative_phase;  // mod 2pi
};

/// One spin carries its trapped Berry phase: the alpha term picks up
/// e^{i gamma_up}, the beta term e^{i gamma_down}. The overall e^{i gamma_down}
/// is dropped, leaving e^{i(gamma_up - gamma_down)} on alpha. Since
/// gamma_up + gamma_down = 2pi the relative phase equals 2 gamma_up mod 2pi.
inline BellEvolution evolve_bell(const BellCoefficients& c, double theta) {
  const double up = berry_phase_analytic(Orientation::Up, theta).value;
  const double down = berry_phase_analytic(Orientation::Down, theta).value;
  const double relative = wrap_two_pi(up - down);
  const Complex alpha = c.alpha() * std::polar(1.0, relative);
  return {PureState::from_amplitudes({0.0, -c.beta(), alpha, 0.0}), relative};
}

/// <s|SWAP|s>: -1 for antisymmetric, +1 for symmetric states.
inline double swap_expectation(const PureState& s) {
  if (s.num_qubits() != 2) throw InvalidInputError("swap_expectation: two-qubit state required");
  const Complex v = std::norm(s[0]) + std::norm(s[3]) + std::conj(s[1]) * s[2] +
                    std::conj(s[2]) * s[1];
  return std::clamp(v.real(), -1.0, 1.0);
}

/// Complex concurrence C = 2(a_dd a_uu - a_du a_ud).
inline Complex concurrence_general(const BipartiteCoefficients& c) {
  return 2.0 * (c.a_dd * c.a_uu - c.a_du * c.a_ud);
}

inline Complex concurrence_general(const PureState& s) {
  return concurrence_general(BipartiteCoefficients::from_state(s));
}

// |C| identified with the up-spin anisotropy. This is a modelling assertion,
// not something computed from a state; see concurrence_general for that.
inline double concurrence_from_theta(double theta) { return anisotropy(Orientation::Up, theta); }

/// Binary Shannon entropy in bits, with h(0) = h(1) = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw RangeError("binary_entropy: argument out of [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Entanglement of formation h((1 + sqrt(1 - C^2)) / 2) in bits.
inline double entanglement_entropy(double concurrence_norm) {
  if (!(concurrence_norm >= 0.0 && concurrence_norm <= 1.0)) {
    throw RangeError("concurrence out of [0, 1]");
  }
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - concurrence_norm * concurrence_norm));
  return binary_entropy(std::min(x, 1.0));
}

/// Singlet-frame amplitude of the gauge-fixed spinor pair:
/// <Psi0| (Up (x) Down - Down (x) Up)/sqrt 2 >. At phi = 0 this is -cos theta,
/// i.e. (gamma_up - gamma_down) / 2pi.
inline Complex singlet_projection(double theta, double phi) {
  const SpinorParams p{theta, phi, 0.0, 0.5};
  const PureState up = prepare_spinor(p, Orientation::Up, false);
  const PureState down = prepare_spinor(p, Orientation::Down, false);
  const PureState ud = tensor_product(up, down);
  const PureState du = tensor_product(down, up);
  const PureState singlet = bell_singlet_qubits();
  return (inner_product(singlet, ud) - inner_product(singlet, du)) / std::sqrt(2.0);
}

/// Diagnostic only: Bargmann holonomy over the normalized antisymmetrized
/// spinor pair as phi winds once. That family is the singlet times a scalar,
/// so the result is 0 wherever the loop is non-degenerate; it does not
/// reproduce the closed-form entangled phase.
inline GeometricPhase entangled_loop_holonomy(double theta, std::size_t segments) {
  require_theta(theta);
  if (segments < 2) throw InvalidInputError("entangled_loop_holonomy: segments must be >= 2");
  std::vector<PureState> path;
  path.reserve(segments + 1);
  for (std::size_t k = 0; k < segments; ++k) {
    const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(segments);
    const SpinorParams p{theta, phi, 0.0, 0.5};
    const PureState up = prepare_spinor(p, Orientation::Up, false);
    const PureState down = prepare_spinor(p, Orientation::Down, false);
    const PureState ud = tensor_product(up, down);
    const PureState du = tensor_product(down, up);
    std::array<Complex, 4> amps{};
    double n2 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      amps[i] = ud[i] - du[i];
      n2 += std::norm(amps[i]);
    }
    if (n2 < 1e-18) {
      throw DegeneratePathError("entangled_loop_holonomy: antisymmetrized pair vanishes");
    }
    for (auto& a : amps) a /= std::sqrt(n2);
    path.push_back(PureState::from_amplitudes(amps));
  }
  path.push_back(path.front());
  return holonomy_numeric(path);
}

struct RgFlowParams {
  double a = 0.0;           // flow rate, >= 0
  double c = 0.0;           // integration constant
  double separation = 1.0;  // |x - y|, > 0
};

struct RgFlowResult {
  double mu;
  double unclamped;
  bool clamped;
};

/// mu(L) = -a ln L + c, floored at 0 (the disentangled limit for large L).
inline RgFlowResult rg_flow(const RgFlowParams& p) {
  if (!(p.separation > 0.0) || !std::isfinite(p.separation)) {
    throw InvalidInputError("separation must be > 0");
  }
  if (!(p.a >= 0.0) || !std::isfinite(p.a)) throw InvalidInputError("a must be >= 0");
  if (!std::isfinite(p.c)) throw InvalidInputError("c must be finite");
  const double raw = -p.a * std::log(p.separation) + p.c;
  return {std::max(0.0, raw), raw, raw < 0.0};
}

inline double monopole_strength_rg(const RgFlowParams& p) { return rg_flow(p).mu; }

}  // namespace qberry
