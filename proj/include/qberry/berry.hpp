#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qberry/errors.hpp"
#include "qberry/gates.hpp"
#include "qberry/state.hpp"

namespace qberry {

enum class PhaseConvention { Raw, Mod2Pi };

inline const char* to_string(PhaseConvention c) {
  return c == PhaseConvention::Raw ? "raw" : "mod2pi";
}

struct GeometricPhase {
  double value = 0.0;
  PhaseConvention convention = PhaseConvention::Raw;

  GeometricPhase reduced() const { return {wrap_two_pi(value), PhaseConvention::Mod2Pi}; }
};

/// Phase e^{i mu dchi} picked up when the chirality angle winds by dchi.
/// A full 2pi winding at mu = 1/2 gives -1.
inline Complex winding_phase(double mu, double delta_chi) {
  if (!std::isfinite(mu) || !std::isfinite(delta_chi)) {
    throw InvalidInputError("winding_phase: non-finite input");
  }
  return std::polar(1.0, mu * delta_chi);
}

/// Anisotropy measure mu_{up,down}(theta) = (1 -+ cos theta) / 2. It is also
/// the phi-component of the Berry connection of the gauge-fixed spinor.
inline double anisotropy(Orientation o, double theta) {
  require_theta(theta);
  const double c = std::cos(theta);
  return o == Orientation::Up ? 0.5 * (1.0 - c) : 0.5 * (1.0 + c);
}

inline double connection(Orientation o, double theta) { return anisotropy(o, theta); }

/// gamma_up = pi(1 - cos theta), gamma_down = pi(1 + cos theta), reported raw
/// so that gamma_up(pi) = 2pi is distinguishable from gamma_up(0) = 0.
inline GeometricPhase berry_phase_analytic(Orientation o, double theta) {
  require_theta(theta);
  const double c = std::cos(theta);
  return {o == Orientation::Up ? kPi * (1.0 - c) : kPi * (1.0 + c), PhaseConvention::Raw};
}

inline GeometricPhase berry_phase_entangled(double theta) {
  require_theta(theta);
  return {kPi * (1.0 + std::cos(2.0 * theta)), PhaseConvention::Raw};
}

inline constexpr double kDegenerateOverlap = 1e-9;
inline constexpr double kLoopClosureTolerance = 1e-12;

/// Discrete Bargmann holonomy gamma = -arg prod_k <psi_k|psi_{k+1}> over a
/// closed path (first state repeated as the last). Gauge invariant: per-state
/// phases cancel in the product. Result is reported mod 2pi.
inline GeometricPhase holonomy_numeric(std::span<const PureState> path) {
  if (path.size() < 2) {
    throw InvalidInputError("holonomy_numeric: need at least 2 states");
  }
  const PureState& first = path.front();
  const PureState& last = path.back();
  require_same_dim(first, last, "holonomy_numeric");
  double gap2 = 0.0;
  for (std::size_t i = 0; i < first.dim(); ++i) gap2 += std::norm(first[i] - last[i]);
  if (std::sqrt(gap2) > kLoopClosureTolerance) {
    throw InvalidInputError("holonomy_numeric: path is not closed");
  }

  // Accumulate the argument segment by segment; a running complex product
  // would underflow for long paths with |overlap| < 1.
  double arg_sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Complex overlap = inner_product(path[k], path[k + 1]);
    if (std::abs(overlap) < kDegenerateOverlap) {
      throw DegeneratePathError("holonomy_numeric: vanishing overlap between states " +
                                std::to_string(k) + " and " + std::to_string(k + 1));
    }
    arg_sum += std::arg(overlap);
  }
  return {wrap_two_pi(-arg_sum), PhaseConvention::Mod2Pi};
}

/// Closed loop of gauge-fixed spinors at fixed theta, uniform in phi, with
/// `segments + 1` states (the last equals the first). The Up spinor is swept
/// with phi increasing and its conjugate Down spinor with phi decreasing, so
/// each loop circulates in the sense whose connection is +mu(theta).
inline std::vector<PureState> spinor_loop(Orientation o, double theta, std::size_t segments) {
  require_theta(theta);
  if (segments < 2) throw InvalidInputError("spinor_loop: segments must be >= 2");
  const double direction = o == Orientation::Up ? 1.0 : -1.0;
  std::vector<PureState> path;
  path.reserve(segments + 1);
  for (std::size_t k = 0; k < segments; ++k) {
    const double phi = direction * kTwoPi * static_cast<double>(k) / static_cast<double>(segments);
    path.push_back(prepare_spinor({theta, phi, 0.0, 0.5}, o, false));
  }
  path.push_back(path.front());
  return path;
}

inline const char* loop_direction(Orientation o) {
  return o == Orientation::Up ? "phi increasing" : "phi decreasing";
}

}  // namespace qberry
