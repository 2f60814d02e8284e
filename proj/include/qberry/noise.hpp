#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "qberry/berry.hpp"
#include "qberry/errors.hpp"
#include "qberry/gates.hpp"

namespace qberry {

enum class NoiseTarget { Up, Down, Entangled };

// A fixed chirality shift delta_theta, restricted to the small-perturbation regime.
struct NoiseSpec {
  double delta_theta = 0.0;
  NoiseTarget applies_to = NoiseTarget::Up;
};

inline constexpr double kMaxDeltaTheta = 0.5;

inline void validate(const NoiseSpec& n) {
  if (!std::isfinite(n.delta_theta) || std::abs(n.delta_theta) > kMaxDeltaTheta) {
    throw RangeError("delta-theta out of [-0.5, 0.5]");
  }
}

/// Up:   (1 - cos t + sin t dt) / 2
/// Down: (1 + cos t - sin t dt) / 2
inline double perturbed_connection(double theta, const NoiseSpec& n) {
  require_theta(theta);
  validate(n);
  const double shift = std::sin(theta) * n.delta_theta;
  switch (n.applies_to) {
    case NoiseTarget::Up: return 0.5 * (1.0 - std::cos(theta) + shift);
    case NoiseTarget::Down: return 0.5 * (1.0 + std::cos(theta) - shift);
    case NoiseTarget::Entangled: break;
  }
  throw InvalidInputError("perturbed_connection: noise target must be up or down");
}

struct NoisyPhase {
  GeometricPhase phase;  // Gamma = gamma + shift
  double shift;          // +pi sin(t) dt for Up, -pi sin(t) dt for Down
};

inline NoisyPhase noisy_phase(Orientation o, double theta, const NoiseSpec& n) {
  require_theta(theta);
  validate(n);
  const double sign = o == Orientation::Up ? 1.0 : -1.0;
  const double shift = sign * kPi * std::sin(theta) * n.delta_theta;
  const double gamma = berry_phase_analytic(o, theta).value;
  return {{gamma + shift, PhaseConvention::Raw}, shift};
}

/// Shift of the gamma_up - gamma_down difference: twice the single-spinor shift.
inline double entangled_noise_shift(double theta, const NoiseSpec& n) {
  require_theta(theta);
  validate(n);
  return 2.0 * kPi * std::sin(theta) * n.delta_theta;
}

/// After the echo only the single trapped factor is perturbed, so the shift is
/// the single-spinor one.
inline double echo_entangled_noise_shift(double theta, const NoiseSpec& n) {
  return noisy_phase(Orientation::Up, theta, n).shift;
}

// Maps externally drawn delta_theta samples through noisy_phase.
inline std::vector<NoisyPhase> noisy_phases(Orientation o, double theta,
                                            std::span<const double> delta_theta_samples) {
  std::vector<NoisyPhase> out;
  out.reserve(delta_theta_samples.size());
  for (double dt : delta_theta_samples) out.push_back(noisy_phase(o, theta, {dt, NoiseTarget::Up}));
  return out;
}

}  // namespace qberry
