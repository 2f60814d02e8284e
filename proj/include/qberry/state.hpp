#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>

#include "qberry/errors.hpp"

namespace qberry {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit-norm tolerance a stored state satisfies.
inline constexpr double kNormTolerance = 1e-12;
// Inputs this close to unit norm are renormalized; anything further is a caller bug.
inline constexpr double kRenormalizeWindow = 1e-6;

namespace detail {

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Checks finiteness and norm of a coefficient list and returns the scale to renormalize by.
inline double normalization_scale(std::span<const Complex> amps, const char* what) {
  double norm2 = 0.0;
  for (const Complex& a : amps) {
    if (!is_finite(a)) throw InvalidInputError(std::string(what) + ": non-finite amplitude");
    norm2 += std::norm(a);
  }
  const double norm = std::sqrt(norm2);
  if (std::abs(norm - 1.0) > kRenormalizeWindow) {
    throw InvalidInputError(std::string(what) + ": amplitudes not normalized (norm " +
                            std::to_string(norm) + ")");
  }
  return 1.0 / norm;
}

}  // namespace detail

/// Normalized pure state of one or two qubits.
///
/// Two-qubit amplitudes are ordered |00>, |01>, |10>, |11> with the first
/// factor as the most significant qubit. Construction renormalizes inputs
/// within 1e-6 of unit norm and rejects anything else, so every live
/// PureState is normalized to 1e-12.
class PureState {
 public:
  static constexpr std::size_t kMaxDim = 4;

  static PureState from_amplitudes(std::span<const Complex> amps) {
    if (amps.size() != 2 && amps.size() != 4) {
      throw InvalidInputError("PureState: amplitude count must be 2 or 4, got " +
                              std::to_string(amps.size()));
    }
    const double scale = detail::normalization_scale(amps, "PureState");
    PureState s;
    s.num_qubits_ = amps.size() == 2 ? 1 : 2;
    for (std::size_t i = 0; i < amps.size(); ++i) s.amps_[i] = amps[i] * scale;
    return s;
  }

  static PureState from_amplitudes(std::initializer_list<Complex> amps) {
    return from_amplitudes(std::span<const Complex>(amps.begin(), amps.size()));
  }

  static PureState basis(int num_qubits, std::size_t index) {
    if (num_qubits != 1 && num_qubits != 2) {
      throw InvalidInputError("PureState: num_qubits must be 1 or 2");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (index >= dim) throw InvalidInputError("PureState: basis index out of range");
    PureState s;
    s.num_qubits_ = num_qubits;
    s.amps_[index] = 1.0;
    return s;
  }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return std::size_t{1} << num_qubits_; }

  std::span<const Complex> amplitudes() const noexcept { return {amps_.data(), dim()}; }
  Complex operator[](std::size_t i) const { return amps_.at(i); }

  double norm() const {
    double n2 = 0.0;
    for (const Complex& a : amplitudes()) n2 += std::norm(a);
    return std::sqrt(n2);
  }

  friend bool operator==(const PureState&, const PureState&) = default;

 private:
  PureState() = default;

  int num_qubits_ = 1;
  std::array<Complex, kMaxDim> amps_{};
};

inline void require_same_dim(const PureState& a, const PureState& b, const char* op) {
  if (a.num_qubits() != b.num_qubits()) {
    throw InvalidInputError(std::string(op) + ": dimension mismatch (" +
                            std::to_string(a.num_qubits()) + " vs " +
                            std::to_string(b.num_qubits()) + " qubits)");
  }
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const PureState& a, const PureState& b) {
  require_same_dim(a, b, "inner_product");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline PureState tensor_product(const PureState& a, const PureState& b) {
  if (a.num_qubits() != 1 || b.num_qubits() != 1) {
    throw InvalidInputError("tensor_product: both factors must be single-qubit states");
  }
  const std::array<Complex, 4> amps{a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
  return PureState::from_amplitudes(amps);
}

/// True iff ||a - c b|| <= tol for the unit scalar c taken from the phase of
/// the largest-magnitude component of conj(b) * a.
inline bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol) {
  require_same_dim(a, b, "equal_up_to_global_phase");
  Complex best{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const Complex overlap = a[i] * std::conj(b[i]);
    if (std::abs(overlap) > std::abs(best)) best = overlap;
  }
  const Complex c = std::abs(best) > 0.0 ? best / std::abs(best) : Complex{1.0, 0.0};
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dist2 += std::norm(a[i] - c * b[i]);
  return std::sqrt(dist2) <= tol;
}

/// Reduces an angle into [0, 2pi).
inline double wrap_two_pi(double angle) {
  if (angle >= 0.0 && angle < kTwoPi) return angle;
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Reduces an angle into (-pi, pi].
inline double wrap_pi(double angle) {
  if (angle > -kPi && angle <= kPi) return angle;
  double r = wrap_two_pi(angle);
  if (r > kPi) r -= kTwoPi;
  return r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double circular_distance(double a, double b) {
  return std::abs(wrap_pi(a - b));
}

}  // namespace qberry
