// Standalone acceptance run: one PASS/FAIL line per criterion, non-zero exit
// status if any criterion fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qberry/cli.hpp"
#include "qberry/qberry.hpp"

namespace {

using namespace qberry;

std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eedULL);
  return gen;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

Complex random_complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

// Failure details collected while a criterion runs.
struct Check {
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) notes.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s: got %.17g want %.17g (tol %g)", what.c_str(), got, want, tol);
      notes.push_back(buf);
    }
  }
  void near(Complex got, Complex want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s: got (%.17g,%.17g) want (%.17g,%.17g)", what.c_str(),
                    got.real(), got.imag(), want.real(), want.imag());
      notes.push_back(buf);
    }
  }
};

// Criterion 1
void holonomy_grid(Check& c) {
  for (Orientation o : {Orientation::Up, Orientation::Down}) {
    for (int k = 1; k <= 11; ++k) {
      const double theta = k * kPi / 12.0;
      const auto loop = spinor_loop(o, theta, 20000);
      const double numeric = holonomy_numeric(loop).value;
      const double analytic = wrap_two_pi(berry_phase_analytic(o, theta).value);
      c.expect(circular_distance(numeric, analytic) <= 1e-6,
               std::string(to_string(o)) + " k=" + std::to_string(k) + " holonomy mismatch");
    }
  }
}

// Criterion 2
void complementarity(Check& c) {
  for (int i = 0; i < 1000; ++i) {
    const double theta = uniform(0.0, kPi);
    const double sum = berry_phase_analytic(Orientation::Up, theta).value +
                       berry_phase_analytic(Orientation::Down, theta).value;
    c.near(sum, kTwoPi, 1e-12, "gamma_up + gamma_down");
  }
}

// Criterion 3
void checkpoints(Check& c) {
  c.near(berry_phase_analytic(Orientation::Up, 0.0).value, 0.0, 1e-12, "gamma_up(0)");
  c.near(berry_phase_analytic(Orientation::Up, kPi).value, kTwoPi, 1e-12, "gamma_up(pi)");
  c.near(berry_phase_analytic(Orientation::Up, kPi / 3).value, kPi / 2, 1e-12, "gamma_up(pi/3)");
  c.near(berry_phase_entangled(0.0).value, kTwoPi, 1e-12, "gamma_ent(0)");
  c.near(berry_phase_entangled(kPi / 2).value, 0.0, 1e-12, "gamma_ent(pi/2)");
}

// Criterion 4: amplitudes written out directly rather than via prepare_spinor.
void circuit_equivalence(Check& c) {
  const Circuit spinor = parse_circuit(kSpinorCircuit);
  const Circuit general = parse_circuit(kGeneralQubitCircuit);
  const PureState zero = PureState::basis(1, 0);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double theta = i * kPi / 4.0;
      const double phi = -kPi + j * kTwoPi / 5.0 + 0.3;
      const Bindings b{{"theta", theta}, {"phi", phi}};

      const PureState want_spinor = PureState::from_amplitudes(
          {std::cos(theta / 2), std::sin(theta / 2) * std::polar(1.0, -phi)});
      c.expect(equal_up_to_global_phase(run_circuit(spinor, b, zero), want_spinor, 1e-10),
               "spinor circuit at grid point " + std::to_string(i) + "," + std::to_string(j));

      const PureState want_general =
          PureState::from_amplitudes({std::cos(theta), std::sin(theta) * std::polar(1.0, phi)});
      c.expect(equal_up_to_global_phase(run_circuit(general, b, zero), want_general, 1e-10),
               "general circuit at grid point " + std::to_string(i) + "," + std::to_string(j));
    }
  }
}

// Criterion 5
void rabi_pulses(Check& c) {
  const Complex i{0.0, 1.0};
  const double r = 1.0 / std::sqrt(2.0);
  const auto pi = evolve_coefficients(1.0, 0.0, {0.0, 1.0, kPi});
  c.near(pi.c0, 0.0, 1e-12, "pi pulse c0");
  c.near(pi.c1, i, 1e-12, "pi pulse c1");
  const auto half = evolve_coefficients(1.0, 0.0, {0.0, 1.0, kPi / 2});
  c.near(half.c0, r, 1e-12, "half-pi pulse c0");
  c.near(half.c1, i * r, 1e-12, "half-pi pulse c1");

  for (int k = 0; k < 1000; ++k) {
    Complex a0 = random_complex();
    Complex a1 = random_complex();
    double n = std::sqrt(std::norm(a0) + std::norm(a1));
    a0 /= n;
    a1 /= n;
    Complex b0 = random_complex();
    Complex b1 = random_complex();
    n = std::sqrt(std::norm(b0) + std::norm(b1));
    b0 /= n;
    b1 /= n;
    const double omega = uniform(0.1, 5.0);
    const double t1 = uniform(0.0, 4.0);
    const double t2 = uniform(0.0, 4.0);

    const auto ea = evolve_coefficients(a0, a1, {0.0, omega, t1});
    const auto eb = evolve_coefficients(b0, b1, {0.0, omega, t1});
    c.near(std::norm(ea.c0) + std::norm(ea.c1), 1.0, 1e-12, "norm preserved");
    const Complex before = std::conj(a0) * b0 + std::conj(a1) * b1;
    const Complex after = std::conj(ea.c0) * eb.c0 + std::conj(ea.c1) * eb.c1;
    c.near(after, before, 1e-12, "overlap preserved");

    const auto two_step = evolve_coefficients(ea.c0, ea.c1, {0.0, omega, t2});
    const auto one_step = evolve_coefficients(a0, a1, {0.0, omega, t1 + t2});
    c.near(two_step.c0, one_step.c0, 1e-12, "composition c0");
    c.near(two_step.c1, one_step.c1, 1e-12, "composition c1");
  }
}

// Criterion 6
void spin_echo(Check& c) {
  const SpinorParams p = matched_echo_params();
  c.expect(echo_conditions_hold(p), "matched echo conditions");
  const PhaseLedger ledger = spin_echo_ledger(p);
  c.near(ledger.dynamical(), 0.0, 1e-12, "echo dynamical phase");
  c.near(ledger.geometric_magnitude(), kPi, 1e-12, "echo geometric magnitude");
  c.near(ledger.total(), ledger.geometric() + ledger.dynamical(), 1e-12, "ledger total");
}

// Criterion 7: swap expectation computed from amplitudes as 2 Re(conj(a01) a10) + |a00|^2 + |a11|^2.
double swap_oracle(const PureState& s) {
  return std::norm(s[0]) + std::norm(s[3]) + 2.0 * std::real(std::conj(s[1]) * s[2]);
}

void entangled_flip(Check& c) {
  const BellCoefficients eq = BellCoefficients::equal_weight();
  c.near(swap_oracle(bell_state(eq)), -1.0, 1e-12, "initial state antisymmetric");
  const BellEvolution third = evolve_bell(eq, kPi / 3);
  c.near(swap_expectation(third.state), 1.0, 1e-12, "swap at pi/3");
  c.near(swap_oracle(third.state), 1.0, 1e-12, "swap oracle at pi/3");
  const BellEvolution full = evolve_bell(eq, kPi);
  c.near(swap_expectation(full.state), -1.0, 1e-12, "swap at pi");
  c.expect(circular_distance(full.relative_phase, 0.0) <= 1e-12, "relative phase at pi");
}

// Criterion 8
double entropy_oracle(double concurrence) {
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - concurrence * concurrence));
  auto term = [](double p) { return p <= 0.0 ? 0.0 : -p * std::log2(p); };
  return term(x) + term(1.0 - x);
}

void entanglement_measures(Check& c) {
  c.near(concurrence_from_theta(0.0), 0.0, 1e-12, "|C|(theta=0)");
  c.near(concurrence_from_theta(kPi), 1.0, 1e-12, "|C|(theta=pi)");
  c.near(entanglement_entropy(0.0), 0.0, 1e-12, "f(0)");
  c.near(entanglement_entropy(1.0), 1.0, 1e-12, "f(1)");
  c.near(entanglement_entropy(0.5), entropy_oracle(0.5), 1e-12, "f(1/2)");
  for (int k = 0; k < 10000; ++k) {
    std::vector<Complex> amps(4);
    double n2 = 0.0;
    for (auto& a : amps) {
      a = random_complex();
      n2 += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(n2);
    const PureState s = PureState::from_amplitudes(amps);
    const double cn = std::abs(concurrence_general(s));
    c.expect(cn <= 1.0 + 1e-12, "|C| <= 1 on random state " + std::to_string(k));
    const Complex oracle = 2.0 * (amps[0] * amps[3] - amps[1] * amps[2]);
    c.near(cn, std::abs(oracle), 1e-12, "concurrence vs determinant");
  }
}

// Criterion 9
void noise(Check& c) {
  for (int k = 0; k < 1000; ++k) {
    const double theta = uniform(0.0, kPi);
    const NoiseSpec n{uniform(-0.5, 0.5), NoiseTarget::Up};
    const double sum = noisy_phase(Orientation::Up, theta, n).phase.value +
                       noisy_phase(Orientation::Down, theta, n).phase.value;
    c.near(sum, kTwoPi, 1e-12, "Gamma_up + Gamma_down");
    c.near(entangled_noise_shift(theta, n),
           noisy_phase(Orientation::Up, theta, n).shift - noisy_phase(Orientation::Down, theta, n).shift,
           0.0, "entangled shift doubling");
  }
  c.near(noisy_phase(Orientation::Up, kPi / 2, {0.01, NoiseTarget::Up}).phase.value, 1.01 * kPi,
         1e-12, "Gamma_up(pi/2, 0.01)");
  for (int k = 0; k < 1000; ++k) {
    const double theta = uniform(0.0, kPi);
    const double dt = uniform(-0.1, 0.1);
    const double noisy = noisy_phase(Orientation::Up, theta, {dt, NoiseTarget::Up}).phase.value;
    const double exact = kPi * (1.0 - std::cos(theta + dt));
    c.expect(std::abs(noisy - exact) <= kPi * dt * dt / 2.0 + 1e-12, "first-order consistency");
  }
}

// Criterion 10
void rg_flow_checks(Check& c) {
  for (double a : {0.0, 0.1, 0.5, 1.0, 3.0}) {
    for (double cc : {-1.0, 0.0, 0.5, 2.0}) {
      double previous = INFINITY;
      for (int k = 0; k <= 200; ++k) {
        const double L = 0.01 * std::pow(1e4, k / 200.0);
        const double mu = monopole_strength_rg({a, cc, L});
        c.expect(mu <= previous, "mu non-increasing in separation");
        c.expect(mu >= 0.0, "mu non-negative");
        if (a == 0.0) c.near(mu, std::max(0.0, cc), 0.0, "a = 0 freezes mu");
        previous = mu;
      }
    }
  }
  std::ostringstream out;
  std::ostringstream err;
  const std::vector<std::string> args{"rgflow", "--a", "1", "--c", "0", "--separation", "10"};
  c.expect(cli::dispatch(args, out, err) == cli::kExitOk, "rgflow command runs");
  const auto rec = parse_records_json(out.str()).at(0);
  c.expect(rec.metadata.contains("mu_clamped") && rec.metadata.at("mu_clamped") == "true",
           "clamp recorded in metadata");
  c.near(rec.outputs.at("mu_unclamped"), -std::log(10.0), 1e-12, "unclamped value recorded");
}

// Criterion 11
struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

void cli_checks(Check& c) {
  const std::vector<std::vector<std::string>> invocations{
      {"phase", "--spin", "up", "--theta", "1.0471975512"},
      {"sweep", "--cmd", "holonomy", "--param", "theta", "--start", "0.2", "--stop", "3",
       "--steps", "5", "--segments", "2000", "--spin", "down", "--format", "csv"},
      {"entangle", "--theta", "0.9", "--alpha", "0.6,0.2", "--beta", "0.3,-0.714142842854285"},
      {"noise", "--spin", "entangled", "--theta", "1.3", "--delta-theta", "0.02"}};
  std::vector<RunRecord> all;
  for (const auto& args : invocations) {
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    c.expect(a.code == 0, args[0] + " exits 0: " + a.err);
    c.expect(a.out == b.out, args[0] + " byte-identical output");
    if (a.code == 0 && args.back() != "csv") {
      for (auto& r : parse_records_json(a.out)) all.push_back(r);
    }
  }
  const std::string text = emit(all, OutputFormat::Json);
  c.expect(parse_records_json(text) == all, "JSON round trip preserves records");
  c.expect(emit(parse_records_json(text), OutputFormat::Json) == text, "JSON round trip is stable");

  const CliResult phase = run_cli(invocations[0]);
  if (phase.code == 0) {
    c.near(parse_records_json(phase.out).at(0).outputs.at("gamma"), kPi / 2, 1e-9,
           "phase example gamma");
  }
  const CliResult rabi =
      run_cli({"rabi", "--omega", "1", "--t", "3.14159265359", "--c0", "1", "--c1", "0"});
  c.expect(rabi.code == 0, "rabi example exits 0");
  if (rabi.code == 0) {
    const auto& o = parse_records_json(rabi.out).at(0).outputs;
    c.near(Complex(o.at("c0_re"), o.at("c0_im")), 0.0, 1e-9, "rabi example c0");
    c.near(Complex(o.at("c1_re"), o.at("c1_im")), Complex(0.0, 1.0), 1e-9, "rabi example c1");
  }
  const CliResult bad = run_cli({"phase", "--theta", "4.0"});
  c.expect(bad.code == cli::kExitDomain, "out-of-range theta exits 1");
  c.expect(bad.err.find("theta out of [0, pi]") != std::string::npos, "out-of-range message");
}

struct Criterion {
  const char* title;
  std::function<void(Check&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"numeric loop holonomy matches the analytic phase on the k*pi/12 grid", holonomy_grid},
      {"up and down phases sum to 2pi", complementarity},
      {"closed-form phase checkpoints", checkpoints},
      {"preparation circuits reproduce the target spinors", circuit_equivalence},
      {"Rabi pulses, unitarity and time composition", rabi_pulses},
      {"matched spin echo cancels the dynamical phase", spin_echo},
      {"Bell state swap symmetry flips at pi/3 and restores at pi", entangled_flip},
      {"concurrence and entropy endpoints, |C| <= 1", entanglement_measures},
      {"chirality noise conservation, value, doubling and first-order bound", noise},
      {"RG flow monotone, frozen at a = 0, clamp recorded", rg_flow_checks},
      {"CLI determinism, JSON round trip and documented examples", cli_checks},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      criteria[i].body(check);
    } catch (const std::exception& e) {
      check.notes.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = check.notes.empty();
    std::printf("[%s] %zu. %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].title);
    for (std::size_t k = 0; k < check.notes.size() && k < 5; ++k) {
      std::printf("         %s\n", check.notes[k].c_str());
    }
    if (!ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
