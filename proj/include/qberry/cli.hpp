#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qberry/berry.hpp"
#include "qberry/circuit.hpp"
#include "qberry/entangle.hpp"
#include "qberry/errors.hpp"
#include "qberry/gates.hpp"
#include "qberry/noise.hpp"
#include "qberry/rabi.hpp"
#include "qberry/record.hpp"
#include "qberry/state.hpp"

namespace qberry::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Malformed invocation: unknown subcommand, bad flag value, bad sweep spec.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepParam { Theta, DeltaTheta, OmegaT, Separation };

struct SweepSpec {
  SweepParam parameter = SweepParam::Theta;
  double start = 0.0;
  double stop = 1.0;
  int steps = 2;

  // Uniform grid including both endpoints.
  std::vector<double> grid() const {
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      g[static_cast<std::size_t>(i)] =
          i == steps - 1 ? stop : start + (stop - start) * i / static_cast<double>(steps - 1);
    }
    return g;
  }
};

inline void validate(const SweepSpec& s) {
  if (s.steps < 2) throw UsageError("--steps must be >= 2");
  if (!(s.start < s.stop)) throw UsageError("--start must be less than --stop");
}

namespace detail {

// Real-valued flags accept decimal literals and constant expressions such as "pi/2".
inline double parse_real_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_constant_expression(text);
  } catch (const Error&) {
    throw UsageError("--" + flag + ": cannot parse '" + text + "' as a real number");
  }
}

// Complex flags are "re,im" or a bare real.
inline Complex parse_complex_flag(const std::string& flag, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_real_flag(flag, text), 0.0};
  return {parse_real_flag(flag, text.substr(0, comma)),
          parse_real_flag(flag, text.substr(comma + 1))};
}

inline Orientation parse_orientation(const std::string& s) {
  if (s == "up") return Orientation::Up;
  if (s == "down") return Orientation::Down;
  throw UsageError("--spin: expected 'up' or 'down', got '" + s + "'");
}

inline double to_radians(double v, bool degrees) { return degrees ? v * kPi / 180.0 : v; }

inline void put_complex(RunRecord& r, const std::string& name, Complex z) {
  r.outputs[name + "_re"] = z.real();
  r.outputs[name + "_im"] = z.imag();
}

// Option storage for every subcommand. Real-valued flags are held as text and
// converted after parsing so diagnostics can name the flag.
struct Options {
  std::string format = "json";
  std::string output;

  std::string spin = "up";
  std::string theta;
  std::string phi;
  std::string chi;
  std::string delta_theta;
  bool degrees = false;
  std::size_t segments = 20000;
  std::string file;

  std::string omega;
  std::string omega0 = "0";
  std::string t;
  std::string c0;
  std::string c1;

  std::string alpha;
  std::string beta;

  std::string a;
  std::string c;
  std::string separation;

  std::string sweep_cmd;
  std::string sweep_param;
  std::string sweep_start;
  std::string sweep_stop;
  int sweep_steps = 0;
};

struct Parser {
  std::unique_ptr<CLI::App> app;
  Options opts;
};

inline std::unique_ptr<Parser> make_parser() {
  auto p = std::make_unique<Parser>();
  p->app = std::make_unique<CLI::App>("Berry-phase, qubit-rotation and entanglement toolkit",
                                      "qberry");
  CLI::App& app = *p->app;
  Options& o = p->opts;
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", o.output, "Write records to PATH instead of standard output");

  auto* phase = app.add_subcommand("phase", "Analytic Berry phase of the up/down spinor");
  phase->add_option("--spin", o.spin, "up or down")->capture_default_str();
  phase->add_option("--theta", o.theta, "Polar angle in [0, pi]")->required();
  phase->add_flag("--degrees", o.degrees, "Angles are given in degrees");

  auto* holo = app.add_subcommand("holonomy", "Numeric loop holonomy vs the analytic phase");
  holo->add_option("--spin", o.spin, "up or down")->capture_default_str();
  holo->add_option("--theta", o.theta, "Polar angle in [0, pi]")->required();
  holo->add_option("--segments", o.segments, "Loop segments")->capture_default_str();
  holo->add_flag("--degrees", o.degrees, "Angles are given in degrees");

  auto* ent_phase =
      app.add_subcommand("entangled-phase", "Closed-form Berry phase of the entangled pair");
  ent_phase->add_option("--theta", o.theta, "Polar angle in [0, pi]")->required();
  ent_phase->add_flag("--degrees", o.degrees, "Angles are given in degrees");

  auto* circuit = app.add_subcommand("circuit", "Run a gate-DSL circuit on |0>");
  circuit->add_option("--file", o.file, "Circuit file")->required();
  circuit->add_option("--theta", o.theta, "Binding for theta");
  circuit->add_option("--phi", o.phi, "Binding for phi");
  circuit->add_flag("--degrees", o.degrees, "Angles are given in degrees");

  auto* rabi = app.add_subcommand("rabi", "Resonant Rabi evolution of (c0, c1)");
  rabi->add_option("--omega", o.omega, "Rabi frequency (rad/s)")->required();
  rabi->add_option("--omega0", o.omega0, "Precession frequency (rad/s)")->capture_default_str();
  rabi->add_option("--t", o.t, "Duration (s)")->required();
  rabi->add_option("--c0", o.c0, "Initial |0> coefficient as re,im")->required();
  rabi->add_option("--c1", o.c1, "Initial |1> coefficient as re,im")->required();

  auto* echo = app.add_subcommand("echo", "Phase ledger of the two-pi-pulse spin echo");
  echo->add_option("--phi", o.phi, "Azimuthal angle")->required();
  echo->add_option("--chi", o.chi, "Chirality angle")->required();
  echo->add_flag("--degrees", o.degrees, "Angles are given in degrees");

  auto* ent = app.add_subcommand("entangle", "Evolve a Bell state with a trapped Berry phase");
  ent->add_option("--theta", o.theta, "Polar angle in [0, pi]")->required();
  ent->add_option("--alpha", o.alpha, "alpha as re,im")->required();
  ent->add_option("--beta", o.beta, "beta as re,im")->required();
  ent->add_flag("--degrees", o.degrees, "Angles are given in degrees");

  auto* noise = app.add_subcommand("noise", "Chirality-shift noise on the Berry phase");
  noise->add_option("--spin", o.spin, "up, down or entangled")->capture_default_str();
  noise->add_option("--theta", o.theta, "Polar angle in [0, pi]")->required();
  noise->add_option("--delta-theta", o.delta_theta, "Shift delta theta")->required();
  noise->add_flag("--degrees", o.degrees, "Angles are given in degrees");

  auto* rg = app.add_subcommand("rgflow", "Monopole strength along the RG flow");
  rg->add_option("--a", o.a, "Flow rate a >= 0")->required();
  rg->add_option("--c", o.c, "Integration constant")->required();
  rg->add_option("--separation", o.separation, "Particle separation > 0")->required();

  auto* sweep = app.add_subcommand("sweep", "Evaluate a subcommand over a uniform grid");
  sweep->add_option("--cmd", o.sweep_cmd, "Subcommand to sweep")->required();
  sweep->add_option("--param", o.sweep_param, "theta, delta_theta, omega_t or separation")
      ->required();
  sweep->add_option("--start", o.sweep_start, "Grid start")->required();
  sweep->add_option("--stop", o.sweep_stop, "Grid stop")->required();
  sweep->add_option("--steps", o.sweep_steps, "Grid points (>= 2)")->required();
  // Fixed flags of the swept command are collected as extras; --format and
  // --output are peeled off them in execute().
  sweep->allow_extras();
  sweep->fallthrough(false);
  return p;
}

inline double real_flag(const std::string& name, const std::string& text) {
  if (text.empty()) throw UsageError("--" + name + " is required");
  return parse_real_flag(name, text);
}

inline double angle_flag(const Options& o, const std::string& name, const std::string& text) {
  return to_radians(real_flag(name, text), o.degrees);
}

inline RunRecord run_phase(const Options& o) {
  const Orientation spin = parse_orientation(o.spin);
  const double theta = angle_flag(o, "theta", o.theta);
  RunRecord r{"phase", {{"theta", theta}}, {}, {}};
  r.outputs["gamma"] = berry_phase_analytic(spin, theta).value;
  r.outputs["gamma_mod_2pi"] = berry_phase_analytic(spin, theta).reduced().value;
  r.outputs["connection"] = connection(spin, theta);
  r.metadata = {{"spin", to_string(spin)}, {"phase_convention", "raw"}};
  return r;
}

inline RunRecord run_holonomy(const Options& o) {
  const Orientation spin = parse_orientation(o.spin);
  const double theta = angle_flag(o, "theta", o.theta);
  if (o.segments < 2) throw UsageError("--segments must be >= 2");
  const auto loop = spinor_loop(spin, theta, o.segments);
  const double numeric = holonomy_numeric(loop).value;
  const double analytic = berry_phase_analytic(spin, theta).reduced().value;
  RunRecord r{"holonomy",
              {{"theta", theta}, {"segments", static_cast<double>(o.segments)}},
              {{"gamma_numeric", numeric},
               {"gamma_analytic", analytic},
               {"abs_error", circular_distance(numeric, analytic)}},
              {{"spin", to_string(spin)},
               {"phase_convention", "mod2pi"},
               {"loop_direction", loop_direction(spin)}}};
  return r;
}

inline RunRecord run_entangled_phase(const Options& o) {
  const double theta = angle_flag(o, "theta", o.theta);
  return {"entangled-phase",
          {{"theta", theta}},
          {{"gamma_ent", berry_phase_entangled(theta).value}},
          {{"phase_convention", "raw"}}};
}

inline RunRecord run_circuit_cmd(const Options& o) {
  const Circuit c = load_circuit(o.file);
  Bindings b;
  RunRecord r{"circuit", {}, {}, {}};
  if (!o.theta.empty()) b["theta"] = r.inputs["theta"] = angle_flag(o, "theta", o.theta);
  if (!o.phi.empty()) b["phi"] = r.inputs["phi"] = angle_flag(o, "phi", o.phi);
  const PureState s = run_circuit(c, b, PureState::basis(1, 0));
  put_complex(r, "c0", s[0]);
  put_complex(r, "c1", s[1]);
  r.outputs["norm"] = s.norm();
  r.metadata = {{"circuit", to_string(c)},
                {"file", o.file},
                {"input_state", "|0>"},
                {"phase_convention", "global phase not fixed"}};
  return r;
}

inline RunRecord run_rabi(const Options& o) {
  const double omega = real_flag("omega", o.omega);
  const double omega0 = real_flag("omega0", o.omega0);
  const double t = real_flag("t", o.t);
  const Complex c0 = parse_complex_flag("c0", o.c0);
  const Complex c1 = parse_complex_flag("c1", o.c1);
  const auto pulse = PulseSpec::custom({omega0, omega, t});
  const auto [e0, e1] = evolve_coefficients(c0, c1, pulse.params());
  RunRecord r{"rabi",
              {{"omega", omega},
               {"omega0", omega0},
               {"t", t},
               {"init_c0_re", c0.real()},
               {"init_c0_im", c0.imag()},
               {"init_c1_re", c1.real()},
               {"init_c1_im", c1.imag()}},
              {},
              {{"phase_convention", "raw"}, {"units", "hbar=1, rad/s, s"}}};
  put_complex(r, "c0", e0);
  put_complex(r, "c1", e1);
  r.outputs["p0"] = std::norm(e0);
  r.outputs["p1"] = std::norm(e1);
  r.outputs["dynamical_phase"] = pulse_phase_ledger(pulse).dynamical();
  return r;
}

inline RunRecord run_echo(const Options& o) {
  const SpinorParams p{0.0, angle_flag(o, "phi", o.phi), angle_flag(o, "chi", o.chi), 0.5};
  const PhaseLedger ledger = spin_echo_ledger(p);
  const EchoAngles angles = echo_angles(p);
  return {"echo",
          {{"phi", p.phi}, {"chi", p.chi}},
          {{"geometric", ledger.geometric()},
           {"geometric_magnitude", ledger.geometric_magnitude()},
           {"dynamical", ledger.dynamical()},
           {"total", ledger.total()},
           {"half_sum", angles.half_sum},
           {"half_diff", angles.half_diff}},
          {{"phase_convention", "raw"},
           {"half_angle_branch", "(-pi, pi]"},
           {"geometric_sign", ledger.geometric() < 0.0 ? "negative" : "non-negative"},
           {"matched", echo_conditions_hold(p) ? "true" : "false"}}};
}

inline RunRecord run_entangle(const Options& o) {
  const double theta = angle_flag(o, "theta", o.theta);
  const Complex alpha = parse_complex_flag("alpha", o.alpha);
  const Complex beta = parse_complex_flag("beta", o.beta);
  const BellEvolution ev = evolve_bell(BellCoefficients(alpha, beta), theta);
  RunRecord r{"entangle",
              {{"theta", theta},
               {"alpha_re", alpha.real()},
               {"alpha_im", alpha.imag()},
               {"beta_re", beta.real()},
               {"beta_im", beta.imag()}},
              {},
              {{"phase_convention", "mod2pi"}, {"basis", "|00>,|01>,|10>,|11> with down=0, up=1"}}};
  static constexpr const char* kLabels[] = {"amp_00", "amp_01", "amp_10", "amp_11"};
  for (std::size_t i = 0; i < 4; ++i) put_complex(r, kLabels[i], ev.state[i]);
  const double conc = std::min(1.0, std::abs(concurrence_general(ev.state)));
  const double conc_theta = concurrence_from_theta(theta);
  r.outputs["relative_phase"] = ev.relative_phase;
  r.outputs["swap_expectation"] = swap_expectation(ev.state);
  r.outputs["concurrence"] = conc;
  r.outputs["entropy"] = entanglement_entropy(conc);
  r.outputs["concurrence_theta"] = conc_theta;
  r.outputs["entropy_theta"] = entanglement_entropy(conc_theta);
  return r;
}

inline RunRecord run_noise(const Options& o) {
  const double theta = angle_flag(o, "theta", o.theta);
  const double dt = angle_flag(o, "delta-theta", o.delta_theta);
  RunRecord r{"noise", {{"theta", theta}, {"delta_theta", dt}}, {}, {{"spin", o.spin}}};
  if (o.spin == "entangled") {
    const NoiseSpec n{dt, NoiseTarget::Entangled};
    r.outputs["shift_doubled"] = entangled_noise_shift(theta, n);
    r.outputs["shift_after_echo"] = echo_entangled_noise_shift(theta, n);
    r.metadata["after_echo_note"] = "qualitative: single trapped factor perturbed once";
  } else {
    const Orientation spin = parse_orientation(o.spin);
    const NoiseSpec n{dt, spin == Orientation::Up ? NoiseTarget::Up : NoiseTarget::Down};
    const NoisyPhase np = noisy_phase(spin, theta, n);
    r.outputs["gamma_noisy"] = np.phase.value;
    r.outputs["gamma"] = berry_phase_analytic(spin, theta).value;
    r.outputs["shift"] = np.shift;
    r.outputs["connection"] = perturbed_connection(theta, n);
  }
  r.metadata["phase_convention"] = "raw";
  return r;
}

inline RunRecord run_rgflow(const Options& o) {
  const RgFlowParams p{real_flag("a", o.a), real_flag("c", o.c),
                       real_flag("separation", o.separation)};
  const RgFlowResult res = rg_flow(p);
  return {"rgflow",
          {{"a", p.a}, {"c", p.c}, {"separation", p.separation}},
          {{"mu", res.mu}, {"mu_unclamped", res.unclamped}},
          {{"phase_convention", "none"},
           {"mu_clamped", res.clamped ? "true" : "false"},
           {"clamp", "mu floored at 0"}}};
}

inline SweepParam parse_sweep_param(const std::string& s) {
  if (s == "theta") return SweepParam::Theta;
  if (s == "delta_theta") return SweepParam::DeltaTheta;
  if (s == "omega_t") return SweepParam::OmegaT;
  if (s == "separation") return SweepParam::Separation;
  throw UsageError("--param: expected theta, delta_theta, omega_t or separation, got '" + s + "'");
}

inline const std::map<std::string, std::vector<SweepParam>>& sweepable() {
  static const std::map<std::string, std::vector<SweepParam>> table{
      {"phase", {SweepParam::Theta}},
      {"holonomy", {SweepParam::Theta}},
      {"entangled-phase", {SweepParam::Theta}},
      {"circuit", {SweepParam::Theta}},
      {"entangle", {SweepParam::Theta}},
      {"noise", {SweepParam::Theta, SweepParam::DeltaTheta}},
      {"rabi", {SweepParam::OmegaT}},
      {"rgflow", {SweepParam::Separation}},
  };
  return table;
}

inline std::vector<RunRecord> execute(Parser& parser);

// Parses one invocation. CLI::ParseError escapes to the caller.
inline std::unique_ptr<Parser> parse_args(std::vector<std::string> args) {
  auto parser = make_parser();
  std::reverse(args.begin(), args.end());
  parser->app->parse(args);
  return parser;
}

inline std::vector<RunRecord> run_sweep(const Options& o, const std::vector<std::string>& fixed) {
  const auto table = sweepable();
  const auto it = table.find(o.sweep_cmd);
  if (it == table.end()) throw UsageError("--cmd: '" + o.sweep_cmd + "' cannot be swept");
  SweepSpec spec;
  spec.parameter = parse_sweep_param(o.sweep_param);
  if (std::find(it->second.begin(), it->second.end(), spec.parameter) == it->second.end()) {
    throw UsageError("--param: '" + o.sweep_param + "' is not a parameter of " + o.sweep_cmd);
  }
  spec.start = parse_real_flag("start", o.sweep_start);
  spec.stop = parse_real_flag("stop", o.sweep_stop);
  spec.steps = o.sweep_steps;
  validate(spec);

  std::vector<RunRecord> records;
  const auto grid = spec.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> args{o.sweep_cmd};
    args.insert(args.end(), fixed.begin(), fixed.end());
    char buf[40];
    double value = grid[i];
    if (spec.parameter == SweepParam::OmegaT) {
      const auto om = std::find(fixed.begin(), fixed.end(), "--omega");
      if (om == fixed.end() || om + 1 == fixed.end()) {
        throw UsageError("sweeping omega_t requires a fixed --omega");
      }
      value = grid[i] / parse_real_flag("omega", *(om + 1));
    }
    std::snprintf(buf, sizeof buf, "%.17g", value);
    static const std::map<SweepParam, std::string> kFlag{{SweepParam::Theta, "--theta"},
                                                         {SweepParam::DeltaTheta, "--delta-theta"},
                                                         {SweepParam::OmegaT, "--t"},
                                                         {SweepParam::Separation, "--separation"}};
    args.push_back(kFlag.at(spec.parameter));
    args.push_back(buf);
    auto inner = parse_args(args);
    try {
      auto recs = execute(*inner);
      for (auto& r : recs) {
        if (spec.parameter == SweepParam::OmegaT) r.inputs["omega_t"] = grid[i];
        r.metadata["sweep_param"] = o.sweep_param;
        r.metadata["sweep_index"] = std::to_string(i);
        records.push_back(std::move(r));
      }
    } catch (const Error& e) {
      throw Error("grid point " + std::to_string(i) + " (" + o.sweep_param + "=" + buf +
                  "): " + e.what());
    }
  }
  return records;
}

inline std::vector<RunRecord> execute(Parser& parser) {
  CLI::App& app = *parser.app;
  const Options& o = parser.opts;
  const auto sub = app.get_subcommands().front();
  const std::string& name = sub->get_name();
  if (name == "phase") return {run_phase(o)};
  if (name == "holonomy") return {run_holonomy(o)};
  if (name == "entangled-phase") return {run_entangled_phase(o)};
  if (name == "circuit") return {run_circuit_cmd(o)};
  if (name == "rabi") return {run_rabi(o)};
  if (name == "echo") return {run_echo(o)};
  if (name == "entangle") return {run_entangle(o)};
  if (name == "noise") return {run_noise(o)};
  if (name == "rgflow") return {run_rgflow(o)};
  if (name == "sweep") {
    std::vector<std::string> fixed;
    const auto rest = sub->remaining();
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if ((rest[i] == "--format" || rest[i] == "--output") && i + 1 < rest.size()) {
        if (rest[i] == "--format") {
          if (rest[i + 1] != "csv" && rest[i + 1] != "json") {
            throw UsageError("--format: expected csv or json, got '" + rest[i + 1] + "'");
          }
          parser.opts.format = rest[i + 1];
        } else {
          parser.opts.output = rest[i + 1];
        }
        ++i;
      } else {
        fixed.push_back(rest[i]);
      }
    }
    return run_sweep(o, fixed);
  }
  throw UsageError("unknown subcommand '" + name + "'");
}

}  // namespace detail

/// Runs one command line (without the program name). Records go to `out`
/// (or --output), diagnostics to `err`. Returns 0 on success, 1 on a domain
/// error, 2 on a usage error.
inline int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  std::unique_ptr<detail::Parser> parser;
  try {
    parser = detail::parse_args({args.begin(), args.end()});
  } catch (const CLI::CallForHelp&) {
    out << detail::make_parser()->app->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const auto records = detail::execute(*parser);
    const auto& o = parser->opts;
    const std::string text =
        emit(records, o.format == "csv" ? OutputFormat::Csv : OutputFormat::Json);
    if (o.output.empty()) {
      out << text;
    } else {
      std::ofstream f(o.output, std::ios::binary);
      if (!f) throw Error("cannot open output file '" + o.output + "'");
      f << text;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace qberry::cli
