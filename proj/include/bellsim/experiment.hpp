// Copyright 2026 The bellsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "bellsim/closed_form.hpp"
#include "bellsim/detection.hpp"
#include "bellsim/fock.hpp"
#include "bellsim/optics.hpp"

namespace bellsim {

namespace modes {
inline constexpr Mode signal_T{Arm::T, Pol::signal};
inline constexpr Mode lo_T{Arm::T, Pol::lo};
inline constexpr Mode signal_R{Arm::R, Pol::signal};
inline constexpr Mode lo_R{Arm::R, Pol::lo};
}  // namespace modes

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

enum class Engine { numeric, closed_form };
enum class SourceKind { single_photon, coherent };

/// Inclusive phase grid swept by the quartz plate, in radians.
struct SweepGrid {
  double start_rad = deg_to_rad(-70.0);
  double end_rad = deg_to_rad(350.0);
  int steps = 25;

  double phase(int i) const {
    return start_rad +
           (end_rad - start_rad) * static_cast<double>(i) /
               static_cast<double>(steps - 1);
  }

  void validate() const {
    if (steps < 2) throw config_error("sweep needs at least 2 steps");
    if (!(end_rad > start_rad)) throw config_error("sweep span must be positive");
  }
};

/// Flat background rates and the probability-to-rate conversion.
/// lo_lo_rate: both clicks from the LO; pair_pair_rate: both clicks from the
/// photon source; signal_rate_scale: events/s per unit coincidence
/// probability, standing in for the trigger rate.
struct Backgrounds {
  double lo_lo_rate = 2.5;
  double pair_pair_rate = 1.0;
  double signal_rate_scale = 589000.0;

  void validate() const {
    if (lo_lo_rate < 0 || pair_pair_rate < 0 || signal_rate_scale < 0) {
      throw config_error("background rates must be >= 0");
    }
  }
};

/// Full parameter set of one run.
struct ExperimentConfig {
  CircuitParams circuit = CircuitParams::from_reflectance(0.05, 0.63, 0.0, 0.0, 0.01);
  Engine engine = Engine::closed_form;
  SweepGrid sweep;
  Backgrounds backgrounds;
  SourceKind source = SourceKind::single_photon;
  cplx gamma{0.0, 0.0};          // coherent source amplitude
  std::uint64_t seed = 1;
  double duration_s = 60.0;      // counting time per phase point
  /// Quarter-wave retardations applied to the arm signal modes after the
  /// beam splitter (radians).
  double qwp_signal_T = 0.0;
  double qwp_signal_R = 0.0;
  /// Phase-randomization samples for the classical control.
  int classical_phase_samples = 32;
  /// Per-mode cutoffs [signal_T, lo_T, signal_R, lo_R] overriding the policy.
  std::optional<std::array<int, 4>> cutoff_override;

  void validate() const {
    circuit.validate();
    sweep.validate();
    backgrounds.validate();
    if (duration_s < 0) throw config_error("duration must be >= 0");
    if (classical_phase_samples < 4) {
      throw config_error("classical control needs >= 4 phase samples");
    }
  }
};

/// Per-phase probabilities and expected rates of one sweep.
struct SweepResult {
  std::vector<double> phases;    // radians
  std::vector<double> p_ideal;   // coincidence probability, source present
  std::vector<double> p_false;   // coincidence probability, source blocked
  std::vector<double> p_total;   // eta-weighted mixture
  std::vector<double> p_click1;  // per-detector click probabilities (mixture)
  std::vector<double> p_click2;
  std::vector<double> rates;     // events/s including flat backgrounds
};

/// Extra LO-axis cutoff headroom on top of the displacement policy, so the
/// beam splitter acting after the big input displacement keeps essentially
/// all weight in complete photon-number blocks.
inline constexpr int kLoCutoffHeadroom = 14;

/// Per-mode cutoffs [signal_T, lo_T, signal_R, lo_R] for a config.
inline std::array<int, 4> plan_cutoffs(const ExperimentConfig& cfg) {
  if (cfg.cutoff_override) return *cfg.cutoff_override;
  const CircuitParams& c = cfg.circuit;
  double lo_load = std::numbers::sqrt2 * c.alpha_mag;
  int lo_cut = required_cutoff(lo_load) + kLoCutoffHeadroom;

  double gamma_mag = cfg.source == SourceKind::coherent ? std::abs(cfg.gamma) : 0.0;
  double sig_load = std::max(gamma_mag, gamma_mag / std::numbers::sqrt2 +
                                            c.r * c.alpha_mag);
  int sig_cut = required_cutoff(sig_load) +
                (cfg.source == SourceKind::single_photon ? 2 : 0);
  return {sig_cut, lo_cut, sig_cut, lo_cut};
}

inline ModeLayout experiment_layout(const ExperimentConfig& cfg) {
  auto cuts = plan_cutoffs(cfg);
  return ModeLayout({modes::signal_T, modes::lo_T, modes::signal_R, modes::lo_R},
                    {cuts[0], cuts[1], cuts[2], cuts[3]});
}

/// Input-port state before the beam splitter. The (T, *) axes carry the
/// signal input port, the (R, *) axes the LO input port: a single photon (or
/// the classical-control coherent amplitude gamma) in the signal
/// polarization of port T, and a coherent state of amplitude sqrt(2)*alpha
/// in the LO polarization of port R, so each arm carries alpha after the
/// 50/50 splitter.
inline FockState prepare_initial_state(const ExperimentConfig& cfg) {
  cfg.validate();
  FockState state = make_vacuum(experiment_layout(cfg));
  if (cfg.source == SourceKind::single_photon) {
    state = create_photon(state, modes::signal_T);
  } else if (std::abs(cfg.gamma) > 0.0) {
    state = apply_displacement(state, modes::signal_T, cfg.gamma);
  }
  double lo_amp = std::numbers::sqrt2 * cfg.circuit.alpha_mag;
  if (lo_amp > 0.0) {
    state = apply_displacement(state, modes::lo_R, cplx{lo_amp, 0.0});
  }
  return state;
}

/// Runs the input state through the 50/50 beam splitter (acting on both
/// polarization pairs) and absorbs the constant reflection phase so both LO
/// arms carry +|alpha| before the phase plates. Arm phases are not applied
/// here; with theta = theta' = 0 this already is the paper's post-splitter
/// state with real alpha.
inline FockState state_after_beam_splitter(const ExperimentConfig& cfg) {
  FockState state = prepare_initial_state(cfg);
  double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  state = apply_beam_splitter(state, modes::signal_T, modes::signal_R, inv_sqrt2,
                              inv_sqrt2);
  state = apply_beam_splitter(state, modes::lo_T, modes::lo_R, inv_sqrt2,
                              inv_sqrt2);
  if (cfg.circuit.alpha_mag > 0.0) {
    state = apply_phase(state, modes::lo_T, std::numbers::pi);
  }
  return state;
}

/// Arm phase plates, optional quarter-wave plates, and the two polarizers.
/// Returns the four-mode state seen by the detectors; the detector modes are
/// the transmitted (signal-axis) outputs of the polarizers.
inline FockState detector_state(const ExperimentConfig& cfg,
                                const FockState& after_bs, double theta,
                                double theta_prime) {
  const CircuitParams& c = cfg.circuit;
  FockState state = after_bs;
  if (theta != 0.0) state = apply_phase(state, modes::lo_T, theta);
  if (theta_prime != 0.0) state = apply_phase(state, modes::lo_R, theta_prime);
  if (cfg.qwp_signal_T != 0.0) {
    state = apply_phase(state, modes::signal_T, cfg.qwp_signal_T);
  }
  if (cfg.qwp_signal_R != 0.0) {
    state = apply_phase(state, modes::signal_R, cfg.qwp_signal_R);
  }
  state = apply_polarizer(state, modes::signal_T, modes::lo_T, c.t, c.r).state;
  state = apply_polarizer(state, modes::signal_R, modes::lo_R, c.t, c.r).state;
  return state;
}

namespace detail {

/// Numeric-engine click probabilities at one phase point for a prebuilt
/// post-splitter state.
inline ClickProbabilities numeric_clicks(const ExperimentConfig& cfg,
                                         const FockState& after_bs,
                                         double theta, double theta_prime) {
  FockState s = detector_state(cfg, after_bs, theta, theta_prime);
  return click_statistics(s, modes::signal_T, modes::signal_R);
}

/// Closed-form click probabilities with the quarter-wave offsets folded into
/// the effective phase difference.
inline void closed_form_point(const ExperimentConfig& cfg, double theta,
                              double& p_ideal, double& p_false, double& d1,
                              double& d1_false) {
  CircuitParams p = cfg.circuit;
  p.theta = theta + cfg.qwp_signal_R - cfg.qwp_signal_T;
  p_ideal = p_coincidence_closed(p);
  p_false = p_false_closed(p);
  d1 = d1_closed(p);
  d1_false = d1_lo_only_closed(p);
}

}  // namespace detail

/// Sweeps the quartz-plate phase across the grid and evaluates the
/// coincidence statistics with the configured engine. The swept phase acts
/// on the T-arm LO mode (on top of circuit.theta); the R-arm LO keeps
/// circuit.theta_prime. Expected rates add the two flat backgrounds.
inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.source == SourceKind::coherent) {
    throw config_error("run_sweep expects the single-photon source; "
                       "use run_classical_control for coherent input");
  }

  SweepResult out;
  int n = cfg.sweep.steps;
  out.phases.resize(static_cast<std::size_t>(n));
  out.p_ideal.resize(static_cast<std::size_t>(n));
  out.p_false.resize(static_cast<std::size_t>(n));
  out.p_total.resize(static_cast<std::size_t>(n));
  out.p_click1.resize(static_cast<std::size_t>(n));
  out.p_click2.resize(static_cast<std::size_t>(n));
  out.rates.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.phases[static_cast<std::size_t>(i)] = cfg.sweep.phase(i);
  }
  double eta = cfg.circuit.eta;

  if (cfg.engine == Engine::closed_form) {
    for (int i = 0; i < n; ++i) {
      std::size_t k = static_cast<std::size_t>(i);
      double pi_, pf, d1, d1f;
      detail::closed_form_point(cfg, cfg.circuit.theta + out.phases[k], pi_, pf,
                                d1, d1f);
      out.p_ideal[k] = pi_;
      out.p_false[k] = pf;
      out.p_total[k] = eta * pi_ + (1.0 - eta) * pf;
      out.p_click1[k] = eta * (1.0 - d1) + (1.0 - eta) * (1.0 - d1f);
      out.p_click2[k] = out.p_click1[k];
    }
  } else {
    ExperimentConfig dark = cfg;
    dark.source = SourceKind::coherent;
    dark.gamma = cplx{0.0, 0.0};
    FockState base_src = state_after_beam_splitter(cfg);
    FockState base_dark = state_after_beam_splitter(dark);
    detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
      double theta = cfg.circuit.theta + out.phases[k];
      ClickProbabilities q =
          detail::numeric_clicks(cfg, base_src, theta, cfg.circuit.theta_prime);
      ClickProbabilities f =
          detail::numeric_clicks(dark, base_dark, theta, cfg.circuit.theta_prime);
      out.p_ideal[k] = q.p_coincidence;
      out.p_false[k] = f.p_coincidence;
      out.p_total[k] = eta * q.p_coincidence + (1.0 - eta) * f.p_coincidence;
      out.p_click1[k] = eta * (1.0 - q.d1) + (1.0 - eta) * (1.0 - f.d1);
      out.p_click2[k] = eta * (1.0 - q.d2) + (1.0 - eta) * (1.0 - f.d2);
    });
  }

  const Backgrounds& bg = cfg.backgrounds;
  for (int i = 0; i < n; ++i) {
    std::size_t k = static_cast<std::size_t>(i);
    out.rates[k] = bg.signal_rate_scale * out.p_total[k] + bg.lo_lo_rate +
                   bg.pair_pair_rate;
  }
  return out;
}

/// Classical-control amplitude with |t*gamma/sqrt(2)| = |r*alpha|: the
/// coherent input that matches the LO amplitude reaching each detector.
inline double matched_classical_gamma(const CircuitParams& c) {
  return std::numbers::sqrt2 * c.r * c.alpha_mag / c.t;
}

/// Control run with phase-modulated coherent light in the signal port
/// instead of the single photon. The modulation randomizes the input's
/// global phase, so probabilities are averaged over a uniform grid of
/// classical_phase_samples input phases (the harmonics present decay
/// factorially, making the grid average spectrally exact at weak fields).
/// Always evaluated with the numeric engine. p_total carries the averaged
/// coincidence probability; no eta mixture applies.
inline SweepResult run_classical_control(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.source != SourceKind::coherent) {
    throw config_error("run_classical_control requires a coherent source");
  }

  SweepResult out;
  int n = cfg.sweep.steps;
  out.phases.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.phases[static_cast<std::size_t>(i)] = cfg.sweep.phase(i);
  }
  out.p_ideal.assign(static_cast<std::size_t>(n), 0.0);
  out.p_false.assign(static_cast<std::size_t>(n), 0.0);
  out.p_total.assign(static_cast<std::size_t>(n), 0.0);
  out.p_click1.assign(static_cast<std::size_t>(n), 0.0);
  out.p_click2.assign(static_cast<std::size_t>(n), 0.0);
  out.rates.assign(static_cast<std::size_t>(n), 0.0);

  int samples = std::abs(cfg.gamma) > 0.0 ? cfg.classical_phase_samples : 1;
  std::vector<FockState> bases;
  bases.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    ExperimentConfig mod = cfg;
    mod.gamma = cfg.gamma * std::polar(1.0, 2.0 * std::numbers::pi *
                                                static_cast<double>(k) /
                                                static_cast<double>(samples));
    bases.push_back(state_after_beam_splitter(mod));
  }

  ExperimentConfig dark = cfg;
  dark.gamma = cplx{0.0, 0.0};
  FockState base_dark = state_after_beam_splitter(dark);

  detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
    double theta = cfg.circuit.theta + out.phases[k];
    detail::compensated_sum pc, c1, c2;
    for (const FockState& base : bases) {
      ClickProbabilities q =
          detail::numeric_clicks(cfg, base, theta, cfg.circuit.theta_prime);
      pc.add(q.p_coincidence);
      c1.add(1.0 - q.d1);
      c2.add(1.0 - q.d2);
    }
    double inv = 1.0 / static_cast<double>(samples);
    ClickProbabilities f =
        detail::numeric_clicks(dark, base_dark, theta, cfg.circuit.theta_prime);
    out.p_ideal[k] = pc.value() * inv;
    out.p_false[k] = f.p_coincidence;
    out.p_total[k] = out.p_ideal[k];
    out.p_click1[k] = c1.value() * inv;
    out.p_click2[k] = c2.value() * inv;
    out.rates[k] = cfg.backgrounds.signal_rate_scale * out.p_total[k] +
                   cfg.backgrounds.lo_lo_rate + cfg.backgrounds.pair_pair_rate;
  });
  return out;
}

}  // namespace bellsim
