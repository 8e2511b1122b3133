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

#include <cmath>
#include <numbers>

#include "bellsim/errors.hpp"

namespace bellsim {

/// Parameter set of the analyzed circuit: polarizer amplitudes (t, r) with
/// t^2 + r^2 = 1, local-oscillator magnitude |alpha| and phases theta (T arm)
/// and theta_prime (R arm), and the heralded-source efficiency eta. Only the
/// difference theta - theta_prime enters the coincidence formulas; both
/// angles are kept so configurations mirror the physical knobs.
struct CircuitParams {
  double r = 0.05;
  double t = 0.99874921777190884;  // sqrt(1 - 0.05^2)
  double alpha_mag = 0.0;
  double theta = 0.0;
  double theta_prime = 0.0;
  double eta = 1.0;

  static CircuitParams from_reflectance(double r, double alpha_mag,
                                        double theta = 0.0,
                                        double theta_prime = 0.0,
                                        double eta = 1.0) {
    CircuitParams p;
    p.r = r;
    p.t = std::sqrt(1.0 - r * r);
    p.alpha_mag = alpha_mag;
    p.theta = theta;
    p.theta_prime = theta_prime;
    p.eta = eta;
    p.validate();
    return p;
  }

  void validate() const {
    if (std::abs(t * t + r * r - 1.0) > 1e-12) {
      throw config_error("circuit parameters must satisfy t^2 + r^2 = 1");
    }
    if (alpha_mag < 0.0) {
      throw config_error("alpha magnitude must be >= 0");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw config_error("eta must lie in [0, 1]");
    }
  }

  double delta_theta() const { return theta - theta_prime; }
  double r_alpha_sq() const { return r * r * alpha_mag * alpha_mag; }
};

/// Probability that detector 1 registers nothing, irrespective of detector 2:
/// (1/2) exp(-|r alpha|^2) (1 + r^2 + r^2 t^2 |alpha|^2).
inline double d1_closed(const CircuitParams& p) {
  double ra2 = p.r_alpha_sq();
  double a2 = p.alpha_mag * p.alpha_mag;
  return 0.5 * std::exp(-ra2) * (1.0 + p.r * p.r + p.r * p.r * p.t * p.t * a2);
}

/// Same closed form as d1_closed; the two arms are symmetric.
inline double d2_closed(const CircuitParams& p) { return d1_closed(p); }

/// Probability that both detectors register nothing:
/// exp(-2|r alpha|^2) (r^2 + 2 r^2 t^2 |alpha|^2 cos^2((theta-theta')/2)).
inline double d12_closed(const CircuitParams& p) {
  double ra2 = p.r_alpha_sq();
  double a2 = p.alpha_mag * p.alpha_mag;
  double c = std::cos(0.5 * p.delta_theta());
  return std::exp(-2.0 * ra2) *
         (p.r * p.r + 2.0 * p.r * p.r * p.t * p.t * a2 * c * c);
}

/// Coincidence probability 1 - (D1 + D2 - D12) with the single photon present.
inline double p_coincidence_closed(const CircuitParams& p) {
  return 1.0 - (d1_closed(p) + d2_closed(p) - d12_closed(p));
}

/// False-coincidence probability with no signal photon: both clicks come from
/// the local oscillator, (1 - exp(-|r alpha|^2))^2.
inline double p_false_closed(const CircuitParams& p) {
  double q = 1.0 - std::exp(-p.r_alpha_sq());
  return q * q;
}

/// Total coincidence probability for a source of efficiency eta:
/// eta * P_coincidence + (1 - eta) * P_false.
inline double p_total_closed(const CircuitParams& p) {
  return p.eta * p_coincidence_closed(p) + (1.0 - p.eta) * p_false_closed(p);
}

/// No-click probability of one detector when the signal photon is absent and
/// only the LO reaches it: exp(-|r alpha|^2). Feeds the singles rates of the
/// counting model.
inline double d1_lo_only_closed(const CircuitParams& p) {
  return std::exp(-p.r_alpha_sq());
}

/// Per-detector click probability including the eta mixture, detector 1.
inline double p_click1_closed(const CircuitParams& p) {
  return p.eta * (1.0 - d1_closed(p)) + (1.0 - p.eta) * (1.0 - d1_lo_only_closed(p));
}

inline double p_click2_closed(const CircuitParams& p) { return p_click1_closed(p); }

/// Fringe contrast (max - min) / (max + min).
inline double visibility(double p_max, double p_min) {
  if (!(p_max >= p_min) || p_min < 0.0) {
    throw config_error("visibility requires p_max >= p_min >= 0");
  }
  if (p_max <= 0.0) {
    throw numeric_error("visibility is undefined when both extremes are zero");
  }
  return (p_max - p_min) / (p_max + p_min);
}

/// Visibility of the eta-weighted coincidence fringe, taken between the
/// phase-difference extremes 0 and pi.
inline double ideal_visibility(const CircuitParams& p) {
  CircuitParams at_max = p;
  at_max.theta = 0.0;
  at_max.theta_prime = 0.0;
  CircuitParams at_min = p;
  at_min.theta = std::numbers::pi;
  at_min.theta_prime = 0.0;
  return visibility(p_total_closed(at_max), p_total_closed(at_min));
}

}  // namespace bellsim
