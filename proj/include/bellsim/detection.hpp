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

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "bellsim/fock.hpp"
#include "bellsim/optics.hpp"

namespace bellsim {

/// No-click and coincidence probabilities of two threshold detectors.
/// d1 (d2) is the probability that detector 1 (2) registers nothing
/// irrespective of the other; d12 is the joint no-click probability;
/// p_coincidence = 1 - (d1 + d2 - d12).
struct ClickProbabilities {
  double d1 = 1.0;
  double d2 = 1.0;
  double d12 = 1.0;
  double p_coincidence = 0.0;
};

/// Evaluates the coincidence measure on the given state. The projectors act
/// as identity on every mode other than the detector modes, in particular on
/// the polarizer-rejected modes, which stay in the state.
inline ClickProbabilities click_statistics(const FockState& state, Mode det1_mode,
                                           Mode det2_mode) {
  if (det1_mode == det2_mode) {
    throw config_error("click_statistics requires two distinct detector modes");
  }
  ClickProbabilities cp;
  cp.d1 = prob_zero_in_modes(state, {det1_mode});
  cp.d2 = prob_zero_in_modes(state, {det2_mode});
  cp.d12 = prob_zero_in_modes(state, {det1_mode, det2_mode});
  cp.p_coincidence = 1.0 - (cp.d1 + cp.d2 - cp.d12);
  return cp;
}

/// Unnormalized POVM element for "the detector clicked", as an operator on
/// the signal-mode Fock space restricted to occupations 0..signal_cutoff.
///
/// Built by brute force: the signal mode is mixed with a local oscillator
/// prepared in |alpha> on a polarizer of transmittance t = sqrt(1 - r^2),
/// oriented so the LO contributes amplitude +r*alpha to the counter mode,
/// and the click operator 1 - |0><0| on the counter mode is compressed onto
/// the signal input space:
///   E_mn = <m, alpha| U^dag (1 - |0><0|_c) U |n, alpha>.
inline Eigen::MatrixXcd effective_projection(double r, cplx alpha,
                                             int signal_cutoff) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw config_error("effective_projection requires r in [0, 1)");
  }
  if (signal_cutoff < 1) {
    throw config_error("effective_projection requires signal_cutoff >= 1");
  }
  double t = std::sqrt(1.0 - r * r);
  int work_cutoff = required_cutoff(std::abs(alpha)) + signal_cutoff;

  Mode sig{Arm::input, Pol::signal};
  Mode lo{Arm::input, Pol::lo};
  ModeLayout layout({sig, lo}, {work_cutoff, work_cutoff});

  int dim = signal_cutoff + 1;
  std::vector<FockState> projected;
  projected.reserve(static_cast<std::size_t>(dim));
  const Mode counter[1] = {sig};
  for (int n = 0; n <= signal_cutoff; ++n) {
    FockState s = make_vacuum(layout);
    for (int k = 0; k < n; ++k) s = create_photon(s, sig);
    s = normalized(s);
    if (std::abs(alpha) > 0.0) s = apply_displacement(s, lo, alpha);
    // Fig. 1(b) arrangement: LO on the +row so it lands +r*alpha on the
    // counter mode; the signal keeps coefficient t there.
    s = detail::apply_mixer(s, layout.axis_of(lo), layout.axis_of(sig), t, r,
                            kTruncationBudget);
    projected.push_back(project_zero_in_modes(s, counter));
  }

  Eigen::MatrixXcd povm(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      cplx no_click = inner_product(projected[static_cast<std::size_t>(m)],
                                    projected[static_cast<std::size_t>(n)]);
      povm(m, n) = (m == n ? cplx{1.0, 0.0} : cplx{0.0, 0.0}) - no_click;
    }
  }
  // Hermitize away summation fuzz.
  povm = 0.5 * (povm + povm.adjoint().eval());
  return povm;
}

/// Dominant eigenvector of the POVM element restricted to span{|0>, |1>},
/// and its fidelity against the normalized target r*alpha|0> + |1>.
/// The restriction happens before the eigendecomposition: on the full space
/// every many-photon signal state clicks with near-unit probability, so the
/// top of the unrestricted spectrum is nearly degenerate and uninformative.
struct PovmQubitSummary {
  cplx v0;
  cplx v1;
  double eigenvalue = 0.0;
  double fidelity = 0.0;
};

inline PovmQubitSummary povm_qubit_summary(const Eigen::MatrixXcd& povm,
                                           cplx r_alpha) {
  Eigen::Matrix2cd block = povm.topLeftCorner<2, 2>();
  block = 0.5 * (block + block.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
  Eigen::Vector2cd v = es.eigenvectors().col(1);  // ascending order

  Eigen::Vector2cd target;
  target << r_alpha, cplx{1.0, 0.0};
  target.normalize();

  PovmQubitSummary out;
  out.v0 = v(0);
  out.v1 = v(1);
  out.eigenvalue = es.eigenvalues()(1);
  out.fidelity = std::norm(v.dot(target));
  return out;
}

}  // namespace bellsim
