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
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "bellsim/fock.hpp"

namespace bellsim {

/// Tolerance on |t^2 + r^2 - 1| for two-mode mixers.
inline constexpr double kMixerTolerance = 1e-12;

/// Default budget for amplitude weight that an element may leave in
/// cutoff-incomplete regions before it refuses to run.
inline constexpr double kTruncationBudget = 1e-9;

/// Smallest cutoff accepted for a displacement by |beta|:
/// max(8, ceil(beta^2 + 6*beta + 10)). This keeps the lost coherent-state
/// weight below 1e-12 for |beta| <= 4; callers that chain further elements
/// on top of a displaced mode add their own headroom.
inline int required_cutoff(double beta_mag) {
  double mag = std::abs(beta_mag);
  int policy = static_cast<int>(std::ceil(mag * mag + 6.0 * mag + 10.0));
  return std::max(8, policy);
}

namespace detail {

/// Unitary blocks of exp(xi*(a2^dag a1 - a1^dag a2)) on the truncated joint
/// space of two modes with axis dimensions d1, d2. The generator conserves
/// n1+n2, so the exponential is block-diagonal over total photon number N;
/// each block is the matrix exponential of the restricted generator. Blocks
/// clipped by a cutoff are still orthogonal (the restricted generator stays
/// antisymmetric), so the map never loses norm.
struct MixerBlocks {
  int d1 = 0;
  int d2 = 0;
  std::vector<Eigen::MatrixXd> blocks;  // indexed by N = n1+n2

  int lo_n1(int total) const { return std::max(0, total - (d2 - 1)); }
  int hi_n1(int total) const { return std::min(total, d1 - 1); }
  bool complete(int total) const { return total <= d1 - 1 && total <= d2 - 1; }
};

inline MixerBlocks build_mixer_blocks(int d1, int d2, double t, double r) {
  MixerBlocks mb;
  mb.d1 = d1;
  mb.d2 = d2;
  double xi = std::atan2(r, t);
  int max_total = (d1 - 1) + (d2 - 1);
  mb.blocks.reserve(static_cast<std::size_t>(max_total) + 1);
  for (int total = 0; total <= max_total; ++total) {
    int lo = mb.lo_n1(total);
    int hi = mb.hi_n1(total);
    int size = hi - lo + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
    for (int n1 = lo; n1 <= hi; ++n1) {
      int n2 = total - n1;
      int col = n1 - lo;
      if (n1 - 1 >= lo) {
        // a2^dag a1 : |n1,n2> -> sqrt(n1*(n2+1)) |n1-1,n2+1>
        gen(col - 1, col) += std::sqrt(static_cast<double>(n1) *
                                       static_cast<double>(n2 + 1));
      }
      if (n1 + 1 <= hi) {
        // -a1^dag a2 : |n1,n2> -> -sqrt((n1+1)*n2) |n1+1,n2-1>
        gen(col + 1, col) -= std::sqrt(static_cast<double>(n1 + 1) *
                                       static_cast<double>(n2));
      }
    }
    mb.blocks.push_back((xi * gen).exp());
  }
  return mb;
}

inline const MixerBlocks& mixer_blocks(int d1, int d2, double t, double r) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex mu;
  static std::map<Key, MixerBlocks> cache;
  std::lock_guard<std::mutex> lock(mu);
  Key key{d1, d2, t, r};
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, build_mixer_blocks(d1, d2, t, r)).first;
  }
  return it->second;
}

/// Truncated displacement operator exp(beta a^dag - conj(beta) a) on a
/// single-mode space of the given dimension, built by scaling-and-squaring
/// matrix exponentiation of the truncated generator.
inline const Eigen::MatrixXcd& displacement_matrix(int dim, cplx beta) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mu;
  static std::map<Key, Eigen::MatrixXcd> cache;
  std::lock_guard<std::mutex> lock(mu);
  Key key{dim, beta.real(), beta.imag()};
  auto it = cache.find(key);
  if (it == cache.end()) {
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
      double root = std::sqrt(static_cast<double>(n + 1));
      gen(n + 1, n) = beta * root;
      gen(n, n + 1) = -std::conj(beta) * root;
    }
    it = cache.emplace(key, gen.exp()).first;
  }
  return it->second;
}

inline void check_mixer_params(double t, double r) {
  if (std::abs(t * t + r * r - 1.0) > kMixerTolerance) {
    throw config_error("mixer parameters must satisfy t^2 + r^2 = 1");
  }
}

/// Applies the cached mixer blocks on axes (ax1, ax2) of the state.
///
/// Overflow detection: photon-number blocks clipped by a cutoff rotate
/// unitarily inside the retained range, so nothing "leaks" numerically --
/// instead the true flow past the boundary is reflected back. After the
/// rotation, any weight that settled on the clipped edges of an incomplete
/// block would have crossed them in the untruncated map; if that edge weight
/// exceeds overflow_tol the result is rejected as a truncation overflow.
inline FockState apply_mixer(const FockState& state, int ax1, int ax2, double t,
                             double r, double overflow_tol) {
  const ModeLayout& layout = state.layout();
  int d1 = layout.cutoff(ax1) + 1;
  int d2 = layout.cutoff(ax2) + 1;
  std::size_t s1 = layout.stride(ax1);
  std::size_t s2 = layout.stride(ax2);
  const MixerBlocks& mb = mixer_blocks(d1, d2, t, r);

  int axes[2] = {ax1, ax2};
  FockState out = state;
  auto amps = mode_op_access::amplitudes(out);
  int max_block = std::min(d1, d2);
  Eigen::VectorXd vre(max_block), vim(max_block), wre(max_block), wim(max_block);
  compensated_sum edge_weight;

  for_each_zero_index(layout, axes, [&](std::size_t base) {
    for (int total = 0; total <= (d1 - 1) + (d2 - 1); ++total) {
      const Eigen::MatrixXd& block = mb.blocks[static_cast<std::size_t>(total)];
      int lo = mb.lo_n1(total);
      int hi = mb.hi_n1(total);
      int size = static_cast<int>(block.rows());
      if (size > 1) {
        for (int i = 0; i < size; ++i) {
          std::size_t idx = base + static_cast<std::size_t>(lo + i) * s1 +
                            static_cast<std::size_t>(total - lo - i) * s2;
          vre(i) = amps[idx].real();
          vim(i) = amps[idx].imag();
        }
        wre.head(size).noalias() = block * vre.head(size);
        wim.head(size).noalias() = block * vim.head(size);
        for (int i = 0; i < size; ++i) {
          std::size_t idx = base + static_cast<std::size_t>(lo + i) * s1 +
                            static_cast<std::size_t>(total - lo - i) * s2;
          amps[idx] = cplx{wre(i), wim(i)};
        }
      }
      if (!mb.complete(total)) {
        if (hi < total) {  // clipped by the ax1 cutoff
          std::size_t idx = base + static_cast<std::size_t>(hi) * s1 +
                            static_cast<std::size_t>(total - hi) * s2;
          edge_weight.add(std::norm(amps[idx]));
        }
        if (lo > 0) {  // clipped by the ax2 cutoff
          std::size_t idx = base + static_cast<std::size_t>(lo) * s1 +
                            static_cast<std::size_t>(total - lo) * s2;
          edge_weight.add(std::norm(amps[idx]));
        }
      }
    }
  });

  if (edge_weight.value() > overflow_tol) {
    throw truncation_error(
        "two-mode mixer: weight " + std::to_string(edge_weight.value()) +
        " rests on cutoff-clipped block edges after mixing; increase the cutoffs");
  }
  return out;
}

}  // namespace detail

/// Beam splitter on modes (m1, m2) with real amplitude transmittance t and
/// reflectance r. Acts on creation operators as
///   a1^dag -> t a1^dag + r a2^dag,   a2^dag -> -r a1^dag + t a2^dag,
/// i.e. a real rotation with the minus sign on the second row; reflection
/// phases are not modeled and any constant offset is absorbed into the swept
/// local-oscillator phase.
inline FockState apply_beam_splitter(const FockState& state, Mode m1, Mode m2,
                                     double t, double r,
                                     double overflow_tol = kTruncationBudget) {
  detail::check_mixer_params(t, r);
  const ModeLayout& layout = state.layout();
  int ax1 = layout.axis_of(m1);
  int ax2 = layout.axis_of(m2);
  if (ax1 == ax2) {
    throw config_error("beam splitter requires two distinct modes");
  }
  return detail::apply_mixer(state, ax1, ax2, t, r, overflow_tol);
}

/// Result of a polarizer: the transformed state plus the relabeled output
/// modes. c is the transmitted (detector-facing) mode, d the rejected mode;
/// d stays in the state and is never traced out.
struct PolarizerResult {
  FockState state;
  Mode c;
  Mode d;
};

/// Polarizer mixing the signal-polarized mode a with the LO-polarized mode b.
/// Same rotation as apply_beam_splitter; the outputs are relabeled a -> c
/// (transmitted towards the detector) and b -> d (rejected).
inline PolarizerResult apply_polarizer(const FockState& state, Mode a, Mode b,
                                       double t, double r,
                                       double overflow_tol = kTruncationBudget) {
  return PolarizerResult{apply_beam_splitter(state, a, b, t, r, overflow_tol), a, b};
}

/// Phase plate: multiplies each basis amplitude by exp(i * n * phi) on the
/// given mode. Norm is preserved exactly.
inline FockState apply_phase(const FockState& state, Mode mode, double phi) {
  const ModeLayout& layout = state.layout();
  int axis = layout.axis_of(mode);
  std::size_t stride = layout.stride(axis);
  std::size_t axis_dim = static_cast<std::size_t>(layout.cutoff(axis)) + 1;

  std::vector<cplx> phases(axis_dim);
  for (std::size_t n = 0; n < axis_dim; ++n) {
    phases[n] = std::polar(1.0, phi * static_cast<double>(n));
  }

  FockState out = state;
  auto amps = mode_op_access::amplitudes(out);
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    amps[idx] *= phases[(idx / stride) % axis_dim];
  }
  return out;
}

/// Coherent displacement D(beta) on one mode via the truncated-generator
/// matrix exponential. Refuses to run if the mode's cutoff is below the
/// truncation policy for |beta| rather than silently truncating.
inline FockState apply_displacement(const FockState& state, Mode mode, cplx beta) {
  const ModeLayout& layout = state.layout();
  int axis = layout.axis_of(mode);
  int cut = layout.cutoff(axis);
  double mag = std::abs(beta);
  if (mag == 0.0) return state;
  if (cut < required_cutoff(mag)) {
    throw config_error("cutoff " + std::to_string(cut) + " on mode " +
                       to_string(mode) + " is below the truncation policy (" +
                       std::to_string(required_cutoff(mag)) +
                       ") for displacement |beta| = " + std::to_string(mag));
  }

  int dim = cut + 1;
  const Eigen::MatrixXcd& disp = detail::displacement_matrix(dim, beta);
  std::size_t stride = layout.stride(axis);

  FockState out = state;
  auto amps = mode_op_access::amplitudes(out);
  int other_axes[1] = {axis};
  Eigen::VectorXcd v(dim), w(dim);
  detail::for_each_zero_index(layout, other_axes, [&](std::size_t base) {
    for (int n = 0; n < dim; ++n) {
      v(n) = amps[base + static_cast<std::size_t>(n) * stride];
    }
    w.noalias() = disp * v;
    for (int n = 0; n < dim; ++n) {
      amps[base + static_cast<std::size_t>(n) * stride] = w(n);
    }
  });
  return out;
}

/// Declarative description of one optical element.
enum class ElementKind { beam_splitter, polarizer, phase_plate, displacement };

struct ElementDescriptor {
  ElementKind kind;
  std::vector<Mode> targets;
  double t = 1.0;
  double r = 0.0;
  double phi = 0.0;
  cplx beta{0.0, 0.0};

  static ElementDescriptor beam_splitter(Mode m1, Mode m2, double t, double r) {
    detail::check_mixer_params(t, r);
    return ElementDescriptor{ElementKind::beam_splitter, {m1, m2}, t, r, 0.0, {}};
  }

  static ElementDescriptor balanced_beam_splitter(Mode m1, Mode m2) {
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return beam_splitter(m1, m2, inv_sqrt2, inv_sqrt2);
  }

  static ElementDescriptor polarizer(Mode a, Mode b, double t, double r) {
    detail::check_mixer_params(t, r);
    return ElementDescriptor{ElementKind::polarizer, {a, b}, t, r, 0.0, {}};
  }

  /// Polarizer from the rotation angle psi (radians): t = cos psi, r = sin psi.
  /// Mirrors the lab knob; a couple of degrees gives r ~ 0.035.
  static ElementDescriptor polarizer_angle(Mode a, Mode b, double psi) {
    return polarizer(a, b, std::cos(psi), std::sin(psi));
  }

  static ElementDescriptor phase_plate(Mode m, double phi) {
    return ElementDescriptor{ElementKind::phase_plate, {m}, 1.0, 0.0, phi, {}};
  }

  static ElementDescriptor displacement(Mode m, cplx beta) {
    return ElementDescriptor{ElementKind::displacement, {m}, 1.0, 0.0, 0.0, beta};
  }
};

inline FockState apply_element(const FockState& state, const ElementDescriptor& e,
                               double overflow_tol = kTruncationBudget) {
  switch (e.kind) {
    case ElementKind::beam_splitter:
      return apply_beam_splitter(state, e.targets[0], e.targets[1], e.t, e.r,
                                 overflow_tol);
    case ElementKind::polarizer:
      return apply_polarizer(state, e.targets[0], e.targets[1], e.t, e.r,
                             overflow_tol)
          .state;
    case ElementKind::phase_plate:
      return apply_phase(state, e.targets[0], e.phi);
    case ElementKind::displacement:
      return apply_displacement(state, e.targets[0], e.beta);
  }
  throw config_error("unknown element kind");
}

}  // namespace bellsim
