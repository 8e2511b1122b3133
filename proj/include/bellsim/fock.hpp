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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bellsim/detail/numeric.hpp"
#include "bellsim/errors.hpp"

namespace bellsim {

using cplx = std::complex<double>;

/// Which spatial arm of the interferometer a mode lives in.
enum class Arm { input, T, R };

/// Polarization channel: the single-photon (signal) polarization or the
/// orthogonal local-oscillator polarization.
enum class Pol { signal, lo };

/// Label of one optical mode: (arm, polarization).
struct Mode {
  Arm arm;
  Pol pol;

  friend bool operator==(const Mode&, const Mode&) = default;
};

inline std::string to_string(Mode m) {
  std::string s;
  switch (m.arm) {
    case Arm::input: s = "input"; break;
    case Arm::T: s = "T"; break;
    case Arm::R: s = "R"; break;
  }
  s += m.pol == Pol::signal ? ".signal" : ".lo";
  return s;
}

/// Ordered registry of modes with per-mode photon-number cutoffs.
///
/// Basis indexing is row-major over the layout order with mode 0 slowest:
/// index = ((n_0*(c_1+1) + n_1)*(c_2+1) + n_2)*... . The occupation of mode
/// k ranges over 0..cutoff(k), so each axis has dimension cutoff(k)+1.
class ModeLayout {
 public:
  ModeLayout(std::vector<Mode> modes, std::vector<int> cutoffs)
      : modes_(std::move(modes)), cutoffs_(std::move(cutoffs)) {
    if (modes_.empty() || modes_.size() > 4) {
      throw config_error("mode layout must contain between 1 and 4 modes");
    }
    if (modes_.size() != cutoffs_.size()) {
      throw config_error("one cutoff required per mode");
    }
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (cutoffs_[i] < 1) {
        throw config_error("cutoff for mode " + to_string(modes_[i]) +
                           " must be >= 1");
      }
      for (std::size_t j = i + 1; j < modes_.size(); ++j) {
        if (modes_[i] == modes_[j]) {
          throw config_error("duplicate mode label " + to_string(modes_[i]));
        }
      }
    }
    strides_.assign(modes_.size(), 1);
    for (int k = static_cast<int>(modes_.size()) - 2; k >= 0; --k) {
      strides_[k] = strides_[k + 1] * static_cast<std::size_t>(cutoffs_[k + 1] + 1);
    }
    dim_ = strides_[0] * static_cast<std::size_t>(cutoffs_[0] + 1);
  }

  int num_modes() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }
  int cutoff(int axis) const { return cutoffs_[static_cast<std::size_t>(axis)]; }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  std::size_t dim() const { return dim_; }

  int axis_of(Mode m) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (modes_[i] == m) return static_cast<int>(i);
    }
    throw config_error("unknown mode label " + to_string(m));
  }

  bool contains(Mode m) const {
    return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
  }

  std::size_t index_of(std::span<const int> occupation) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      idx += static_cast<std::size_t>(occupation[k]) * strides_[k];
    }
    return idx;
  }

  void occupation_at(std::size_t index, std::span<int> occupation) const {
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      occupation[k] = static_cast<int>((index / strides_[k]) %
                                       static_cast<std::size_t>(cutoffs_[k] + 1));
    }
  }

  friend bool operator==(const ModeLayout& a, const ModeLayout& b) {
    return a.modes_ == b.modes_ && a.cutoffs_ == b.cutoffs_;
  }

 private:
  std::vector<Mode> modes_;
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 0;
};

/// Pure state of up to four bosonic modes in a truncated number basis.
/// Values are immutable through the public surface; every operation takes a
/// state in and hands a new state out, so states can move freely across
/// threads.
class FockState {
 public:
  explicit FockState(ModeLayout layout)
      : layout_(std::move(layout)), amps_(layout_.dim(), cplx{0.0, 0.0}) {}

  FockState(ModeLayout layout, std::vector<cplx> amplitudes)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.dim()) {
      throw config_error("amplitude vector length does not match layout dimension");
    }
  }

  const ModeLayout& layout() const { return layout_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx amplitude(std::span<const int> occupation) const {
    return amps_[layout_.index_of(occupation)];
  }

 private:
  friend FockState make_vacuum(const ModeLayout&);
  friend FockState create_photon(const FockState&, Mode);
  friend FockState project_zero_in_modes(const FockState&, std::span<const Mode>);
  friend FockState add_scaled(const FockState&, const FockState&, cplx);
  friend FockState scaled(const FockState&, cplx);
  friend class mode_op_access;

  std::span<cplx> mutable_amplitudes() { return amps_; }

  ModeLayout layout_;
  std::vector<cplx> amps_;
};

/// Grants the optics element implementations write access to amplitudes
/// while keeping FockState immutable for everyone else.
class mode_op_access {
 public:
  static std::span<cplx> amplitudes(FockState& s) { return s.mutable_amplitudes(); }
};

/// |0,...,0>: unit amplitude on the all-zeros tuple.
inline FockState make_vacuum(const ModeLayout& layout) {
  FockState s(layout);
  s.amps_[0] = cplx{1.0, 0.0};
  return s;
}

/// Applies the raising map |n> -> sqrt(n+1)|n+1> on one mode. The caller is
/// responsible for renormalizing when assembling physical states. Throws
/// truncation_error if any nonzero amplitude sits at the cutoff already.
inline FockState create_photon(const FockState& state, Mode mode) {
  const ModeLayout& layout = state.layout();
  int axis = layout.axis_of(mode);
  int cut = layout.cutoff(axis);
  std::size_t stride = layout.stride(axis);
  std::size_t axis_dim = static_cast<std::size_t>(cut) + 1;
  std::size_t dim = layout.dim();

  const auto& in = state.amps_;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    int n = static_cast<int>((idx / stride) % axis_dim);
    if (n == cut && (in[idx].real() != 0.0 || in[idx].imag() != 0.0)) {
      throw truncation_error("create_photon would spill past cutoff " +
                             std::to_string(cut) + " on mode " + to_string(mode));
    }
  }

  FockState out(layout);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    int n = static_cast<int>((idx / stride) % axis_dim);
    if (n == cut) continue;
    out.amps_[idx + stride] = in[idx] * std::sqrt(static_cast<double>(n + 1));
  }
  return out;
}

/// Sum of |amplitude|^2 in a fixed order with compensated accumulation.
inline double norm_squared(const FockState& state) {
  detail::compensated_sum acc;
  for (const cplx& a : state.amplitudes()) {
    acc.add(a.real() * a.real() + a.imag() * a.imag());
  }
  return acc.value();
}

/// <a|b> in a fixed order with compensated accumulation.
inline cplx inner_product(const FockState& a, const FockState& b) {
  if (!(a.layout() == b.layout())) {
    throw config_error("inner_product requires identical layouts");
  }
  detail::compensated_csum acc;
  auto av = a.amplitudes();
  auto bv = b.amplitudes();
  for (std::size_t i = 0; i < av.size(); ++i) {
    acc.add(std::conj(av[i]) * bv[i]);
  }
  return acc.value();
}

namespace detail {

/// Visits every basis index whose occupation is zero in each of the given
/// axes, in ascending index order.
template <typename F>
void for_each_zero_index(const ModeLayout& layout, std::span<const int> zero_axes,
                         F&& visit) {
  int k = layout.num_modes();
  std::vector<bool> pinned(static_cast<std::size_t>(k), false);
  for (int a : zero_axes) pinned[static_cast<std::size_t>(a)] = true;

  std::vector<int> occ(static_cast<std::size_t>(k), 0);
  for (;;) {
    std::size_t idx = 0;
    for (int a = 0; a < k; ++a) {
      idx += static_cast<std::size_t>(occ[static_cast<std::size_t>(a)]) *
             layout.stride(a);
    }
    visit(idx);
    int a = k - 1;
    for (; a >= 0; --a) {
      if (pinned[static_cast<std::size_t>(a)]) continue;
      if (occ[static_cast<std::size_t>(a)] < layout.cutoff(a)) {
        ++occ[static_cast<std::size_t>(a)];
        break;
      }
      occ[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
}

inline std::vector<int> axes_of(const ModeLayout& layout, std::span<const Mode> modes) {
  if (modes.empty()) {
    throw config_error("mode set must not be empty");
  }
  std::vector<int> axes;
  axes.reserve(modes.size());
  for (Mode m : modes) {
    int a = layout.axis_of(m);
    if (std::find(axes.begin(), axes.end(), a) != axes.end()) {
      throw config_error("duplicate mode label " + to_string(m) + " in mode set");
    }
    axes.push_back(a);
  }
  return axes;
}

}  // namespace detail

/// <psi| P |psi> where P projects each listed mode onto occupation zero and
/// acts as identity on every other mode.
inline double prob_zero_in_modes(const FockState& state, std::span<const Mode> modes) {
  auto axes = detail::axes_of(state.layout(), modes);
  detail::compensated_sum acc;
  auto amps = state.amplitudes();
  detail::for_each_zero_index(state.layout(), axes, [&](std::size_t idx) {
    acc.add(std::norm(amps[idx]));
  });
  return acc.value();
}

inline double prob_zero_in_modes(const FockState& state,
                                 std::initializer_list<Mode> modes) {
  return prob_zero_in_modes(state, std::span<const Mode>(modes.begin(), modes.size()));
}

/// P|psi> for the same projector: amplitudes with any photon in the listed
/// modes are dropped. The result is intentionally not renormalized.
inline FockState project_zero_in_modes(const FockState& state,
                                       std::span<const Mode> modes) {
  auto axes = detail::axes_of(state.layout(), modes);
  FockState out(state.layout());
  auto in = state.amplitudes();
  detail::for_each_zero_index(state.layout(), axes, [&](std::size_t idx) {
    out.amps_[idx] = in[idx];
  });
  return out;
}

/// Mean photon number <n> of one mode.
inline double mean_occupation(const FockState& state, Mode mode) {
  const ModeLayout& layout = state.layout();
  int axis = layout.axis_of(mode);
  std::size_t stride = layout.stride(axis);
  std::size_t axis_dim = static_cast<std::size_t>(layout.cutoff(axis)) + 1;
  detail::compensated_sum acc;
  auto amps = state.amplitudes();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    int n = static_cast<int>((idx / stride) % axis_dim);
    if (n > 0) acc.add(static_cast<double>(n) * std::norm(amps[idx]));
  }
  return acc.value();
}

/// a + c*b over identical layouts.
inline FockState add_scaled(const FockState& a, const FockState& b, cplx c) {
  if (!(a.layout() == b.layout())) {
    throw config_error("add_scaled requires identical layouts");
  }
  FockState out(a.layout());
  for (std::size_t i = 0; i < out.amps_.size(); ++i) {
    out.amps_[i] = a.amps_[i] + c * b.amps_[i];
  }
  return out;
}

inline FockState scaled(const FockState& a, cplx c) {
  FockState out(a.layout());
  for (std::size_t i = 0; i < out.amps_.size(); ++i) {
    out.amps_[i] = c * a.amps_[i];
  }
  return out;
}

/// state / ||state||. Throws numeric_error on the zero vector.
inline FockState normalized(const FockState& a) {
  double n2 = norm_squared(a);
  if (n2 <= 0.0) {
    throw numeric_error("cannot normalize a zero state");
  }
  return scaled(a, cplx{1.0 / std::sqrt(n2), 0.0});
}

/// |<a|b>|^2 between normalized states.
inline double overlap(const FockState& a, const FockState& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace bellsim
