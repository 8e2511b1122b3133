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

#include <stdexcept>
#include <string>

namespace bellsim {

/// Invalid user-supplied parameters or configuration (bad mode layout,
/// unknown mode labels, malformed config files, out-of-range knobs).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation would push amplitude past a mode's photon-number cutoff,
/// or the requested cutoff is too small for the requested displacement.
class truncation_error : public std::runtime_error {
 public:
  explicit truncation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical result is degenerate (e.g. visibility of an all-zero fringe)
/// or a fit cannot be formed from the given data.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bellsim
