// Copyright 2026 qresynth contributors
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

namespace qresynth {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidCircuit : Error {
  using Error::Error;
};
struct InvalidDag : Error {
  using Error::Error;
};
struct CycleDetected : InvalidDag {
  using InvalidDag::InvalidDag;
};
struct OperandOutOfRange : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct NotUnitary : Error {
  using Error::Error;
};
struct DisconnectedMap : Error {
  using Error::Error;
};
struct ZeroOriginal : Error {
  using Error::Error;
};
struct MixedQubitCounts : Error {
  using Error::Error;
};
struct MissingCheckpoint : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace qresynth
