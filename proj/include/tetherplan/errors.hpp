// Copyright 2026 The Tetherplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>

namespace tetherplan {

// Base class for all failures raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration, input file, or argument. The CLI maps this to
// exit code 2; everything else derived from Error maps to exit code 1.
struct ConfigError : Error {
  using Error::Error;
};

// A spatial query was made from inside an obstacle or outside the workspace.
struct CollisionError : Error {
  using Error::Error;
};

// Tether geometry degenerated: zero length, pole crossing, or a singular
// velocity Jacobian.
struct SingularityError : Error {
  using Error::Error;
};

// No valid contact arrangement exists for the requested motion.
struct TetherInfeasibleError : Error {
  using Error::Error;
};

}  // namespace tetherplan
