// Copyright 2026 The qpa Authors
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

#ifndef QPA_ERRORS_HPP
#define QPA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qpa {

/// Malformed data: non-finite entries, wrong shapes, invalid states.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A parameter outside its admissible range (p < 1, non-dividing bin count, ...).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An enumeration or dimension cap was exceeded.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// An iterative solver hit its iteration budget. The concrete solver
/// attaches its best iterate (see ConvergenceFailure in divergence.hpp).
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qpa

#endif
