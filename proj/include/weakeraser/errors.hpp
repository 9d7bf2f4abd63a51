// Copyright 2026 The weakeraser Authors
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

namespace weakeraser {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain numeric argument.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Discretization or simulation parameters that cannot work (grid too small,
/// pointer translation that would alias, mismatched grids).
class ConfigurationError : public Error {
  public:
    using Error::Error;
};

/// A value violates a physical invariant (unnormalized spinor or
/// coefficients, non-orthogonal basis).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// The post-selected outcome has (numerically) zero probability, so the
/// conditional quantity is undefined.
class DegeneratePostSelection : public Error {
  public:
    using Error::Error;
};

/// A sub-ensemble selection matched no events.
class EmptySubEnsemble : public Error {
  public:
    using Error::Error;
};

} // namespace weakeraser
