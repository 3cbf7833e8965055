// Copyright 2026 The Faraday Filter Authors
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

namespace faraday {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument or configuration violates a precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration failed schema validation. The message names the field.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : DomainError(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical or physical invariant was breached during a computation.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// The integrator left the positive cone by more than the tolerated floor.
/// Usually means the time step is too large.
class StepRejected : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

}  // namespace faraday
