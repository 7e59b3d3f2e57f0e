// Copyright 2026 The Authors.
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

#ifndef CVARSEL_ERRORS_H_
#define CVARSEL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cvarsel {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto exit codes (2 config, 3 instance, 4 guard).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied parameter (alpha outside (0,1], Delta > Gamma, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// An ElementId that does not belong to the ground set.
class InvalidElementError : public Error {
 public:
  using Error::Error;
};

// A set that violates the matroid constraint it is evaluated under.
class MatroidViolationError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Curvature is undefined when some singleton has (numerically) zero value.
class ZeroSingletonError : public Error {
 public:
  using Error::Error;
};

// Raised by exhaustive routines when the enumeration guard trips.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

// Instance generation or parsing failure.
class InstanceError : public Error {
 public:
  using Error::Error;
};

class UnreachableError : public Error {
 public:
  using Error::Error;
};

// File could not be read or written; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvarsel

#endif  // CVARSEL_ERRORS_H_
