// Copyright 2026 The owaelicit Authors
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

namespace owaelicit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: dimension mismatches, out-of-range parameters,
/// malformed programs or files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The optimization backend could not produce the requested answer
/// (iteration limit, numerical breakdown, unexpected infeasibility).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace owaelicit
