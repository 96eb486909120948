// Copyright 2026 The omnivi Authors.
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

#ifndef OMNIVI_ERRORS_H_
#define OMNIVI_ERRORS_H_

#include <stdexcept>
#include <string>

namespace omnivi {

enum class ErrorKind {
  kInput,          // caller passed out-of-range or malformed arguments
  kModelValidity,  // the game violates its probability / norm invariants
  kNumeric,        // degenerate linear algebra (negative radicand, ...)
  kSolver,         // LP failed to reach a feasible optimum
  kInternalState,  // learner bookkeeping is inconsistent
  kConfig,         // experiment configuration rejected
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void Require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) Fail(kind, what);
}

// Process exit code for the CLI.
int ExitCodeFor(ErrorKind kind);

}  // namespace omnivi

#endif  // OMNIVI_ERRORS_H_
