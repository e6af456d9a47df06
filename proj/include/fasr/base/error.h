// base/error.h

// Copyright 2026  The fasr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef FASR_BASE_ERROR_H_
#define FASR_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace fasr {

enum class ErrorKind {
  kInvalidConfiguration,
  kEmptyInput,
  kInvalidInput,
  kIo,
  kLoad,
  kParse,
  kCompile,
  kDomain,
  kDegenerateJacobian,
  kNumeric,
  kInfeasible,
  kStarvation,
  kEstimation,
  kEmptyVote,
  kScoring,
  kRefused,
};

const char *ErrorKindName(ErrorKind kind);

/// All library failures are reported through this type; callers that need
/// to distinguish failure modes switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string &message);

// Writes "WARNING (fasr): <message>" to stderr unless warnings are muted.
void Warn(const std::string &message);
void SetWarningsMuted(bool muted);

}  // namespace fasr

#endif  // FASR_BASE_ERROR_H_
