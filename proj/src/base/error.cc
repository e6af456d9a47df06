// base/error.cc

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

#include "fasr/base/error.h"

#include <atomic>
#include <iostream>

namespace fasr {

namespace {
std::atomic<bool> g_warnings_muted{false};
}

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidConfiguration: return "invalid-configuration";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kLoad: return "load";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kCompile: return "compile";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kDegenerateJacobian: return "degenerate-jacobian";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kStarvation: return "starvation";
    case ErrorKind::kEstimation: return "estimation";
    case ErrorKind::kEmptyVote: return "empty-vote";
    case ErrorKind::kScoring: return "scoring";
    case ErrorKind::kRefused: return "refused";
  }
  return "unknown";
}

void Fail(ErrorKind kind, const std::string &message) {
  throw Error(kind, message);
}

void Warn(const std::string &message) {
  if (!g_warnings_muted.load(std::memory_order_relaxed))
    std::cerr << "WARNING (fasr): " << message << '\n';
}

void SetWarningsMuted(bool muted) { g_warnings_muted.store(muted); }

}  // namespace fasr
