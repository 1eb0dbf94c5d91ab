/*
 * Copyright 2026 The polyrc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyrc {

enum class ErrorCode {
  kInvalidField,
  kFieldMismatch,
  kDivisionByZero,
  kGcdUndefined,
  kEmptyInput,
  kZeroInput,
  kNotCoprime,
  kBudgetExceeded,
  kInvalidModuli,
  kInvalidResidue,
  kMessageTooLarge,
  kErasedOperand,
  kInconsistentSubset,
  kSubsetLcmTooSmall,
  kContractViolation,
  kLengthMismatch,
  kOutOfRange,
  kUnequalDegrees,
  kParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidField: return "InvalidField";
    case ErrorCode::kFieldMismatch: return "FieldMismatch";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kGcdUndefined: return "GcdUndefined";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kZeroInput: return "ZeroInput";
    case ErrorCode::kNotCoprime: return "NotCoprime";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kInvalidModuli: return "InvalidModuli";
    case ErrorCode::kInvalidResidue: return "InvalidResidue";
    case ErrorCode::kMessageTooLarge: return "MessageTooLarge";
    case ErrorCode::kErasedOperand: return "ErasedOperand";
    case ErrorCode::kInconsistentSubset: return "InconsistentSubset";
    case ErrorCode::kSubsetLcmTooSmall: return "SubsetLcmTooSmall";
    case ErrorCode::kContractViolation: return "ContractViolation";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kUnequalDegrees: return "UnequalDegrees";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polyrc
