#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace masrad {

enum class ErrorCode {
  kUnbalancedParentheses,
  kBothEmpty,
  kProviderUnavailable,
  kNoLetters,
  kEmptyGroup,
  kUnknownCategory,
  kSingleClass,
  kEmptyData,
  kSchemaMismatch,
  kLengthMismatch,
  kOverlappingSets,
  kEmptyGlossary,
  kDanglingReference,
  kIoFailure,
  kStoreBusy,
  kParse,
  kUsage,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnbalancedParentheses: return "UnbalancedParentheses";
    case ErrorCode::kBothEmpty: return "BothEmpty";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kNoLetters: return "NoLetters";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kUnknownCategory: return "UnknownCategory";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kEmptyData: return "EmptyData";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kOverlappingSets: return "OverlappingSets";
    case ErrorCode::kEmptyGlossary: return "EmptyGlossary";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kStoreBusy: return "StoreBusy";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kUsage: return "UsageError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace masrad
