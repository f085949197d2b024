#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracekit {

enum class ErrorCode {
  UnknownLetter,
  UnknownProcess,
  InvalidAlphabet,
  AlphabetMismatch,
  UnknownEvent,
  NoAcceptingSet,
  NotAMap,
  CommutationViolation,
  SearchBudgetExceeded,
  WrongFragment,
  NotResetChain,
  HypothesisViolation,
  NotAcyclic,
  SyntaxError,
  ParseError,
  InvalidArgument,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLetter: return "UnknownLetter";
    case ErrorCode::UnknownProcess: return "UnknownProcess";
    case ErrorCode::InvalidAlphabet: return "InvalidAlphabet";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::UnknownEvent: return "UnknownEvent";
    case ErrorCode::NoAcceptingSet: return "NoAcceptingSet";
    case ErrorCode::NotAMap: return "NotAMap";
    case ErrorCode::CommutationViolation: return "CommutationViolation";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::WrongFragment: return "WrongFragment";
    case ErrorCode::NotResetChain: return "NotResetChain";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::NotAcyclic: return "NotAcyclic";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace tracekit
