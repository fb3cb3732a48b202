#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sevpred {

enum class ErrorCode {
  // method_parser
  UnterminatedLiteral,
  UnterminatedComment,
  UnbalancedBraces,
  EmptyMethod,
  // metrics
  EmptyFit,
  // corpus
  UnknownSeverityLabel,
  MalformedRecord,
  CorpusTooSmall,
  // classifiers
  DimensionMismatch,
  NonFiniteFeature,
  UnfittedModel,
  // eval
  LabelOutOfRange,
  EmptyInput,
  // fusion
  WrongArity,
  NLTooLarge,
  // plumbing
  Io,
  Format,
};

std::string_view to_string(ErrorCode code);

/// Base of every data error raised by the library. The CLI maps these to
/// exit code 2; anything else escaping is an internal error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sevpred
