#include "sevpred/error.hpp"

namespace sevpred {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnterminatedLiteral: return "UnterminatedLiteral";
    case ErrorCode::UnterminatedComment: return "UnterminatedComment";
    case ErrorCode::UnbalancedBraces: return "UnbalancedBraces";
    case ErrorCode::EmptyMethod: return "EmptyMethod";
    case ErrorCode::EmptyFit: return "EmptyFit";
    case ErrorCode::UnknownSeverityLabel: return "UnknownSeverityLabel";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::CorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::UnfittedModel: return "UnfittedModel";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::NLTooLarge: return "NLTooLarge";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace sevpred
