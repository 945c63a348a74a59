#include "dmdgp/error.hpp"

#include <fmt/format.h>

namespace dmdgp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeDeterminant: return "NegativeDeterminant";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::SingularPivot: return "SingularPivot";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::GenericityFailure: return "GenericityFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TreeDiscarded: return "TreeDiscarded";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::UpsilonFails: return "UpsilonFails";
    case ErrorCode::SubtreeNotFull: return "SubtreeNotFull";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(ParseIssue issue) {
  switch (issue) {
    case ParseIssue::Syntax: return "Syntax";
    case ParseIssue::MissingField: return "MissingField";
    case ParseIssue::BadValue: return "BadValue";
    case ParseIssue::DuplicateEdge: return "DuplicateEdge";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ParseError::ParseError(ParseIssue issue, int line, const std::string& message)
    : Error(ErrorCode::ParseError,
            line > 0 ? fmt::format("line {}: {} ({})", line, message, to_string(issue))
                     : fmt::format("{} ({})", message, to_string(issue))),
      issue_(issue),
      line_(line) {}

}  // namespace dmdgp
