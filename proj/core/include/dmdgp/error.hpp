#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmdgp {

enum class ErrorCode {
  DimensionMismatch,
  NegativeDeterminant,
  DegenerateSpan,
  SingularPivot,
  InvalidInstance,
  NumericalBreakdown,
  BudgetExceeded,
  GenericityFailure,
  ParseError,
  TreeDiscarded,
  IndexOutOfRange,
  GroupTooLarge,
  UpsilonFails,
  SubtreeNotFull,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is the
/// machine-readable part; what() carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class ParseIssue { Syntax, MissingField, BadValue, DuplicateEdge };

std::string_view to_string(ParseIssue issue);

class ParseError : public Error {
 public:
  ParseError(ParseIssue issue, int line, const std::string& message);

  ParseIssue issue() const noexcept { return issue_; }
  /// 1-based line of the offending input, 0 when the problem is global.
  int line() const noexcept { return line_; }

 private:
  ParseIssue issue_;
  int line_;
};

}  // namespace dmdgp
