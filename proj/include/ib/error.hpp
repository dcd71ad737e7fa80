#pragma once

#include <stdexcept>
#include <string>

namespace ib {

enum class ErrorKind {
  SyntaxError,
  UnknownSymbol,
  NonAutonomous,
  ParityViolation,
  DuplicateCoord,
  OddEvaluation,
  UnboundSymbol,
  Overflow,
  NonConservedHamiltonian,
  OddHamiltonian,
  GaugeFreedom,
  Inconsistent,
  UnsolvableConstraint,
  BasisInsufficient,
  NonUniqueBrackets,
  CovarianceViolation,
  JacobiViolation,
  EquivalenceViolation,
  StepRejected,
  NonTerminating,
  SingularMatrix,
  InvalidArgument,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Error(ErrorKind kind, const std::string& what, int line, int column)
      : std::runtime_error(what), kind_(kind), line_(line), column_(column) {}

  ErrorKind kind() const { return kind_; }
  // 1-based source position for parse diagnostics, 0 when not applicable.
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ErrorKind kind_;
  int line_ = 0;
  int column_ = 0;
};

}  // namespace ib
