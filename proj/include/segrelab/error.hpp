#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace segrelab {

enum class ErrorKind {
  DivisionByZero,
  NotPrime,
  InvalidDimension,
  AmbientMismatch,
  ShapeMismatch,
  LineTooShort,
  IsolatedPoint,
  TwoLinesShareTwoPoints,
  PointOutOfRange,
  EmptyStructure,
  NotAHyperplane,
  CapExceeded,
  LineNotInSubset,
  EmptyPointSet,
  TooFewFactors,
  IndexOutOfRange,
  WrongArity,
  NoFormExists,
  HypothesisFailed,
  NotParallelismPreserving,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::LineTooShort: return "LineTooShort";
    case ErrorKind::IsolatedPoint: return "IsolatedPoint";
    case ErrorKind::TwoLinesShareTwoPoints: return "TwoLinesShareTwoPoints";
    case ErrorKind::PointOutOfRange: return "PointOutOfRange";
    case ErrorKind::EmptyStructure: return "EmptyStructure";
    case ErrorKind::NotAHyperplane: return "NotAHyperplane";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::LineNotInSubset: return "LineNotInSubset";
    case ErrorKind::EmptyPointSet: return "EmptyPointSet";
    case ErrorKind::TooFewFactors: return "TooFewFactors";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::NoFormExists: return "NoFormExists";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::NotParallelismPreserving: return "NotParallelismPreserving";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace segrelab
