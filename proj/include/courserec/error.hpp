#ifndef COURSEREC_ERROR_HPP_
#define COURSEREC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace courserec {

enum class ErrorKind {
  ParseError,
  DuplicateCode,
  UnknownCourse,
  UnknownDegree,
  GapInSemesters,
  UnknownStudent,
  DuplicateStudent,
  DegreeMismatch,
  DuplicateMark,
  EmptyHistory,
  EmptySchemes,
  ZeroSimilaritySum,
  NoActualMark,
  InsufficientData,
  InvalidArgument,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateCode: return "DuplicateCode";
    case ErrorKind::UnknownCourse: return "UnknownCourse";
    case ErrorKind::UnknownDegree: return "UnknownDegree";
    case ErrorKind::GapInSemesters: return "GapInSemesters";
    case ErrorKind::UnknownStudent: return "UnknownStudent";
    case ErrorKind::DuplicateStudent: return "DuplicateStudent";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DuplicateMark: return "DuplicateMark";
    case ErrorKind::EmptyHistory: return "EmptyHistory";
    case ErrorKind::EmptySchemes: return "EmptySchemes";
    case ErrorKind::ZeroSimilaritySum: return "ZeroSimilaritySum";
    case ErrorKind::NoActualMark: return "NoActualMark";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// HTTP layer and the CLI can map it to a status / exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string detail = {})
      : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace courserec

#endif  // COURSEREC_ERROR_HPP_
