#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace contactline {

enum class ErrorKind {
  NotUnitary,
  NotNormalized,
  InvalidTransfer,
  NumericalRank,
  NoTransferForm,
  DegenerateSphere,
  SingularSystem,
  NotExchangeSymmetric,
  ZeroCoupling,
  InvalidArgument,
  NoRoots,
  TrackingLost,
  EmptyData,
  Io,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::InvalidTransfer: return "InvalidTransfer";
    case ErrorKind::NumericalRank: return "NumericalRank";
    case ErrorKind::NoTransferForm: return "NoTransferForm";
    case ErrorKind::DegenerateSphere: return "DegenerateSphere";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NotExchangeSymmetric: return "NotExchangeSymmetric";
    case ErrorKind::ZeroCoupling: return "ZeroCoupling";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoRoots: return "NoRoots";
    case ErrorKind::TrackingLost: return "TrackingLost";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI) can report it by name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace contactline
