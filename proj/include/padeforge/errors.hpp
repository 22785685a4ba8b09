#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace padeforge {

enum class ErrorKind {
  InvalidArgument,
  DenominatorVanishesAtZero,
  TruncationExceeded,
  InsufficientTruncation,
  NotInDpq,
  SingularSystem,
  DirectionViolation,
  InterpolationInconsistent,
  NoAdmissibleD,
  EmptyCompact,
  NonFiniteValue,
  RootFindingDivergence,
  IndexTooSmall,
  CertificateFailed,
  PoleInRegion,
  SurrogateDivergence,
  NoDeltaFound,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type; kind() is the
// stable discriminator, what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);
  Error(ErrorKind kind, const std::string& detail, std::complex<double> where);

  ErrorKind kind() const noexcept { return kind_; }
  // Offending point for NonFiniteValue and pole-related failures.
  const std::optional<std::complex<double>>& where() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::optional<std::complex<double>> where_;
};

}  // namespace padeforge
