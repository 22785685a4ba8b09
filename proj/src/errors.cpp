#include "padeforge/errors.hpp"

namespace padeforge {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DenominatorVanishesAtZero: return "DenominatorVanishesAtZero";
    case ErrorKind::TruncationExceeded: return "TruncationExceeded";
    case ErrorKind::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorKind::NotInDpq: return "NotInDpq";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DirectionViolation: return "DirectionViolation";
    case ErrorKind::InterpolationInconsistent: return "InterpolationInconsistent";
    case ErrorKind::NoAdmissibleD: return "NoAdmissibleD";
    case ErrorKind::EmptyCompact: return "EmptyCompact";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::RootFindingDivergence: return "RootFindingDivergence";
    case ErrorKind::IndexTooSmall: return "IndexTooSmall";
    case ErrorKind::CertificateFailed: return "CertificateFailed";
    case ErrorKind::PoleInRegion: return "PoleInRegion";
    case ErrorKind::SurrogateDivergence: return "SurrogateDivergence";
    case ErrorKind::NoDeltaFound: return "NoDeltaFound";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {
std::string compose(ErrorKind kind, const std::string& detail) {
  std::string out(to_string(kind));
  if (!detail.empty()) {
    out += ": ";
    out += detail;
  }
  return out;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(compose(kind, detail)), kind_(kind) {}

Error::Error(ErrorKind kind, const std::string& detail, std::complex<double> where)
    : std::runtime_error(compose(kind, detail)), kind_(kind), where_(where) {}

}  // namespace padeforge
