#include "qpc/errors.hpp"

namespace qpc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroOnContour: return "ZeroOnContour";
    case ErrorKind::NotRepresentable: return "NotRepresentable";
    case ErrorKind::IdenticallyZero: return "IdenticallyZero";
    case ErrorKind::NoTorusZeros: return "NoTorusZeros";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::InsufficientDepth: return "InsufficientDepth";
    case ErrorKind::DegenerateBeta: return "DegenerateBeta";
    case ErrorKind::NotRealValued: return "NotRealValued";
    case ErrorKind::ZeroC: return "ZeroC";
    case ErrorKind::ExactSingularHit: return "ExactSingularHit";
    case ErrorKind::IdenticallyZeroDet: return "IdenticallyZeroDet";
    case ErrorKind::IrrationalFrequency: return "IrrationalFrequency";
    case ErrorKind::InsufficientQ: return "InsufficientQ";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qpc
