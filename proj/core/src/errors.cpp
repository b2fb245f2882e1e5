#include "ricci_forge/errors.hpp"

namespace rf {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Margin: return "margin";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::DegeneratePlane: return "degenerate-plane";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Capability: return "capability";
    case ErrorKind::RootFind: return "root-find";
    case ErrorKind::NoWaist: return "no-waist";
    case ErrorKind::InvalidFibration: return "invalid-fibration";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::Seam: return "seam";
    case ErrorKind::Mismatch: return "mismatch";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Infeasible: return "infeasible";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace rf
