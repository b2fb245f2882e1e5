#pragma once

#include <stdexcept>
#include <string>

namespace rf {

enum class ErrorKind {
  Margin,
  Singularity,
  DegeneratePlane,
  Precondition,
  Pole,
  Capability,
  RootFind,
  NoWaist,
  InvalidFibration,
  HypothesisViolation,
  Degenerate,
  InternalConsistency,
  Seam,
  Mismatch,
  Domain,
  Infeasible,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rf
