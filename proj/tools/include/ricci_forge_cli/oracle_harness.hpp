#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rf::oracle {

struct Comparison {
  std::string instance;
  std::string quantity;
  double t = 0.0;
  double x = 0.0;
  double closed = 0.0;
  double oracle = 0.0;
  double defect = 0.0;  // |closed - oracle| / max(|closed|, floor / tol)
  bool pass = false;
};

struct OracleSummary {
  std::vector<Comparison> rows;
  double max_defect = 0.0;
  int failures = 0;
  bool pass = false;
};

struct OracleOptions {
  int instances = 20;
  int hopf_points = 5;
  std::uint64_t seed = 1;
  double rel_tol = 1e-4;
  double abs_floor = 1e-6;
};

// Random two-variable warps and the d = 2 Hopf chart against finite differences.
OracleSummary run_oracle(const OracleOptions& opt);

}  // namespace rf::oracle
