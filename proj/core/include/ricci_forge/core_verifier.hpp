#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricci_forge/profile.hpp"
#include "ricci_forge/submersion_ricci.hpp"

namespace rf::core {

enum class HChoice { Const, Cosh };

struct CoreSpec {
  submersion::Algebra algebra = submersion::Algebra::C;
  int n = 2;
  HChoice h_choice = HChoice::Cosh;
  double param = 100.0;  // epsilon for Const, N for Cosh
  int samples = 2048;
  double margin = 1e-4;
};

struct ComponentMin {
  double value = 0.0;
  double at = 0.0;
};

struct GridReport {
  double t1 = 0.0;
  double radius = 0.0;
  double waist_defect = 0.0;
  ComponentMin min_tt, min_xx, min_vv;
  bool has_vertical = true;
  double max_offdiag = 0.0;
  double cap_limit_tt = 0.0, cap_limit_xx = 0.0, cap_limit_vv = 0.0;
  double II_horizontal = 0.0;
  double II_vertical = 0.0;
  bool ricci_positive = false;
  bool offdiag_zero = false;
  bool round_boundary = false;
  bool convex_boundary = false;
  bool smooth_f = false;
  bool smooth_h = false;
  std::vector<std::string> smoothness_defects;
  int samples = 0;
  double margin = 0.0;
  bool pass() const {
    return ricci_positive && offdiag_zero && round_boundary && convex_boundary && smooth_f &&
           smooth_h;
  }
};

ScalarProfile make_h(const CoreSpec& spec);
ScalarProfile make_f();

double find_waist(const ScalarProfile& f, const ScalarProfile& h);

// Limit of the Ricci components at the cap t -> 0 for f(0)=0, f'(0)=1, h even.
submersion::RicciComponents cap_limit_ricci(const submersion::FibrationData& fib,
                                            const ScalarProfile& f, const ScalarProfile& h);

GridReport verify_core(const CoreSpec& spec);
GridReport verify_core(const submersion::FibrationData& fib, const ScalarProfile& f,
                       const ScalarProfile& h, int samples, double margin);

struct SearchResult {
  bool feasible = false;
  double N = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
  std::string reason;
};

SearchResult search_cosh_N(submersion::Algebra algebra, int n, double N_lo, double N_hi,
                           int samples = 2048, double resolution = 0.01);

// Mean-value witness for the d = 1 obstruction: a grid point in (0, t1) with
// h'' > 0 and the resulting ric_tt.
struct ObstructionWitness {
  bool found = false;
  double t = 0.0;
  double h2 = 0.0;
  double ric_tt = 0.0;
};
ObstructionWitness obstruction_witness(const submersion::FibrationData& fib,
                                       const ScalarProfile& h, double t1, int samples = 2048);

}  // namespace rf::core
