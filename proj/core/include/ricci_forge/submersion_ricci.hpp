#pragma once

#include <string>

#include "ricci_forge/chart_calculus.hpp"
#include "ricci_forge/profile.hpp"

namespace rf::submersion {

enum class Algebra { R, C, H, O };

Algebra parse_algebra(const std::string& s);
const char* to_string(Algebra a);

struct FibrationData {
  Algebra algebra = Algebra::C;
  int d = 2;
  int n = 2;
  int dimE = 3;
  int dimB = 2;
  int dimF = 1;
  double ric_total = 2;
  double ric_base = 4;
  double ric_fiber = 0;
  bool degenerate_fiber = false;
};

struct RicciComponents {
  double ric_tt = 0.0;
  double ric_xx = 0.0;
  double ric_vv = 0.0;
  double ric_xv = 0.0;
  double ric_xt = 0.0;
  double ric_vt = 0.0;
  int m = 0;
  int n = 0;
  bool has_vertical = true;
};

FibrationData hopf_data(Algebra algebra, int n);

RicciComponents doubly_warped_ricci(const FibrationData& fib, const ScalarProfile& f,
                                    const ScalarProfile& h, double t);
RicciComponents doubly_warped_ricci(const FibrationData& fib, const Jet& f, const Jet& h);

RicciComponents perelman_s3_ricci(const ScalarProfile& f, const ScalarProfile& h, double t);
RicciComponents perelman_s3_ricci(const Jet& f, const Jet& h);

struct ConvexityResult {
  bool pass = false;
  double II_horizontal = 0.0;
  double II_vertical = 0.0;
};
ConvexityResult boundary_convexity(const ScalarProfile& f, const ScalarProfile& h, double t1);

// dt^2 + h^2/4 (dth^2 + sin^2 th dph^2) + f^2/4 (dps + cos th dph)^2 on (t, th, ph, ps)
chart::MetricChart hopf_s3_chart(const ScalarProfile& f, const ScalarProfile& h,
                                 double pole_margin = 1e-2);

// Orthonormal frame vectors at a chart point: T, X1, X2, V.
struct HopfFrame {
  chart::Vec T, X1, X2, V;
};
HopfFrame hopf_s3_frame(const ScalarProfile& f, const ScalarProfile& h, const chart::Vec& p);

}  // namespace rf::submersion
