#pragma once

#include <functional>
#include <limits>
#include <string>

namespace rf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double t, double tol = 0.0) const { return t >= lo - tol && t <= hi + tol; }
};

struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Real function on an interval with value and first two derivatives. Higher
// derivatives are available when an nth-derivative callback is supplied;
// smoothness_order records the highest order that may be requested.
class ScalarProfile {
 public:
  using JetFn = std::function<Jet(double)>;
  using NthFn = std::function<double(double, int)>;

  ScalarProfile() = default;
  ScalarProfile(JetFn fn, Interval domain, int smoothness_order = 2, bool positive = false,
                std::string name = {});

  Jet eval(double t) const;
  double value(double t) const { return eval(t).v; }
  double derivative(double t, int k) const;

  const Interval& domain() const { return domain_; }
  int smoothness_order() const { return order_; }
  bool positive() const { return positive_; }
  const std::string& name() const { return name_; }

  ScalarProfile& with_nth(NthFn nth, int order);
  bool valid() const { return static_cast<bool>(fn_); }

 private:
  JetFn fn_;
  NthFn nth_;
  Interval domain_;
  int order_ = 2;
  bool positive_ = false;
  std::string name_;
};

namespace profiles {

ScalarProfile sine(double lo = 0.0, double hi = 3.141592653589793);
// (1/c) sin(c t)
ScalarProfile scaled_sine(double c, double lo, double hi);
ScalarProfile sine_cosine(double lo = 0.0, double hi = 1.5707963267948966);
ScalarProfile constant(double c, double lo, double hi);
// cosh(t/N)/N
ScalarProfile cosh_over(double N, double lo, double hi);
ScalarProfile cosh_plain(double lo, double hi);
ScalarProfile identity(double lo, double hi);
ScalarProfile power(double p, double lo, double hi);
// base + amp * cosh(t / width), a smooth even perturbation
ScalarProfile plus_cosh_bump(const ScalarProfile& base, double amp, double width);

}  // namespace profiles

// Central-difference relative defect between supplied d1, d2 and values.
struct ProfileConsistency {
  double max_rel_d1 = 0.0;
  double max_rel_d2 = 0.0;
};
ProfileConsistency check_derivatives(const ScalarProfile& p, int samples = 64, double step = 1e-4);

}  // namespace rf
