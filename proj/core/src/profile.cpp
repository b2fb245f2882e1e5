#include "ricci_forge/profile.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ricci_forge/errors.hpp"

namespace rf {

ScalarProfile::ScalarProfile(JetFn fn, Interval domain, int smoothness_order, bool positive,
                             std::string name)
    : fn_(std::move(fn)),
      domain_(domain),
      order_(smoothness_order),
      positive_(positive),
      name_(std::move(name)) {}

Jet ScalarProfile::eval(double t) const {
  if (!fn_) throw Error(ErrorKind::Precondition, "empty profile");
  return fn_(t);
}

ScalarProfile& ScalarProfile::with_nth(NthFn nth, int order) {
  nth_ = std::move(nth);
  order_ = order;
  return *this;
}

double ScalarProfile::derivative(double t, int k) const {
  if (k < 0) throw Error(ErrorKind::Precondition, "negative derivative order");
  if (k > order_)
    throw Error(ErrorKind::Capability, "derivative order " + std::to_string(k) +
                                           " exceeds smoothness order " + std::to_string(order_));
  if (k <= 2) {
    Jet j = eval(t);
    return k == 0 ? j.v : (k == 1 ? j.d1 : j.d2);
  }
  if (!nth_) throw Error(ErrorKind::Capability, "no higher derivatives supplied");
  return nth_(t, k);
}

namespace profiles {

namespace {
double sin_nth(double t, int k) {
  switch (k % 4) {
    case 0: return std::sin(t);
    case 1: return std::cos(t);
    case 2: return -std::sin(t);
    default: return -std::cos(t);
  }
}
}  // namespace

ScalarProfile sine(double lo, double hi) {
  ScalarProfile p([](double t) { return Jet{std::sin(t), std::cos(t), -std::sin(t)}; },
                  {lo, hi}, 2, false, "sin");
  p.with_nth(sin_nth, 16);
  return p;
}

ScalarProfile scaled_sine(double c, double lo, double hi) {
  ScalarProfile p(
      [c](double t) { return Jet{std::sin(c * t) / c, std::cos(c * t), -c * std::sin(c * t)}; },
      {lo, hi}, 2, false, "scaled_sin");
  p.with_nth([c](double t, int k) { return std::pow(c, k - 1) * sin_nth(c * t, k); }, 16);
  return p;
}

ScalarProfile sine_cosine(double lo, double hi) {
  // sin t cos t = sin(2t)/2
  return scaled_sine(2.0, lo, hi);
}

ScalarProfile constant(double c, double lo, double hi) {
  ScalarProfile p([c](double) { return Jet{c, 0.0, 0.0}; }, {lo, hi}, 2, c > 0, "const");
  p.with_nth([](double, int) { return 0.0; }, 16);
  return p;
}

ScalarProfile cosh_over(double N, double lo, double hi) {
  ScalarProfile p(
      [N](double t) {
        double u = t / N;
        return Jet{std::cosh(u) / N, std::sinh(u) / (N * N), std::cosh(u) / (N * N * N)};
      },
      {lo, hi}, 2, true, "cosh_over");
  p.with_nth(
      [N](double t, int k) {
        double u = t / N;
        return (k % 2 == 0 ? std::cosh(u) : std::sinh(u)) / std::pow(N, k + 1);
      },
      16);
  return p;
}

ScalarProfile cosh_plain(double lo, double hi) {
  ScalarProfile p([](double t) { return Jet{std::cosh(t), std::sinh(t), std::cosh(t)}; },
                  {lo, hi}, 2, true, "cosh");
  p.with_nth([](double t, int k) { return k % 2 == 0 ? std::cosh(t) : std::sinh(t); }, 16);
  return p;
}

ScalarProfile identity(double lo, double hi) {
  ScalarProfile p([](double t) { return Jet{t, 1.0, 0.0}; }, {lo, hi}, 2, false, "identity");
  p.with_nth([](double, int) { return 0.0; }, 16);
  return p;
}

ScalarProfile power(double q, double lo, double hi) {
  ScalarProfile p(
      [q](double t) {
        return Jet{std::pow(t, q), q * std::pow(t, q - 1), q * (q - 1) * std::pow(t, q - 2)};
      },
      {lo, hi}, 2, false, "power");
  p.with_nth(
      [q](double t, int k) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c *= (q - i);
        return c == 0.0 ? 0.0 : c * std::pow(t, q - k);
      },
      16);
  return p;
}

ScalarProfile plus_cosh_bump(const ScalarProfile& base, double amp, double width) {
  ScalarProfile p(
      [base, amp, width](double t) {
        Jet j = base.eval(t);
        double u = t / width;
        j.v += amp * std::cosh(u);
        j.d1 += amp * std::sinh(u) / width;
        j.d2 += amp * std::cosh(u) / (width * width);
        return j;
      },
      base.domain(), 2, base.positive(), base.name() + "+bump");
  if (base.smoothness_order() > 2) {
    p.with_nth(
        [base, amp, width](double t, int k) {
          double u = t / width;
          return base.derivative(t, k) +
                 amp * (k % 2 == 0 ? std::cosh(u) : std::sinh(u)) / std::pow(width, k);
        },
        base.smoothness_order());
  }
  return p;
}

}  // namespace profiles

ProfileConsistency check_derivatives(const ScalarProfile& p, int samples, double step) {
  ProfileConsistency out;
  const Interval& d = p.domain();
  double h = step * std::max(1.0, d.length());
  for (int i = 0; i < samples; ++i) {
    double t = d.lo + 3 * h + (d.length() - 6 * h) * (i + 0.5) / samples;
    Jet j = p.eval(t);
    Jet jp = p.eval(t + h), jm = p.eval(t - h);
    Jet jp2 = p.eval(t + 2 * h), jm2 = p.eval(t - 2 * h);
    double d1 = (-jp2.v + 8 * jp.v - 8 * jm.v + jm2.v) / (12 * h);
    double d2 = (-jp2.d1 + 8 * jp.d1 - 8 * jm.d1 + jm2.d1) / (12 * h);
    double s1 = std::max({std::abs(j.d1), std::abs(j.v), 1e-12});
    double s2 = std::max({std::abs(j.d2), std::abs(j.d1), 1e-12});
    out.max_rel_d1 = std::max(out.max_rel_d1, std::abs(d1 - j.d1) / s1);
    out.max_rel_d2 = std::max(out.max_rel_d2, std::abs(d2 - j.d2) / s2);
  }
  return out;
}

}  // namespace rf
