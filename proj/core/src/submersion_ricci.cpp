#include "ricci_forge/submersion_ricci.hpp"

#include <cmath>
#include <numbers>

#include "ricci_forge/errors.hpp"

namespace rf::submersion {

Algebra parse_algebra(const std::string& s) {
  if (s == "R" || s == "r") return Algebra::R;
  if (s == "C" || s == "c") return Algebra::C;
  if (s == "H" || s == "h") return Algebra::H;
  if (s == "O" || s == "o") return Algebra::O;
  throw Error(ErrorKind::InvalidFibration, "unknown algebra '" + s + "'");
}

const char* to_string(Algebra a) {
  switch (a) {
    case Algebra::R: return "R";
    case Algebra::C: return "C";
    case Algebra::H: return "H";
    case Algebra::O: return "O";
  }
  return "?";
}

FibrationData hopf_data(Algebra algebra, int n) {
  static constexpr int kDims[] = {1, 2, 4, 8};
  const int d = kDims[static_cast<int>(algebra)];
  if (n < 1) throw Error(ErrorKind::InvalidFibration, "projective index must be at least 1");
  if (algebra == Algebra::O && n > 2)
    throw Error(ErrorKind::InvalidFibration, "octonionic projective space needs n <= 2");
  if (d * n - 1 < 1) throw Error(ErrorKind::InvalidFibration, "empty total space");
  FibrationData f;
  f.algebra = algebra;
  f.d = d;
  f.n = n;
  f.dimE = d * n - 1;
  f.dimB = d * (n - 1);
  f.dimF = d - 1;
  f.ric_total = d * n - 2;
  f.ric_base = (n - 2) * d + 4 * (d - 1);
  f.ric_fiber = d - 2;
  f.degenerate_fiber = (d == 1);
  return f;
}

RicciComponents doubly_warped_ricci(const FibrationData& fib, const Jet& f, const Jet& h) {
  if (!(h.v > 0.0)) throw Error(ErrorKind::Pole, "h not positive");
  const int m = fib.dimB;
  const int n = fib.dimF;
  RicciComponents r;
  r.m = m;
  r.n = n;
  const double h2 = h.v * h.v, h4 = h2 * h2;
  if (fib.degenerate_fiber) {
    r.has_vertical = false;
    r.ric_tt = -m * h.d2 / h.v;
    r.ric_xx = fib.ric_base / h2 - h.d2 / h.v - (m - 1) * h.d1 * h.d1 / h2;
    return r;
  }
  if (!(f.v > 0.0)) throw Error(ErrorKind::Pole, "f not positive");
  const double f2 = f.v * f.v;
  const double fh = f.d1 * h.d1 / (f.v * h.v);
  r.ric_tt = -m * h.d2 / h.v - n * f.d2 / f.v;
  r.ric_xx = fib.ric_base * (h2 - f2) / h4 - h.d2 / h.v - (m - 1) * h.d1 * h.d1 / h2 - n * fh +
             fib.ric_total * f2 / h4;
  r.ric_vv = (fib.ric_fiber - (n - 1) * f.d1 * f.d1) / f2 - f.d2 / f.v - m * fh +
             (fib.ric_total - fib.ric_fiber) * f2 / h4;
  // total space Einstein: Ric_g(Y, U) = 0
  r.ric_xv = 0.0;
  return r;
}

RicciComponents doubly_warped_ricci(const FibrationData& fib, const ScalarProfile& f,
                                    const ScalarProfile& h, double t) {
  return doubly_warped_ricci(fib, fib.degenerate_fiber ? Jet{} : f.eval(t), h.eval(t));
}

RicciComponents perelman_s3_ricci(const Jet& f, const Jet& h) {
  if (!(f.v > 0.0) || !(h.v > 0.0)) throw Error(ErrorKind::Pole, "warping function not positive");
  const double f2 = f.v * f.v, h2 = h.v * h.v, h4 = h2 * h2;
  const double fh = f.d1 * h.d1 / (f.v * h.v);
  RicciComponents r;
  r.m = 2;
  r.n = 1;
  r.ric_tt = -2.0 * h.d2 / h.v - f.d2 / f.v;
  r.ric_xx = 4.0 * (h2 - f2) / h4 - h.d2 / h.v - h.d1 * h.d1 / h2 - fh + 2.0 * f2 / h4;
  r.ric_vv = -f.d2 / f.v - 2.0 * fh + 2.0 * f2 / h4;
  return r;
}

RicciComponents perelman_s3_ricci(const ScalarProfile& f, const ScalarProfile& h, double t) {
  return perelman_s3_ricci(f.eval(t), h.eval(t));
}

ConvexityResult boundary_convexity(const ScalarProfile& f, const ScalarProfile& h, double t1) {
  if (!f.domain().contains(t1) || !h.domain().contains(t1))
    throw Error(ErrorKind::Domain, "t1 outside profile domain");
  Jet fj = f.eval(t1), hj = h.eval(t1);
  if (!(fj.v > 0.0) || !(hj.v > 0.0)) throw Error(ErrorKind::Pole, "warping function not positive");
  ConvexityResult c;
  c.II_horizontal = hj.d1 / hj.v;
  c.II_vertical = fj.d1 / fj.v;
  c.pass = fj.d1 > 0.0 && hj.d1 > 0.0;
  return c;
}

chart::MetricChart hopf_s3_chart(const ScalarProfile& f, const ScalarProfile& h,
                                 double pole_margin) {
  constexpr double kPi = std::numbers::pi;
  chart::MetricChart c;
  c.dim = 4;
  c.domain.lo = chart::Vec(4);
  c.domain.hi = chart::Vec(4);
  double tlo = std::max(f.domain().lo, h.domain().lo);
  double thi = std::min(f.domain().hi, h.domain().hi);
  c.domain.lo << tlo, pole_margin, -kPi, -2 * kPi;
  c.domain.hi << thi, kPi - pole_margin, kPi, 2 * kPi;
  c.g = [f, h](const chart::Vec& p) {
    double hv = h.value(p[0]), fv = f.value(p[0]);
    double H = 0.25 * hv * hv, F = 0.25 * fv * fv;
    double ct = std::cos(p[1]), st = std::sin(p[1]);
    chart::Mat g = chart::Mat::Zero(4, 4);
    g(0, 0) = 1.0;
    g(1, 1) = H;
    g(2, 2) = H * st * st + F * ct * ct;
    g(2, 3) = g(3, 2) = F * ct;
    g(3, 3) = F;
    return g;
  };
  return c;
}

HopfFrame hopf_s3_frame(const ScalarProfile& f, const ScalarProfile& h, const chart::Vec& p) {
  double hv = h.value(p[0]), fv = f.value(p[0]);
  double ct = std::cos(p[1]), st = std::sin(p[1]);
  HopfFrame fr;
  fr.T = chart::Vec::Zero(4);
  fr.X1 = chart::Vec::Zero(4);
  fr.X2 = chart::Vec::Zero(4);
  fr.V = chart::Vec::Zero(4);
  fr.T[0] = 1.0;
  fr.X1[1] = 2.0 / hv;
  fr.X2[2] = 2.0 / (hv * st);
  fr.X2[3] = -2.0 * ct / (hv * st);
  fr.V[3] = 2.0 / fv;
  return fr;
}

}  // namespace rf::submersion
