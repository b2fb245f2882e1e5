#include "ricci_forge/warped_forms.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ricci_forge/errors.hpp"

namespace rf::warped {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(const Jet2& A, const Jet2& B) {
  if (!(A.v > 0.0) || !(B.v > 0.0)) throw Error(ErrorKind::Pole, "warping function not positive");
}

double bisect_root(const std::function<double(double)>& fn, double lo, double hi) {
  double flo = fn(lo), fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw Error(ErrorKind::RootFind, "root not bracketed");
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a)); };
  boost::uintmax_t iters = 200;
  auto res = boost::math::tools::bisect(fn, lo, hi, tol, iters);
  return 0.5 * (res.first + res.second);
}

}  // namespace

std::pair<double, double> warped_sectional(const ScalarProfile& f, double phi, double pole_margin) {
  const Interval& d = f.domain();
  if (phi - d.lo < pole_margin || d.hi - phi < pole_margin)
    throw Error(ErrorKind::Pole, "evaluation inside the pole margin");
  Jet j = f.eval(phi);
  if (!(j.v > 0.0)) throw Error(ErrorKind::Pole, "warping function not positive");
  return {-j.d2 / j.v, (1.0 - j.d1 * j.d1) / (j.v * j.v)};
}

SectionalSet necksectional(const Jet2& A, const Jet2& B, int n) {
  require_positive(A, B);
  const double a = A.v, b = B.v;
  SectionalSet s;
  s.K_XSigma_slice = A.x * B.x / (a * a * a * b) - B.xx / (a * a * b);
  s.K_SigmaSigma_slice = 1.0 / (b * b) - B.x * B.x / (a * a * b * b);
  s.K_XSigma = -A.t * B.t / (a * b) + s.K_XSigma_slice;
  s.K_SigmaSigma = s.K_SigmaSigma_slice - B.t * B.t / (b * b);
  s.K_TX = -A.tt / a;
  s.K_TSigma = -B.tt / b;
  s.Ric_TX_offdiag = n * (A.t * B.x / (a * a * b) - B.tx / (a * b));
  return s;
}

SectionalSet necksectional(const TwoVarWarp& w, double t, double x) {
  if (!w.t_domain.contains(t) || !w.x_domain.contains(x))
    throw Error(ErrorKind::Domain, "point outside the warp domain");
  return necksectional(w.A(t, x), w.B(t, x), w.fiber_dim);
}

SecondFundamental slice_second_fundamental(const Jet2& A, const Jet2& B, SliceKind kind) {
  require_positive(A, B);
  if (kind == SliceKind::Time) return {A.t / A.v, B.t / B.v};
  return {A.x / (A.v * A.v), B.x / (A.v * B.v)};
}

SecondFundamental slice_second_fundamental(const TwoVarWarp& w, double t, double x,
                                           SliceKind kind) {
  return slice_second_fundamental(w.A(t, x), w.B(t, x), kind);
}

SectionalSet scale_curvature(double kappa, const SectionalSet& s) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::Precondition, "scale must be positive");
  double c = 1.0 / (kappa * kappa);
  return {s.K_TX * c,         s.K_TSigma * c,           s.K_XSigma * c,
          s.K_SigmaSigma * c, s.Ric_TX_offdiag * c,     s.K_XSigma_slice * c,
          s.K_SigmaSigma_slice * c};
}

SecondFundamental scale_curvature(double kappa, const SecondFundamental& s) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::Precondition, "scale must be positive");
  return {s.XX / kappa, s.SigmaSigma / kappa};
}

FrameRicci frame_ricci(const SectionalSet& s, int m) {
  FrameRicci r;
  r.TT = m * s.K_TSigma + s.K_TX;
  r.XX = s.K_TX + m * s.K_XSigma;
  r.SigmaSigma = s.K_TSigma + s.K_XSigma + (m - 1) * s.K_SigmaSigma;
  r.TX = s.Ric_TX_offdiag;
  return r;
}

chart::MetricChart two_var_chart(const TwoVarWarp& w, double pole_margin) {
  const int m = w.fiber_dim;
  chart::MetricChart c;
  c.dim = m + 2;
  c.domain.lo = chart::Vec(c.dim);
  c.domain.hi = chart::Vec(c.dim);
  c.domain.lo[0] = w.t_domain.lo;
  c.domain.hi[0] = w.t_domain.hi;
  c.domain.lo[1] = w.x_domain.lo;
  c.domain.hi[1] = w.x_domain.hi;
  for (int i = 0; i < m; ++i) {
    bool last = (i == m - 1);
    c.domain.lo[2 + i] = last ? -kPi : pole_margin;
    c.domain.hi[2 + i] = last ? kPi : kPi - pole_margin;
  }
  auto A = w.A;
  auto B = w.B;
  c.g = [A, B, m](const chart::Vec& p) {
    chart::Mat g = chart::Mat::Zero(m + 2, m + 2);
    double a = A(p[0], p[1]).v, b = B(p[0], p[1]).v;
    g(0, 0) = 1.0;
    g(1, 1) = a * a;
    double s = b * b;
    for (int i = 0; i < m; ++i) {
      g(2 + i, 2 + i) = s;
      double si = std::sin(p[2 + i]);
      s *= si * si;
    }
    return g;
  };
  return c;
}

RenormalizedA1 renormalize_profile(const ScalarProfile& f1, double r, int check_samples) {
  const Interval dom = f1.domain();
  const double D = dom.hi;
  if (std::abs(dom.lo) > 0.0) throw Error(ErrorKind::Precondition, "profile must start at 0");
  if (std::abs(f1.value(0.0)) > 1e-9 || std::abs(f1.value(D)) > 1e-9)
    throw Error(ErrorKind::Precondition, "profile must vanish at both ends");
  for (int i = 1; i < check_samples; ++i) {
    double phi = D * i / check_samples;
    Jet j = f1.eval(phi);
    if (j.d2 > 1e-12 * std::max(1.0, std::abs(j.v)))
      throw Error(ErrorKind::Precondition, "profile is not concave");
  }
  double phi_max = bisect_root([&](double p) { return f1.eval(p).d1; }, 0.0, D);
  Jet top = f1.eval(phi_max);
  if (std::abs(top.v - r) > 1e-9)
    throw Error(ErrorKind::Precondition, "sup of profile differs from the waist");
  if (!(top.d2 < 0.0)) throw Error(ErrorKind::Precondition, "degenerate maximum");
  const double sup = top.v;
  const double a0 = std::sqrt(sup / (-top.d2));
  const double d1_lo = std::abs(f1.eval(0.0).d1);
  const double d1_hi = std::abs(f1.eval(D).d1);

  auto phi_of_x = [f1, phi_max, sup, D](double x) {
    if (x == 0.0) return phi_max;
    double target = sup * std::cos(x);
    auto fn = [&](double p) { return f1.value(p) - target; };
    if (x < 0) return x <= -kPi / 2 ? 0.0 : bisect_root(fn, 0.0, phi_max);
    return x >= kPi / 2 ? D : bisect_root(fn, phi_max, D);
  };

  constexpr double kEdge = 1e-9;
  constexpr double kCenter = 1e-5;
  constexpr double kLin = 1e-3;
  auto value = [=](double x) {
    if (x <= -kPi / 2 + kEdge) return r / d1_lo;
    if (x >= kPi / 2 - kEdge) return r / d1_hi;
    if (std::abs(x) < kCenter) return r / sup * a0;
    double phi = phi_of_x(x);
    return -r * std::sin(x) / f1.eval(phi).d1;
  };
  auto raw_slope = [=](double x) {
    double a = value(x);
    double phi = phi_of_x(x);
    Jet j = f1.eval(phi);
    return a / std::tan(x) * (1.0 + a * a * (sup / r) * (sup / r) * j.d2 / j.v);
  };
  auto slope = [=](double x) {
    if (std::abs(x) >= kPi / 2 - kEdge) return 0.0;
    if (std::abs(x) < kLin) {
      double lo = raw_slope(-kLin), hi = raw_slope(kLin);
      return lo + (hi - lo) * (x + kLin) / (2 * kLin);
    }
    return raw_slope(x);
  };
  auto jet = [=](double x) {
    constexpr double h = 1e-5;
    double d2 = 0.0;
    if (std::abs(x) < kPi / 2 - 2 * h) d2 = (slope(x + h) - slope(x - h)) / (2 * h);
    return Jet{value(x), slope(x), d2};
  };
  RenormalizedA1 out;
  out.A1 = ScalarProfile(jet, {-kPi / 2, kPi / 2}, 2, true, "A1");
  out.phi_max = phi_max;
  out.r = r;
  out.D = D;
  out.phi_of_x = phi_of_x;
  double best = value(0.0);
  for (int i = 0; i <= check_samples; ++i)
    best = std::max(best, value(-kPi / 2 + kPi * i / check_samples));
  out.sup_A1 = best;
  if (best < D / kPi - 1e-9)
    throw Error(ErrorKind::HypothesisViolation, "sup A1 below D/pi");
  return out;
}

SmoothnessResult smoothness_check(const ScalarProfile& p, double a, SmoothMode mode, int order,
                                  double tol) {
  if (!p.domain().contains(a, 1e-15)) throw Error(ErrorKind::Domain, "endpoint outside domain");
  if (order > p.smoothness_order())
    throw Error(ErrorKind::Capability, "requested order exceeds profile smoothness");
  SmoothnessResult res;
  auto fail = [&](int k, double got, double want) {
    std::ostringstream os;
    os << "d" << k << " at " << a << " = " << got << ", expected " << want;
    res.defects.push_back(os.str());
    res.pass = false;
  };
  bool far_end = std::abs(a - p.domain().hi) < std::abs(a - p.domain().lo);
  for (int k = 0; k <= order; ++k) {
    double v = p.derivative(a, k);
    if (mode == SmoothMode::Cap) {
      if (k == 1) {
        double want = far_end ? -1.0 : 1.0;
        if (std::abs(v - want) > tol) fail(k, v, want);
      } else if (k % 2 == 0 && std::abs(v) > tol) {
        fail(k, v, 0.0);
      }
    } else {
      if (k == 0 && !(v > 0.0)) {
        res.defects.push_back("value not positive");
        res.pass = false;
      } else if (k % 2 == 1 && std::abs(v) > tol) {
        fail(k, v, 0.0);
      }
    }
  }
  return res;
}

}  // namespace rf::warped
