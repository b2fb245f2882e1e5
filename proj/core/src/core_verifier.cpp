#include "ricci_forge/core_verifier.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "ricci_forge/errors.hpp"
#include "ricci_forge/parallel.hpp"
#include "ricci_forge/warped_forms.hpp"

namespace rf::core {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
}

ScalarProfile make_f() { return profiles::sine(0.0, kHalfPi); }

ScalarProfile make_h(const CoreSpec& spec) {
  if (!(spec.param > 0.0)) throw Error(ErrorKind::Precondition, "h parameter must be positive");
  if (spec.h_choice == HChoice::Const) {
    if (!(spec.param < 1.0)) throw Error(ErrorKind::Precondition, "epsilon must be below 1");
    return profiles::constant(spec.param, 0.0, kHalfPi);
  }
  return profiles::cosh_over(spec.param, 0.0, kHalfPi);
}

double find_waist(const ScalarProfile& f, const ScalarProfile& h) {
  double lo = std::max(f.domain().lo, h.domain().lo);
  double hi = std::min(f.domain().hi, h.domain().hi);
  auto g = [&](double t) { return f.value(t) - h.value(t); };
  if (!(g(lo) < 0.0)) throw Error(ErrorKind::Precondition, "need f < h at the start");
  constexpr int kScan = 8192;
  double a = lo;
  for (int i = 1; i <= kScan; ++i) {
    double b = lo + (hi - lo) * i / kScan;
    if (g(b) >= 0.0) {
      auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-15; };
      boost::uintmax_t iters = 200;
      auto res = boost::math::tools::bisect(g, a, b, tol, iters);
      double t1 = 0.5 * (res.first + res.second);
      return t1;
    }
    a = b;
  }
  throw Error(ErrorKind::NoWaist, "f - h has no sign change on the domain");
}

submersion::RicciComponents cap_limit_ricci(const submersion::FibrationData& fib,
                                            const ScalarProfile& f, const ScalarProfile& h) {
  const double t0 = std::max(f.domain().lo, h.domain().lo);
  Jet hj = h.eval(t0);
  const int m = fib.dimB, n = fib.dimF;
  submersion::RicciComponents r;
  r.m = m;
  r.n = n;
  const double hh = hj.d2 / hj.v;
  if (fib.degenerate_fiber) {
    r.has_vertical = false;
    r.ric_tt = -m * hh;
    r.ric_xx = fib.ric_base / (hj.v * hj.v) - hh;
    return r;
  }
  const double a = f.derivative(t0, 3) / f.derivative(t0, 1);
  r.ric_tt = -m * hh - n * a;
  r.ric_xx = fib.ric_base / (hj.v * hj.v) - hh - n * hh;
  r.ric_vv = -n * a - m * hh;
  return r;
}

GridReport verify_core(const submersion::FibrationData& fib, const ScalarProfile& f,
                       const ScalarProfile& h, int samples, double margin) {
  if (samples < 16) throw Error(ErrorKind::Precondition, "grid needs at least 16 samples");
  GridReport rep;
  rep.samples = samples;
  rep.margin = margin;
  rep.has_vertical = !fib.degenerate_fiber;
  rep.t1 = find_waist(f, h);
  if (!(rep.t1 < kHalfPi)) throw Error(ErrorKind::Precondition, "waist beyond pi/2");
  rep.radius = h.value(rep.t1);
  rep.waist_defect = std::abs(f.value(rep.t1) - h.value(rep.t1));
  rep.round_boundary = rep.waist_defect <= 1e-12;

  std::vector<submersion::RicciComponents> vals(samples);
  std::vector<double> ts(samples);
  for (int i = 0; i < samples; ++i) ts[i] = margin + (rep.t1 - margin) * i / (samples - 1);
  parallel_for(samples, [&](std::size_t i) {
    vals[i] = submersion::doubly_warped_ricci(fib, f, h, ts[i]);
  });
  auto cap = cap_limit_ricci(fib, f, h);
  rep.cap_limit_tt = cap.ric_tt;
  rep.cap_limit_xx = cap.ric_xx;
  rep.cap_limit_vv = cap.ric_vv;
  rep.min_tt = {cap.ric_tt, 0.0};
  rep.min_xx = {cap.ric_xx, 0.0};
  rep.min_vv = {rep.has_vertical ? cap.ric_vv : std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < samples; ++i) {
    const auto& v = vals[i];
    if (v.ric_tt < rep.min_tt.value) rep.min_tt = {v.ric_tt, ts[i]};
    if (v.ric_xx < rep.min_xx.value) rep.min_xx = {v.ric_xx, ts[i]};
    if (rep.has_vertical && v.ric_vv < rep.min_vv.value) rep.min_vv = {v.ric_vv, ts[i]};
    rep.max_offdiag = std::max({rep.max_offdiag, std::abs(v.ric_xv), std::abs(v.ric_xt),
                                std::abs(v.ric_vt)});
  }
  if (!rep.has_vertical) rep.min_vv = {0.0, 0.0};
  rep.ricci_positive = rep.min_tt.value > 0.0 && rep.min_xx.value > 0.0 &&
                       (!rep.has_vertical || rep.min_vv.value > 0.0);
  rep.offdiag_zero = rep.max_offdiag == 0.0;

  auto conv = submersion::boundary_convexity(f, h, rep.t1);
  rep.II_horizontal = conv.II_horizontal;
  rep.II_vertical = conv.II_vertical;
  rep.convex_boundary = conv.pass;

  const double a = std::max(f.domain().lo, h.domain().lo);
  auto sf = warped::smoothness_check(f, a, warped::SmoothMode::Cap,
                                     std::min(4, f.smoothness_order()));
  auto sh = warped::smoothness_check(h, a, warped::SmoothMode::Even,
                                     std::min(3, h.smoothness_order()));
  rep.smooth_f = sf.pass;
  rep.smooth_h = sh.pass;
  for (auto& d : sf.defects) rep.smoothness_defects.push_back("f: " + d);
  for (auto& d : sh.defects) rep.smoothness_defects.push_back("h: " + d);
  return rep;
}

GridReport verify_core(const CoreSpec& spec) {
  auto fib = submersion::hopf_data(spec.algebra, spec.n);
  return verify_core(fib, make_f(), make_h(spec), spec.samples, spec.margin);
}

SearchResult search_cosh_N(submersion::Algebra algebra, int n, double N_lo, double N_hi,
                           int samples, double resolution) {
  if (!(N_lo > 0.0) || !(N_hi >= N_lo))
    throw Error(ErrorKind::Precondition, "N range must be positive and ordered");
  SearchResult res;
  auto passes = [&](double N) {
    ++res.evaluations;
    CoreSpec s{algebra, n, HChoice::Cosh, N, samples, 1e-4};
    try {
      return verify_core(s).pass();
    } catch (const Error&) {
      return false;
    }
  };
  if (!passes(N_hi)) {
    res.reason = "upper end of the N range fails";
    res.lo = N_lo;
    res.hi = N_hi;
    return res;
  }
  res.feasible = true;
  if (passes(N_lo)) {
    res.N = res.lo = res.hi = N_lo;
    return res;
  }
  double lo = N_lo, hi = N_hi;
  while (hi / lo > 1.0 + resolution) {
    double mid = std::sqrt(lo * hi);
    if (passes(mid))
      hi = mid;
    else
      lo = mid;
  }
  res.N = hi;
  res.lo = lo;
  res.hi = hi;
  return res;
}

ObstructionWitness obstruction_witness(const submersion::FibrationData& fib,
                                       const ScalarProfile& h, double t1, int samples) {
  if (!fib.degenerate_fiber)
    throw Error(ErrorKind::Precondition, "obstruction witness applies to d = 1 only");
  ObstructionWitness w;
  for (int i = 1; i < samples; ++i) {
    double t = t1 * i / samples;
    Jet hj = h.eval(t);
    if (hj.d2 > 0.0) {
      auto r = submersion::doubly_warped_ricci(fib, Jet{}, hj);
      w.found = true;
      w.t = t;
      w.h2 = hj.d2;
      w.ric_tt = r.ric_tt;
      return w;
    }
  }
  return w;
}

}  // namespace rf::core
