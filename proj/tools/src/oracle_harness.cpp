#include "ricci_forge_cli/oracle_harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ricci_forge/chart_calculus.hpp"
#include "ricci_forge/submersion_ricci.hpp"
#include "ricci_forge/warped_forms.hpp"

namespace rf::oracle {

namespace {

// a0 + a1 t + a2 x + a3 t^2 + a4 t x + a5 x^2
struct Quadratic {
  double c[6];
  warped::Jet2 operator()(double t, double x) const {
    return {c[0] + c[1] * t + c[2] * x + c[3] * t * t + c[4] * t * x + c[5] * x * x,
            c[1] + 2 * c[3] * t + c[4] * x,
            c[2] + c[4] * t + 2 * c[5] * x,
            2 * c[3],
            2 * c[5],
            c[4]};
  }
};

Quadratic random_quadratic(std::mt19937_64& rng, double base_lo, double base_hi) {
  std::uniform_real_distribution<double> base(base_lo, base_hi), coef(-0.2, 0.2);
  Quadratic q;
  q.c[0] = base(rng);
  for (int i = 1; i < 6; ++i) q.c[i] = coef(rng);
  return q;
}

void add(OracleSummary& s, const OracleOptions& opt, const std::string& inst,
         const std::string& q, double t, double x, double closed, double oracle) {
  Comparison c{inst, q, t, x, closed, oracle, 0.0, false};
  double diff = std::abs(closed - oracle);
  double scale = std::max(std::abs(closed), opt.abs_floor / opt.rel_tol);
  c.defect = diff / scale;
  c.pass = diff <= std::max(opt.rel_tol * std::abs(closed), opt.abs_floor);
  s.max_defect = std::max(s.max_defect, c.defect);
  if (!c.pass) ++s.failures;
  s.rows.push_back(c);
}

// Metric of the t-slice in coordinates (x, th_1..th_m).
chart::MetricChart slice_chart(const chart::MetricChart& full, double t) {
  chart::MetricChart c;
  c.dim = full.dim - 1;
  c.domain.lo = full.domain.lo.tail(c.dim);
  c.domain.hi = full.domain.hi.tail(c.dim);
  c.g = [full, t](const chart::Vec& q) {
    chart::Vec p(full.dim);
    p(0) = t;
    p.tail(q.size()) = q;
    return chart::Mat(full.metric(p).bottomRightCorner(q.size(), q.size()));
  };
  return c;
}

}  // namespace

OracleSummary run_oracle(const OracleOptions& opt) {
  OracleSummary s;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> ut(0.7, 1.3), ux(-0.3, 0.3), uth(0.9, 1.4),
      uang(-0.5, 0.5);
  for (int k = 0; k < opt.instances; ++k) {
    warped::TwoVarWarp w;
    w.fiber_dim = 2 + k % 2;
    w.t_domain = {0.5, 1.5};
    w.x_domain = {-0.5, 0.5};
    w.A = random_quadratic(rng, 1.0, 2.0);
    w.B = random_quadratic(rng, 0.8, 1.5);
    const std::string name = "twovar_" + std::to_string(k);
    chart::MetricChart c = warped::two_var_chart(w);
    const int dim = c.dim;
    chart::Vec p(dim);
    double t = ut(rng), x = ux(rng);
    p(0) = t;
    p(1) = x;
    for (int i = 2; i < dim; ++i) p(i) = i + 1 < dim ? uth(rng) : uang(rng);
    double step = chart::default_step(c);
    auto cur = chart::riemann_ricci_fd(c, p, step);
    auto ss = warped::necksectional(w, t, x);
    auto fr = warped::frame_ricci(ss, w.fiber_dim);
    double a = w.A(t, x).v, b = w.B(t, x).v;
    // orthonormal frame: T, X, S1, S2 along the first two sphere angles
    chart::Vec T = chart::Vec::Zero(dim), X = T, S1 = T, S2 = T;
    T(0) = 1;
    X(1) = 1 / a;
    S1(2) = 1 / b;
    S2(3) = 1 / (b * std::sin(p(2)));
    add(s, opt, name, "K_TX", t, x, ss.K_TX, chart::frame_sectional(cur, T, X));
    add(s, opt, name, "K_TSigma", t, x, ss.K_TSigma, chart::frame_sectional(cur, T, S1));
    add(s, opt, name, "K_XSigma", t, x, ss.K_XSigma, chart::frame_sectional(cur, X, S1));
    add(s, opt, name, "K_SigmaSigma", t, x, ss.K_SigmaSigma, chart::frame_sectional(cur, S1, S2));
    add(s, opt, name, "Ric_TX", t, x, ss.Ric_TX_offdiag, chart::frame_ricci(cur, T, X));
    add(s, opt, name, "Ric_TT", t, x, fr.TT, chart::frame_ricci(cur, T, T));
    add(s, opt, name, "Ric_XX", t, x, fr.XX, chart::frame_ricci(cur, X, X));
    add(s, opt, name, "Ric_SigmaSigma", t, x, fr.SigmaSigma, chart::frame_ricci(cur, S1, S1));

    auto sc = slice_chart(c, t);
    chart::Vec q = p.tail(dim - 1);
    auto scur = chart::riemann_ricci_fd(sc, q, chart::default_step(sc));
    chart::Vec sX = X.tail(dim - 1), sS1 = S1.tail(dim - 1), sS2 = S2.tail(dim - 1);
    add(s, opt, name, "K_XSigma_slice", t, x, ss.K_XSigma_slice, chart::frame_sectional(scur, sX, sS1));
    add(s, opt, name, "K_SigmaSigma_slice", t, x, ss.K_SigmaSigma_slice,
        chart::frame_sectional(scur, sS1, sS2));

    auto II = warped::slice_second_fundamental(w, t, x, warped::SliceKind::Time);
    chart::Mat IIfd = chart::second_fundamental_fd(c, 0, p, step);
    chart::Mat g = c.metric(p);
    add(s, opt, name, "II_XX", t, x, II.XX, IIfd(0, 0) / g(1, 1));
    add(s, opt, name, "II_SigmaSigma", t, x, II.SigmaSigma, IIfd(1, 1) / g(2, 2));
  }

  auto f = profiles::sine_cosine(0.0, 1.5);
  auto h = profiles::cosh_over(2.0, 0.0, 1.5);
  auto fib = submersion::hopf_data(submersion::Algebra::C, 2);
  auto hc = submersion::hopf_s3_chart(f, h);
  std::uniform_real_distribution<double> ht(0.2, 1.3), hth(0.5, 2.6), hph(-1.0, 1.0),
      hps(-1.0, 1.0);
  for (int k = 0; k < opt.hopf_points; ++k) {
    chart::Vec p(4);
    p << ht(rng), hth(rng), hph(rng), hps(rng);
    const std::string name = "hopf_" + std::to_string(k);
    auto cur = chart::riemann_ricci_fd(hc, p, chart::default_step(hc));
    auto fr = submersion::hopf_s3_frame(f, h, p);
    auto rc = submersion::doubly_warped_ricci(fib, f, h, p(0));
    double t = p(0);
    add(s, opt, name, "ric_tt", t, 0.0, rc.ric_tt, chart::frame_ricci(cur, fr.T, fr.T));
    add(s, opt, name, "ric_xx_1", t, 0.0, rc.ric_xx, chart::frame_ricci(cur, fr.X1, fr.X1));
    add(s, opt, name, "ric_xx_2", t, 0.0, rc.ric_xx, chart::frame_ricci(cur, fr.X2, fr.X2));
    add(s, opt, name, "ric_vv", t, 0.0, rc.ric_vv, chart::frame_ricci(cur, fr.V, fr.V));
    add(s, opt, name, "ric_xt", t, 0.0, rc.ric_xt, chart::frame_ricci(cur, fr.X1, fr.T));
    add(s, opt, name, "ric_xv", t, 0.0, rc.ric_xv, chart::frame_ricci(cur, fr.X1, fr.V));
    add(s, opt, name, "ric_vt", t, 0.0, rc.ric_vt, chart::frame_ricci(cur, fr.V, fr.T));
  }
  s.pass = s.failures == 0;
  return s;
}

}  // namespace rf::oracle
