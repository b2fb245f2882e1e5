#include "ricci_forge/neck_builder.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "ricci_forge/errors.hpp"
#include "ricci_forge/parallel.hpp"

namespace rf::neck {

namespace {

constexpr double kPi = std::numbers::pi;
using State = std::array<double, 2>;
using Stepper = boost::numeric::odeint::runge_kutta4<State>;

struct Bump {
  double D, base, amp, width;
  double operator()(double phi) const {
    double a = phi / width, b = (D - phi) / width;
    return base + amp * (std::exp(-a * a) + std::exp(-b * b));
  }
};

struct Shooter {
  Bump c;
  void operator()(const State& x, State& dxdt, double phi) const {
    dxdt[0] = x[1];
    dxdt[1] = -c(phi) * x[0];
  }
};

constexpr int kHalfSteps = 4096;

State shoot_half(const Bump& c, double D) {
  State x{0.0, 1.0};
  Stepper st;
  double h = 0.5 * D / kHalfSteps;
  boost::numeric::odeint::integrate_n_steps(st, Shooter{c}, x, 0.0, h, kHalfSteps);
  return x;
}

double bisect(const std::function<double(double)>& fn, double lo, double hi, double rel) {
  auto tol = [rel](double a, double b) {
    return std::abs(b - a) <= rel * std::max(std::abs(a), std::abs(b));
  };
  boost::uintmax_t iters = 300;
  auto res = boost::math::tools::bisect(fn, lo, hi, tol, iters);
  return 0.5 * (res.first + res.second);
}

// First amplitude at which f'(D/2) reaches zero.
double tune_amplitude(double D, double base, double width) {
  auto fp = [&](double A) { return shoot_half(Bump{D, base, A, width}, D)[1]; };
  double lo = 0.0, hi = 1.0;
  if (fp(lo) <= 0.0) throw Error(ErrorKind::Infeasible, "base curvature already closes the cap");
  int guard = 0;
  while (fp(hi) > 0.0) {
    lo = hi;
    hi *= 1.5;
    if (++guard > 200) throw Error(ErrorKind::Infeasible, "amplitude scan failed to bracket");
  }
  return bisect(fp, lo, hi, 1e-15);
}

struct G1Nodes {
  Bump c;
  double h = 0.0;
  std::vector<State> nodes;

  State at(double phi) const {
    double D = c.D;
    phi = std::clamp(phi, 0.0, D);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(phi / h), nodes.size() - 2);
    double dt = phi - i * h;
    State x = nodes[i];
    if (dt != 0.0) {
      Stepper st;
      st.do_step(Shooter{c}, x, i * h, dt);
    }
    return x;
  }
};

struct FixtureKey {
  int n;
  double r, R, m;
  bool operator<(const FixtureKey& o) const {
    return std::tie(n, r, R, m) < std::tie(o.n, o.r, o.R, o.m);
  }
};

struct FixtureCache {
  std::mutex mu;
  std::map<FixtureKey, ProfileG1> entries;
};

FixtureCache& fixture_cache() {
  static FixtureCache cache;
  return cache;
}

double bisect_root_plain(const std::function<double(double)>& fn, double lo, double hi) {
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
  boost::uintmax_t iters = 400;
  auto res = boost::math::tools::bisect(fn, lo, hi, tol, iters);
  return 0.5 * (res.first + res.second);
}

}  // namespace

ProfileG1 fixture_g1(int n, double r, double R, double curvature_margin) {
  if (n < 3) throw Error(ErrorKind::Precondition, "sphere dimension must be at least 3");
  if (!(0.0 < r && r < R && R < 1.0)) throw Error(ErrorKind::Precondition, "need 0 < r < R < 1");
  if (!(curvature_margin > 0.0)) throw Error(ErrorKind::Precondition, "margin must be positive");
  FixtureKey key{n, r, R, curvature_margin};
  FixtureCache& cache = fixture_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) return it->second;
  }
  const double D = kPi * R;
  const double base = 1.0 + curvature_margin;
  auto mid_value = [&](double w) {
    double A = tune_amplitude(D, base, w);
    return shoot_half(Bump{D, base, A, w}, D)[0] - r;
  };
  // f(D/2) grows with the bump width
  double w_lo = 1e-3 * D, w_hi = w_lo;
  double v = mid_value(w_hi);
  if (v >= 0.0) throw Error(ErrorKind::Infeasible, "waist too small for the shooting fixture");
  int guard = 0;
  while (v < 0.0) {
    w_lo = w_hi;
    w_hi *= 1.25;
    if (w_hi > 0.5 * D || ++guard > 200)
      throw Error(ErrorKind::Infeasible, "shooting failed to bracket the waist; tighten r/R");
    v = mid_value(w_hi);
  }
  const double w = bisect(mid_value, w_lo, w_hi, 1e-15);
  const double A = tune_amplitude(D, base, w);

  auto data = std::make_shared<G1Nodes>();
  data->c = Bump{D, base, A, w};
  data->h = D / (2 * kHalfSteps);
  data->nodes.reserve(2 * kHalfSteps + 1);
  {
    State x{0.0, 1.0};
    Stepper st;
    data->nodes.push_back(x);
    for (int i = 0; i < 2 * kHalfSteps; ++i) {
      st.do_step(Shooter{data->c}, x, i * data->h, data->h);
      data->nodes.push_back(x);
    }
  }
  ProfileG1 g1;
  g1.f1 = ScalarProfile(
      [data](double phi) {
        State x = data->at(phi);
        return Jet{x[0], x[1], -data->c(phi) * x[0]};
      },
      {0.0, D}, 2, false, "f1");
  g1.r = r;
  g1.R = R;
  g1.D = D;
  g1.n = n;
  g1.curvature_margin = curvature_margin;
  g1.bump_width = w;
  g1.bump_amplitude = A;
  g1.fprime_end = data->nodes.back()[1];
  double phi_max = bisect_root_plain([&](double p) { return g1.f1.eval(p).d1; }, 0.25 * D, 0.75 * D);
  g1.sup_f1 = g1.f1.value(phi_max);

  if (std::abs(g1.sup_f1 - r) > 1e-9) throw Error(ErrorKind::Infeasible, "fixture waist mismatch");
  if (std::abs(g1.fprime_end + 1.0) > 1e-8)
    throw Error(ErrorKind::Infeasible, "fixture far-end slope is not -1");
  g1.min_K_XSigma = std::numeric_limits<double>::infinity();
  g1.min_K_SigmaSigma = std::numeric_limits<double>::infinity();
  constexpr int kGrid = 1024;
  constexpr double kPole = 1e-3;
  for (int i = 0; i < kGrid; ++i) {
    double phi = kPole + (D - 2 * kPole) * i / (kGrid - 1);
    auto [kxs, kss] = warped::warped_sectional(g1.f1, phi, 0.5 * kPole);
    g1.min_K_XSigma = std::min(g1.min_K_XSigma, kxs);
    g1.min_K_SigmaSigma = std::min(g1.min_K_SigmaSigma, kss);
  }
  if (!(g1.min_K_XSigma > 1.0 && g1.min_K_SigmaSigma > 1.0))
    throw Error(ErrorKind::Infeasible, "fixture curvature not above 1");
  for (double end : {0.0, D}) {
    auto sc = warped::smoothness_check(g1.f1, end, warped::SmoothMode::Cap, 2, 1e-6);
    if (!sc.pass) throw Error(ErrorKind::Infeasible, "fixture cap condition fails");
  }
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.entries.emplace(key, g1);
  return g1;
}

double fixture_curvature(const ProfileG1& g1, double phi) {
  return Bump{g1.D, 1.0 + g1.curvature_margin, g1.bump_amplitude, g1.bump_width}(phi);
}

RenormalizedProfile eta_profile(const warped::RenormalizedA1& renorm, double rho, int samples) {
  RenormalizedProfile p;
  p.renorm = renorm;
  p.A1 = renorm.A1;
  p.r = renorm.r;
  p.rho = rho;
  p.a1 = renorm.sup_A1 / renorm.r;
  if (!(p.a1 - 1.0 > 1e-9)) throw Error(ErrorKind::Degenerate, "a1 = 1, eta undefined");
  if (!(p.a1 > rho / p.r))
    throw Error(ErrorKind::HypothesisViolation, "a1 <= rho / r, alpha_tilde <= 1");
  p.alpha_tilde = std::log(p.a1) / (std::log(rho) - std::log(p.r));
  const double r = p.r, a1 = p.a1;
  auto A1 = renorm.A1;
  p.eta = ScalarProfile(
      [A1, r, a1](double x) {
        Jet j = A1.eval(x);
        double s = 1.0 / (r * (a1 - 1.0));
        return Jet{(j.v / r - 1.0) / (a1 - 1.0), j.d1 * s, j.d2 * s};
      },
      A1.domain(), 2, false, "eta");
  p.eta_min = std::numeric_limits<double>::infinity();
  p.eta_max = -std::numeric_limits<double>::infinity();
  p.h_eta = 1.0;
  p.sin_bound_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    double x = -kPi / 2 + kPi * i / samples;
    double e = p.eta.value(x);
    p.eta_min = std::min(p.eta_min, e);
    p.eta_max = std::max(p.eta_max, e);
    double ratio = 1.0 + (a1 - 1.0) * e;  // A1 / r
    p.h_eta = std::min(p.h_eta, ratio / a1);
    if (i > 0 && i < samples) p.sin_bound_margin = std::min(p.sin_bound_margin, ratio - std::abs(std::sin(x)));
  }
  p.eta_max = std::max(p.eta_max, p.eta.value(0.0));
  if (p.eta_max > 1.0 + 1e-9) throw Error(ErrorKind::HypothesisViolation, "eta exceeds 1");
  if (!(p.eta_min > -1.0 / (a1 - 1.0)))
    throw Error(ErrorKind::HypothesisViolation, "eta below -1/(a1-1)");
  return p;
}

std::shared_ptr<const RenormalizedProfile> prepare_profile(const ProfileG1& g1, double rho) {
  auto renorm = warped::renormalize_profile(g1.f1, g1.r);
  auto p = std::make_shared<RenormalizedProfile>(eta_profile(renorm, rho));
  p->R = g1.R;
  p->n = g1.n;
  p->min_K_g1 = std::min(g1.min_K_XSigma, g1.min_K_SigmaSigma);
  return p;
}

std::pair<double, double> gtilde_sectional(double a, double b, double x, double eta,
                                           double eta_prime) {
  if (!(a >= 1.0) || !(b > 0.0)) throw Error(ErrorKind::Precondition, "need a >= 1 and b > 0");
  double E = 1.0 + eta * (a - 1.0);
  double tx = std::tan(x), cx = std::cos(x);
  double b2 = b * b;
  double kxs = (1.0 / (E * E) - eta_prime * tx * (a - 1.0) / (E * E * E)) / b2;
  double kss = (1.0 / (cx * cx) - tx * tx / (E * E)) / b2;
  return {kxs, kss};
}

std::pair<double, double> gtilde_sectional(double a, double b, double x,
                                           const RenormalizedProfile& prof, double x_margin) {
  if (std::abs(x) > kPi / 2 - x_margin) throw Error(ErrorKind::Pole, "x too close to +-pi/2");
  Jet e = prof.eta.eval(x);
  return gtilde_sectional(a, b, x, e.v, e.d1);
}

PathReport path_check(const RenormalizedProfile& prof, int na, int nx, double x_margin) {
  if (!(prof.alpha_tilde > 1.0)) throw Error(ErrorKind::HypothesisViolation, "alpha_tilde <= 1");
  if (na < 2 || nx < 2) throw Error(ErrorKind::Precondition, "grid too small");
  PathReport rep;
  rep.na = na;
  rep.nx = nx;
  std::vector<double> xs(nx);
  std::vector<Jet> etas(nx);
  const double xm = kPi / 2 - x_margin;
  for (int j = 0; j < nx; ++j) xs[j] = -xm + 2 * xm * j / (nx - 1);
  parallel_for(nx, [&](std::size_t j) { etas[j] = prof.eta.eval(xs[j]); });
  struct RowMin {
    double kxs, kss, x_at, kmin;
  };
  std::vector<RowMin> rows(na);
  std::vector<double> as(na);
  for (int i = 0; i < na; ++i) as[i] = 1.0 + (prof.a1 - 1.0) * i / (na - 1);
  parallel_for(na, [&](std::size_t i) {
    double a = as[i];
    double b = prof.rho / std::pow(a, 1.0 / prof.alpha_tilde);
    RowMin m{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0,
             std::numeric_limits<double>::infinity()};
    for (int j = 0; j < nx; ++j) {
      auto [kxs, kss] = gtilde_sectional(a, b, xs[j], etas[j].v, etas[j].d1);
      m.kxs = std::min(m.kxs, kxs);
      m.kss = std::min(m.kss, kss);
      double k = std::min(kxs, kss);
      if (k < m.kmin) {
        m.kmin = k;
        m.x_at = xs[j];
      }
    }
    rows[i] = m;
  });
  rep.min_K_XSigma = rep.min_K_SigmaSigma = std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i) {
    rep.min_K_XSigma = std::min(rep.min_K_XSigma, rows[i].kxs);
    rep.min_K_SigmaSigma = std::min(rep.min_K_SigmaSigma, rows[i].kss);
    if (rows[i].kmin < best) {
      best = rows[i].kmin;
      rep.argmin_a = as[i];
      rep.argmin_x = rows[i].x_at;
    }
  }
  rep.pass = rep.min() > 1.0;
  return rep;
}

double gamma(double t, double t0) {
  if (t < t0) throw Error(ErrorKind::Domain, "t below t0");
  double L = std::log(2 * t0);
  if (t <= 2 * t0) return (t - t0) / (2 * t0 * t0 * L);
  double lt = std::log(t);
  return L / (t * lt * lt);
}

double gamma_prime(double t, double t0) {
  if (t < t0) throw Error(ErrorKind::Domain, "t below t0");
  double L = std::log(2 * t0);
  if (t <= 2 * t0) return 1.0 / (2 * t0 * t0 * L);
  double lt = std::log(t);
  return -L * (lt + 2) / (t * t * lt * lt * lt);
}

double gamma_integral(double t0, double t) {
  if (t < t0) throw Error(ErrorKind::Domain, "t below t0");
  double L = std::log(2 * t0);
  if (t <= 2 * t0) return (t - t0) * (t - t0) / (4 * t0 * t0 * L);
  return 1.0 / (4 * L) + 1.0 - L / std::log(t);
}

double delta_t0(double t0) {
  if (!(t0 > 2.0)) throw Error(ErrorKind::Domain, "t0 must exceed 2");
  return 1.0 + 1.0 / (4 * std::log(2 * t0));
}

double delta_t0_quadrature(double t0) {
  if (!(t0 > 2.0)) throw Error(ErrorKind::Domain, "t0 must exceed 2");
  using boost::math::quadrature::gauss_kronrod;
  double first = gauss_kronrod<double, 61>::integrate([t0](double t) { return gamma(t, t0); }, t0,
                                                      2 * t0, 5, 1e-14);
  // tail in u = ln t: Gamma(e^u) e^u
  double L = std::log(2 * t0);
  boost::math::quadrature::exp_sinh<double> es;
  double tail = es.integrate(
      [t0, L](double v) {
        double u = L + v;
        double t = std::exp(u);
        return std::isfinite(t) ? gamma(t, t0) * t : L / (u * u);
      },
      1e-14);
  return first + tail;
}

GammaScaled gamma_scaled(double s, double t0) {
  double L = std::log(2 * t0);
  GammaScaled g;
  if (s <= L) {
    double t = std::exp(s);
    double c = 2 * t0 * t0 * L;
    g.tG = t * (t - t0) / c;
    g.t2Gp = t * t / c;
    g.integral = (t - t0) * (t - t0) / (2 * c);
  } else {
    g.tG = L / (s * s);
    g.t2Gp = -L * (s + 2) / (s * s * s);
    g.integral = 1.0 / (4 * L) + 1.0 - L / s;
  }
  return g;
}

NeckParams neck_params(double t0, double eps, double delta,
                       std::shared_ptr<const RenormalizedProfile> prof) {
  if (!prof) throw Error(ErrorKind::Precondition, "missing profile");
  if (!(t0 > 2.0)) throw Error(ErrorKind::Precondition, "t0 must exceed 2");
  if (!(eps > 0.0 && eps <= 0.25)) throw Error(ErrorKind::Precondition, "epsilon outside (0, 1/4]");
  if (!(delta > 0.0 && delta <= 0.25)) throw Error(ErrorKind::Precondition, "delta outside (0, 1/4]");
  NeckParams p;
  p.prof = prof;
  p.t0 = t0;
  p.eps = eps;
  p.delta = delta;
  const double r = prof->r, rho = prof->rho, a1 = prof->a1;
  p.L = std::log(2 * t0);
  p.Delta = delta_t0(t0);
  p.beta = (1.0 - eps) * (std::log(rho) - std::log(r)) / p.Delta;
  p.alpha = (1.0 + delta) * std::log(a1) / (p.beta * p.Delta);
  p.log_t1_closed = (1.0 + delta) / delta * 4 * p.L * p.L / (1 + 4 * p.L);

  const double ab = p.alpha * p.beta, la1 = std::log(a1);
  auto F = [&](double s) { return ab * gamma_scaled(s, t0).integral - la1; };
  double lo = std::log(t0), hi = 2 * p.L;
  while (F(hi) < 0.0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300) throw Error(ErrorKind::RootFind, "t1 not bracketed");
  }
  p.log_t1_numeric = bisect_root_plain(F, lo, hi);
  const double s1 = p.log_t1_closed;
  if (std::abs(p.log_t1_numeric - s1) > 1e-9 * std::max(1.0, std::abs(s1)))
    throw Error(ErrorKind::InternalConsistency, "closed-form and numeric t1 disagree");
  p.t1 = std::exp(s1);
  p.r_tilde = rho * std::exp(-p.beta * gamma_scaled(s1, t0).integral);
  p.r_tilde_closed = r * std::pow(rho / r, eps) * std::exp(p.beta * p.L / s1);
  if (std::abs(p.r_tilde - p.r_tilde_closed) > 1e-9 * p.r_tilde_closed)
    throw Error(ErrorKind::InternalConsistency, "r_tilde closed forms disagree");
  p.log_kappa = std::log(r) - s1 - std::log(p.r_tilde);
  p.log_lambda = s1 + std::log(p.r_tilde) - std::log(t0) - std::log(r);
  p.kappa = std::exp(p.log_kappa);
  p.lambda = std::exp(p.log_lambda);
  return p;
}

NeckFunctions neck_functions(const NeckParams& p, double s) {
  GammaScaled g = gamma_scaled(s, p.t0);
  NeckFunctions nf;
  const double b = p.beta, ab = p.alpha * p.beta;
  nf.k = p.prof->rho * std::exp(-b * g.integral);
  nf.tk1 = -b * g.tG;
  nf.t2k2 = b * b * g.tG * g.tG - b * g.t2Gp;
  nf.h = std::exp(ab * g.integral);
  nf.th1 = ab * g.tG;
  nf.t2h2 = ab * ab * g.tG * g.tG + ab * g.t2Gp;
  return nf;
}

warped::SectionalSet NeckPoint::actual() const {
  return warped::scale_curvature(std::exp(log_scale), normalized);
}

warped::SecondFundamental NeckPoint::actual_II() const {
  return warped::scale_curvature(std::exp(log_scale), II);
}

NeckPoint neck_curvatures(const NeckParams& p, double s, double x, const Jet& eta,
                          const NeckGridOptions& opt) {
  const double s0 = std::log(p.t0), s1 = p.log_t1();
  if (s < s0 - 1e-12 || s > s1 + 1e-12) throw Error(ErrorKind::Domain, "t outside [t0, t1]");
  if (std::abs(x) > kPi / 2 - opt.x_margin) throw Error(ErrorKind::Pole, "x too close to +-pi/2");
  if (s <= p.L + 1.0 && std::abs(std::exp(s) - 2 * p.t0) < opt.seam_halfwidth_rel * p.t0)
    throw Error(ErrorKind::Seam, "evaluation inside the seam band at t = 2 t0");
  NeckFunctions nf = neck_functions(p, s);
  const double h = nf.h, k = nf.k;
  const double E = 1.0 + (h - 1.0) * eta.v;
  const double tEt = nf.th1 * h * eta.v;
  const double t2Ett = nf.t2h2 * h * eta.v;
  const double Ex = (h - 1.0) * eta.d1;
  const double Exx = (h - 1.0) * eta.d2;
  const double tEtx = nf.th1 * h * eta.d1;
  const double g1 = 1.0 + nf.tk1;           // t P'/P
  const double g2 = 2.0 * nf.tk1 + nf.t2k2;  // t^2 P''/P
  const double c = std::cos(x), sn = std::sin(x);
  // jets of A/t, B/t in the rescaled time tau = t / t_*, evaluated at tau = 1
  warped::Jet2 A{k * E, k * (g1 * E + tEt), k * Ex, k * (g2 * E + 2 * g1 * tEt + t2Ett), k * Exx,
                 k * (g1 * Ex + tEtx)};
  warped::Jet2 B{k * c, k * g1 * c, -k * sn, k * g2 * c, -k * c, -k * g1 * sn};
  const int m = p.prof->n - 1;
  NeckPoint pt;
  pt.s = s;
  pt.x = x;
  pt.normalized = warped::necksectional(A, B, m);
  pt.ricci = warped::frame_ricci(pt.normalized, m);
  pt.II = warped::slice_second_fundamental(A, B, warped::SliceKind::Time);
  pt.log_scale = p.log_kappa + s;
  return pt;
}

NeckPoint neck_curvatures(const NeckParams& p, double s, double x, const NeckGridOptions& opt) {
  if (std::abs(x) > kPi / 2 - opt.x_margin) throw Error(ErrorKind::Pole, "x too close to +-pi/2");
  return neck_curvatures(p, s, x, p.prof->eta.eval(x), opt);
}

warped::TwoVarWarp neck_warp(const NeckParams& p, double t_hi) {
  warped::TwoVarWarp w;
  w.fiber_dim = p.prof->n - 1;
  w.t_domain = {p.t0, t_hi};
  w.x_domain = {-kPi / 2 + 1e-2, kPi / 2 - 1e-2};
  auto pp = std::make_shared<NeckParams>(p);
  auto jets = [pp](double t, double x) {
    NeckFunctions nf = neck_functions(*pp, std::log(t));
    Jet eta = pp->prof->eta.eval(x);
    const double h = nf.h, k = nf.k;
    const double k1 = k * nf.tk1 / t, k2 = k * nf.t2k2 / (t * t);
    const double h1 = h * nf.th1 / t, h2 = h * nf.t2h2 / (t * t);
    const double P = t * k, P1 = k + t * k1, P2 = 2 * k1 + t * k2;
    const double E = 1 + (h - 1) * eta.v, Et = h1 * eta.v, Ett = h2 * eta.v;
    const double Ex = (h - 1) * eta.d1, Exx = (h - 1) * eta.d2, Etx = h1 * eta.d1;
    warped::Jet2 A{P * E, P1 * E + P * Et, P * Ex, P2 * E + 2 * P1 * Et + P * Ett, P * Exx,
                   P1 * Ex + P * Etx};
    const double c = std::cos(x), sn = std::sin(x);
    warped::Jet2 B{P * c, P1 * c, -P * sn, P2 * c, -P * c, -P1 * sn};
    return std::pair{A, B};
  };
  w.A = [jets](double t, double x) { return jets(t, x).first; };
  w.B = [jets](double t, double x) { return jets(t, x).second; };
  return w;
}

namespace {

std::vector<double> x_grid(int nx, double margin) {
  std::vector<double> xs(nx);
  const double xm = kPi / 2 - margin;
  for (int j = 0; j < nx; ++j) xs[j] = nx == 1 ? 0.0 : -xm + 2 * xm * j / (nx - 1);
  return xs;
}

// Uniform in s = ln t, plus geometric rows on both sides of the seam band.
std::vector<double> s_grid(const NeckParams& p, const NeckGridOptions& opt) {
  const int nt = opt.nt;
  std::vector<double> ss(nt);
  const double s0 = std::log(p.t0), s1 = p.log_t1();
  for (int i = 0; i < nt; ++i) ss[i] = s0 + (s1 - s0) * i / (nt - 1);
  ss.back() = s1;
  const double lo = std::log1p(-opt.seam_halfwidth_rel / 2), hi = std::log1p(opt.seam_halfwidth_rel / 2);
  for (int k = 0; k < opt.seam_rows; ++k) {
    double d = std::ldexp(1.0, -k);
    for (double v : {p.L + hi + d, p.L + lo - d})
      if (v > s0 && v < s1) ss.push_back(v);
  }
  for (double v : {p.L + hi * (1.0 + 1e-6), p.L + lo * (1.0 + 1e-6)})
    if (opt.seam_rows > 0 && v > s0 && v < s1) ss.push_back(v);
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
  return ss;
}

bool in_seam(const NeckParams& p, double s, const NeckGridOptions& opt) {
  return s <= p.L + 1.0 && std::abs(std::exp(s) - 2 * p.t0) < opt.seam_halfwidth_rel * p.t0;
}

std::vector<Jet> eta_column(const NeckParams& p, const std::vector<double>& xs) {
  std::vector<Jet> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t j) { out[j] = p.prof->eta.eval(xs[j]); });
  return out;
}

}  // namespace

BoundaryReport boundary_check(const NeckParams& p, int nx, double x_margin) {
  BoundaryReport b;
  const double s0 = std::log(p.t0), s1 = p.log_t1();
  NeckFunctions f0 = neck_functions(p, s0), f1 = neck_functions(p, s1);
  b.h_t0_defect = std::abs(f0.h - 1.0);
  b.k_t0_defect = std::abs(f0.k - p.prof->rho);
  b.h_t1_defect = std::abs(f1.h - p.prof->a1);
  b.hp_t0 = f0.h * f0.th1 / p.t0;
  b.kp_t0 = f0.k * f0.tk1 / p.t0;
  b.ii = b.h_t0_defect <= 1e-12 && b.k_t0_defect <= 1e-12;
  b.iii = b.h_t1_defect <= 1e-9 * p.prof->a1;
  b.iv = std::abs(b.hp_t0) <= 1e-15 && std::abs(b.kp_t0) <= 1e-15;
  b.t1_beta_gamma = -f1.tk1;
  b.kappa_t1 = p.prof->r / p.r_tilde;
  b.v_first = b.t1_beta_gamma < 1.0;
  b.v_second = b.kappa_t1 < 1.0;

  NeckGridOptions opt;
  opt.x_margin = x_margin;
  auto xs = x_grid(nx, x_margin);
  auto etas = eta_column(p, xs);
  b.minus_lambda = -p.lambda;
  b.II_t0_min = b.II_t1_min = std::numeric_limits<double>::infinity();
  b.II_t0_max = -std::numeric_limits<double>::infinity();
  double worst_rel = 0.0;
  for (int j = 0; j < nx; ++j) {
    NeckPoint a = neck_curvatures(p, s0, xs[j], etas[j], opt);
    NeckPoint z = neck_curvatures(p, s1, xs[j], etas[j], opt);
    // outward normal is -d_t at t0 and +d_t at t1; II_actual = II / (kappa t)
    double inv0 = std::exp(-a.log_scale), inv1 = std::exp(-z.log_scale);
    for (double v : {-a.II.XX * inv0, -a.II.SigmaSigma * inv0}) {
      b.II_t0_min = std::min(b.II_t0_min, v);
      b.II_t0_max = std::max(b.II_t0_max, v);
      worst_rel = std::max(worst_rel, std::abs(v - b.minus_lambda) / p.lambda);
    }
    b.II_t1_min = std::min({b.II_t1_min, z.II.XX * inv1, z.II.SigmaSigma * inv1});
  }
  b.II_t0_equals_minus_lambda = worst_rel <= 1e-12;
  b.II_t1_at_least_one = b.II_t1_min >= 1.0;
  return b;
}

NeckGridReport ricci_positivity_report(const NeckParams& p, const NeckGridOptions& opt) {
  if (opt.nt < 16 || opt.nx < 16) throw Error(ErrorKind::Precondition, "grid sizes must be >= 16");
  NeckGridReport rep;
  rep.nt = opt.nt;
  rep.nx = opt.nx;
  auto ss = s_grid(p, opt);
  rep.rows = static_cast<int>(ss.size());
  auto xs = x_grid(opt.nx, opt.x_margin);
  auto etas = eta_column(p, xs);
  struct Row {
    NeckMin tt, xx, sg, det, kxs, kss;
    std::vector<Violation> viol;
    long count = 0;
    long points = 0;
    bool seam = false;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Row> rows(ss.size());
  parallel_for(ss.size(), [&](std::size_t i) {
    Row& row = rows[i];
    double s = ss[i];
    if (in_seam(p, s, opt)) {
      row.seam = true;
      return;
    }
    row.tt = row.xx = row.sg = row.det = row.kxs = row.kss = {inf, s, 0.0};
    auto upd = [&](NeckMin& m, double v, double x) {
      if (v < m.value) m = {v, s, x};
    };
    for (int j = 0; j < opt.nx; ++j) {
      NeckPoint pt = neck_curvatures(p, s, xs[j], etas[j], opt);
      ++row.points;
      double vals[4] = {pt.ricci.TT, pt.ricci.XX, pt.ricci.SigmaSigma, pt.det2x2()};
      static const char* names[4] = {"ric_tt", "ric_xx", "ric_ss", "det2x2"};
      upd(row.tt, vals[0], xs[j]);
      upd(row.xx, vals[1], xs[j]);
      upd(row.sg, vals[2], xs[j]);
      upd(row.det, vals[3], xs[j]);
      upd(row.kxs, pt.normalized.K_XSigma, xs[j]);
      upd(row.kss, pt.normalized.K_SigmaSigma, xs[j]);
      for (int q = 0; q < 4; ++q) {
        if (!(vals[q] > 0.0)) {
          ++row.count;
          if (static_cast<int>(row.viol.size()) < opt.max_violations)
            row.viol.push_back({names[q], s, xs[j], vals[q]});
        }
      }
    }
  });
  rep.ric_tt = rep.ric_xx = rep.ric_ss = rep.det = rep.t2_K_XSigma = rep.t2_K_SigmaSigma = {inf, 0, 0};
  auto take = [](NeckMin& acc, const NeckMin& m) {
    if (m.value < acc.value) acc = m;
  };
  for (const Row& row : rows) {
    if (row.seam) {
      ++rep.skipped_seam;
      continue;
    }
    rep.points += row.points;
    take(rep.ric_tt, row.tt);
    take(rep.ric_xx, row.xx);
    take(rep.ric_ss, row.sg);
    take(rep.det, row.det);
    take(rep.t2_K_XSigma, row.kxs);
    take(rep.t2_K_SigmaSigma, row.kss);
    rep.violation_count += row.count;
    for (const auto& v : row.viol)
      if (static_cast<int>(rep.violations.size()) < opt.max_violations) rep.violations.push_back(v);
  }
  rep.pass = rep.points > 0 && rep.violation_count == 0 && rep.ric_tt.value > 0 &&
             rep.ric_xx.value > 0 && rep.ric_ss.value > 0 && rep.det.value > 0;
  return rep;
}

std::vector<std::array<double, 6>> neck_grid_values(const NeckParams& p,
                                                    const NeckGridOptions& opt) {
  auto ss = s_grid(p, opt);
  auto xs = x_grid(opt.nx, opt.x_margin);
  auto etas = eta_column(p, xs);
  std::vector<std::vector<std::array<double, 6>>> rows(ss.size());
  parallel_for(ss.size(), [&](std::size_t i) {
    if (in_seam(p, ss[i], opt)) return;
    for (int j = 0; j < opt.nx; ++j) {
      NeckPoint pt = neck_curvatures(p, ss[i], xs[j], etas[j], opt);
      rows[i].push_back({ss[i], xs[j], pt.ricci.TT, pt.ricci.XX, pt.ricci.SigmaSigma, pt.det2x2()});
    }
  });
  std::vector<std::array<double, 6>> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

AsymptoticReport asymptotic_bound_check(const NeckParams& p, const NeckGridOptions& opt) {
  AsymptoticReport a;
  auto ss = s_grid(p, opt);
  auto xs = x_grid(opt.nx, opt.x_margin);
  auto etas = eta_column(p, xs);
  const double inf = std::numeric_limits<double>::infinity();
  const int n = p.prof->n;
  const int m = n - 1;
  std::vector<AsymptoticReport> rows(ss.size());
  parallel_for(ss.size(), [&](std::size_t i) {
    AsymptoticReport& r = rows[i];
    r.cn_min = r.cs_min = r.cl_min = inf;
    r.negcoef_max = -inf;
    double s = ss[i];
    if (in_seam(p, s, opt)) return;
    const double env = p.L / (s * s);
    GammaScaled g = gamma_scaled(s, p.t0);
    NeckFunctions nf = neck_functions(p, s);
    r.c1_abp = std::abs(nf.tk1) / env;
    r.c2_bpp = std::abs(nf.t2k2) / env;
    r.cn_min = (g.t2Gp + 2 * g.tG) / env;
    for (int j = 0; j < opt.nx; ++j) {
      const Jet& e = etas[j];
      double E = 1.0 + (nf.h - 1.0) * e.v;
      r.c1_ahp = std::max(r.c1_ahp, std::abs(e.v * nf.th1 * nf.h / E) / env);
      r.c2_ahpp = std::max(r.c2_ahpp, std::abs(e.v * nf.t2h2 * nf.h / E) / env);
      r.negcoef_max = std::max(r.negcoef_max, p.alpha * nf.h / E - n);
      NeckPoint pt = neck_curvatures(p, s, xs[j], e, opt);
      r.cu_TSigma = std::max(r.cu_TSigma, std::abs(pt.normalized.K_TSigma) / env);
      r.cu_TX = std::max(r.cu_TX, std::abs(pt.normalized.K_TX) / env);
      r.cu_mixed = std::max(r.cu_mixed, std::abs(pt.normalized.Ric_TX_offdiag / m) / env);
      r.cs_min = std::min({r.cs_min, pt.normalized.K_XSigma, pt.normalized.K_SigmaSigma});
      r.cl_min = std::min({r.cl_min, pt.ricci.XX, pt.ricci.SigmaSigma});
    }
  });
  a.cn_min = a.cs_min = a.cl_min = inf;
  a.negcoef_max = -inf;
  for (const auto& r : rows) {
    a.c1_abp = std::max(a.c1_abp, r.c1_abp);
    a.c1_ahp = std::max(a.c1_ahp, r.c1_ahp);
    a.c2_ahpp = std::max(a.c2_ahpp, r.c2_ahpp);
    a.c2_bpp = std::max(a.c2_bpp, r.c2_bpp);
    a.cu_TSigma = std::max(a.cu_TSigma, r.cu_TSigma);
    a.cu_TX = std::max(a.cu_TX, r.cu_TX);
    a.cu_mixed = std::max(a.cu_mixed, r.cu_mixed);
    a.cn_min = std::min(a.cn_min, r.cn_min);
    a.cs_min = std::min(a.cs_min, r.cs_min);
    a.cl_min = std::min(a.cl_min, r.cl_min);
    a.negcoef_max = std::max(a.negcoef_max, r.negcoef_max);
  }
  a.finite = std::isfinite(a.c1_abp) && std::isfinite(a.c1_ahp) && std::isfinite(a.c2_ahpp) &&
             std::isfinite(a.c2_bpp) && std::isfinite(a.cu_TSigma) && std::isfinite(a.cu_TX) &&
             std::isfinite(a.cu_mixed);
  a.negcoef = a.negcoef_max < 0.0;
  a.gammaisbig = a.cn_min > 0.0;
  return a;
}

SearchOutcome parameter_search(const ProfileG1& g1, std::shared_ptr<const RenormalizedProfile> prof,
                               const SearchBox& box) {
  SearchOutcome out;
  const double lower = std::pow(g1.r, (g1.n - 1.0) / g1.n);
  if (!(prof->rho > lower && prof->rho < g1.R))
    throw Error(ErrorKind::Precondition, "rho outside (r^((n-1)/n), R)");
  auto note = [&](const std::string& s) { out.trace.push_back(s); };
  if (box.eps_max > 0.25 && box.eps_min > 0.25) {
    out.reason = "epsilon forced above 1/4";
    out.closest_condition = "epsilon";
    out.closest_value = box.eps_min;
    return out;
  }
  // epsilon: (rho/r)^eps g1 keeps K > 1
  const double ratio = prof->rho / prof->r;
  double eps = std::min(box.eps_max, 0.25);
  while (!(prof->min_K_g1 / std::pow(ratio, 2 * eps) > 1.0)) {
    eps *= 0.5;
    if (eps < box.eps_min) {
      out.reason = "no epsilon keeps the rescaled profile above curvature 1";
      out.closest_condition = "epsilon";
      out.closest_value = eps;
      return out;
    }
  }
  {
    std::ostringstream os;
    os << "epsilon=" << eps;
    note(os.str());
  }
  // delta: boundary (v) plus K > 1 of the rescaled end metric at t1
  double delta = std::min(box.delta_max, 0.25);
  auto end_curvature = [&](const NeckParams& p) {
    double q = prof->r / p.r_tilde;
    return prof->min_K_g1 * q * q;
  };
  for (;;) {
    NeckParams p = neck_params(box.t0_start, eps, delta, prof);
    BoundaryReport b = boundary_check(p, box.grid.nx, box.grid.x_margin);
    double kend = end_curvature(p);
    if (b.v() && kend > 1.0) break;
    delta *= 0.5;
    if (delta < box.delta_min) {
      out.reason = "no delta satisfies the t1 boundary condition";
      out.closest_condition = b.v() ? "end_curvature" : "boundary(v)";
      out.closest_value = b.v() ? kend : b.t1_beta_gamma;
      return out;
    }
  }
  for (; delta >= box.delta_min; delta *= 0.5) {
    {
      std::ostringstream os;
      os << "delta=" << delta;
      note(os.str());
    }
    for (double t0 = box.t0_start; t0 <= box.t0_max; t0 *= box.t0_factor) {
      ++out.t0_steps;
      NeckParams p = neck_params(t0, eps, delta, prof);
      BoundaryReport b = boundary_check(p, box.grid.nx, box.grid.x_margin);
      NeckGridReport rep = ricci_positivity_report(p, box.grid);
      std::ostringstream os;
      os << "t0=" << t0 << " tt=" << rep.ric_tt.value << " xx=" << rep.ric_xx.value
         << " ss=" << rep.ric_ss.value << " det=" << rep.det.value << " boundary=" << b.pass();
      note(os.str());
      out.params = p;
      out.report = rep;
      out.boundary = b;
      if (rep.pass && b.pass()) {
        out.feasible = true;
        return out;
      }
    }
    if (out.t0_steps >= box.max_t0_steps) break;
  }
  out.reason = "t0 budget exhausted";
  const NeckGridReport& rep = out.report;
  std::pair<const char*, double> cands[] = {{"ric_tt", rep.ric_tt.value},
                                            {"ric_xx", rep.ric_xx.value},
                                            {"ric_ss", rep.ric_ss.value},
                                            {"det2x2", rep.det.value}};
  double best = -std::numeric_limits<double>::infinity();
  for (auto& [name, v] : cands)
    if (v <= 0.0 && v > best) {
      best = v;
      out.closest_condition = name;
      out.closest_value = v;
    }
  if (out.closest_condition.empty()) {
    out.closest_condition = "boundary";
    out.closest_value = out.boundary.II_t1_min;
  }
  return out;
}

}  // namespace rf::neck
