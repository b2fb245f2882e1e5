#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ricci_forge/errors.hpp"
#include "ricci_forge/neck_builder.hpp"

using namespace rf;
using namespace rf::neck;
using chart::Vec;

namespace {

constexpr double kPi = std::numbers::pi;

const ProfileG1& g1() {
  static const ProfileG1 g = fixture_g1(4, 0.1, 0.5);
  return g;
}

std::shared_ptr<const RenormalizedProfile> prof() {
  static const auto p = prepare_profile(g1(), 0.4);
  return p;
}

}  // namespace

TEST_CASE("fixture profile invariants") {
  const auto& g = g1();
  CHECK(g.D == doctest::Approx(kPi * 0.5));
  CHECK(g.sup_f1 == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(g.fprime_end == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(g.f1.value(0.0)) < 1e-15);
  CHECK(std::abs(g.f1.value(g.D)) < 1e-9);
  CHECK(g.f1.eval(0.0).d1 == doctest::Approx(1.0));
  CHECK(g.min_K_XSigma > 1.0);
  CHECK(g.min_K_SigmaSigma > 1.0);
  for (double phi : {0.05, 0.3, 0.7, 1.2, 1.5}) {
    auto [kr, kt] = warped::warped_sectional(g.f1, phi);
    CHECK(kr == doctest::Approx(fixture_curvature(g, phi)).epsilon(1e-12));
    CHECK(kr > 1.0);
    CHECK(kt > 1.0);
  }
  CHECK_THROWS_AS(fixture_g1(4, 0.5, 0.4), rf::Error);
  CHECK_THROWS_AS(fixture_g1(2, 0.1, 0.5), rf::Error);
}

TEST_CASE("eta profile bounds") {
  auto p = prof();
  CHECK(p->a1 == doctest::Approx(p->A1.value(0.0) / p->r).epsilon(1e-9));
  CHECK(p->A1.value(-kPi / 2) == doctest::Approx(p->r).epsilon(1e-8));
  CHECK(p->a1 > p->rho / p->r);
  CHECK(p->alpha_tilde == doctest::Approx(std::log(p->a1) / std::log(4.0)));
  CHECK(p->alpha_tilde > 1.0);
  CHECK(p->eta_max <= 1.0 + 1e-9);
  CHECK(p->eta_min >= -1e-12);
  CHECK(p->eta_min > -1.0 / (p->a1 - 1.0));
  CHECK(p->h_eta > 0.0);
  CHECK(p->h_eta <= 1.0);
  CHECK(p->sin_bound_margin > 0.0);
  CHECK(p->eta.value(0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(p->eta.value(-kPi / 2)) < 1e-8);
  CHECK(std::abs(p->eta.value(kPi / 2)) < 1e-8);
}

TEST_CASE("gtilde sectional curvatures") {
  auto p = prof();
  SUBCASE("a = 1 is round of radius b") {
    for (double x : {-1.0, 0.2, 1.3}) {
      auto [kxs, kss] = gtilde_sectional(1.0, 0.3, x, *p);
      CHECK(kxs == doctest::Approx(1.0 / 0.09).epsilon(1e-12));
      CHECK(kss == doctest::Approx(1.0 / 0.09).epsilon(1e-12));
    }
  }
  SUBCASE("homogeneous of degree -2 in b") {
    auto [a1, a2] = gtilde_sectional(3.0, 0.2, 0.5, *p);
    auto [b1, b2] = gtilde_sectional(3.0, 0.4, 0.5, *p);
    CHECK(a1 == doctest::Approx(4 * b1).epsilon(1e-13));
    CHECK(a2 == doctest::Approx(4 * b2).epsilon(1e-13));
  }
  SUBCASE("a = a1, b = r is the fixture metric") {
    for (double x : {-1.2, -0.4, 0.3, 1.1}) {
      auto [kxs, kss] = gtilde_sectional(p->a1, p->r, x, *p);
      auto [kr, kt] = warped::warped_sectional(g1().f1, p->renorm.phi_of_x(x));
      CHECK(kxs == doctest::Approx(kr).epsilon(1e-5));
      CHECK(kss == doctest::Approx(kt).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(gtilde_sectional(0.5, 0.2, 0.1, *p), rf::Error);
  CHECK_THROWS_AS(gtilde_sectional(2.0, 0.2, kPi / 2, *p), rf::Error);
}

TEST_CASE("path of metrics keeps curvature above 1") {
  auto rep = path_check(*prof(), 128, 128);
  CHECK(rep.pass);
  CHECK(rep.min() > 1.0);
  CHECK(rep.min_K_XSigma <= rep.min_K_SigmaSigma + 1e9);
}

TEST_CASE("Gamma and its integral") {
  const double t0 = 50.0, L = std::log(100.0);
  CHECK(gamma(t0, t0) == 0.0);
  double left = gamma(2 * t0, t0);
  double right = gamma(std::nextafter(2 * t0, 1e9), t0);
  CHECK(std::abs(left - right) <= 1e-14 * left);
  CHECK(left == doctest::Approx(1.0 / (2 * t0 * L)));
  CHECK(gamma_integral(t0, 2 * t0) == doctest::Approx(1.0 / (4 * L)).epsilon(1e-14));
  for (double t0q : {3.0, 10.0, 1e4, 1e8}) {
    CAPTURE(t0q);
    CHECK(std::abs(delta_t0_quadrature(t0q) - delta_t0(t0q)) <= 1e-10);
  }
  // derivative by central difference on both sides
  for (double t : {70.0, 300.0}) {
    double h = 1e-4 * t;
    double fd = (gamma(t + h, t0) - gamma(t - h, t0)) / (2 * h);
    CHECK(gamma_prime(t, t0) == doctest::Approx(fd).epsilon(1e-7));
    double fi = (gamma_integral(t0, t + h) - gamma_integral(t0, t - h)) / (2 * h);
    CHECK(gamma(t, t0) == doctest::Approx(fi).epsilon(1e-7));
  }
  for (double s : {std::log(70.0), std::log(300.0)}) {
    double t = std::exp(s);
    auto g = gamma_scaled(s, t0);
    CHECK(g.tG == doctest::Approx(t * gamma(t, t0)).epsilon(1e-12));
    CHECK(g.t2Gp == doctest::Approx(t * t * gamma_prime(t, t0)).epsilon(1e-12));
    CHECK(g.integral == doctest::Approx(gamma_integral(t0, t)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gamma(1.0, t0), rf::Error);
  CHECK_THROWS_AS(delta_t0(1.5), rf::Error);
}

TEST_CASE("neck parameters") {
  auto p = neck_params(10.0, 0.125, 0.25, prof());
  const double L = std::log(20.0);
  CHECK(p.log_t1() == doctest::Approx(5 * 4 * L * L / (1 + 4 * L)).epsilon(1e-14));
  CHECK(p.log_t1_numeric == doctest::Approx(p.log_t1_closed).epsilon(1e-9));
  CHECK(p.r_tilde == doctest::Approx(p.r_tilde_closed).epsilon(1e-9));
  CHECK(p.beta > 0.0);
  CHECK(p.alpha > 0.0);
  CHECK(p.alpha * p.beta * p.Delta == doctest::Approx(1.25 * std::log(prof()->a1)));
  CHECK(p.log_kappa + p.log_t1() == doctest::Approx(std::log(p.prof->r / p.r_tilde)));
  CHECK_THROWS_AS(neck_params(10.0, 0.3, 0.1, prof()), rf::Error);
  CHECK_THROWS_AS(neck_params(2.0, 0.1, 0.1, prof()), rf::Error);
  CHECK_THROWS_AS(neck_params(10.0, 0.1, 0.0, prof()), rf::Error);
}

TEST_CASE("log-derivatives of h and k") {
  auto p = neck_params(10.0, 0.125, 0.25, prof());
  for (double s : {std::log(13.0), std::log(45.0), 7.0}) {
    constexpr double d = 1e-5;
    auto a = neck_functions(p, s - d), b = neck_functions(p, s + d), c = neck_functions(p, s);
    CHECK(c.th1 == doctest::Approx((std::log(b.h) - std::log(a.h)) / (2 * d)).epsilon(1e-6));
    CHECK(c.tk1 == doctest::Approx((std::log(b.k) - std::log(a.k)) / (2 * d)).epsilon(1e-6));
    // t^2 h''/h = (d/ds)(t h'/h) + (t h'/h)^2 - t h'/h
    double dth = (b.th1 - a.th1) / (2 * d);
    CHECK(c.t2h2 == doctest::Approx(dth + c.th1 * c.th1 - c.th1).epsilon(1e-6));
    double dtk = (b.tk1 - a.tk1) / (2 * d);
    CHECK(c.t2k2 == doctest::Approx(dtk + c.tk1 * c.tk1 - c.tk1).epsilon(1e-6));
  }
}

TEST_CASE("seam at t = 2 t0") {
  auto p = neck_params(10.0, 0.125, 0.25, prof());
  double L = p.L;
  auto lo = neck_functions(p, L - 1e-12), hi = neck_functions(p, L + 1e-12);
  CHECK(lo.h == doctest::Approx(hi.h).epsilon(1e-10));
  CHECK(lo.th1 == doctest::Approx(hi.th1).epsilon(1e-10));
  CHECK(lo.tk1 == doctest::Approx(hi.tk1).epsilon(1e-10));
  CHECK(std::abs(lo.t2h2 - hi.t2h2) > 1e-3);
  try {
    neck_curvatures(p, L, 0.1);
    FAIL("expected seam error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Seam);
  }
  CHECK_THROWS_AS(neck_curvatures(p, std::log(5.0), 0.1), rf::Error);
  CHECK_THROWS_AS(neck_curvatures(p, std::log(12.0), 1.57), rf::Error);
}

TEST_CASE("neck curvatures agree with the chart oracle") {
  auto p = neck_params(10.0, 0.125, 0.25, prof());
  auto w = neck_warp(p, 200.0);
  auto c = warped::two_var_chart(w);
  for (auto [t, x] : {std::pair{15.0, 0.3}, std::pair{60.0, -0.8}}) {
    Vec q = Vec::Constant(5, 1.1);
    q[0] = t;
    q[1] = x;
    auto cur = chart::riemann_ricci_fd(c, q, 1e-3);
    double a = w.A(t, x).v, b = w.B(t, x).v;
    Vec T = Vec::Zero(5), X = T, S = T, S2 = T;
    T[0] = 1;
    X[1] = 1 / a;
    S[2] = 1 / b;
    S2[3] = 1 / (b * std::sin(1.1));
    auto pt = neck_curvatures(p, std::log(t), x);
    double t2 = t * t;
    CHECK(t2 * chart::frame_sectional(cur, T, X) == doctest::Approx(pt.normalized.K_TX).epsilon(1e-5));
    CHECK(t2 * chart::frame_sectional(cur, T, S) == doctest::Approx(pt.normalized.K_TSigma).epsilon(1e-5));
    CHECK(t2 * chart::frame_sectional(cur, X, S) == doctest::Approx(pt.normalized.K_XSigma).epsilon(1e-5));
    CHECK(t2 * chart::frame_sectional(cur, S, S2) ==
          doctest::Approx(pt.normalized.K_SigmaSigma).epsilon(1e-5));
    CHECK(t2 * chart::frame_ricci(cur, T, T) == doctest::Approx(pt.ricci.TT).epsilon(1e-5));
    CHECK(t2 * chart::frame_ricci(cur, X, X) == doctest::Approx(pt.ricci.XX).epsilon(1e-5));
    CHECK(t2 * chart::frame_ricci(cur, T, X) ==
          doctest::Approx(pt.ricci.TX).epsilon(1e-5).scale(std::abs(pt.ricci.XX)));
    // scaled metric kappa^2 g: curvature divided by (kappa t)^2
    auto act = pt.actual();
    double kt = std::exp(pt.log_scale);
    CHECK(act.K_TX * kt * kt == doctest::Approx(pt.normalized.K_TX));
  }
}

TEST_CASE("boundary conditions for searched parameters") {
  auto p = neck_params(1048576.0, 0.125, 0.125, prof());
  auto b = boundary_check(p);
  CHECK(b.ii);
  CHECK(b.iii);
  CHECK(b.iv);
  CHECK(b.v());
  CHECK(b.II_t0_equals_minus_lambda);
  CHECK(b.II_t0_min == doctest::Approx(-p.lambda).epsilon(1e-12));
  CHECK(b.II_t1_at_least_one);
  CHECK(b.II_t1_min >= 1.0);
  CHECK(b.pass());
  auto rep = ricci_positivity_report(p);
  CHECK(rep.pass);
  CHECK(rep.violation_count == 0);
  CHECK(rep.rows > rep.nt);
  CHECK(rep.det.value > 0);
}

TEST_CASE("bad parameters produce violations") {
  auto p = neck_params(2.1, 0.125, 0.25, prof());
  NeckGridOptions opt;
  opt.nt = 128;
  opt.nx = 64;
  auto rep = ricci_positivity_report(p, opt);
  CHECK_FALSE(rep.pass);
  CHECK(rep.violation_count > 0);
  CHECK_FALSE(rep.violations.empty());
  CHECK(rep.violations.size() <= static_cast<size_t>(opt.max_violations));
  opt.nt = 8;
  CHECK_THROWS_AS(ricci_positivity_report(p, opt), rf::Error);
}

TEST_CASE("doubling kappa scales curvature by 1/4") {
  auto p = neck_params(1e4, 0.125, 0.125, prof());
  auto pt = neck_curvatures(p, std::log(5e4), 0.4);
  auto doubled = pt;
  doubled.log_scale += std::log(2.0);
  CHECK(doubled.actual().K_XSigma * 4 == doctest::Approx(pt.actual().K_XSigma).epsilon(1e-13));
  CHECK(doubled.actual_II().XX * 2 == doctest::Approx(pt.actual_II().XX).epsilon(1e-13));
}

TEST_CASE("asymptotic constants") {
  auto p = neck_params(1048576.0, 0.125, 0.125, prof());
  NeckGridOptions opt;
  opt.nt = 256;
  opt.nx = 64;
  auto a = asymptotic_bound_check(p, opt);
  CHECK(a.finite);
  CHECK(a.gammaisbig);
  CHECK(a.cs_min > 0.0);
  CHECK(a.cl_min > 0.0);
  // alpha h / (1 + (h - 1) eta) - n is positive where eta -> 0 on this profile
  CHECK(a.negcoef_max > 0.0);
  CHECK_FALSE(a.negcoef);
  CHECK(p.alpha < 4 * (1 + p.delta) / (1 - p.eps));
}

TEST_CASE("parameter search") {
  auto out = parameter_search(g1(), prof());
  REQUIRE(out.feasible);
  CHECK(out.report.pass);
  CHECK(out.boundary.pass());
  CHECK(out.params.eps <= 0.25);
  CHECK(out.params.delta <= 0.25);
  CHECK_FALSE(out.trace.empty());

  SearchBox forced;
  forced.eps_max = 0.5;
  forced.eps_min = 0.3;
  auto inf = parameter_search(g1(), prof(), forced);
  CHECK_FALSE(inf.feasible);
  CHECK(inf.closest_condition == "epsilon");

  try {
    parameter_search(g1(), prepare_profile(g1(), 0.6));
    FAIL("expected rho window error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK_THROWS_AS(parameter_search(g1(), prepare_profile(g1(), 0.15)), rf::Error);
}
