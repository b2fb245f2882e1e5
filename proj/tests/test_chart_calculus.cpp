#include <doctest.h>

#include <cmath>
#include <random>

#include "ricci_forge/chart_calculus.hpp"
#include "ricci_forge/errors.hpp"

using namespace rf;
using chart::Mat;
using chart::MetricChart;
using chart::Vec;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

MetricChart make_chart(int dim, std::function<Mat(const Vec&)> g, Vec lo, Vec hi) {
  MetricChart c;
  c.dim = dim;
  c.g = std::move(g);
  c.domain.lo = std::move(lo);
  c.domain.hi = std::move(hi);
  return c;
}

// round sphere of radius a in (theta, phi)
MetricChart sphere2(double a) {
  return make_chart(
      2,
      [a](const Vec& p) {
        Mat g = Mat::Zero(2, 2);
        g(0, 0) = a * a;
        g(1, 1) = a * a * std::sin(p(0)) * std::sin(p(0));
        return g;
      },
      vec({0.1, -3.0}), vec({3.0, 3.0}));
}

// flat R^3 in spherical coordinates (r, theta, phi)
MetricChart flat_spherical() {
  return make_chart(
      3,
      [](const Vec& p) {
        Mat g = Mat::Zero(3, 3);
        g(0, 0) = 1.0;
        g(1, 1) = p(0) * p(0);
        g(2, 2) = p(0) * p(0) * std::sin(p(1)) * std::sin(p(1));
        return g;
      },
      vec({0.5, 0.2, -3.0}), vec({3.0, 2.9, 3.0}));
}

}  // namespace

TEST_CASE("round 2-sphere has K = 1/a^2") {
  for (double a : {0.5, 1.0, 3.0}) {
    auto c = sphere2(a);
    auto p = vec({1.1, 0.4});
    auto cur = chart::riemann_ricci_fd(c, p, chart::default_step(c));
    double K = chart::sectional_fd(cur, c, vec({1, 0}), vec({0, 1}));
    CHECK(K == doctest::Approx(1.0 / (a * a)).epsilon(1e-8));
    // Ric = K g in dimension 2
    CHECK(cur.ricci(0, 0) == doctest::Approx(K * a * a).epsilon(1e-8));
  }
}

TEST_CASE("hyperbolic half plane has K = -1") {
  auto c = make_chart(
      2, [](const Vec& p) { return Mat(Mat::Identity(2, 2) / (p(1) * p(1))); }, vec({-1, 0.5}),
      vec({1, 2}));
  auto cur = chart::riemann_ricci_fd(c, vec({0.1, 1.2}), 1e-3);
  CHECK(chart::sectional_fd(cur, c, vec({1, 0}), vec({0.3, 1})) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("polar Christoffel symbols match the closed form") {
  auto c = make_chart(
      2,
      [](const Vec& p) {
        Mat g = Mat::Identity(2, 2);
        g(1, 1) = p(0) * p(0);
        return g;
      },
      vec({0.5, -3}), vec({3, 3}));
  double r = 1.7;
  auto G = chart::christoffel_fd(c, vec({r, 0.2}), 1e-3);
  CHECK(G(0, 1, 1) == doctest::Approx(-r).epsilon(1e-10));
  CHECK(G(1, 0, 1) == doctest::Approx(1.0 / r).epsilon(1e-10));
  CHECK(G(1, 1, 0) == doctest::Approx(1.0 / r).epsilon(1e-10));
  CHECK(std::abs(G(0, 0, 0)) < 1e-10);
  auto cur = chart::riemann_ricci_fd(c, vec({r, 0.2}), 1e-3);
  CHECK(cur.riemann_lowered.data.size() == 16u);
  for (double v : cur.riemann_lowered.data) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("round 3-sphere is Einstein with constant 2") {
  auto c = make_chart(
      3,
      [](const Vec& p) {
        Mat g = Mat::Zero(3, 3);
        double s1 = std::sin(p(0)), s2 = std::sin(p(1));
        g(0, 0) = 1;
        g(1, 1) = s1 * s1;
        g(2, 2) = s1 * s1 * s2 * s2;
        return g;
      },
      vec({0.2, 0.2, -3}), vec({2.9, 2.9, 3}));
  auto p = vec({1.0, 1.3, 0.5});
  auto cur = chart::riemann_ricci_fd(c, p, chart::default_step(c));
  Mat diff = cur.ricci - 2.0 * cur.metric;
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("curvature tensor symmetries on a generic metric") {
  auto c = make_chart(
      3,
      [](const Vec& p) {
        Mat g(3, 3);
        g << 2 + std::sin(p(0) * p(1)), 0.1 * p(2), 0.2 * std::cos(p(0)),
            0.1 * p(2), 1.5 + p(0) * p(0), 0.05 * p(1) * p(2),
            0.2 * std::cos(p(0)), 0.05 * p(1) * p(2), 1 + 0.3 * std::exp(p(2));
        return g;
      },
      vec({-1, -1, -1}), vec({1, 1, 1}));
  auto cur = chart::riemann_ricci_fd(c, vec({0.2, -0.1, 0.3}), 1e-3);
  auto d = chart::symmetry_defects(cur);
  CHECK(d.max() < 1e-8);
}

TEST_CASE("second fundamental form of round spheres in flat space") {
  auto c = flat_spherical();
  for (double r : {0.8, 1.5, 2.2}) {
    auto p = vec({r, 1.0, 0.3});
    Mat II = chart::second_fundamental_fd(c, 0, p, 1e-3);
    Mat g = c.metric(p);
    CHECK(II(0, 0) / g(1, 1) == doctest::Approx(1.0 / r).epsilon(1e-10));
    CHECK(II(1, 1) / g(2, 2) == doctest::Approx(1.0 / r).epsilon(1e-10));
  }
  // theta is not a unit-normal coordinate
  CHECK_THROWS_AS(chart::second_fundamental_fd(c, 1, vec({1.5, 1.0, 0.3}), 1e-3), rf::Error);
}

TEST_CASE("error paths") {
  auto c = sphere2(1.0);
  SUBCASE("margin") {
    try {
      chart::riemann_ricci_fd(c, vec({0.1005, 0.0}), 1e-3);
      FAIL("expected margin error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Margin);
    }
  }
  SUBCASE("degenerate plane") {
    auto cur = chart::riemann_ricci_fd(c, vec({1.0, 0.0}), 1e-3);
    try {
      chart::sectional_fd(cur, c, vec({1, 1}), vec({2, 2}));
      FAIL("expected degenerate plane");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegeneratePlane);
    }
  }
  SUBCASE("singular metric") {
    auto s = make_chart(
        2, [](const Vec&) { Mat g = Mat::Zero(2, 2); g(0, 0) = 1; return g; }, vec({-1, -1}),
        vec({1, 1}));
    try {
      chart::christoffel_fd(s, vec({0, 0}), 1e-3);
      FAIL("expected singularity");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Singularity);
    }
  }
  SUBCASE("ill-conditioned metric") {
    auto s = make_chart(
        2, [](const Vec&) { Mat g = Mat::Identity(2, 2); g(1, 1) = 1e-13; return g; },
        vec({-1, -1}), vec({1, 1}));
    CHECK_THROWS_AS(chart::christoffel_fd(s, vec({0, 0}), 1e-3), rf::Error);
  }
}

TEST_CASE("scaling covariance of the oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> k(0.2, 5.0);
  auto c = sphere2(1.3);
  auto p = vec({0.9, 0.1});
  auto base = chart::riemann_ricci_fd(c, p, 1e-3);
  double K = chart::sectional_fd(base, c, vec({1, 0}), vec({0, 1}));
  for (int i = 0; i < 5; ++i) {
    double kappa = k(rng);
    auto sc = chart::scaled(c, kappa);
    auto cur = chart::riemann_ricci_fd(sc, p, 1e-3);
    double Ks = chart::sectional_fd(cur, sc, vec({1, 0}), vec({0, 1}));
    CHECK(Ks * kappa * kappa == doctest::Approx(K).epsilon(1e-9));
    CHECK((cur.ricci - base.ricci).cwiseAbs().maxCoeff() < 1e-9);
  }
}
