#include "ricci_forge/chart_calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ricci_forge/errors.hpp"

namespace rf::chart {

namespace {

constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
constexpr std::array<double, 4> kFirst{1.0, -8.0, 8.0, -1.0};       // / 12h
constexpr std::array<double, 4> kSecond{-1.0, 16.0, 16.0, -1.0};    // center -30, / 12h^2

void require_margin(const MetricChart& chart, const Vec& p, double margin) {
  if (p.size() != chart.dim) throw Error(ErrorKind::Precondition, "point dimension mismatch");
  for (int i = 0; i < chart.dim; ++i) {
    if (p[i] - chart.domain.lo[i] < margin || chart.domain.hi[i] - p[i] < margin)
      throw Error(ErrorKind::Margin, "coordinate " + std::to_string(i) +
                                         " closer than " + std::to_string(margin) +
                                         " to the chart boundary");
  }
}

Mat guarded_inverse(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Singularity, "eigensolver failed");
  const Vec& ev = es.eigenvalues();
  double lo = ev.minCoeff(), hi = ev.cwiseAbs().maxCoeff();
  if (!(lo > 0.0)) throw Error(ErrorKind::Singularity, "metric not positive definite");
  if (hi / lo > kConditionLimit)
    throw Error(ErrorKind::Singularity, "metric condition number above 1e12");
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

Vec shifted(const Vec& p, int a, double da) {
  Vec q = p;
  q[a] += da;
  return q;
}

Vec shifted(const Vec& p, int a, double da, int b, double db) {
  Vec q = p;
  q[a] += da;
  q[b] += db;
  return q;
}

std::vector<Mat> first_derivatives(const MetricChart& chart, const Vec& p, double h) {
  std::vector<Mat> dg(chart.dim);
  for (int a = 0; a < chart.dim; ++a) {
    Mat acc = Mat::Zero(chart.dim, chart.dim);
    for (int i = 0; i < 4; ++i) acc += kFirst[i] * chart.metric(shifted(p, a, kOffsets[i] * h));
    dg[a] = acc / (12.0 * h);
  }
  return dg;
}

Rank3 christoffel_from(const Mat& ginv, const std::vector<Mat>& dg, int n) {
  Rank3 gam(n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += ginv(c, d) * (dg[a](b, d) + dg[b](a, d) - dg[d](a, b));
        gam(c, a, b) = gam(c, b, a) = 0.5 * s;
      }
  return gam;
}

}  // namespace

double Box::shortest_side() const { return (hi - lo).minCoeff(); }

Mat MetricChart::metric(const Vec& p) const {
  Mat m = g(p);
  return 0.5 * (m + m.transpose());
}

double SymmetryDefects::max() const {
  return std::max({antisym_ab, antisym_cd, pair_swap, bianchi, ricci_asym, christoffel_asym});
}

double default_step(const MetricChart& chart) { return 1e-3 * chart.domain.shortest_side(); }

Rank3 christoffel_fd(const MetricChart& chart, const Vec& point, double step) {
  if (!(step > 0)) throw Error(ErrorKind::Precondition, "step must be positive");
  require_margin(chart, point, 2.0 * step);
  Mat ginv = guarded_inverse(chart.metric(point));
  return christoffel_from(ginv, first_derivatives(chart, point, step), chart.dim);
}

CurvatureAtPoint riemann_ricci_fd(const MetricChart& chart, const Vec& point, double step) {
  if (!(step > 0)) throw Error(ErrorKind::Precondition, "step must be positive");
  require_margin(chart, point, 4.0 * step);
  const int n = chart.dim;
  const double h = step;
  Mat g0 = chart.metric(point);
  Mat ginv = guarded_inverse(g0);
  auto dg = first_derivatives(chart, point, h);

  // d2g[a*n+b] = d_a d_b g
  std::vector<Mat> d2g(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    Mat acc = -30.0 * g0;
    for (int i = 0; i < 4; ++i) acc += kSecond[i] * chart.metric(shifted(point, a, kOffsets[i] * h));
    d2g[a * n + a] = acc / (12.0 * h * h);
    for (int b = a + 1; b < n; ++b) {
      Mat m = Mat::Zero(n, n);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          m += kFirst[i] * kFirst[j] *
               chart.metric(shifted(point, a, kOffsets[i] * h, b, kOffsets[j] * h));
      d2g[a * n + b] = d2g[b * n + a] = m / (144.0 * h * h);
    }
  }
  auto D2 = [&](int a, int b, int i, int j) { return d2g[a * n + b](i, j); };

  CurvatureAtPoint out;
  out.point = point;
  out.metric = g0;
  out.christoffel = christoffel_from(ginv, dg, n);
  const Rank3& G = out.christoffel;
  out.riemann_lowered = Rank4(n);
  Rank4& R = out.riemann_lowered;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.5 * (D2(b, d, a, c) + D2(a, c, b, d) - D2(b, c, a, d) - D2(a, d, b, c));
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f)
              v += g0(e, f) * (G(e, b, d) * G(f, a, c) - G(e, b, c) * G(f, a, d));
          R(a, b, c, d) = v;
        }
  out.ricci = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d) s += ginv(a, d) * R(a, b, c, d);
      out.ricci(b, c) = s;
    }
  return out;
}

double frame_sectional(const CurvatureAtPoint& curv, const Vec& u, const Vec& v) {
  const int n = curv.riemann_lowered.n;
  const Mat& g = curv.metric;
  double uu = u.dot(g * u), vv = v.dot(g * v), uv = u.dot(g * v);
  double gram = uu * vv - uv * uv;
  double scale = std::max(uu * vv, 1e-300);
  if (!(gram > 1e-12 * scale)) throw Error(ErrorKind::DegeneratePlane, "plane vectors dependent");
  double num = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          num += curv.riemann_lowered(a, b, c, d) * u[a] * v[b] * v[c] * u[d];
  return num / gram;
}

double sectional_fd(const CurvatureAtPoint& curv, const MetricChart& chart, const Vec& u,
                    const Vec& v) {
  if (u.size() != chart.dim || v.size() != chart.dim)
    throw Error(ErrorKind::Precondition, "plane vector dimension mismatch");
  return frame_sectional(curv, u, v);
}

double frame_ricci(const CurvatureAtPoint& curv, const Vec& u, const Vec& v) {
  return u.dot(curv.ricci * v);
}

Mat second_fundamental_fd(const MetricChart& chart, int slice_axis, const Vec& point,
                          double step) {
  const int n = chart.dim;
  if (slice_axis < 0 || slice_axis >= n) throw Error(ErrorKind::Precondition, "bad slice axis");
  require_margin(chart, point, 2.0 * step);
  Mat g0 = chart.metric(point);
  double scale = std::max(1.0, g0.cwiseAbs().maxCoeff());
  if (std::abs(g0(slice_axis, slice_axis) - 1.0) > 1e-9)
    throw Error(ErrorKind::Precondition, "normal coefficient is not 1");
  for (int i = 0; i < n; ++i)
    if (i != slice_axis && std::abs(g0(slice_axis, i)) > 1e-9 * scale)
      throw Error(ErrorKind::Precondition, "metric has cross terms with the normal coordinate");
  Mat acc = Mat::Zero(n, n);
  for (int i = 0; i < 4; ++i)
    acc += kFirst[i] * chart.metric(shifted(point, slice_axis, kOffsets[i] * step));
  Mat dn = acc / (12.0 * step);
  Mat II(n - 1, n - 1);
  for (int i = 0, ii = 0; i < n; ++i) {
    if (i == slice_axis) continue;
    for (int j = 0, jj = 0; j < n; ++j) {
      if (j == slice_axis) continue;
      II(ii, jj) = 0.5 * dn(i, j);
      ++jj;
    }
    ++ii;
  }
  return II;
}

SymmetryDefects symmetry_defects(const CurvatureAtPoint& curv) {
  SymmetryDefects s;
  const Rank4& R = curv.riemann_lowered;
  const int n = R.n;
  double scale = 1e-300;
  for (double v : R.data) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double r = R(a, b, c, d);
          s.antisym_ab = std::max(s.antisym_ab, std::abs(r + R(b, a, c, d)) / scale);
          s.antisym_cd = std::max(s.antisym_cd, std::abs(r + R(a, b, d, c)) / scale);
          s.pair_swap = std::max(s.pair_swap, std::abs(r - R(c, d, a, b)) / scale);
          s.bianchi = std::max(s.bianchi, std::abs(r + R(a, c, d, b) + R(a, d, b, c)) / scale);
        }
  const Mat& Ric = curv.ricci;
  s.ricci_asym = (Ric - Ric.transpose()).cwiseAbs().maxCoeff() / scale;
  const Rank3& G = curv.christoffel;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        s.christoffel_asym = std::max(s.christoffel_asym, std::abs(G(c, a, b) - G(c, b, a)));
  return s;
}

MetricChart scaled(const MetricChart& chart, double kappa) {
  MetricChart out = chart;
  auto g = chart.g;
  double k2 = kappa * kappa;
  out.g = [g, k2](const Vec& p) -> Mat { return k2 * g(p); };
  return out;
}

}  // namespace rf::chart
