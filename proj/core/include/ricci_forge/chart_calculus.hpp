#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace rf::chart {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Box {
  Vec lo;
  Vec hi;
  double shortest_side() const;
};

struct MetricChart {
  int dim = 0;
  std::function<Mat(const Vec&)> g;
  Box domain;

  Mat metric(const Vec& p) const;
};

// Flat row-major rank-3 / rank-4 arrays indexed [c][a][b] and [a][b][c][d].
struct Rank3 {
  int n = 0;
  std::vector<double> data;
  explicit Rank3(int dim = 0) : n(dim), data(static_cast<size_t>(dim) * dim * dim, 0.0) {}
  double& operator()(int i, int j, int k) { return data[(i * n + j) * n + k]; }
  double operator()(int i, int j, int k) const { return data[(i * n + j) * n + k]; }
};

struct Rank4 {
  int n = 0;
  std::vector<double> data;
  explicit Rank4(int dim = 0)
      : n(dim), data(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
  double& operator()(int a, int b, int c, int d) { return data[((a * n + b) * n + c) * n + d]; }
  double operator()(int a, int b, int c, int d) const {
    return data[((a * n + b) * n + c) * n + d];
  }
};

struct CurvatureAtPoint {
  Rank3 christoffel;       // Gamma^c_ab stored as (c, a, b)
  Rank4 riemann_lowered;   // R_abcd = g(R(d_a, d_b) d_c, d_d)
  Mat ricci;               // Ric_bc = g^ad R_abcd
  Mat metric;
  Vec point;
};

struct SymmetryDefects {
  double antisym_ab = 0.0;
  double antisym_cd = 0.0;
  double pair_swap = 0.0;
  double bianchi = 0.0;
  double ricci_asym = 0.0;
  double christoffel_asym = 0.0;
  double max() const;
};

constexpr double kConditionLimit = 1e12;
constexpr double kDefaultPoleMargin = 1e-2;

double default_step(const MetricChart& chart);

Rank3 christoffel_fd(const MetricChart& chart, const Vec& point, double step);
CurvatureAtPoint riemann_ricci_fd(const MetricChart& chart, const Vec& point, double step);
double sectional_fd(const CurvatureAtPoint& curv, const MetricChart& chart, const Vec& u,
                    const Vec& v);
// Second fundamental form of the level sets of coordinate slice_axis, paired
// with the normal +d_n. Rows/cols are the remaining coordinates in order.
Mat second_fundamental_fd(const MetricChart& chart, int slice_axis, const Vec& point,
                          double step);

// R(e_i, e_j, e_j, e_i) and Ric(e_i, e_j) in a frame given as columns of E.
double frame_sectional(const CurvatureAtPoint& curv, const Vec& u, const Vec& v);
double frame_ricci(const CurvatureAtPoint& curv, const Vec& u, const Vec& v);

SymmetryDefects symmetry_defects(const CurvatureAtPoint& curv);

// Scales every metric component by kappa^2.
MetricChart scaled(const MetricChart& chart, double kappa);

}  // namespace rf::chart
