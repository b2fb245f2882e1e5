#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ricci_forge/chart_calculus.hpp"
#include "ricci_forge/profile.hpp"

namespace rf::warped {

// Value and partials of a function of (t, x).
struct Jet2 {
  double v = 0.0;
  double t = 0.0;
  double x = 0.0;
  double tt = 0.0;
  double xx = 0.0;
  double tx = 0.0;
};

// dt^2 + A(t,x)^2 dx^2 + B(t,x)^2 ds_n^2
struct TwoVarWarp {
  std::function<Jet2(double, double)> A;
  std::function<Jet2(double, double)> B;
  Interval t_domain;
  Interval x_domain;
  int fiber_dim = 2;
};

struct SectionalSet {
  double K_TX = 0.0;
  double K_TSigma = 0.0;
  double K_XSigma = 0.0;
  double K_SigmaSigma = 0.0;
  double Ric_TX_offdiag = 0.0;
  // intrinsic curvatures of the t-slice
  double K_XSigma_slice = 0.0;
  double K_SigmaSigma_slice = 0.0;
};

struct SecondFundamental {
  double XX = 0.0;
  double SigmaSigma = 0.0;
};

enum class SliceKind { Time, Space };

std::pair<double, double> warped_sectional(const ScalarProfile& f, double phi,
                                           double pole_margin = 1e-3);

SectionalSet necksectional(const TwoVarWarp& w, double t, double x);
SectionalSet necksectional(const Jet2& A, const Jet2& B, int fiber_dim);

SecondFundamental slice_second_fundamental(const TwoVarWarp& w, double t, double x,
                                           SliceKind kind = SliceKind::Time);
SecondFundamental slice_second_fundamental(const Jet2& A, const Jet2& B,
                                           SliceKind kind = SliceKind::Time);

SectionalSet scale_curvature(double kappa, const SectionalSet& s);
SecondFundamental scale_curvature(double kappa, const SecondFundamental& s);

// Frame Ricci of dt^2 + A^2 dx^2 + B^2 ds_n^2 assembled from sectional sums.
struct FrameRicci {
  double TT = 0.0;
  double XX = 0.0;
  double SigmaSigma = 0.0;
  double TX = 0.0;
  double det2x2() const { return TT * XX - TX * TX; }
};
FrameRicci frame_ricci(const SectionalSet& s, int fiber_dim);

// Coordinate chart (t, x, theta_1..theta_n) for the oracle.
chart::MetricChart two_var_chart(const TwoVarWarp& w, double pole_margin = 1e-2);

struct RenormalizedA1 {
  ScalarProfile A1;
  double phi_max = 0.0;
  double sup_A1 = 0.0;
  double r = 0.0;
  double D = 0.0;
  // phi(x) with f1(phi) = r cos x on the branch selected by sign(x)
  std::function<double(double)> phi_of_x;
};

RenormalizedA1 renormalize_profile(const ScalarProfile& f1, double r, int check_samples = 1024);

enum class SmoothMode { Cap, Even };

struct SmoothnessResult {
  bool pass = true;
  std::vector<std::string> defects;
};

SmoothnessResult smoothness_check(const ScalarProfile& p, double endpoint, SmoothMode mode,
                                  int order, double tol = 1e-6);

}  // namespace rf::warped
