#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ricci_forge/profile.hpp"
#include "ricci_forge/warped_forms.hpp"

namespace rf::neck {

struct ProfileG1 {
  ScalarProfile f1;
  double r = 0.0;
  double R = 0.0;
  double D = 0.0;
  int n = 4;
  double curvature_margin = 0.0;
  double bump_width = 0.0;
  double bump_amplitude = 0.0;
  double sup_f1 = 0.0;
  double fprime_end = 0.0;
  double min_K_XSigma = 0.0;
  double min_K_SigmaSigma = 0.0;
};

// Shooting-method test metric d phi^2 + f1^2 ds_{n-1}^2 with K > 1.
ProfileG1 fixture_g1(int n, double r, double R, double curvature_margin = 1.0);

// Curvature profile c(phi) = -f1''/f1 used by the fixture.
double fixture_curvature(const ProfileG1& g1, double phi);

struct RenormalizedProfile {
  warped::RenormalizedA1 renorm;
  ScalarProfile A1;
  ScalarProfile eta;
  double r = 0.0;
  double R = 0.0;
  double rho = 0.0;
  int n = 4;
  double a1 = 0.0;
  double alpha_tilde = 0.0;
  double eta_min = 0.0;
  double eta_max = 0.0;
  double h_eta = 0.0;
  double sin_bound_margin = 0.0;
  double min_K_g1 = 0.0;
};

RenormalizedProfile eta_profile(const warped::RenormalizedA1& renorm, double rho, int samples = 1024);
// fixture -> renormalization -> eta in one step; min_K_g1 filled from the fixture grid
std::shared_ptr<const RenormalizedProfile> prepare_profile(const ProfileG1& g1, double rho);

std::pair<double, double> gtilde_sectional(double a, double b, double x,
                                           const RenormalizedProfile& prof,
                                           double x_margin = 1e-6);
std::pair<double, double> gtilde_sectional(double a, double b, double x, double eta,
                                           double eta_prime);

struct PathReport {
  double min_K_XSigma = 0.0;
  double min_K_SigmaSigma = 0.0;
  double argmin_a = 0.0;
  double argmin_x = 0.0;
  int na = 0;
  int nx = 0;
  bool pass = false;
  double min() const { return min_K_XSigma < min_K_SigmaSigma ? min_K_XSigma : min_K_SigmaSigma; }
};

PathReport path_check(const RenormalizedProfile& prof, int na = 256, int nx = 256,
                      double x_margin = 1e-2);

double gamma(double t, double t0);
double gamma_prime(double t, double t0);
double gamma_integral(double t0, double t);
double delta_t0(double t0);
double delta_t0_quadrature(double t0);

// Scale-free values at s = ln t: t*Gamma, t^2*Gamma', integral of Gamma from t0.
struct GammaScaled {
  double tG = 0.0;
  double t2Gp = 0.0;
  double integral = 0.0;
};
GammaScaled gamma_scaled(double s, double t0);

struct NeckParams {
  double t0 = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double L = 0.0;  // ln(2 t0)
  double Delta = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double log_t1_closed = 0.0;
  double log_t1_numeric = 0.0;
  double t1 = 0.0;  // may overflow to inf; log_t1 is authoritative
  double r_tilde = 0.0;
  double r_tilde_closed = 0.0;
  double log_kappa = 0.0;
  double log_lambda = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
  std::shared_ptr<const RenormalizedProfile> prof;
  double log_t1() const { return log_t1_closed; }
};

NeckParams neck_params(double t0, double eps, double delta,
                       std::shared_ptr<const RenormalizedProfile> prof);

// h, k and their scale-free log-derivatives at s = ln t.
struct NeckFunctions {
  double k = 0.0, tk1 = 0.0, t2k2 = 0.0;  // k, t k'/k, t^2 k''/k
  double h = 0.0, th1 = 0.0, t2h2 = 0.0;  // h, t h'/h, t^2 h''/h
};
NeckFunctions neck_functions(const NeckParams& p, double s);

struct NeckPoint {
  double s = 0.0;
  double x = 0.0;
  // curvature of g / (kappa t)^2; actual values are these divided by (kappa t)^2
  warped::SectionalSet normalized;
  warped::FrameRicci ricci;
  warped::SecondFundamental II;  // t-slice, normal +d_t, of g / (kappa t)
  double log_scale = 0.0;         // ln(kappa t)
  double det2x2() const { return ricci.det2x2(); }
  warped::SectionalSet actual() const;
  warped::SecondFundamental actual_II() const;
};

struct NeckGridOptions {
  int nt = 512;
  int nx = 128;
  double seam_halfwidth_rel = 1e-3;
  int seam_rows = 24;  // geometric refinement on each side of the seam
  double x_margin = 1e-2;
  int max_violations = 16;
};

NeckPoint neck_curvatures(const NeckParams& p, double s, double x,
                          const NeckGridOptions& opt = {});
NeckPoint neck_curvatures(const NeckParams& p, double s, double x, const Jet& eta,
                          const NeckGridOptions& opt = {});

// Unscaled neck warp dt^2 + A^2 dx^2 + B^2 ds_{n-1}^2 for moderate t (oracle use).
warped::TwoVarWarp neck_warp(const NeckParams& p, double t_hi);

struct BoundaryReport {
  double h_t0_defect = 0.0, k_t0_defect = 0.0;
  double h_t1_defect = 0.0;
  double hp_t0 = 0.0, kp_t0 = 0.0;
  double t1_beta_gamma = 0.0;  // t1 * (-k'/k)(t1)
  double kappa_t1 = 0.0;       // kappa * t1 = r / r_tilde
  bool ii = false, iii = false, iv = false, v_first = false, v_second = false;
  double II_t0_min = 0.0, II_t0_max = 0.0;  // outward normal
  double II_t1_min = 0.0;                   // outward normal
  double minus_lambda = 0.0;
  bool II_t0_equals_minus_lambda = false;
  bool II_t1_at_least_one = false;
  bool v() const { return v_first && v_second; }
  bool pass() const {
    return ii && iii && iv && v() && II_t0_equals_minus_lambda && II_t1_at_least_one;
  }
};

BoundaryReport boundary_check(const NeckParams& p, int nx = 128, double x_margin = 1e-2);

struct Violation {
  std::string quantity;
  double s = 0.0;
  double x = 0.0;
  double value = 0.0;
};

struct NeckMin {
  double value = 0.0;
  double s = 0.0;
  double x = 0.0;
};

struct NeckGridReport {
  NeckMin ric_tt, ric_xx, ric_ss, det;
  NeckMin t2_K_XSigma, t2_K_SigmaSigma;
  std::vector<Violation> violations;
  long violation_count = 0;
  int nt = 0, nx = 0;
  int rows = 0;
  long points = 0;
  long skipped_seam = 0;
  bool pass = false;
};

NeckGridReport ricci_positivity_report(const NeckParams& p, const NeckGridOptions& opt = {});

// Per-grid-point normalized values for CSV dumps: (s, x, TT, XX, SS, det).
std::vector<std::array<double, 6>> neck_grid_values(const NeckParams& p,
                                                    const NeckGridOptions& opt = {});

struct AsymptoticReport {
  double c1_abp = 0.0, c1_ahp = 0.0, c2_ahpp = 0.0, c2_bpp = 0.0;
  double cu_TSigma = 0.0, cu_TX = 0.0, cu_mixed = 0.0;
  double cn_min = 0.0;
  double cs_min = 0.0;
  double cl_min = 0.0;
  double negcoef_max = 0.0;
  bool finite = false;
  bool negcoef = false;
  bool gammaisbig = false;
};

AsymptoticReport asymptotic_bound_check(const NeckParams& p, const NeckGridOptions& opt = {});

struct SearchBox {
  double eps_max = 0.25;
  double eps_min = 1.0 / 1024;
  double delta_max = 0.25;
  double delta_min = 1.0 / 1024;
  double t0_start = 4.0;
  double t0_factor = 4.0;
  double t0_max = 1e9;
  int max_t0_steps = 64;
  NeckGridOptions grid;
};

struct SearchOutcome {
  bool feasible = false;
  NeckParams params;
  NeckGridReport report;
  BoundaryReport boundary;
  std::string reason;
  std::string closest_condition;
  double closest_value = 0.0;
  int t0_steps = 0;
  std::vector<std::string> trace;
};

SearchOutcome parameter_search(const ProfileG1& g1, std::shared_ptr<const RenormalizedProfile> prof,
                               const SearchBox& box = {});

}  // namespace rf::neck
