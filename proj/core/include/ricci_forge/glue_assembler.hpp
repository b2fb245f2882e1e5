#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricci_forge/core_verifier.hpp"

namespace rf::glue {

enum class BoundaryKind { Round, Warped };

// Boundary component data. II holds principal curvatures for the outward normal.
struct BoundaryData {
  BoundaryKind kind = BoundaryKind::Round;
  int dim = 3;
  double radius = 1.0;      // round radius, or waist for warped
  std::string profile_id;   // identifies the warped profile
  std::vector<double> II;
};

BoundaryData round_boundary(int dim, double radius, std::vector<double> II);
BoundaryData round_boundary(int dim, double radius, double II);

enum class GlueMode { Strict, Degenerate };
GlueMode parse_glue_mode(const std::string& s);
const char* to_string(GlueMode m);

struct GlueResult {
  bool pass = false;
  std::vector<double> sums;
  double min_sum = 0.0;
  double min_II1 = 0.0;
  std::string reason;
};

// Throws Mismatch when the boundaries are not isometric.
GlueResult glue_check(const BoundaryData& b1, const BoundaryData& b2, GlueMode mode = GlueMode::Strict);

struct DockingReport {
  int n = 0;
  int k = 0;
  double rho = 0.0;
  double r = 0.0;
  double R = 0.0;
  double lower = 0.0;  // r^((n-1)/n)
  bool window_ok = false;
  double lambda = 1.0;
  double unscaled_radius = 0.0;  // rho / lambda
  double unscaled_II = 0.0;      // -lambda
  double scaled_radius = 0.0;
  double scaled_II = 0.0;
  bool feasible = false;
};

// Midpoint construction R = (rho + 1)/2, r = rho^(n/(n-1))/2.
DockingReport docking_feasibility(int n, int k, double rho, double lambda = 1.0);
// Same report for a caller-supplied (r, R).
DockingReport docking_window(int n, int k, double rho, double r, double R, double lambda = 1.0);

struct CoreSummand {
  std::string name;
  int boundary_dim = 3;
  double rho_i = 1.0;  // boundary radius
  double nu_i = 0.0;   // min boundary principal curvature
};

CoreSummand summand_from_report(const std::string& name, int boundary_dim,
                                const core::GridReport& rep);

struct SummandStep {
  std::string name;
  double s_i = 0.0;
  double scaled_II = 0.0;  // nu_i / s_i
  GlueResult glue;
  bool pass = false;
};

struct AssemblyPlan {
  std::vector<CoreSummand> summands;
  DockingReport docking;
  std::vector<SummandStep> steps;
  int binding = -1;  // index of the smallest nu_i / s_i
  bool pass = false;
};

AssemblyPlan assembly_plan(const std::vector<CoreSummand>& cores, int n, double rho,
                           double lambda = 1.0);

// chi_xi(t) = exp(-1/(t+xi)^2) on (-xi, 0], 0 before; derivatives 0..4
std::vector<double> bend_profile(double xi, double t, int order = 4);
double bend_prime_at_zero(double xi);

struct BendReport {
  double xi = 0.0;
  double max_fd_derivative_at_start = 0.0;
  bool flat_at_start = false;
  double chi_prime_0 = 0.0;
  double chi_prime_0_closed = 0.0;
  std::vector<double> c2_norms;  // xi, xi/2, xi/4, xi/8
  bool c2_decreasing = false;
  double II_over_g_fd = 0.0;
  double II_over_g_closed = 0.0;
  bool convex = false;
  bool pass() const { return flat_at_start && chi_prime_0 > 0.0 && c2_decreasing && convex; }
};

// Also checks the boundary of dt^2 + rho^2 (1 + chi^2) ds_2^2 on the chart.
BendReport bend_check(double xi, double rho = 1.0);

}  // namespace rf::glue
