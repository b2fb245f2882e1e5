#include "ricci_forge/glue_assembler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ricci_forge/chart_calculus.hpp"
#include "ricci_forge/errors.hpp"

namespace rf::glue {

namespace {
constexpr double kRadiusTol = 1e-9;
}

BoundaryData round_boundary(int dim, double radius, std::vector<double> II) {
  if (!(radius > 0.0)) throw Error(ErrorKind::Precondition, "radius must be positive");
  for (double v : II)
    if (!std::isfinite(v)) throw Error(ErrorKind::Precondition, "II must be finite");
  BoundaryData b;
  b.kind = BoundaryKind::Round;
  b.dim = dim;
  b.radius = radius;
  b.II = std::move(II);
  return b;
}

BoundaryData round_boundary(int dim, double radius, double II) {
  return round_boundary(dim, radius, std::vector<double>(static_cast<size_t>(dim), II));
}

GlueMode parse_glue_mode(const std::string& s) {
  if (s == "strict") return GlueMode::Strict;
  if (s == "degenerate") return GlueMode::Degenerate;
  throw Error(ErrorKind::Precondition, "unknown glue mode: " + s);
}

const char* to_string(GlueMode m) { return m == GlueMode::Strict ? "strict" : "degenerate"; }

GlueResult glue_check(const BoundaryData& b1, const BoundaryData& b2, GlueMode mode) {
  if (b1.kind != b2.kind || b1.dim != b2.dim)
    throw Error(ErrorKind::Mismatch, "boundaries are of different type");
  if (std::abs(b1.radius - b2.radius) > kRadiusTol * std::max(1.0, b1.radius))
    throw Error(ErrorKind::Mismatch, "boundary radii differ");
  if (b1.kind == BoundaryKind::Warped && b1.profile_id != b2.profile_id)
    throw Error(ErrorKind::Mismatch, "warped boundary profiles differ");
  auto expand = [](const BoundaryData& b) {
    if (b.II.size() == 1) return std::vector<double>(static_cast<size_t>(b.dim), b.II[0]);
    if (static_cast<int>(b.II.size()) != b.dim)
      throw Error(ErrorKind::Precondition, "II length does not match dimension");
    return b.II;
  };
  auto a = expand(b1), b = expand(b2);
  GlueResult r;
  r.min_sum = r.min_II1 = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < a.size(); ++i) {
    r.sums.push_back(a[i] + b[i]);
    r.min_sum = std::min(r.min_sum, a[i] + b[i]);
    r.min_II1 = std::min(r.min_II1, a[i]);
  }
  if (mode == GlueMode::Strict) {
    r.pass = r.min_sum > 0.0;
    if (!r.pass) r.reason = "II1 + II2 not positive definite";
  } else {
    bool zero = std::all_of(r.sums.begin(), r.sums.end(),
                            [](double s) { return std::abs(s) <= 1e-12; });
    r.pass = zero && r.min_II1 > 0.0;
    if (!zero) r.reason = "II1 + II2 is not zero";
    else if (!r.pass) r.reason = "II1 not positive definite";
  }
  return r;
}

DockingReport docking_window(int n, int k, double rho, double r, double R, double lambda) {
  if (n <= 3) throw Error(ErrorKind::Precondition, "docking needs n > 3");
  if (k <= 0) throw Error(ErrorKind::Precondition, "need at least one boundary component");
  if (!(rho > 0.0)) throw Error(ErrorKind::Precondition, "rho must be positive");
  if (!(lambda > 0.0)) throw Error(ErrorKind::Precondition, "lambda must be positive");
  DockingReport d;
  d.n = n;
  d.k = k;
  d.rho = rho;
  d.r = r;
  d.R = R;
  d.lower = std::pow(r, (n - 1.0) / n);
  d.window_ok = 0.0 < r && r < R && R < 1.0 && d.lower < rho && rho < R;
  d.lambda = lambda;
  d.unscaled_radius = rho / lambda;
  d.unscaled_II = -lambda;
  // g_docking = lambda^2 g: radius * lambda, II / lambda
  d.scaled_radius = d.unscaled_radius * lambda;
  d.scaled_II = d.unscaled_II / lambda;
  d.feasible = d.window_ok && rho < 1.0;
  return d;
}

DockingReport docking_feasibility(int n, int k, double rho, double lambda) {
  if (n <= 3) throw Error(ErrorKind::Precondition, "docking needs n > 3");
  if (!(rho > 0.0)) throw Error(ErrorKind::Precondition, "rho must be positive");
  if (rho >= 1.0) {
    DockingReport d;
    d.n = n;
    d.k = k;
    d.rho = rho;
    d.lambda = lambda;
    return d;
  }
  double R = 0.5 * (rho + 1.0);
  double r = 0.5 * std::pow(rho, n / (n - 1.0));
  return docking_window(n, k, rho, r, R, lambda);
}

CoreSummand summand_from_report(const std::string& name, int boundary_dim,
                                const core::GridReport& rep) {
  CoreSummand c;
  c.name = name;
  c.boundary_dim = boundary_dim;
  c.rho_i = rep.radius;
  c.nu_i = std::min(rep.II_horizontal, rep.II_vertical);
  return c;
}

AssemblyPlan assembly_plan(const std::vector<CoreSummand>& cores, int n, double rho,
                           double lambda) {
  AssemblyPlan plan;
  plan.summands = cores;
  plan.docking = docking_feasibility(n, static_cast<int>(std::max<size_t>(cores.size(), 1)), rho,
                                     lambda);
  BoundaryData dock = round_boundary(n - 1, rho, -1.0);
  bool all = plan.docking.feasible && !cores.empty();
  double worst = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cores.size(); ++i) {
    const CoreSummand& c = cores[i];
    SummandStep st;
    st.name = c.name;
    st.s_i = rho / c.rho_i;
    st.scaled_II = c.nu_i / st.s_i;
    BoundaryData core_b = round_boundary(c.boundary_dim, st.s_i * c.rho_i, st.scaled_II);
    // radius after scaling is rho up to rounding
    core_b.radius = rho;
    st.glue = glue_check(core_b, dock, GlueMode::Strict);
    st.pass = st.glue.pass && st.scaled_II > 1.0;
    all = all && st.pass;
    if (st.scaled_II < worst) {
      worst = st.scaled_II;
      plan.binding = static_cast<int>(i);
    }
    plan.steps.push_back(st);
  }
  plan.pass = all;
  return plan;
}

std::vector<double> bend_profile(double xi, double t, int order) {
  if (!(xi > 0.0)) throw Error(ErrorKind::Precondition, "xi must be positive");
  if (order < 0 || order > 8) throw Error(ErrorKind::Precondition, "order must be in [0, 8]");
  std::vector<double> out(static_cast<size_t>(order) + 1, 0.0);
  double u = t + xi;
  if (u <= 0.0) return out;
  double chi = std::exp(-1.0 / (u * u));
  // d^j chi = P_j(1/u) chi, P_{j+1} = P_j' + 2 u^-3 P_j with P as coefficients of u^-k
  std::vector<double> p{1.0};
  double w = 1.0 / u;
  for (int j = 0; j <= order; ++j) {
    double v = 0.0, wk = 1.0;
    for (double c : p) {
      v += c * wk;
      wk *= w;
    }
    out[static_cast<size_t>(j)] = v * chi;
    std::vector<double> q(p.size() + 3, 0.0);
    for (size_t k = 0; k < p.size(); ++k) {
      // d/du u^-k = -k u^-(k+1)
      q[k + 1] += -static_cast<double>(k) * p[k];
      q[k + 3] += 2.0 * p[k];
    }
    p = std::move(q);
  }
  return out;
}

double bend_prime_at_zero(double xi) {
  if (!(xi > 0.0)) throw Error(ErrorKind::Precondition, "xi must be positive");
  return 2.0 / (xi * xi * xi) * std::exp(-1.0 / (xi * xi));
}

BendReport bend_check(double xi, double rho) {
  if (!(xi > 0.0)) throw Error(ErrorKind::Precondition, "xi must be positive");
  BendReport b;
  b.xi = xi;
  // one-sided differences at t = -xi from both sides
  const double h = 1e-3 * xi;
  auto val = [&](double t) { return bend_profile(xi, t, 0)[0]; };
  double mx = 0.0;
  for (int side : {-1, 1}) {
    double f[5];
    for (int i = 0; i < 5; ++i) f[i] = val(-xi + side * i * h);
    double d1 = (f[1] - f[0]) / h;
    double d2 = (f[2] - 2 * f[1] + f[0]) / (h * h);
    double d3 = (f[3] - 3 * f[2] + 3 * f[1] - f[0]) / (h * h * h);
    double d4 = (f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]) / (h * h * h * h);
    mx = std::max({mx, std::abs(f[0]), std::abs(d1), std::abs(d2), std::abs(d3), std::abs(d4)});
  }
  b.max_fd_derivative_at_start = mx;
  b.flat_at_start = mx <= 1e-8;
  b.chi_prime_0 = bend_profile(xi, 0.0, 1)[1];
  b.chi_prime_0_closed = bend_prime_at_zero(xi);

  double x = xi;
  for (int k = 0; k < 4; ++k, x *= 0.5) {
    double sup = 0.0;
    constexpr int kGrid = 2048;
    for (int i = 0; i <= kGrid; ++i) {
      auto d = bend_profile(x, -x + x * i / kGrid, 2);
      sup = std::max({sup, std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
    }
    b.c2_norms.push_back(sup);
  }
  b.c2_decreasing = true;
  for (size_t i = 1; i < b.c2_norms.size(); ++i)
    b.c2_decreasing = b.c2_decreasing && b.c2_norms[i] < b.c2_norms[i - 1];

  // dt^2 + w(t)^2 (dth^2 + sin^2 th dph^2), w = rho sqrt(1 + chi^2)
  chart::MetricChart c;
  c.dim = 3;
  c.g = [xi, rho](const chart::Vec& p) {
    double chi = bend_profile(xi, p(0), 0)[0];
    double w2 = rho * rho * (1.0 + chi * chi);
    chart::Mat g = chart::Mat::Zero(3, 3);
    g(0, 0) = 1.0;
    g(1, 1) = w2;
    g(2, 2) = w2 * std::sin(p(1)) * std::sin(p(1));
    return g;
  };
  c.domain.lo = chart::Vec(3);
  c.domain.hi = chart::Vec(3);
  c.domain.lo << -0.5 * xi, 0.5, -1.0;
  c.domain.hi << 0.5 * xi, 2.5, 1.0;
  chart::Vec p(3);
  p << 0.0, 1.2, 0.0;
  double step = 1e-3 * xi;
  chart::Mat II = chart::second_fundamental_fd(c, 0, p, step);
  chart::Mat g = c.metric(p);
  b.II_over_g_fd = std::min(II(0, 0) / g(1, 1), II(1, 1) / g(2, 2));
  auto d = bend_profile(xi, 0.0, 1);
  b.II_over_g_closed = d[0] * d[1] / (1.0 + d[0] * d[0]);
  b.convex = b.II_over_g_fd > 0.0 &&
             std::abs(b.II_over_g_fd - b.II_over_g_closed) <= 1e-6 * std::abs(b.II_over_g_closed);
  return b;
}

}  // namespace rf::glue
