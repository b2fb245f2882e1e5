#include "ricci_forge_cli/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "ricci_forge/core_verifier.hpp"
#include "ricci_forge/errors.hpp"
#include "ricci_forge/glue_assembler.hpp"
#include "ricci_forge/neck_builder.hpp"
#include "ricci_forge/submersion_ricci.hpp"
#include "ricci_forge_cli/oracle_harness.hpp"

#ifndef RICCI_FORGE_VERSION
#define RICCI_FORGE_VERSION "0.0.0"
#endif

namespace rf::cli {

using json = nlohmann::ordered_json;

const char* version() { return RICCI_FORGE_VERSION; }

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Param {
  std::string name;
  json def;
  std::string help;
};

// Resolved parameter block: defaults, then the JSON file, then explicit flags.
class Config {
 public:
  explicit Config(json values) : v_(std::move(values)) {}
  double num(const std::string& k) const { return v_.at(k).get<double>(); }
  int integer(const std::string& k) const {
    double d = num(k);
    if (d != std::floor(d)) throw UsageError(k + " must be an integer");
    return static_cast<int>(d);
  }
  std::string str(const std::string& k) const { return v_.at(k).get<std::string>(); }
  bool flag(const std::string& k) const { return v_.at(k).get<bool>(); }
  const json& raw() const { return v_; }

  double positive(const std::string& k) const {
    double d = num(k);
    if (!(d > 0.0)) throw UsageError(k + " must be positive");
    return d;
  }
  int grid(const std::string& k) const {
    int n = integer(k);
    if (n < 16) throw UsageError(k + " must be at least 16");
    return n;
  }

 private:
  json v_;
};

json typed_number(const json& def, const std::string& name, double d) {
  if (!def.is_number_integer()) return d;
  if (d != std::floor(d) || std::abs(d) > 1e15) throw UsageError(name + " must be an integer");
  return static_cast<long long>(d);
}

json coerce(const json& def, const std::string& name, const std::string& text) {
  try {
    if (def.is_boolean()) {
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw UsageError("bad boolean for " + name);
    }
    if (def.is_number()) {
      std::size_t pos = 0;
      double d = std::stod(text, &pos);
      if (pos != text.size()) throw UsageError("bad number for " + name);
      return typed_number(def, name, d);
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("bad number for " + name);
  } catch (const std::out_of_range&) {
    throw UsageError("number out of range for " + name);
  }
  return text;
}

class Report {
 public:
  Report(std::string command, json config) : command_(std::move(command)), config_(std::move(config)) {}

  void check(const std::string& name, const json& value, const json& threshold, bool pass) {
    checks_.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", pass}});
    pass_ = pass_ && pass;
  }
  json& details() { return details_; }
  bool pass() const { return pass_ && !checks_.empty(); }

  json to_json(std::optional<double> wall) const {
    json j;
    j["command"] = command_;
    j["version"] = version();
    j["config"] = config_;
    j["checks"] = checks_;
    j["details"] = details_;
    j["pass"] = pass();
    if (wall) j["wall_time_s"] = *wall;
    return j;
  }

 private:
  std::string command_;
  json config_;
  json checks_ = json::array();
  json details_ = json::object();
  bool pass_ = true;
};

// Rows of t,x,quantity,value.
class Csv {
 public:
  void add(double t, double x, const std::string& q, double v) { rows_.push_back({t, x, q, v}); }
  void write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw UsageError("cannot open " + path);
    os << "t,x,quantity,value\n" << std::setprecision(17);
    for (const auto& r : rows_) os << r.t << ',' << r.x << ',' << r.q << ',' << r.v << '\n';
  }

 private:
  struct Row {
    double t, x;
    std::string q;
    double v;
  };
  std::vector<Row> rows_;
};

json num_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

// ---------------------------------------------------------------- commands

using Runner = std::function<void(const Config&, Report&, Csv*)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
  Runner run;
};

void cmd_oracle(const Config& c, Report& rep, Csv* csv) {
  oracle::OracleOptions o;
  o.instances = c.integer("instances");
  o.hopf_points = c.integer("hopf_points");
  o.seed = static_cast<std::uint64_t>(c.integer("seed"));
  o.rel_tol = c.positive("tol");
  o.abs_floor = c.positive("abs_floor");
  if (o.instances < 1 || o.hopf_points < 1) throw UsageError("instances must be positive");
  auto s = oracle::run_oracle(o);
  rep.check("max_relative_defect", s.max_defect, o.rel_tol, s.max_defect <= o.rel_tol);
  rep.check("failures", s.failures, 0, s.failures == 0);
  rep.details()["comparisons"] = static_cast<int>(s.rows.size());
  json worst = json::array();
  for (const auto& r : s.rows)
    if (!r.pass) worst.push_back({{"instance", r.instance}, {"quantity", r.quantity},
                                  {"closed", r.closed}, {"oracle", r.oracle}});
  rep.details()["failing"] = worst;
  if (csv)
    for (const auto& r : s.rows) csv->add(r.t, r.x, r.instance + ":" + r.quantity + ":defect", r.defect);
}

core::CoreSpec core_spec(const Config& c) {
  core::CoreSpec s;
  s.algebra = submersion::parse_algebra(c.str("algebra"));
  s.n = c.integer("n");
  std::string h = c.str("h");
  if (h == "cosh") {
    s.h_choice = core::HChoice::Cosh;
    s.param = c.positive("N");
  } else if (h == "const") {
    s.h_choice = core::HChoice::Const;
    s.param = c.positive("eps");
  } else {
    throw UsageError("h must be cosh or const");
  }
  s.samples = c.grid("samples");
  s.margin = c.positive("margin");
  return s;
}

void core_checks(Report& rep, const core::GridReport& g) {
  rep.check("ric_tt_min", g.min_tt.value, 0.0, g.min_tt.value > 0.0);
  rep.check("ric_xx_min", g.min_xx.value, 0.0, g.min_xx.value > 0.0);
  if (g.has_vertical) rep.check("ric_vv_min", g.min_vv.value, 0.0, g.min_vv.value > 0.0);
  rep.check("offdiag_max", g.max_offdiag, 0.0, g.offdiag_zero);
  rep.check("round_boundary_defect", g.waist_defect, 1e-12, g.round_boundary);
  rep.check("II_horizontal", g.II_horizontal, 0.0, g.II_horizontal > 0.0);
  rep.check("II_vertical", g.II_vertical, 0.0, g.II_vertical > 0.0);
  rep.check("smooth_f", g.smooth_f, true, g.smooth_f);
  rep.check("smooth_h", g.smooth_h, true, g.smooth_h);
}

json core_details(const core::GridReport& g) {
  return {{"t1", g.t1},
          {"radius", g.radius},
          {"min_tt_at", g.min_tt.at},
          {"min_xx_at", g.min_xx.at},
          {"min_vv_at", g.min_vv.at},
          {"cap_limit", {g.cap_limit_tt, g.cap_limit_xx, g.cap_limit_vv}},
          {"smoothness_defects", g.smoothness_defects}};
}

void cmd_verify_core(const Config& c, Report& rep, Csv* csv) {
  auto spec = core_spec(c);
  auto fib = submersion::hopf_data(spec.algebra, spec.n);
  auto g = core::verify_core(spec);
  core_checks(rep, g);
  rep.details() = core_details(g);
  rep.details()["fibration"] = {{"d", fib.d}, {"dimB", fib.dimB}, {"dimF", fib.dimF}};
  if (fib.degenerate_fiber) {
    auto w = core::obstruction_witness(fib, core::make_h(spec), g.t1, spec.samples);
    rep.details()["obstruction_witness"] = {
        {"found", w.found}, {"t", w.t}, {"h2", w.h2}, {"ric_tt", w.ric_tt}};
  }
  if (csv) {
    auto f = core::make_f();
    auto h = core::make_h(spec);
    for (int i = 0; i < spec.samples; ++i) {
      double t = spec.margin + (g.t1 - spec.margin) * i / (spec.samples - 1);
      auto r = submersion::doubly_warped_ricci(fib, f, h, t);
      csv->add(t, 0.0, "ric_tt", r.ric_tt);
      csv->add(t, 0.0, "ric_xx", r.ric_xx);
      if (g.has_vertical) csv->add(t, 0.0, "ric_vv", r.ric_vv);
    }
  }
}

void cmd_search_core(const Config& c, Report& rep, Csv* csv) {
  auto algebra = submersion::parse_algebra(c.str("algebra"));
  int n = c.integer("n");
  double lo = c.positive("N_lo"), hi = c.positive("N_hi");
  if (hi < lo) throw UsageError("N_hi must be at least N_lo");
  int samples = c.grid("samples");
  int sweep = c.integer("sweep");
  auto fib = submersion::hopf_data(algebra, n);
  auto res = core::search_cosh_N(algebra, n, lo, hi, samples, c.positive("resolution"));
  rep.check("feasible", res.feasible, true, res.feasible);
  rep.details() = {{"N", res.N}, {"lo", res.lo}, {"hi", res.hi},
                   {"evaluations", res.evaluations}, {"reason", res.reason}};
  if (sweep > 0) {
    json pts = json::array();
    int passing = 0;
    for (int i = 0; i < sweep; ++i) {
      double N = sweep == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (sweep - 1));
      core::CoreSpec s{algebra, n, core::HChoice::Cosh, N, samples, 1e-4};
      json e = {{"N", N}};
      try {
        auto g = core::verify_core(s);
        passing += g.pass();
        e["pass"] = g.pass();
        e["min_tt"] = g.min_tt.value;
        if (fib.degenerate_fiber) {
          auto w = core::obstruction_witness(fib, core::make_h(s), g.t1, samples);
          e["witness"] = {{"found", w.found}, {"t", w.t}, {"ric_tt", w.ric_tt}};
        }
        if (csv) csv->add(N, 0.0, "min_ric_tt", g.min_tt.value);
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::Precondition) throw;
        e["pass"] = false;
        e["error"] = err.what();
      }
      pts.push_back(e);
    }
    rep.details()["sweep"] = pts;
    rep.details()["sweep_passing"] = passing;
  }
}

std::shared_ptr<const neck::RenormalizedProfile> neck_profile(const Config& c, neck::ProfileG1& g1) {
  g1 = neck::fixture_g1(c.integer("n"), c.positive("r"), c.positive("R"), c.positive("curvature_margin"));
  return neck::prepare_profile(g1, c.positive("rho"));
}

void cmd_path(const Config& c, Report& rep, Csv* csv) {
  neck::ProfileG1 g1;
  auto prof = neck_profile(c, g1);
  int na = c.grid("na"), nx = c.grid("nx");
  auto pr = neck::path_check(*prof, na, nx, c.positive("x_margin"));
  rep.check("min_K_XSigma", pr.min_K_XSigma, 1.0, pr.min_K_XSigma > 1.0);
  rep.check("min_K_SigmaSigma", pr.min_K_SigmaSigma, 1.0, pr.min_K_SigmaSigma > 1.0);
  rep.details() = {{"a1", prof->a1}, {"alpha_tilde", prof->alpha_tilde},
                   {"argmin_a", pr.argmin_a}, {"argmin_x", pr.argmin_x},
                   {"eta_min", prof->eta_min}, {"eta_max", prof->eta_max},
                   {"h_eta", prof->h_eta}, {"fixture_min_K", prof->min_K_g1}};
  if (csv) {
    const double xm = std::numbers::pi / 2 - c.num("x_margin");
    for (int i = 0; i < na; ++i) {
      double a = 1.0 + (prof->a1 - 1.0) * i / (na - 1);
      double b = prof->rho / std::pow(a, 1.0 / prof->alpha_tilde);
      for (int j = 0; j < nx; ++j) {
        double x = -xm + 2 * xm * j / (nx - 1);
        auto [kxs, kss] = neck::gtilde_sectional(a, b, x, *prof);
        csv->add(a, x, "K_XSigma", kxs);
        csv->add(a, x, "K_SigmaSigma", kss);
      }
    }
  }
}

neck::NeckGridOptions grid_options(const Config& c) {
  neck::NeckGridOptions o;
  o.nt = c.grid("nt");
  o.nx = c.grid("nx");
  o.x_margin = c.positive("x_margin");
  o.seam_halfwidth_rel = c.positive("seam_halfwidth");
  return o;
}

json params_json(const neck::NeckParams& p) {
  return {{"t0", p.t0}, {"eps", p.eps}, {"delta", p.delta}, {"beta", p.beta},
          {"alpha", p.alpha}, {"log_t1", p.log_t1()}, {"log_t1_numeric", p.log_t1_numeric},
          {"r_tilde", p.r_tilde}, {"r_tilde_closed", p.r_tilde_closed},
          {"log_kappa", p.log_kappa}, {"log_lambda", p.log_lambda}};
}

void neck_grid_checks(Report& rep, const neck::NeckGridReport& g) {
  auto m = [](const neck::NeckMin& v) {
    return json{{"value", num_json(v.value)}, {"log_t", v.s}, {"x", v.x}};
  };
  rep.check("ric_tt_min", num_json(g.ric_tt.value), 0.0, g.ric_tt.value > 0.0);
  rep.check("ric_xx_min", num_json(g.ric_xx.value), 0.0, g.ric_xx.value > 0.0);
  rep.check("ric_ss_min", num_json(g.ric_ss.value), 0.0, g.ric_ss.value > 0.0);
  rep.check("det2x2_min", num_json(g.det.value), 0.0, g.det.value > 0.0);
  rep.check("violations", g.violation_count, 0, g.violation_count == 0);
  json viol = json::array();
  for (const auto& v : g.violations)
    viol.push_back({{"quantity", v.quantity}, {"log_t", v.s}, {"x", v.x}, {"value", num_json(v.value)}});
  rep.details()["grid"] = {{"rows", g.rows}, {"nx", g.nx}, {"points", g.points},
                           {"ric_tt", m(g.ric_tt)}, {"ric_xx", m(g.ric_xx)},
                           {"ric_ss", m(g.ric_ss)}, {"det2x2", m(g.det)},
                           {"t2_K_XSigma_min", m(g.t2_K_XSigma)},
                           {"t2_K_SigmaSigma_min", m(g.t2_K_SigmaSigma)},
                           {"violation_records", viol}};
}

void boundary_checks(Report& rep, const neck::BoundaryReport& b) {
  rep.check("boundary_ii", json{b.h_t0_defect, b.k_t0_defect}, 1e-12, b.ii);
  rep.check("boundary_iii", b.h_t1_defect, 1e-9, b.iii);
  rep.check("boundary_iv", json{b.hp_t0, b.kp_t0}, 1e-15, b.iv);
  rep.check("boundary_v_first", b.t1_beta_gamma, 1.0, b.v_first);
  rep.check("boundary_v_second", b.kappa_t1, 1.0, b.v_second);
  rep.check("II_t0_equals_minus_lambda", json{num_json(b.II_t0_min), num_json(b.II_t0_max)},
            num_json(b.minus_lambda), b.II_t0_equals_minus_lambda);
  rep.check("II_t1_min", num_json(b.II_t1_min), 1.0, b.II_t1_at_least_one);
}

void grid_csv(const neck::NeckParams& p, const neck::NeckGridOptions& o, Csv& csv) {
  for (auto r : neck::neck_grid_values(p, o)) {
    r[0] = std::exp(r[0]);
    csv.add(r[0], r[1], "ric_tt", r[2]);
    csv.add(r[0], r[1], "ric_xx", r[3]);
    csv.add(r[0], r[1], "ric_ss", r[4]);
    csv.add(r[0], r[1], "det2x2", r[5]);
  }
}

void cmd_neck_search(const Config& c, Report& rep, Csv* csv) {
  neck::ProfileG1 g1;
  auto prof = neck_profile(c, g1);
  neck::SearchBox box;
  box.eps_max = c.positive("eps_max");
  box.delta_max = c.positive("delta_max");
  box.t0_start = c.positive("t0_start");
  box.t0_factor = c.positive("t0_factor");
  box.t0_max = c.positive("t0_max");
  box.grid = grid_options(c);
  if (box.t0_factor <= 1.0) throw UsageError("t0_factor must exceed 1");
  auto out = neck::parameter_search(g1, prof, box);
  rep.check("feasible", out.feasible, true, out.feasible);
  rep.details()["reason"] = out.reason;
  rep.details()["closest_condition"] = out.closest_condition;
  rep.details()["closest_value"] = num_json(out.closest_value);
  rep.details()["trace"] = out.trace;
  if (out.params.prof) {
    rep.details()["params"] = params_json(out.params);
    boundary_checks(rep, out.boundary);
    neck_grid_checks(rep, out.report);
    const std::string path = c.str("params_out");
    if (!path.empty() && out.feasible) {
      std::ofstream os(path);
      if (!os) throw UsageError("cannot open " + path);
      json pj = {{"n", c.integer("n")}, {"r", c.num("r")}, {"R", c.num("R")},
                 {"rho", c.num("rho")}, {"curvature_margin", c.num("curvature_margin")},
                 {"t0", out.params.t0}, {"eps", out.params.eps}, {"delta", out.params.delta}};
      os << pj.dump(2) << '\n';
    }
    if (csv) grid_csv(out.params, box.grid, *csv);
  }
}

void cmd_neck_verify(const Config& c, Report& rep, Csv* csv) {
  neck::ProfileG1 g1;
  auto prof = neck_profile(c, g1);
  auto p = neck::neck_params(c.positive("t0"), c.positive("eps"), c.positive("delta"), prof);
  auto o = grid_options(c);
  rep.details()["params"] = params_json(p);
  boundary_checks(rep, neck::boundary_check(p, o.nx, o.x_margin));
  neck_grid_checks(rep, neck::ricci_positivity_report(p, o));
  auto a = neck::asymptotic_bound_check(p, o);
  rep.check("asymptotic_constants_finite", a.finite, true, a.finite);
  rep.details()["asymptotic"] = {
      {"c1_abp", a.c1_abp}, {"c1_ahp", a.c1_ahp}, {"c2_ahpp", a.c2_ahpp},
      {"c2_bpp", a.c2_bpp}, {"cu_TSigma", a.cu_TSigma}, {"cu_TX", a.cu_TX},
      {"cu_mixed", a.cu_mixed}, {"cn_min", num_json(a.cn_min)}, {"cs_min", num_json(a.cs_min)},
      {"cl_min", num_json(a.cl_min)}, {"gamma_bound_positive", a.gammaisbig},
      {"negcoef_max", num_json(a.negcoef_max)}, {"negcoef_holds", a.negcoef}};
  if (csv) grid_csv(p, o, *csv);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw UsageError("bad list entry: " + item);
    } catch (const std::logic_error&) {
      throw UsageError("bad list entry: " + item);
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

void cmd_glue(const Config& c, Report& rep, Csv*) {
  int dim = c.integer("dim");
  auto b1 = glue::round_boundary(dim, c.positive("radius1"), parse_list(c.str("II1")));
  auto b2 = glue::round_boundary(dim, c.positive("radius2"), parse_list(c.str("II2")));
  auto mode = glue::parse_glue_mode(c.str("mode"));
  try {
    auto r = glue::glue_check(b1, b2, mode);
    rep.check("isometric", true, true, true);
    rep.check(mode == glue::GlueMode::Strict ? "II_sum_min" : "II_sum_zero_and_II1_min",
              mode == glue::GlueMode::Strict ? json(r.min_sum) : json{r.min_sum, r.min_II1}, 0.0,
              r.pass);
    rep.details() = {{"sums", r.sums}, {"reason", r.reason}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Mismatch) throw;
    rep.check("isometric", false, true, false);
    rep.details() = {{"reason", e.what()}};
  }
  if (c.num("bend_xi") > 0.0) {
    auto b = glue::bend_check(c.num("bend_xi"), c.positive("radius1"));
    rep.check("bend_flat_at_start", b.max_fd_derivative_at_start, 1e-8, b.flat_at_start);
    rep.check("bend_chi_prime_0", b.chi_prime_0, 0.0, b.chi_prime_0 > 0.0);
    rep.check("bend_c2_decreasing", b.c2_norms, true, b.c2_decreasing);
    rep.check("bend_convex", b.II_over_g_fd, num_json(b.II_over_g_closed), b.convex);
  }
}

void cmd_assemble(const Config& c, Report& rep, Csv*) {
  std::vector<glue::CoreSummand> cores;
  std::stringstream ss(c.str("cores"));
  std::string item;
  int n_total = -1;
  while (std::getline(ss, item, ',')) {
    // ALGEBRA:n:N
    std::stringstream is(item);
    std::string alg, n_s, N_s;
    if (!std::getline(is, alg, ':') || !std::getline(is, n_s, ':') || !std::getline(is, N_s))
      throw UsageError("core entries look like C:2:100");
    int n;
    double N;
    try {
      n = std::stoi(n_s);
      N = std::stod(N_s);
    } catch (const std::logic_error&) {
      throw UsageError("bad core entry: " + item);
    }
    core::CoreSpec s{submersion::parse_algebra(alg), n, core::HChoice::Cosh, N, c.grid("samples"), 1e-4};
    auto fib = submersion::hopf_data(s.algebra, n);
    auto g = core::verify_core(s);
    int dim = fib.dimE + 1;
    if (n_total >= 0 && dim != n_total) throw UsageError("cores have different dimensions");
    n_total = dim;
    std::string name = item + "#" + std::to_string(cores.size());
    rep.check("core_verified:" + name, g.pass(), true, g.pass());
    cores.push_back(glue::summand_from_report(name, fib.dimE, g));
  }
  if (cores.empty()) throw UsageError("no cores given");
  double rho = c.num("rho");
  if (rho <= 0.0) {
    rho = std::numeric_limits<double>::infinity();
    for (const auto& k : cores) rho = std::min(rho, k.nu_i * k.rho_i);
    rho *= 0.5;
  }
  const std::string ov = c.str("nu_override");
  if (!ov.empty()) {
    auto pos = ov.find(':');
    if (pos == std::string::npos) throw UsageError("nu_override looks like index:value");
    std::size_t idx;
    double v;
    try {
      idx = static_cast<std::size_t>(std::stoul(ov.substr(0, pos)));
      v = std::stod(ov.substr(pos + 1));
    } catch (const std::logic_error&) {
      throw UsageError("bad nu_override");
    }
    if (idx >= cores.size()) throw UsageError("nu_override index out of range");
    cores[idx].nu_i = v;
  }
  auto plan = glue::assembly_plan(cores, n_total, rho, c.positive("lambda"));
  rep.check("docking_feasible", plan.docking.feasible, true, plan.docking.feasible);
  json steps = json::array();
  for (const auto& s : plan.steps) {
    rep.check("summand:" + s.name, s.scaled_II, 1.0, s.pass);
    steps.push_back({{"name", s.name}, {"s_i", s.s_i}, {"scaled_II", s.scaled_II},
                     {"glue_min_sum", s.glue.min_sum}, {"pass", s.pass}});
  }
  rep.details() = {{"rho", rho}, {"n", n_total}, {"steps", steps},
                   {"binding", plan.binding >= 0 ? json(plan.steps[plan.binding].name) : json()},
                   {"docking", {{"r", plan.docking.r}, {"R", plan.docking.R},
                                {"lower", plan.docking.lower}, {"lambda", plan.docking.lambda},
                                {"scaled_radius", plan.docking.scaled_radius},
                                {"scaled_II", plan.docking.scaled_II}}}};
}

std::vector<Param> neck_common() {
  return {{"n", 4, "sphere dimension of the neck"},
          {"r", 0.1, "waist of the fixture profile"},
          {"R", 0.5, "fixture diameter / pi"},
          {"rho", 0.4, "round end radius"},
          {"curvature_margin", 1.0, "fixture curvature floor minus 1"}};
}

std::vector<Param> neck_grid() {
  return {{"nt", 512, "log-spaced t rows"},
          {"nx", 128, "x columns"},
          {"x_margin", 1e-2, "distance kept from x = +-pi/2"},
          {"seam_halfwidth", 1e-3, "seam band half-width relative to t0"}};
}

std::vector<Param> join(std::vector<Param> a, const std::vector<Param>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Command> commands() {
  std::vector<Param> core_params = {{"algebra", "C", "R, C, H or O"},
                                    {"n", 2, "projective dimension"},
                                    {"h", "cosh", "cosh or const"},
                                    {"N", 100.0, "cosh(t/N)/N parameter"},
                                    {"eps", 0.1, "constant h value"},
                                    {"samples", 2048, "grid points on (0, t1]"},
                                    {"margin", 1e-4, "first grid point"}};
  return {
      {"oracle-check", "closed-form curvature vs finite-difference oracle",
       {{"instances", 20, "random two-variable warps"},
        {"hopf_points", 5, "points on the Hopf chart"},
        {"seed", 1, "random seed"},
        {"tol", 1e-4, "relative tolerance"},
        {"abs_floor", 1e-6, "absolute floor"}},
       cmd_oracle},
      {"verify-core", "verify a core metric", core_params, cmd_verify_core},
      {"search-core", "search cosh(t/N)/N for a passing N",
       {{"algebra", "C", "R, C, H or O"},
        {"n", 2, "projective dimension"},
        {"N_lo", 1.0, "lower N"},
        {"N_hi", 1000.0, "upper N"},
        {"samples", 2048, "grid points"},
        {"resolution", 0.01, "relative N resolution"},
        {"sweep", 0, "log sweep points to verify individually"}},
       cmd_search_core},
      {"path-check", "K > 1 along the interpolating path",
       join(neck_common(), {{"na", 256, "a samples"},
                            {"nx", 256, "x samples"},
                            {"x_margin", 1e-2, "distance kept from x = +-pi/2"}}),
       cmd_path},
      {"neck-search", "search neck parameters",
       join(join(neck_common(), neck_grid()), {{"eps_max", 0.25, "largest epsilon"},
                                               {"delta_max", 0.25, "largest delta"},
                                               {"t0_start", 4.0, "first t0"},
                                               {"t0_factor", 4.0, "t0 growth factor"},
                                               {"t0_max", 1e9, "largest t0"},
                                               {"params_out", "", "write found params here"}}),
       cmd_neck_search},
      {"neck-verify", "verify given neck parameters",
       join(join(neck_common(), neck_grid()), {{"t0", 1048576.0, "start of the neck"},
                                               {"eps", 0.125, "epsilon"},
                                               {"delta", 0.125, "delta"}}),
       cmd_neck_verify},
      {"glue-check", "gluing hypotheses for two round boundaries",
       {{"dim", 3, "boundary sphere dimension"},
        {"radius1", 1.0, "radius of the first boundary"},
        {"radius2", 1.0, "radius of the second boundary"},
        {"II1", "2", "principal curvatures, comma separated"},
        {"II2", "-1", "principal curvatures, comma separated"},
        {"mode", "strict", "strict or degenerate"},
        {"bend_xi", 0.0, "also check the bending function for this xi"}},
       cmd_glue},
      {"assemble", "docking-station assembly plan",
       {{"cores", "C:2:100,C:2:100,C:2:100", "ALGEBRA:n:N entries"},
        {"samples", 2048, "core grid points"},
        {"rho", 0.0, "docking radius; 0 picks half the binding bound"},
        {"lambda", 1.0, "neck end scale"},
        {"nu_override", "", "index:value replaces one core's nu"}},
       cmd_assemble},
  };
}

}  // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

int run(const std::vector<std::string>& args_in) {
  const auto cmds = commands();
  CLI::App app{"ricci-forge: numerical verification of Ricci-positive gluing constructions",
               "ricci-forge"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  struct Bound {
    const Command* cmd;
    CLI::App* sub;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> opts;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  std::string config_path, out_path, csv_path;
  bool wall = false;
  for (const auto& c : cmds) {
    auto b = std::make_unique<Bound>();
    b->cmd = &c;
    b->sub = app.add_subcommand(c.name, c.help);
    b->sub->set_help_flag("--help", "print this help");
    b->sub->add_option("--config", config_path, "JSON file with parameters; flags win");
    b->sub->add_option("--out", out_path, "write the JSON report here (default stdout)");
    b->sub->add_option("--csv", csv_path, "write grid values as t,x,quantity,value");
    b->sub->add_flag("--wall-time", wall, "include wall time in the report");
    for (const auto& p : c.params) {
      std::string def = p.def.is_string() ? p.def.get<std::string>() : p.def.dump();
      b->opts[p.name] = b->sub->add_option("--" + p.name, b->values[p.name], p.help + " [" + def + "]");
    }
    if (c.name == "neck-verify")
      b->sub->add_option("--params", config_path, "alias of --config for a params file");
    bound.push_back(std::move(b));
  }

  if (args_in.empty()) return kUsage;
  std::vector<std::string> rev(args_in.rbegin(), args_in.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    std::cout << version() << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  const Bound* sel = nullptr;
  for (const auto& b : bound)
    if (b->sub->parsed()) sel = b.get();
  if (!sel) {
    std::cerr << app.help();
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    json cfg = json::object();
    for (const auto& p : sel->cmd->params) cfg[p.name] = p.def;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw UsageError("cannot open config " + config_path);
      json file;
      try {
        file = json::parse(is);
      } catch (const json::parse_error& e) {
        throw UsageError(std::string("bad config JSON: ") + e.what());
      }
      if (!file.is_object()) throw UsageError("config must be a JSON object");
      for (auto it = file.begin(); it != file.end(); ++it) {
        if (!cfg.contains(it.key())) throw UsageError("unknown config key: " + it.key());
        const json& d = cfg[it.key()];
        bool ok = (d.is_number() && it.value().is_number()) ||
                  (d.is_string() && it.value().is_string()) ||
                  (d.is_boolean() && it.value().is_boolean());
        if (!ok) throw UsageError("wrong type for config key: " + it.key());
        cfg[it.key()] = it.value().is_number() ? typed_number(d, it.key(), it.value().get<double>())
                                               : it.value();
      }
    }
    for (const auto& p : sel->cmd->params)
      if (sel->opts.at(p.name)->count() > 0)
        cfg[p.name] = coerce(p.def, p.name, sel->values.at(p.name));

    Config config(cfg);
    Report rep(sel->cmd->name, cfg);
    Csv csv;
    try {
      sel->cmd->run(config, rep, csv_path.empty() ? nullptr : &csv);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Precondition || e.kind() == ErrorKind::Domain ||
          e.kind() == ErrorKind::Capability || e.kind() == ErrorKind::InvalidFibration)
        throw;
      rep.check("error", to_string(e.kind()), "none", false);
      rep.details()["error"] = e.what();
    }

    std::optional<double> wt;
    if (wall)
      wt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = rep.to_json(wt).dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(out_path);
      if (!os) throw UsageError("cannot open " + out_path);
      os << text;
    }
    if (!csv_path.empty()) csv.write(csv_path);
    return rep.pass() ? kPass : kFail;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << sel->sub->help();
    return kUsage;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Precondition:
      case ErrorKind::Domain:
      case ErrorKind::Capability:
      case ErrorKind::InvalidFibration:
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
      default:
        std::cerr << "verification error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kFail;
    }
  }
}

}  // namespace rf::cli
