#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ricci_forge/chart_calculus.hpp"
#include "ricci_forge/core_verifier.hpp"
#include "ricci_forge/errors.hpp"
#include "ricci_forge/glue_assembler.hpp"
#include "ricci_forge/neck_builder.hpp"
#include "ricci_forge/submersion_ricci.hpp"
#include "ricci_forge/warped_forms.hpp"
#include "ricci_forge_cli/cli.hpp"
#include "ricci_forge_cli/oracle_harness.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path tmp_dir() {
  const char* env = std::getenv("RF_TEST_TMP");
  fs::path d = fs::path(env ? env : fs::temp_directory_path().string()) / "acceptance_tmp";
  fs::create_directories(d);
  return d;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ricci-forge");
  std::ostringstream sink;
  auto* out = std::cout.rdbuf(sink.rdbuf());
  auto* err = std::cerr.rdbuf(sink.rdbuf());
  int rc = rf::cli::run(args);
  std::cout.rdbuf(out);
  std::cerr.rdbuf(err);
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), {}};
}

const neck::ProfileG1& fixture() {
  static const neck::ProfileG1 g = neck::fixture_g1(4, 0.1, 0.5);
  return g;
}

std::shared_ptr<const neck::RenormalizedProfile> profile() {
  static const auto p = neck::prepare_profile(fixture(), 0.4);
  return p;
}

Outcome oracle_agreement() {
  auto t = Clock::now();
  oracle::OracleOptions o;
  auto s = oracle::run_oracle(o);
  double secs = seconds_since(t);
  return {s.pass && secs < 60.0,
          fmt("%zu comparisons, max defect %.2e (tol %.0e), %.1f s", s.rows.size(), s.max_defect,
              o.rel_tol, secs)};
}

Outcome specialization_identity() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(0.5, 2.0), any(-2.0, 2.0);
  auto fib = submersion::hopf_data(submersion::Algebra::C, 2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Jet f{pos(rng), any(rng), any(rng)}, h{pos(rng), any(rng), any(rng)};
    auto a = submersion::doubly_warped_ricci(fib, f, h);
    auto b = submersion::perelman_s3_ricci(f, h);
    worst = std::max({worst, std::abs(a.ric_tt - b.ric_tt), std::abs(a.ric_xx - b.ric_xx),
                      std::abs(a.ric_vv - b.ric_vv)});
  }
  return {worst <= 1e-12, fmt("1000 inputs, max abs diff %.2e", worst)};
}

Outcome core_positivity() {
  using submersion::Algebra;
  auto t = Clock::now();
  bool ok = true;
  std::string d;
  for (auto [a, n] : {std::pair{Algebra::C, 2}, std::pair{Algebra::C, 4}, std::pair{Algebra::H, 2},
                      std::pair{Algebra::O, 2}}) {
    auto rep = core::verify_core({a, n, core::HChoice::Const, 0.1, 2048, 1e-4});
    ok = ok && rep.ricci_positive;
    d += fmt("(%s,%d) min %.3g; ", submersion::to_string(a), n,
             std::min({rep.min_tt.value, rep.min_xx.value, rep.min_vv.value}));
  }
  auto full = core::verify_core({Algebra::C, 2, core::HChoice::Cosh, 100.0, 2048, 1e-4});
  ok = ok && full.pass();
  double secs = seconds_since(t);
  d += fmt("cosh N=100 full %s, %.2f s", full.pass() ? "pass" : "fail", secs);
  return {ok && secs < 30.0, d};
}

Outcome rp_obstruction() {
  int failing = 0, witnesses = 0;
  const fs::path out = tmp_dir() / "rp.json";
  double worst_tt = -1e300;
  for (int i = 0; i < 20; ++i) {
    double N = 2.0 * std::pow(500.0, i / 19.0);
    int rc = cli({"verify-core", "--algebra", "R", "--n", "3", "--h", "cosh", "--N", fmt("%.17g", N),
                  "--out", out.string()});
    if (rc == 1) ++failing;
    auto rep = json::parse(slurp(out));
    if (rep["details"].contains("obstruction_witness")) {
      double tt = rep["details"]["obstruction_witness"]["ric_tt"].get<double>();
      if (tt < 0) ++witnesses;
      worst_tt = std::max(worst_tt, tt);
    }
  }
  return {failing == 20 && witnesses == 20,
          fmt("N in [2, 1000]: %d/20 fail, %d/20 witnesses, largest witness ric_tt %.2e", failing,
              witnesses, worst_tt)};
}

Outcome path_lemma() {
  auto rep = neck::path_check(*profile(), 256, 256);
  return {rep.pass && rep.min_K_XSigma > 1 && rep.min_K_SigmaSigma > 1,
          fmt("min K_XSigma %.4g, min K_SigmaSigma %.4g, a1 %.4g", rep.min_K_XSigma,
              rep.min_K_SigmaSigma, profile()->a1)};
}

Outcome neck_consistency() {
  const double t0s[] = {3.0, 10.0, 1e3, 1e6, 1e9};
  const double fr[] = {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
  double worst_t1 = 0.0, worst_delta = 0.0, worst_gamma = 0.0;
  int cases = 0;
  bool ok = true;
  for (double t0 : t0s) {
    worst_delta = std::max(worst_delta, std::abs(neck::delta_t0(t0) - neck::delta_t0_quadrature(t0)));
    double l = neck::gamma(2 * t0, t0), r = neck::gamma(std::nextafter(2 * t0, INFINITY), t0);
    worst_gamma = std::max(worst_gamma, std::abs(l - r) / l);
    for (double eps : fr)
      for (double delta : fr) {
        try {
          auto p = neck::neck_params(t0, eps, delta, profile());
          worst_t1 = std::max(worst_t1, std::abs(p.log_t1_numeric - p.log_t1_closed) / p.log_t1_closed);
          ++cases;
        } catch (const Error& e) {
          ok = false;
        }
      }
  }
  ok = ok && cases == 125 && worst_t1 <= 1e-9 && worst_delta <= 1e-10 && worst_gamma <= 1e-14;
  return {ok, fmt("%d cases, ln t1 rel %.1e, Delta abs %.1e, Gamma jump rel %.1e", cases, worst_t1,
                  worst_delta, worst_gamma)};
}

Outcome neck_end_to_end() {
  auto t = Clock::now();
  neck::SearchBox box;
  box.grid.nt = 512;
  box.grid.nx = 128;
  auto out = neck::parameter_search(fixture(), profile(), box);
  double secs = seconds_since(t);
  if (!out.feasible) return {false, "search infeasible: " + out.reason + " (" + out.closest_condition + ")"};
  const auto& b = out.boundary;
  const auto& r = out.report;
  bool ok = b.ii && b.iii && b.iv && b.v() && r.pass && r.ric_tt.value > 0 && r.ric_xx.value > 0 &&
            r.ric_ss.value > 0 && r.det.value > 0 && b.II_t0_equals_minus_lambda && b.II_t1_at_least_one &&
            secs < 600.0;
  return {ok, fmt("t0 %.6g eps %.4g delta %.4g; mins tt %.3g xx %.3g ss %.3g det %.3g; II(t1) %.4g; "
                  "%.1f s",
                  out.params.t0, out.params.eps, out.params.delta, r.ric_tt.value, r.ric_xx.value,
                  r.ric_ss.value, r.det.value, b.II_t1_min, secs)};
}

Outcome scaling_covariance() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(0.2, 3.0), any(-2.0, 2.0), kap(0.1, 10.0);
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  for (int i = 0; i < 200; ++i) {
    warped::Jet2 A{pos(rng), any(rng), any(rng), any(rng), any(rng), any(rng)};
    warped::Jet2 B{pos(rng), any(rng), any(rng), any(rng), any(rng), any(rng)};
    double k = kap(rng);
    warped::Jet2 Ak{k * A.v, A.t, k * A.x, A.tt / k, k * A.xx, A.tx};
    warped::Jet2 Bk{k * B.v, B.t, k * B.x, B.tt / k, k * B.xx, B.tx};
    auto s = warped::necksectional(A, B, 3), sk = warped::necksectional(Ak, Bk, 3);
    auto q = warped::slice_second_fundamental(A, B), qk = warped::slice_second_fundamental(Ak, Bk);
    for (auto [x, y] : {std::pair{sk.K_TX, s.K_TX}, std::pair{sk.K_TSigma, s.K_TSigma},
                        std::pair{sk.K_XSigma, s.K_XSigma}, std::pair{sk.K_SigmaSigma, s.K_SigmaSigma},
                        std::pair{sk.Ric_TX_offdiag, s.Ric_TX_offdiag}})
      worst = std::max(worst, rel(x * k * k, y));
    worst = std::max({worst, rel(qk.XX * k, q.XX), rel(qk.SigmaSigma * k, q.SigmaSigma)});
  }
  // neck points: kappa enters only through log_scale
  auto p = neck::neck_params(1e4, 0.125, 0.125, profile());
  for (double s : {std::log(1.5e4), std::log(1e6)}) {
    auto pt = neck::neck_curvatures(p, s, 0.3);
    auto dbl = pt;
    dbl.log_scale += std::log(3.0);
    worst = std::max({worst, rel(dbl.actual().K_XSigma * 9, pt.actual().K_XSigma),
                      rel(dbl.actual().K_TX * 9, pt.actual().K_TX),
                      rel(dbl.actual_II().SigmaSigma * 3, pt.actual_II().SigmaSigma)});
  }
  // the finite-difference oracle on a dyadically scaled chart
  chart::MetricChart c;
  c.dim = 2;
  c.domain.lo = chart::Vec(2);
  c.domain.hi = chart::Vec(2);
  c.domain.lo << 0.1, -3;
  c.domain.hi << 3, 3;
  c.g = [](const chart::Vec& x) {
    chart::Mat g = chart::Mat::Identity(2, 2);
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]) * (1 + 0.1 * x[0]);
    return g;
  };
  chart::Vec pt(2), u(2), v(2);
  pt << 1.0, 0.2;
  u << 1, 0;
  v << 0, 1;
  double K = chart::sectional_fd(chart::riemann_ricci_fd(c, pt, 1e-3), c, u, v);
  for (double k : {0.5, 2.0, 4.0}) {
    auto sc = chart::scaled(c, k);
    double Ks = chart::sectional_fd(chart::riemann_ricci_fd(sc, pt, 1e-3), sc, u, v);
    worst = std::max(worst, rel(Ks * k * k, K));
  }
  return {worst <= 1e-12, fmt("max relative deviation %.2e", worst)};
}

Outcome gluing_pipeline() {
  auto rep = core::verify_core({submersion::Algebra::C, 2, core::HChoice::Cosh, 100.0, 2048, 1e-4});
  if (!rep.pass()) return {false, "core (C,2) N=100 not verified"};
  std::vector<glue::CoreSummand> cores;
  for (int i = 0; i < 3; ++i) cores.push_back(glue::summand_from_report("core" + std::to_string(i), 3, rep));
  double rho = 0.5 * cores[0].nu_i * cores[0].rho_i;
  auto plan = glue::assembly_plan(cores, 4, rho);
  bool ok = plan.pass;
  int exact_flips = 0;
  for (int i = 0; i < 3; ++i) {
    auto lowered = cores;
    lowered[i].nu_i = 0.5 * plan.steps[i].s_i;
    auto p = glue::assembly_plan(lowered, 4, rho);
    bool exact = !p.pass && p.binding == i;
    for (int j = 0; j < 3; ++j) exact = exact && (p.steps[j].pass == (j != i));
    if (exact) ++exact_flips;
  }
  ok = ok && exact_flips == 3;
  return {ok, fmt("rho %.3g, scaled II %.4g, docking r %.3g R %.3g; %d/3 single flips", rho,
                  plan.steps[0].scaled_II, plan.docking.r, plan.docking.R, exact_flips)};
}

Outcome determinism() {
  const fs::path d = tmp_dir();
  std::vector<std::vector<std::string>> cmds = {
      {"oracle-check", "--seed", "7", "--instances", "6"},
      {"verify-core", "--algebra", "H", "--n", "2", "--N", "100"},
      {"assemble", "--samples", "512"},
      {"neck-verify", "--nt", "128", "--nx", "32"},
  };
  int same = 0;
  for (size_t i = 0; i < cmds.size(); ++i) {
    std::string a = (d / fmt("det_%zu_a.json", i)).string(), b = (d / fmt("det_%zu_b.json", i)).string();
    auto ca = cmds[i], cb = cmds[i];
    ca.insert(ca.end(), {"--out", a});
    cb.insert(cb.end(), {"--out", b});
    int ra = cli(ca), rb = cli(cb);
    std::string ta = slurp(a), tb = slurp(b);
    if (ra == rb && !ta.empty() && ta == tb) ++same;
  }
  return {same == static_cast<int>(cmds.size()),
          fmt("%d/%zu commands byte-identical on repeat", same, cmds.size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const Criterion criteria[] = {
      {"oracle agreement", oracle_agreement},
      {"specialization identity", specialization_identity},
      {"core positivity", core_positivity},
      {"real projective obstruction", rp_obstruction},
      {"path lemma", path_lemma},
      {"neck internal consistency", neck_consistency},
      {"neck end-to-end", neck_end_to_end},
      {"scaling covariance", scaling_covariance},
      {"gluing pipeline", gluing_pipeline},
      {"determinism", determinism},
  };
  int failed = 0, idx = 0;
  for (const auto& c : criteria) {
    ++idx;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", idx, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria pass\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
