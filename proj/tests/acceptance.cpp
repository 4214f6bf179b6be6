// Acceptance gate: one line per claim bundle, exit code = number of
// failures. Everything here re-derives its verdict through the library
// (exact residuals, timed recovery, numeric drift), so a regression anywhere
// in the stack shows up as a FAIL line rather than a silent skip.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "pain2/holomorphy.hpp"
#include "pain2/numerics.hpp"
#include "pain2/parse.hpp"
#include "pain2/transforms.hpp"
#include "pain2/two_time.hpp"
#include "pain2/verify.hpp"

using namespace pain2;

namespace {

int failures = 0;

void line(int n, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) failures++;
  std::printf("%s  %2d  %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// id -> passed, for the suites the engine already covers
std::map<std::string, bool> suite_status(const std::string& suite) {
  std::map<std::string, bool> st;
  for (const auto& r : run_suite(suite)) st[r.id] = (r.status == "pass");
  return st;
}

bool all_listed(const std::map<std::string, bool>& st,
                const std::vector<std::string>& ids, std::string& missing) {
  bool ok = true;
  for (const auto& id : ids) {
    auto it = st.find(id);
    if (it == st.end() || !it->second) {
      ok = false;
      missing += (missing.empty() ? "" : ", ") + id;
    }
  }
  return ok;
}

}  // namespace

// ---- 1, 2: symmetries and group relations ---------------------------------

static void criterion_1_2() {
  auto t0 = std::chrono::steady_clock::now();
  auto st = suite_status("symmetry");
  std::string miss1, miss2;
  bool ok1 = all_listed(st,
                        {"sym.S1", "sym.S2", "sym.s1", "sym.s2", "sym.s3",
                         "sym.ks1.K1", "sym.ks1.K2", "sym.ks2.K1",
                         "sym.ks2.K2", "sym.ks3.K1", "sym.ks3.K2"},
                        miss1);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "11 invariance residuals identically zero, %.1f s",
                ms_since(t0) / 1000);
  line(1, ok1, "symmetries: S1,S2 symbolic; s1-s3 sum-one; s1-s3 sum-zero",
       ok1 ? buf : "failed: " + miss1);

  bool ok2 = all_listed(st,
                        {"grp.s1s1", "grp.s2s2", "grp.s3s3", "grp.s1s2s1s2",
                         "grp.s3s1.translation", "grp.ks3ks1.translation"},
                        miss2);
  line(2, ok2,
       "group relations: involutions, (s1s2)^2, s3s1 translation both ways",
       ok2 ? "s3s1 shifts (alpha1+1, alpha2-1, alpha3); sum-zero variant is "
             "the identity"
           : "failed: " + miss2);
}

// ---- 3, 6(symbolic part), 8: structures suite ------------------------------

static std::map<std::string, bool> g_structures;

static void criterion_3() {
  g_structures = suite_status("structures");
  std::string miss;
  bool ok = all_listed(g_structures,
                       {"str.cycle.y=0", "str.cycle.w=0",
                        "str.cycle.y-x^2-w-t=0, x+z=0"},
                       miss);
  line(3, ok, "invariant cycles: all three rows under their relations",
       ok ? "ideal membership of the drift, exact" : "failed: " + miss);
}

// ---- 4, 5: holomorphy and recovery -----------------------------------------

static void criterion_4() {
  auto st = suite_status("holomorphy");
  std::string miss;
  bool ok = all_listed(st,
                       {"hol.m1.poly", "hol.m2.poly", "hol.m3.poly",
                        "hol.m1.two-form", "hol.m2.two-form",
                        "hol.m3.two-form"},
                       miss);
  line(4, ok, "holomorphy: polynomial in all three charts, two-form matches",
       ok ? "corrections 0, 0, x" : "failed: " + miss);
}

static void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Chart> charts{build_chart("m1"), build_chart("m2"),
                            build_chart("m3")};
  RecoverResult R = recover_hamiltonian(charts, build_ansatz(5));
  double sec = ms_since(t0) / 1000;

  bool dim_ok = R.basis.size() == 2;
  std::set<std::string> basis;
  for (const auto& b : R.basis) basis.insert(print_poly(b));
  bool gauge_ok = basis == std::set<std::string>{"1", "t"};
  bool part_ok = R.particular == build_system("main").H.num;
  bool time_ok = sec < 60.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu unknowns, %zu equations, rank %zu, dim %zu, gauge {1, "
                "t}, particular matches, %.2f s",
                R.unknowns, R.equations, R.rank, R.basis.size(), sec);
  line(5, dim_ok && gauge_ok && part_ok && time_ok,
       "recovery: degree-5 ansatz through charts 1-3 pins the Hamiltonian",
       buf);
}

// ---- 6: conjugacies and the planar particular solution ---------------------

static void criterion_6() {
  HamSystem main_sys = build_system("main");
  bool phi1_ok =
      conjugacy_residual(main_sys, build_map("phi1"), build_system("sys11"))
          .pass();
  bool phi2_ok =
      conjugacy_residual(main_sys, build_map("phi2"), build_system("sys14"))
          .pass();
  bool symp_ok = is_symplectic(build_map("phi2")).pass();

  // alpha1 = 0 numerically forces alpha3 = 1 - 2 alpha2; alpha2 = 0 keeps
  // the planar solution pole-free on the real segment [0, 3]
  ParameterPoint at = num_params(Relation::SumOne, Rat(0), Rat(1));
  ParticularReport R =
      particular_solution_check(at, cplx(0.0), cplx(1.0), {cplx(0.0), cplx(3.0)});
  bool sym_ok = R.symbolic_ok;
  bool off_ok = R.max_offplane >= 0 && R.max_offplane <= 1e-9;
  bool gap_ok = R.max_gap >= 0 && R.max_gap <= 1e-7;

  char buf[220];
  std::snprintf(buf, sizeof buf,
                "phi1->sys11 %s, phi2->sys14 %s, phi2 symplectic %s; plane "
                "y=w=0: |y|,|w| <= %.1e, planar gap %.1e on t in [0,3]",
                phi1_ok ? "zero" : "NONZERO", phi2_ok ? "zero" : "NONZERO",
                symp_ok ? "yes" : "no", R.max_offplane, R.max_gap);
  line(6, phi1_ok && phi2_ok && symp_ok && sym_ok && off_ok && gap_ok,
       "conjugacies and the alpha1=0 particular solution", buf);
}

// ---- 7, 8: the autonomous pair ----------------------------------------------

static void criterion_7() {
  auto st = suite_status("two-time");
  std::string miss;
  bool ok = all_listed(st,
                       {"tt.compatibility", "tt.involution",
                        "tt.first-integrals", "tt.K3", "tt.degree-bound",
                        "tt.chart.r1", "tt.chart.r2", "tt.chart.r3"},
                       miss);
  line(7, ok,
       "commuting pair: flows commute, involution, first integrals, K3, "
       "charts, degree",
       ok ? "K3 = (4 K1^2 - 13 K2)/4 polynomial; phase degrees <= 6"
          : "failed: " + miss);
}

static void criterion_8() {
  auto it = g_structures.find("str.autonomy");
  bool ok = it != g_structures.end() && it->second;
  line(8, ok, "autonomy correspondence: K1 + H|_{t=0} / 2 = 0 under renaming",
       ok ? "exact, with the -1/2 scale" : "failed: str.autonomy");
}

// ---- 9: numerics -------------------------------------------------------------

static void criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  ParameterPoint at = num_params(Relation::SumZero, Rat(1, 3), Rat(1, 5));
  HamSystem K1 = build_system("K1"), K2 = build_system("K2");
  State init{cplx(0.2), cplx(0.45), cplx(0.45), cplx(-0.15)};
  const std::vector<cplx> span{cplx(0.0), cplx(5.0)};
  const double tols[3] = {1e-6, 1e-8, 1e-10};

  bool small_ok = true, mono_ok = true;
  double worst = 0;
  for (const HamSystem* F : {&K1, &K2}) {
    double prev1 = -1, prev2 = -1;
    for (double tol : tols) {
      IntegrateOptions opt;
      opt.tol = tol;
      Trajectory tr = integrate(*F, at, init, span, opt);
      double d1 = observable_drift(K1.H.num, K1.phase, K1.time_var, at, tr);
      double d2 = observable_drift(K2.H.num, K2.phase, K2.time_var, at, tr);
      if (prev1 >= 0 && (d1 >= prev1 || d2 >= prev2)) mono_ok = false;
      prev1 = d1;
      prev2 = d2;
      if (tol == 1e-10) {
        if (d1 > 1e-8 || d2 > 1e-8) small_ok = false;
        worst = std::max({worst, d1, d2});
      }
    }
  }

  // movable pole of the main flow from zero data, walked around on a small
  // circle; compare with the state staged just before the approach
  ParameterPoint atm = num_params(Relation::SumOne, Rat(1, 3), Rat(1, 5));
  HamSystem main_sys = build_system("main");
  std::vector<Chart> atlas{build_chart("m1"), build_chart("m2"),
                           build_chart("m3")};
  const double tstar = 1.4261247331432174;  // from the blow-up report
  const cplx t0c(tstar - 0.3), tnear(tstar - 0.01);
  IntegrateOptions wopt;
  wopt.switch_threshold = 100;
  Trajectory stage =
      integrate(main_sys, atm, State{cplx(0), cplx(0), cplx(0), cplx(0)},
                {cplx(0.0), t0c});
  State u0 = stage.points.back().u;

  std::vector<cplx> loop{t0c, tnear};
  for (int k = 0; k <= 24; k++) {
    double th = 2 * 3.14159265358979323846 * k / 24;
    loop.push_back(cplx(tstar) + 0.01 * cplx(std::cos(th), std::sin(th)));
  }
  loop.push_back(tnear);
  loop.push_back(t0c);
  Trajectory walk = continue_through_pole(main_sys, atlas, atm, u0, loop, wopt);
  double round = 0;
  for (size_t i = 0; i < 4; i++)
    round = std::max(round, std::abs(walk.points.back().u[i] - u0[i]));
  bool pole_ok = walk.switches >= 2 && round <= 1e-6;

  // finite-difference conjugacy residual for phi2 on a uniform grid; the
  // zero-data solution stays finite on [0, 1] (first pole near 1.426)
  IntegrateOptions copt;
  copt.sample_dt = 1e-3;
  Trajectory smooth =
      integrate(main_sys, atm, State{cplx(0), cplx(0), cplx(0), cplx(0)},
                {cplx(0.0), cplx(1.0)}, copt);
  double conj = numeric_conjugacy_check(main_sys, build_map("phi2"),
                                        build_system("sys14"), atm, smooth);
  bool conj_ok = conj <= 1e-6;
  double sec = ms_since(t0) / 1000;

  char buf[240];
  std::snprintf(buf, sizeof buf,
                "worst drift %.1e at tol 1e-10, monotone %s; pole round-trip "
                "%.1e with %zu switches; phi2 residual %.1e; %.1f s",
                worst, mono_ok ? "yes" : "NO", round, walk.switches, conj,
                sec);
  line(9, small_ok && mono_ok && pole_ok && conj_ok && sec < 60,
       "numerics: conservation, pole continuation, numeric conjugacy", buf);
}

// ---- 10: randomized infrastructure properties -------------------------------

static void criterion_10() {
  using namespace testgen;
  const std::vector<int> xyz{VX, VY, VZ};
  const std::vector<int> phase{VX, VY, VZ, VW};
  const std::vector<std::pair<int, int>> pairs{{VX, VY}, {VZ, VW}};
  const int N = 1000;
  int bad_ring = 0, bad_rules = 0, bad_poisson = 0, bad_dd = 0, bad_rt = 0;

  for (int i = 0; i < N; i++) {
    RatFn a = random_ratfn(xyz), b = random_ratfn(xyz), c = random_ratfn(xyz);
    bool ok = (a + b - (b + a)).is_zero() &&
              ((a + b) + c - (a + (b + c))).is_zero() &&
              (a * b - b * a).is_zero() &&
              ((a * b) * c - (a * (b * c))).is_zero() &&
              (a * (b + c) - (a * b + a * c)).is_zero() &&
              (a * RatFn(Rat(1)) - a).is_zero() && (a - a).is_zero();
    if (!ok) bad_ring++;
  }

  for (int i = 0; i < N; i++) {
    RatFn f = random_ratfn({VX, VY}), g = random_ratfn({VZ, VW, VT});
    RatFn leib = diff(f * g, VY) - (diff(f, VY) * g + f * diff(g, VY));
    RatFn h = substitute(f, {{VX, g}});
    RatFn chain =
        diff(h, VZ) - substitute(diff(f, VX), {{VX, g}}) * diff(g, VZ);
    if (!leib.is_zero() || !chain.is_zero()) bad_rules++;
  }

  for (int i = 0; i < N; i++) {
    RatFn F = random_ratfn(phase), G = random_ratfn(phase);
    RatFn P(random_poly(phase)), Q(random_poly(phase)), R(random_poly(phase));
    bool anti =
        (poisson_bracket(F, G, pairs) + poisson_bracket(G, F, pairs))
            .is_zero();
    RatFn jac = poisson_bracket(P, poisson_bracket(Q, R, pairs), pairs) +
                poisson_bracket(Q, poisson_bracket(R, P, pairs), pairs) +
                poisson_bracket(R, poisson_bracket(P, Q, pairs), pairs);
    if (!anti || !jac.is_zero()) bad_poisson++;
  }

  for (int i = 0; i < N; i++) {
    RatFn g = random_ratfn(phase);
    std::vector<std::pair<int, RatFn>> dg;
    for (int v : phase) dg.push_back({v, diff(g, v)});
    if (!one_form_d(dg, phase).is_zero()) bad_dd++;
  }

  for (int i = 0; i < N; i++) {
    RatFn f = random_ratfn({VX, VZ, VT, VAL2});
    RatFn back = parse_expr(print_expr(f));
    if (!(back - f).is_zero()) bad_rt++;
  }

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d each: ring %d bad, Leibniz/chain %d, Poisson %d, dod %d, "
                "round-trip %d",
                N, bad_ring, bad_rules, bad_poisson, bad_dd, bad_rt);
  line(10, !(bad_ring || bad_rules || bad_poisson || bad_dd || bad_rt),
       "randomized properties of the algebra kernel", buf);
}

int main() {
  criterion_1_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d of 10 criteria failed\n",
              failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures;
}
