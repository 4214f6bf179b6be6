#include "pain2/verify.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "pain2/holomorphy.hpp"
#include "pain2/numerics.hpp"
#include "pain2/parse.hpp"
#include "pain2/systems.hpp"
#include "pain2/transforms.hpp"
#include "pain2/two_time.hpp"

namespace pain2 {

namespace {

struct Check {
  std::string suite, id, anchor;
  std::function<std::string()> fn;  // returns the residual text; "" passes
};

std::string res_text(const std::vector<RatFn>& comps) {
  std::string out;
  for (const auto& c : comps) {
    if (c.is_zero()) continue;
    if (!out.empty()) out += "; ";
    out += print_expr(c);
  }
  return out;
}

std::string res_text(const Residual& r) { return res_text(r.comp); }

std::string zero_or(const RatFn& f) {
  return f.is_zero() ? "" : print_expr(f);
}

std::string poly_or(const PolyReport& rep) {
  if (rep.pass) return "";
  std::string out;
  for (const auto& [i, den] : rep.offenders) {
    if (!out.empty()) out += "; ";
    out += "component " + std::to_string(i) + " denominator " + print_poly(den);
  }
  return out;
}

void add_symmetry(std::vector<Check>& cs) {
  auto inv = [](const char* sys, const char* map) {
    return [sys, map] {
      return res_text(invariance_residual(build_system(sys), build_map(map)));
    };
  };
  cs.push_back({"symmetry", "sym.S1",
                "S1: (x,y,z,w) -> (x + alpha1/y, y, z, w) with alpha1 -> "
                "-alpha1 maps solutions of the coupling family to solutions, "
                "all constants symbolic",
                inv("generic", "S1")});
  cs.push_back({"symmetry", "sym.S2",
                "S2: (x,y,z,w) -> (x, y, z + alpha2/w, w) with alpha2 -> "
                "-alpha2 maps solutions of the coupling family to solutions",
                inv("generic", "S2")});
  for (const char* m : {"s1", "s2", "s3"})
    cs.push_back({"symmetry", std::string("sym.") + m,
                  std::string(m) +
                      " is a Backlund symmetry of the normalized system under "
                      "2*alpha1 + 2*alpha2 + alpha3 = 1",
                  inv("main", m)});
  for (const char* m : {"ks1", "ks2", "ks3"})
    for (const char* flow : {"K1", "K2"})
      cs.push_back({"symmetry",
                    std::string("sym.") + m + "." + flow,
                    std::string(m) + " is a Backlund symmetry of the " + flow +
                        " flow under 2*alpha1 + 2*alpha2 + alpha3 = 0",
                    inv(flow, m)});

  auto word_is_identity = [](std::vector<std::string> w) {
    return [w = std::move(w)]() -> std::string {
      return group_relation_check(w, "identity")
                 ? ""
                 : "composition differs from the identity map";
    };
  };
  cs.push_back({"symmetry", "grp.s1s1", "s1 composed with itself is the identity",
                word_is_identity({"s1", "s1"})});
  cs.push_back({"symmetry", "grp.s2s2", "s2 composed with itself is the identity",
                word_is_identity({"s2", "s2"})});
  cs.push_back({"symmetry", "grp.s3s3", "s3 composed with itself is the identity",
                word_is_identity({"s3", "s3"})});
  cs.push_back({"symmetry", "grp.s1s2s1s2",
                "(s1 s2)^2 is the identity, so s1 and s2 commute",
                word_is_identity({"s1", "s2", "s1", "s2"})});
  cs.push_back(
      {"symmetry", "grp.s3s1.translation",
       "s3 then s1 translates the parameters by (+1, -1, 0) when they sum to "
       "one",
       [] {
         auto t = compose(build_map("s3"), build_map("s1"));
         std::vector<RatFn> d{
             reduce_relation(t.pimg[0] - parse_expr("alpha1+1"),
                             Relation::SumOne),
             reduce_relation(t.pimg[1] - parse_expr("alpha2-1"),
                             Relation::SumOne),
             reduce_relation(t.pimg[2] - parse_expr("alpha3"),
                             Relation::SumOne)};
         return res_text(d);
       }});
  cs.push_back(
      {"symmetry", "grp.ks3ks1.translation",
       "ks3 then ks1 fixes the parameters when they sum to zero",
       [] {
         auto t = compose(build_map("ks3"), build_map("ks1"));
         std::vector<RatFn> d;
         for (int j = 0; j < 3; j++)
           d.push_back(reduce_relation(t.pimg[j] - RatFn::variable(VAL1 + j),
                                       Relation::SumZero));
         return res_text(d);
       }});
}

void add_holomorphy(std::vector<Check>& cs) {
  for (const char* cid : {"m1", "m2", "m3"})
    cs.push_back({"holomorphy", std::string("hol.") + cid + ".poly",
                  std::string("the normalized field stays polynomial through "
                              "chart ") +
                      cid,
                  [cid] {
                    return poly_or(polynomiality_check(chart_pushforward(
                        build_system("main"), build_chart(cid))));
                  }});
  const char* corr[] = {"0", "0", "x"};
  const char* mids[] = {"m1", "m2", "m3"};
  for (int i = 0; i < 3; i++)
    cs.push_back(
        {"holomorphy", std::string("hol.") + mids[i] + ".two-form",
         std::string("dx^dy + dz^dw - d(H + ") + corr[i] +
             ")^dt equals the canonical two-form of chart " + mids[i] +
             " written fiberwise in its own coordinates",
         [cid = std::string(mids[i]), cr = std::string(corr[i])] {
           HamSystem S = build_system("main");
           Chart C = build_chart(cid);
           if (!(C.correction - parse_expr(cr)).is_zero())
             return std::string("correction is ") + print_expr(C.correction) +
                    ", expected " + cr;
           RatFn Hc = derive_chart_hamiltonian(S, C);
           TwoForm R = two_form_residual(S, C, Hc);
           std::string out;
           for (const auto& [key, v] : R.coef) {
             if (v.is_zero()) continue;
             if (!out.empty()) out += "; ";
             out += std::string("d") + var_name(key.first) + "^d" +
                    var_name(key.second) + ": " + print_expr(v);
           }
           return out;
         }});
  for (const char* cid : {"g1", "g2"})
    cs.push_back({"holomorphy", std::string("hol.") + cid + ".poly",
                  std::string("the coupling family stays polynomial through "
                              "chart ") +
                      cid,
                  [cid] {
                    return poly_or(polynomiality_check(chart_pushforward(
                        build_system("generic"), build_chart(cid))));
                  }});
  cs.push_back(
      {"holomorphy", "hol.recover",
       "the degree-5 ansatz Hamiltonians polynomial through charts m1, m2, m3 "
       "form exactly the two-dimensional family H + c0 + c1*t",
       [] {
         RecoverResult R = recover_hamiltonian(
             {build_chart("m1"), build_chart("m2"), build_chart("m3")},
             build_ansatz(5));
         if (R.basis.size() != 2)
           return "solution space has dimension " +
                  std::to_string(R.basis.size()) + ", expected 2";
         MPoly one = MPoly::one(), t = MPoly::variable(VT);
         bool gauge = (R.basis[0] == one && R.basis[1] == t) ||
                      (R.basis[0] == t && R.basis[1] == one);
         if (!gauge) return std::string("free directions are not {1, t}");
         MPoly H = build_system("main").H.num;
         if (!(R.particular == H))
           return "particular solution differs from the catalog Hamiltonian: " +
                  print_poly(R.particular - H);
         return std::string();
       }});
}

void add_structures(std::vector<Check>& cs) {
  for (const InvariantCycle& C : invariant_cycles_main()) {
    std::string anchor = "the cycle {";
    for (size_t i = 0; i < C.generators.size(); i++)
      anchor += (i ? ", " : "") + print_expr(C.generators[i]);
    anchor += "} is invariant under the normalized flow at its pinned "
              "parameters";
    cs.push_back({"structures", "str.cycle." + C.id, anchor, [C] {
                    return invariant_cycle_check(build_system("main"), C)
                               ? ""
                               : "ideal membership fails on the cycle";
                  }});
  }
  cs.push_back({"structures", "str.phi1.conjugacy",
                "phi1 sends solutions of the normalized system to solutions "
                "of the first transformed system",
                [] {
                  return res_text(conjugacy_residual(build_system("main"),
                                                     build_map("phi1"),
                                                     build_system("sys11")));
                }});
  cs.push_back({"structures", "str.phi2.conjugacy",
                "phi2 sends solutions of the normalized system to solutions "
                "of the second transformed system",
                [] {
                  return res_text(conjugacy_residual(build_system("main"),
                                                     build_map("phi2"),
                                                     build_system("sys14")));
                }});
  for (const char* m : {"phi1", "phi2"})
    cs.push_back({"structures", std::string("str.") + m + ".symplectic",
                  std::string(m) + " preserves the canonical brackets",
                  [m] { return res_text(is_symplectic(build_map(m))); }});
  cs.push_back(
      {"structures", "str.particular-plane",
       "with alpha1 = 0 the plane y = w = 0 is invariant for the second "
       "transformed system and the flow restricts to the planar system",
       [] {
         ParameterPoint P;
         P.rel = Relation::SumOne;
         P.alpha1 = RatFn(0);
         ParticularReport rep = particular_solution_check(
             P, cplx(0), cplx(1), {cplx(0), cplx(1)});
         if (rep.symbolic_ok) return std::string();
         std::string out = "ydot on the plane: " + print_expr(rep.ydot_on_plane) +
                           "; wdot on the plane: " + print_expr(rep.wdot_on_plane);
         if (!rep.reduces_to_planar)
           out += "; restricted (x, z) field differs from the planar system";
         return out;
       }});
  cs.push_back({"structures", "str.autonomy",
                "K1 equals -H/2 of the normalized system frozen at t = 0, "
                "under the renaming (x,y,z,w) -> (q1,p1,q2,p2)",
                [] {
                  return zero_or(autonomy_residual(build_two_time(),
                                                   build_system("main")));
                }});
}

void add_two_time(std::vector<Check>& cs) {
  cs.push_back({"two-time", "tt.compatibility",
                "the K1 and K2 flows commute: their Lie bracket is the zero "
                "field",
                [] {
                  TwoTimeSystem T = build_two_time();
                  return res_text(compatibility_residual(T).comp);
                }});
  cs.push_back({"two-time", "tt.involution",
                "{K1, K2} = 0 when the parameters sum to zero",
                [] { return zero_or(involution_residual(build_two_time())); }});
  cs.push_back({"two-time", "tt.first-integrals",
                "K1 and K2 are first integrals of both flows",
                [] {
                  auto M = first_integral_matrix(build_two_time());
                  std::vector<RatFn> flat{M[0][0], M[0][1], M[1][0], M[1][1]};
                  return res_text(flat);
                }});
  cs.push_back({"two-time", "tt.K3",
                "K3 = (4*K1^2 - 13*K2)/4 is a polynomial first integral",
                [] {
                  TwoTimeSystem T = build_two_time();
                  RatFn K3 =
                      (RatFn(4) * RatFn(T.K1) * RatFn(T.K1) - RatFn(13) * RatFn(T.K2)) /
                      RatFn(4);
                  if (!K3.is_polynomial())
                    return "denominator " + print_poly(K3.den);
                  RatFn b1 = poisson_bracket(RatFn(T.K1), K3, T.pairs);
                  RatFn b2 = poisson_bracket(RatFn(T.K2), K3, T.pairs);
                  return res_text({T.params.reduce(b1), T.params.reduce(b2)});
                }});
  cs.push_back({"two-time", "tt.degree-bound",
                "K1, K2, K3 have phase degree at most 6, with K2 and K3 "
                "attaining it",
                [] {
                  TwoTimeSystem T = build_two_time();
                  std::vector<int> qp{VQ1, VP1, VQ2, VP2};
                  MPoly K3 = third_hamiltonian(T);
                  int d1 = T.K1.phase_degree(qp), d2 = T.K2.phase_degree(qp),
                      d3 = K3.phase_degree(qp);
                  if (d1 <= 6 && d2 == 6 && d3 == 6) return std::string();
                  char buf[96];
                  snprintf(buf, sizeof buf,
                           "phase degrees are %d, %d, %d; expected <=6, 6, 6",
                           d1, d2, d3);
                  return std::string(buf);
                }});
  for (const char* cid : {"r1", "r2", "r3"})
    cs.push_back({"two-time", std::string("tt.chart.") + cid,
                  std::string("K1, K2 and K3 are polynomial in chart ") + cid +
                      " when the parameters sum to zero",
                  [cid] {
                    TwoTimeSystem T = build_two_time();
                    Chart C = build_chart(cid);
                    RatFn K3{third_hamiltonian(T)};
                    std::string out;
                    const char* names[] = {"K1", "K2", "K3"};
                    RatFn Ks[] = {RatFn(T.K1), RatFn(T.K2), K3};
                    for (int i = 0; i < 3; i++) {
                      RatFn im = reduce_relation(in_chart(Ks[i], C),
                                                 Relation::SumZero);
                      if (im.is_polynomial()) continue;
                      if (!out.empty()) out += "; ";
                      out += std::string(names[i]) + " denominator " +
                             print_poly(im.den);
                    }
                    return out;
                  }});
}

std::vector<Check> make_checks() {
  std::vector<Check> cs;
  add_symmetry(cs);
  add_holomorphy(cs);
  add_structures(cs);
  add_two_time(cs);
  return cs;
}

}  // namespace

std::string fnv1a64(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> verify_suites() {
  return {"symmetry", "holomorphy", "structures", "two-time"};
}

std::vector<CheckReport> run_suite(const std::string& suite) {
  std::vector<CheckReport> out;
  for (const Check& c : make_checks()) {
    if (suite != "all" && c.suite != suite) continue;
    CheckReport r;
    r.id = c.id;
    r.anchor = c.anchor;
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.residual = c.fn();
      r.status = r.residual.empty() ? "pass" : "fail";
    } catch (const std::exception& e) {
      r.status = "error";
      r.residual = e.what();
    }
    r.ms = std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
               .count();
    r.residual_hash = fnv1a64(r.residual);
    if (r.residual.size() > 4096) r.residual.resize(4096);
    out.push_back(std::move(r));
  }
  if (out.empty()) throw std::invalid_argument("unknown suite: " + suite);
  return out;
}

bool all_pass(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (r.status != "pass") return false;
  return true;
}

}  // namespace pain2
