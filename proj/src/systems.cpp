#include "pain2/systems.hpp"

#include "pain2/parse.hpp"

namespace pain2 {

RatFn reduce_relation(const RatFn& f, Relation rel) {
  if (rel == Relation::None) return f;
  if (!f.num.contains(VAL1) && !f.den.contains(VAL1)) return f;
  // solve 2*alpha1 + 2*alpha2 + alpha3 = c for alpha1
  RatFn c(rel == Relation::SumOne ? 1 : 0);
  RatFn a1 = (c - RatFn(2) * RatFn::variable(VAL2) - RatFn::variable(VAL3)) / RatFn(2);
  return substitute(f, {{VAL1, a1}});
}

namespace {

HamSystem make(const std::string& id, Relation rel, const std::string& ham,
               const std::vector<int>& phase,
               const std::vector<std::string>& field) {
  HamSystem S;
  S.id = id;
  S.params.rel = rel;
  S.phase = phase;
  for (size_t i = 0; i + 1 < phase.size(); i += 2)
    S.pairs.push_back({phase[i], phase[i + 1]});
  if (ham.empty()) {
    S.has_hamiltonian = false;
  } else {
    S.H = parse_expr(ham);
  }
  if (field.empty() && S.has_hamiltonian) {
    S.rhs = hamiltonian_vector_field(S).comp;
  } else {
    for (const auto& f : field) S.rhs.push_back(parse_expr(f));
  }
  return S;
}

}  // namespace

HamSystem build_system(const std::string& id) {
  if (id == "generic") {
    // two uncoupled degrees of freedom plus the a*y*w coupling; the family
    // constants a, a1, a2, a3 stay symbolic
    return make("generic", Relation::None,
                "a1*x^2*y+a2*y^2/2+a3*t*y+a1*alpha1*x"
                "+a1*z^2*w+a2*w^2/2+a3*t*w+a1*alpha2*z+a*y*w",
                {VX, VY, VZ, VW}, {});
  }
  if (id == "hone") {
    return make("hone", Relation::None,
                "2*x^2*y+y^2/8-t*y+alpha1*x+2*z^2*w+w^2/8-t*w+alpha2*z+3/4*y*w",
                {VX, VY, VZ, VW},
                {"2*x^2+y/4+3/4*w-t", "-4*x*y-alpha1",
                 "2*z^2+w/4+3/4*y-t", "-4*z*w-alpha2"});
  }
  if (id == "a1case") {
    return make("a1case", Relation::None,
                "-1*x^2*y+y^2/2-t*y/2-alpha1*x-1*z^2*w+w^2/2-t*w/2-alpha2*z+y*w",
                {VX, VY, VZ, VW},
                {"-1*x^2+y+w-t/2", "2*x*y+alpha1",
                 "-1*z^2+y+w-t/2", "2*z*w+alpha2"});
  }
  if (id == "main") {
    return make("main", Relation::SumOne,
                "-2*x^2*y+2*y^2-2*t*y-2*alpha2*x+z^2*w+w^2+t*w+alpha3*z-3*y*w",
                {VX, VY, VZ, VW},
                {"-2*x^2+4*y-3*w-2*t", "4*x*y+2*alpha2",
                 "z^2+2*w-3*y+t", "-2*z*w-alpha3"});
  }
  if (id == "sys11") {
    return make("sys11", Relation::SumOne,
                "2*x^2*y+2*y^2+2*t*y-1*y*z*w^2+alpha3*y*w-2*x*z*w-2*alpha1*x-1*z",
                {VX, VY, VZ, VW},
                {"2*x^2+4*y+2*t-z*w^2+alpha3*w", "-4*x*y+2*z*w+2*alpha1",
                 "-2*x*z-2*y*z*w+alpha3*y", "y*w^2+2*x*w+1"});
  }
  if (id == "sys14") {
    return make("sys14", Relation::SumOne,
                "2*x^2*y+2*y^2-1*y*z+2*t*y+2*alpha1*x+2*x*z*w+alpha3*w-1*z*w^2",
                {VX, VY, VZ, VW},
                {"2*x^2+4*y-z+2*t", "-4*x*y-2*z*w-2*alpha1",
                 "-2*z*w+2*x*z+alpha3", "w^2-2*x*w+y"});
  }
  if (id == "sys16") {
    // planar reduction of sys14 on its particular solution; field only
    HamSystem S = make("sys16", Relation::SumOne, "", {}, {"2*x^2-z+2*t", "2*x*z+alpha3"});
    S.phase = {VX, VZ};
    return S;
  }
  if (id == "K1") {
    return make("K1", Relation::SumZero,
                "q1^2*p1-p1^2+alpha2*q1-q2^2*p2/2-p2^2/2-alpha3/2*q2+3/2*p1*p2",
                {VQ1, VP1, VQ2, VP2}, {});
  }
  if (id == "K2") {
    HamSystem S = make(
        "K2", Relation::SumZero,
        "-1*alpha3^2*p1+q2^4*p2^2+2*q2^2*p2^3+p2^4+2*alpha3*q2^3*p2"
        "+4*(alpha1+alpha3)*q2*p2^2+alpha3^2*q2^2+alpha3*(2*alpha1+alpha3)*p2"
        "-p2*(8*q1*p1*q2*p2+6*p1*q2^2*p2+4*q1^2*p1*p2+2*p1*p2^2-p1^2*p2"
        "+4*alpha2*q1*p2+4*alpha3*q1*p1+6*alpha3*p1*q2)",
        {VQ1, VP1, VQ2, VP2}, {});
    S.time_var = VS;
    return S;
  }
  throw math_error("build_system: unknown id '" + id + "'");
}

std::vector<std::string> catalog_ids() {
  return {"generic", "hone", "a1case", "main", "sys11", "sys14", "sys16", "K1", "K2"};
}

VectorField hamiltonian_vector_field(const HamSystem& S) {
  if (!S.has_hamiltonian)
    throw math_error("hamiltonian_vector_field: system '" + S.id +
                     "' has no Hamiltonian");
  VectorField V;
  V.vars = S.phase;
  V.comp.resize(S.phase.size());
  for (size_t i = 0; i < S.pairs.size(); i++) {
    auto [q, p] = S.pairs[i];
    V.comp[2 * i] = diff(S.H, p);
    V.comp[2 * i + 1] = -diff(S.H, q);
  }
  return V;
}

RatFn poisson_bracket(const RatFn& F, const RatFn& G,
                      const std::vector<std::pair<int, int>>& pairs) {
  RatFn b;
  for (auto [q, p] : pairs)
    b = b + diff(F, p) * diff(G, q) - diff(F, q) * diff(G, p);
  return b;
}

VectorField lie_bracket(const VectorField& V, const VectorField& W) {
  if (V.vars != W.vars) throw math_error("lie_bracket: mismatched coordinates");
  VectorField R;
  R.vars = V.vars;
  R.comp.resize(V.comp.size());
  for (size_t i = 0; i < V.comp.size(); i++) {
    RatFn c;
    for (size_t j = 0; j < V.vars.size(); j++)
      c = c + V.comp[j] * diff(W.comp[i], V.vars[j]) -
          W.comp[j] * diff(V.comp[i], V.vars[j]);
    R.comp[i] = c;
  }
  return R;
}

RatFn total_time_derivative(const RatFn& F, const HamSystem& S) {
  RatFn d = diff(F, S.time_var);
  for (size_t i = 0; i < S.phase.size(); i++)
    d = d + S.rhs[i] * diff(F, S.phase[i]);
  return d;
}

bool invariant_cycle_check(const HamSystem& S, const InvariantCycle& C) {
  for (const RatFn& g : C.generators) {
    RatFn td = total_time_derivative(g, S);
    td = S.params.reduce(td);
    for (const auto& [v, val] : C.param_constraint)
      td = substitute(td, {{v, val}});
    if (!vanishes_on_variety(td, C.solved)) return false;
  }
  return true;
}

std::vector<InvariantCycle> invariant_cycles_main() {
  std::vector<InvariantCycle> cycles;
  {
    InvariantCycle c;
    c.id = "y=0";
    c.generators = {parse_expr("y")};
    c.codimension = 1;
    c.solved = {{VY, RatFn(0)}};
    c.param_constraint = {{VAL2, RatFn(0)}};
    cycles.push_back(c);
  }
  {
    InvariantCycle c;
    c.id = "w=0";
    c.generators = {parse_expr("w")};
    c.codimension = 1;
    c.solved = {{VW, RatFn(0)}};
    c.param_constraint = {{VAL3, RatFn(0)}};
    cycles.push_back(c);
  }
  {
    InvariantCycle c;
    c.id = "y-x^2-w-t=0, x+z=0";
    c.generators = {parse_expr("y-x^2-w-t"), parse_expr("x+z")};
    c.codimension = 2;
    c.solved = {{VZ, parse_expr("-1*x")}, {VY, parse_expr("x^2+w+t")}};
    // alpha1 = 0 inside the sum-one family also pins alpha3 = 1 - 2*alpha2;
    // the derivative of the first generator vanishes only on that locus
    c.param_constraint = {{VAL1, RatFn(0)}, {VAL3, parse_expr("1-2*alpha2")}};
    cycles.push_back(c);
  }
  return cycles;
}

}  // namespace pain2
