#include "pain2/transforms.hpp"

#include "pain2/parse.hpp"

namespace pain2 {

namespace {

const std::vector<int> kXYZW = {VX, VY, VZ, VW};
const std::vector<int> kQP = {VQ1, VP1, VQ2, VP2};

BirationalMap identity_on(const std::vector<int>& vars) {
  BirationalMap m;
  m.id = "identity";
  m.vars = vars;
  for (int v : vars) m.comp.push_back(RatFn::variable(v));
  return m;
}

RatFn E(const char* s) { return parse_expr(s); }

// The shared big symmetry, in either variable quadruple. den is the pole
// divisor (y - x^2 - w - t resp. p1 - q1^2 - p2), lead the leading part of
// the second component (they differ: the t-dependent case drops the -t).
BirationalMap big_symmetry(const std::vector<int>& vars, const RatFn& den,
                           const RatFn& lead, const RatFn& bpart) {
  RatFn q1 = RatFn::variable(vars[0]);
  RatFn p2 = RatFn::variable(vars[3]);
  RatFn q2 = RatFn::variable(vars[2]);
  RatFn a1 = RatFn::variable(VAL1);
  RatFn sum = q1 + q2;
  RatFn num = q1 * den - sum * p2 + a1;
  RatFn wimg = RatFn(-1) * sum * bpart / den;
  BirationalMap m;
  m.vars = vars;
  m.comp = {num / den, lead + num * num / (den * den) + wimg,
            RatFn(-1) * den / sum - num / den, wimg};
  m.pimg = {RatFn(-1) * a1 - RatFn::variable(VAL3),
            RatFn(2) * a1 + RatFn::variable(VAL2) + RatFn::variable(VAL3),
            RatFn::variable(VAL3)};
  return m;
}

}  // namespace

BirationalMap build_map(const std::string& id) {
  BirationalMap m;
  m.id = id;
  if (id == "identity") {
    m = identity_on(kXYZW);
  } else if (id == "S1") {
    m.vars = kXYZW;
    m.comp = {E("x+alpha1/y"), E("y"), E("z"), E("w")};
    m.pimg = {E("-1*alpha1"), E("alpha2"), E("alpha3")};
  } else if (id == "S2") {
    m.vars = kXYZW;
    m.comp = {E("x"), E("y"), E("z+alpha2/w"), E("w")};
    m.pimg = {E("alpha1"), E("-1*alpha2"), E("alpha3")};
  } else if (id == "s1") {
    m.rel = Relation::SumOne;
    m.vars = kXYZW;
    m.comp = {E("x+alpha2/y"), E("y"), E("z"), E("w")};
    m.pimg = {E("alpha1+2*alpha2"), E("-1*alpha2"), E("alpha3")};
  } else if (id == "s2") {
    m.rel = Relation::SumOne;
    m.vars = kXYZW;
    m.comp = {E("x"), E("y"), E("z+alpha3/w"), E("w")};
    m.pimg = {E("alpha1+alpha3"), E("alpha2"), E("-1*alpha3")};
  } else if (id == "s3") {
    m = big_symmetry(kXYZW, E("y-x^2-w-t"), E("y-x^2-w"),
                     E("-1-(x+z)*w+2*alpha1+2*alpha2"));
    m.rel = Relation::SumOne;
  } else if (id == "ks1") {
    m.rel = Relation::SumZero;
    m.vars = kQP;
    m.comp = {E("q1+alpha2/p1"), E("p1"), E("q2"), E("p2")};
    m.pimg = {E("alpha1+2*alpha2"), E("-1*alpha2"), E("alpha3")};
  } else if (id == "ks2") {
    m.rel = Relation::SumZero;
    m.vars = kQP;
    m.comp = {E("q1"), E("p1"), E("q2+alpha3/p2"), E("p2")};
    m.pimg = {E("alpha1+alpha3"), E("alpha2"), E("-1*alpha3")};
  } else if (id == "ks3") {
    m = big_symmetry(kQP, E("p1-q1^2-p2"), E("p1-q1^2-p2"),
                     E("2*alpha1+2*alpha2-(q1+q2)*p2"));
    m.rel = Relation::SumZero;
  } else if (id == "phi1") {
    m.rel = Relation::SumOne;
    m.vars = kXYZW;
    RatFn den = E("y-x^2-w-t");
    m.comp = {E("x") - (E("(x+z)*w") - E("alpha1")) / den, den,
              E("-1*w") * den, E("x+z") / den};
  } else if (id == "phi2") {
    m.rel = Relation::SumOne;
    m.vars = kXYZW;
    m.comp = {E("x"), E("y-x^2-w-t"), E("-1*w"), E("x+z")};
  } else {
    throw math_error("build_map: unknown id '" + id + "'");
  }
  m.id = id;
  return m;
}

std::vector<std::string> map_ids() {
  return {"identity", "S1",  "S2",  "s1",  "s2",   "s3",
          "ks1",      "ks2", "ks3", "phi1", "phi2"};
}

std::map<int, RatFn> image_substitution(const BirationalMap& m) {
  std::map<int, RatFn> s;
  for (size_t i = 0; i < m.vars.size(); i++) s.emplace(m.vars[i], m.comp[i]);
  s.emplace(VAL1, m.pimg[0]);
  s.emplace(VAL2, m.pimg[1]);
  s.emplace(VAL3, m.pimg[2]);
  return s;
}

BirationalMap compose(const BirationalMap& m1, const BirationalMap& m2) {
  if (m1.vars != m2.vars)
    throw math_error("compose: maps act on different coordinates");
  auto sub = image_substitution(m1);
  BirationalMap r;
  r.id = m1.id + ";" + m2.id;
  r.rel = m1.rel != Relation::None ? m1.rel : m2.rel;
  r.vars = m1.vars;
  for (const auto& c : m2.comp) r.comp.push_back(substitute(c, sub));
  for (int j = 0; j < 3; j++) r.pimg[j] = substitute(m2.pimg[j], sub);
  return r;
}

Residual is_symplectic(const BirationalMap& m,
                       std::vector<std::pair<int, int>> pairs) {
  if (pairs.empty())
    for (size_t i = 0; i + 1 < m.vars.size(); i += 2)
      pairs.emplace_back(m.vars[i], m.vars[i + 1]);
  Residual r;
  size_t n = m.comp.size();
  for (size_t i = 0; i < n; i++)
    for (size_t j = i + 1; j < n; j++) {
      // components alternate q, p; {P_k, Q_k} must be 1, all else 0
      RatFn br = poisson_bracket(m.comp[j], m.comp[i], pairs);
      if (j == i + 1 && i % 2 == 0) br = br - RatFn(1);
      r.comp.push_back(reduce_relation(br, m.rel));
    }
  return r;
}

namespace {

// time derivative of f along the flow of s, by the chain rule
RatFn flow_derivative(const RatFn& f, const HamSystem& s) {
  RatFn d = diff(f, s.time_var);
  for (size_t j = 0; j < s.phase.size(); j++)
    d = d + diff(f, s.phase[j]) * s.rhs[j];
  return d;
}

Residual pushforward_residual(const HamSystem& source, const BirationalMap& m,
                              const HamSystem& target) {
  if (source.phase != m.vars || target.phase != m.vars)
    throw math_error("residual: system and map coordinates differ");
  if (source.time_var != target.time_var)
    throw math_error("residual: systems use different time variables");
  auto sub = image_substitution(m);
  Residual r;
  for (size_t i = 0; i < m.comp.size(); i++) {
    RatFn lhs = flow_derivative(m.comp[i], source);
    RatFn rhs = substitute(target.rhs[i], sub);
    r.comp.push_back(reduce_relation(lhs - rhs, source.params.rel));
  }
  return r;
}

}  // namespace

Residual invariance_residual(const HamSystem& s, const BirationalMap& m) {
  return pushforward_residual(s, m, s);
}

Residual conjugacy_residual(const HamSystem& source, const BirationalMap& m,
                            const HamSystem& target) {
  return pushforward_residual(source, m, target);
}

bool group_relation_check(const std::vector<std::string>& word,
                          const std::string& expected) {
  if (word.empty()) throw math_error("group_relation_check: empty word");
  BirationalMap acc = build_map(word[0]);
  for (size_t i = 1; i < word.size(); i++)
    acc = compose(acc, build_map(word[i]));
  BirationalMap exp =
      expected == "identity" ? identity_on(acc.vars) : build_map(expected);
  if (exp.vars != acc.vars) return false;
  Relation rel = acc.rel != Relation::None ? acc.rel : exp.rel;
  for (size_t i = 0; i < acc.comp.size(); i++)
    if (!reduce_relation(acc.comp[i] - exp.comp[i], rel).is_zero())
      return false;
  for (int j = 0; j < 3; j++)
    if (!reduce_relation(acc.pimg[j] - exp.pimg[j], rel).is_zero())
      return false;
  return true;
}

}  // namespace pain2
