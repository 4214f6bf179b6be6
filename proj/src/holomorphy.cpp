#include "pain2/holomorphy.hpp"

#include <algorithm>
#include <sstream>

#include "pain2/parse.hpp"

namespace pain2 {

namespace {

const std::vector<int> kXYZW{VX, VY, VZ, VW};
const std::vector<int> kQP{VQ1, VP1, VQ2, VP2};

Chart make_chart(std::string id, const std::vector<int>& vars,
                 const std::vector<std::string>& fwd,
                 const std::vector<std::string>& inv,
                 const std::string& corr = "") {
  Chart C;
  C.id = std::move(id);
  C.vars = vars;
  for (const auto& s : fwd) C.fwd.push_back(parse_expr(s));
  for (const auto& s : inv) C.inv.push_back(parse_expr(s));
  if (!corr.empty()) C.correction = parse_expr(corr);
  return C;
}

}  // namespace

Chart build_chart(const std::string& id) {
  if (id == "identity")
    return make_chart("identity", kXYZW, {"x", "y", "z", "w"},
                      {"x", "y", "z", "w"});
  if (id == "kidentity")
    return make_chart("kidentity", kQP, {"q1", "p1", "q2", "p2"},
                      {"q1", "p1", "q2", "p2"});
  // the blow-up charts in a single degree of freedom are involutions, so
  // forward and inverse share one formula
  if (id == "m1")
    return make_chart("m1", kXYZW, {"1/x", "-1*(x*y+alpha2)*x", "z", "w"},
                      {"1/x", "-1*(x*y+alpha2)*x", "z", "w"});
  if (id == "m2")
    return make_chart("m2", kXYZW, {"x", "y", "1/z", "-1*(z*w+alpha3)*z"},
                      {"x", "y", "1/z", "-1*(z*w+alpha3)*z"});
  if (id == "m3")
    return make_chart(
        "m3", kXYZW,
        {"1/x", "-1*((y-x^2-w-t)*x-(x+z)*w+alpha1)*x", "-1*w/x", "x*(x+z)"},
        {"1/x", "1/x^2-z/x+t-x^2*y-x*z*w-alpha1*x", "w*x-1/x", "-1*z/x"},
        "x");
  if (id == "g1")
    return make_chart("g1", kXYZW, {"1/x", "-1*(x*y+alpha1)*x", "z", "w"},
                      {"1/x", "-1*(x*y+alpha1)*x", "z", "w"});
  if (id == "g2")
    return make_chart("g2", kXYZW, {"x", "y", "1/z", "-1*(z*w+alpha2)*z"},
                      {"x", "y", "1/z", "-1*(z*w+alpha2)*z"});
  if (id == "r1")
    return make_chart("r1", kQP, {"1/q1", "-1*(q1*p1+alpha2)*q1", "q2", "p2"},
                      {"1/q1", "-1*(q1*p1+alpha2)*q1", "q2", "p2"});
  if (id == "r2")
    return make_chart("r2", kQP, {"q1", "p1", "1/q2", "-1*(q2*p2+alpha3)*q2"},
                      {"q1", "p1", "1/q2", "-1*(q2*p2+alpha3)*q2"});
  if (id == "r3")
    return make_chart(
        "r3", kQP,
        {"1/q1", "-1*((p1-q1^2-p2)*q1-(q1+q2)*p2+alpha1)*q1", "-1*p2/q1",
         "q1*(q1+q2)"},
        {"1/q1", "1/q1^2-q2/q1-q1^2*p1-q1*q2*p2-alpha1*q1", "p2*q1-1/q1",
         "-1*q2/q1"});
  throw math_error("build_chart: unknown id '" + id + "'");
}

std::vector<std::string> chart_ids() {
  return {"identity", "kidentity", "m1", "m2", "m3",
          "g1",       "g2",        "r1", "r2", "r3"};
}

bool chart_roundtrip_ok(const Chart& C) {
  std::map<int, RatFn> f, g;
  for (size_t i = 0; i < C.vars.size(); i++) {
    f[C.vars[i]] = C.fwd[i];
    g[C.vars[i]] = C.inv[i];
  }
  for (size_t i = 0; i < C.vars.size(); i++) {
    RatFn v = RatFn::variable(C.vars[i]);
    if (!(substitute(C.inv[i], f) == v)) return false;
    if (!(substitute(C.fwd[i], g) == v)) return false;
  }
  return true;
}

VectorField chart_pushforward(const HamSystem& S, const Chart& C) {
  if (S.phase != C.vars)
    throw math_error("chart_pushforward: system '" + S.id + "' and chart '" +
                     C.id + "' use different phase variables");
  if (!chart_roundtrip_ok(C))
    throw math_error("chart_pushforward: chart '" + C.id +
                     "' failed its inverse round-trip");
  std::map<int, RatFn> to_chart;
  for (size_t i = 0; i < C.vars.size(); i++) to_chart[C.vars[i]] = C.inv[i];
  VectorField V;
  V.vars = C.vars;
  for (size_t i = 0; i < C.vars.size(); i++) {
    RatFn dot = diff(C.fwd[i], S.time_var);
    for (size_t j = 0; j < C.vars.size(); j++)
      dot = dot + diff(C.fwd[i], C.vars[j]) * S.rhs[j];
    V.comp.push_back(S.params.reduce(substitute(dot, to_chart)));
  }
  return V;
}

PolyReport polynomiality_check(const VectorField& V) {
  PolyReport R;
  for (size_t i = 0; i < V.comp.size(); i++) {
    if (V.comp[i].is_polynomial()) continue;
    R.pass = false;
    R.offenders.emplace_back(int(i), V.comp[i].den);
  }
  return R;
}

RatFn in_chart(const RatFn& F, const Chart& C) {
  std::map<int, RatFn> to_chart;
  for (size_t i = 0; i < C.vars.size(); i++) to_chart[C.vars[i]] = C.inv[i];
  return substitute(F, to_chart);
}

void TwoForm::add(int i, int j, const RatFn& v) {
  if (i == j || v.is_zero()) return;
  if (i > j) {
    add(j, i, RatFn(0) - v);
    return;
  }
  auto key = std::make_pair(i, j);
  auto it = coef.find(key);
  if (it == coef.end()) {
    coef.emplace(key, v);
    return;
  }
  it->second = it->second + v;
  if (it->second.is_zero()) coef.erase(it);
}

bool TwoForm::is_zero() const {
  for (const auto& [k, v] : coef)
    if (!v.is_zero()) return false;
  return true;
}

TwoForm TwoForm::operator+(const TwoForm& o) const {
  TwoForm r = *this;
  for (const auto& [k, v] : o.coef) r.add(k.first, k.second, v);
  return r;
}

TwoForm TwoForm::operator-(const TwoForm& o) const {
  TwoForm r = *this;
  for (const auto& [k, v] : o.coef) r.add(k.first, k.second, RatFn(0) - v);
  return r;
}

TwoForm wedge(const RatFn& A, const RatFn& B, const std::vector<int>& coords) {
  std::vector<RatFn> dA, dB;
  for (int v : coords) {
    dA.push_back(diff(A, v));
    dB.push_back(diff(B, v));
  }
  TwoForm F;
  for (size_t i = 0; i < coords.size(); i++)
    for (size_t j = i + 1; j < coords.size(); j++)
      F.add(coords[i], coords[j], dA[i] * dB[j] - dA[j] * dB[i]);
  return F;
}

TwoForm one_form_d(const std::vector<std::pair<int, RatFn>>& omega,
                   const std::vector<int>& coords) {
  TwoForm F;
  for (const auto& [v, c] : omega)
    for (int u : coords) F.add(u, v, diff(c, u));
  return F;
}

TwoForm two_form_residual(const HamSystem& S, const Chart& C,
                          const RatFn& H_chart) {
  std::vector<int> all = S.phase;
  all.push_back(S.time_var);
  RatFn tv = RatFn::variable(S.time_var);

  TwoForm lhs;
  for (auto [q, p] : S.pairs) lhs.add(q, p, RatFn(1));
  lhs = lhs - wedge(S.H + C.correction, tv, all);

  // chart-side phase wedges are taken fiberwise (t frozen); the explicit
  // time dependence of the chart map is carried entirely by the correction
  TwoForm rhs = wedge(C.fwd[0], C.fwd[1], S.phase) +
                wedge(C.fwd[2], C.fwd[3], S.phase);
  std::map<int, RatFn> pull;
  for (size_t i = 0; i < C.vars.size(); i++) pull[C.vars[i]] = C.fwd[i];
  rhs = rhs - wedge(substitute(H_chart, pull), tv, all);

  TwoForm res = lhs - rhs;
  TwoForm out;
  for (const auto& [k, v] : res.coef)
    out.add(k.first, k.second, S.params.reduce(v));
  return out;
}

namespace {

// antiderivative in v of a polynomial rational function
RatFn antiderivative(const RatFn& f, int v) {
  MPoly r;
  for (const auto& [e, c] : f.num.t) {
    Expo d = e;
    d[v] = int16_t(d[v] + 1);
    r.t.emplace(d, c / Rat(long(d[v])));
  }
  return RatFn(r);
}

}  // namespace

RatFn derive_chart_hamiltonian(const HamSystem& S, const Chart& C) {
  VectorField V = chart_pushforward(S, C);
  PolyReport rep = polynomiality_check(V);
  if (!rep.pass) {
    std::ostringstream msg;
    msg << "derive_chart_hamiltonian: pushforward through '" << C.id
        << "' is not polynomial in component " << rep.offenders[0].first;
    throw math_error(msg.str());
  }
  // gradient of the sought Hamiltonian, read off Hamilton's equations
  std::vector<RatFn> g = {RatFn(0) - V.comp[1], V.comp[0],
                          RatFn(0) - V.comp[3], V.comp[2]};
  for (size_t i = 0; i < g.size(); i++)
    for (size_t j = i + 1; j < g.size(); j++)
      if (!(diff(g[i], C.vars[j]) - diff(g[j], C.vars[i])).is_zero())
        throw math_error(std::string("derive_chart_hamiltonian: curl "
                                     "condition failed for (") +
                         var_name(C.vars[i]) + ", " + var_name(C.vars[j]) +
                         ") in chart '" + C.id + "'");
  // integrate along the coordinate axes; earlier variables are set to zero,
  // which also normalizes the result to vanish at the phase origin
  RatFn H;
  for (size_t k = 0; k < g.size(); k++) {
    RatFn gk = g[k];
    for (size_t m = 0; m < k; m++) gk = substitute(gk, {{C.vars[m], RatFn(0)}});
    H = H + antiderivative(gk, C.vars[k]);
  }
  for (size_t k = 0; k < g.size(); k++)
    if (!(diff(H, C.vars[k]) - g[k]).is_zero())
      throw math_error("derive_chart_hamiltonian: reconstruction failed in "
                       "chart '" + C.id + "'");
  return H;
}

HamAnsatz build_ansatz(int degree) {
  HamAnsatz A;
  A.degree = degree;
  std::vector<Expo> basis;
  for (int bt = 0; bt <= 1; bt++)
    for (int ba : {-1, int(VAL2), int(VAL3)}) {
      Expo b{};
      b[VT] = int16_t(bt);
      if (ba >= 0) b[ba] = 1;
      basis.push_back(b);
    }
  for (int ex = 0; ex <= degree; ex++)
    for (int ey = 0; ex + ey <= degree; ey++)
      for (int ez = 0; ex + ey + ez <= degree; ez++)
        for (int ew = 0; ex + ey + ez + ew <= degree; ew++) {
          Expo m{};
          m[VX] = int16_t(ex);
          m[VY] = int16_t(ey);
          m[VZ] = int16_t(ez);
          m[VW] = int16_t(ew);
          bool constant = ex + ey + ez + ew == 0;
          for (const Expo& b : basis) {
            // pure-parameter additions never reach the field; keep only the
            // {1, t} gauge directions on the constant monomial
            if (constant && (b[VAL2] || b[VAL3])) continue;
            A.columns.emplace_back(m, b);
          }
        }
  return A;
}

namespace {

// sparse row over Q: sorted (column, coefficient) entries plus right side
struct SRow {
  std::vector<std::pair<int, Rat>> a;
  Rat b = 0;
};

// r -= c * p
void row_axpy(SRow& r, const Rat& c, const SRow& p) {
  std::vector<std::pair<int, Rat>> out;
  out.reserve(r.a.size() + p.a.size());
  size_t i = 0, j = 0;
  while (i < r.a.size() || j < p.a.size()) {
    if (j == p.a.size() || (i < r.a.size() && r.a[i].first < p.a[j].first)) {
      out.push_back(r.a[i++]);
    } else if (i == r.a.size() || p.a[j].first < r.a[i].first) {
      out.emplace_back(p.a[j].first, Rat(-c * p.a[j].second));
      j++;
    } else {
      Rat v = r.a[i].second - c * p.a[j].second;
      if (v != 0) out.emplace_back(r.a[i].first, v);
      i++;
      j++;
    }
  }
  r.a = std::move(out);
  r.b -= c * p.b;
}

struct RowKey {
  size_t chart;
  size_t comp;
  Expo e;
  bool operator<(const RowKey& o) const {
    if (chart != o.chart) return chart < o.chart;
    if (comp != o.comp) return comp < o.comp;
    return GrlexLess{}(e, o.e);
  }
};

// a normalized rational function whose denominator must be c * v^d for a
// single variable v; returns (v, d), with v = -1 for polynomials
std::pair<int, int> monomial_pole(const RatFn& f, const std::string& what) {
  if (f.is_polynomial()) return {-1, 0};
  if (!f.den.is_monomial())
    throw math_error("recover_hamiltonian: " + what +
                     " has a non-monomial denominator");
  const Expo& e = f.den.t.begin()->first;
  int var = -1, d = 0;
  for (int v = 0; v < NVARS; v++) {
    if (e[v] == 0) continue;
    if (var >= 0)
      throw math_error("recover_hamiltonian: " + what +
                       " has a mixed denominator");
    var = v;
    d = e[v];
  }
  return {var, d};
}

}  // namespace

RecoverResult recover_hamiltonian(const std::vector<Chart>& charts,
                                  const HamAnsatz& ansatz) {
  // the sum-one relation is in force: eliminate alpha1 from the chart data
  RatFn a1 = (RatFn(1) - RatFn(2) * RatFn::variable(VAL2) -
              RatFn::variable(VAL3)) / RatFn(2);
  std::map<RowKey, std::pair<std::map<int, Rat>, Rat>> rows;

  for (size_t ci = 0; ci < charts.size(); ci++) {
    Chart C = charts[ci];
    if (C.vars != kXYZW)
      throw math_error("recover_hamiltonian: chart '" + C.id +
                       "' does not use the principal phase variables");
    for (auto& f : C.fwd) f = substitute(f, {{VAL1, a1}});
    for (auto& f : C.inv) f = substitute(f, {{VAL1, a1}});
    std::map<int, RatFn> to_chart;
    for (size_t i = 0; i < C.vars.size(); i++) to_chart[C.vars[i]] = C.inv[i];

    // unique phase monomials of the ansatz with a nonzero field
    std::vector<Expo> monos;
    for (const auto& [m, b] : ansatz.columns)
      if (total_degree(m) > 0 && (monos.empty() || !(monos.back() == m)))
        monos.push_back(m);

    for (size_t i = 0; i < C.vars.size(); i++) {
      std::vector<RatFn> dF;
      for (size_t j = 0; j < C.vars.size(); j++)
        dF.push_back(diff(C.fwd[i], C.vars[j]));
      RatFn aff = substitute(diff(C.fwd[i], VT), to_chart);

      // pushforward of the canonical field of each monomial
      std::vector<std::pair<Expo, RatFn>> pf;
      int blow = -1, cap = 0;
      auto note_pole = [&](const RatFn& f, const std::string& what) {
        auto [v, d] = monomial_pole(f, what);
        if (v >= 0 && blow >= 0 && v != blow)
          throw math_error("recover_hamiltonian: two pole variables in one "
                           "chart component");
        if (v >= 0) blow = v;
        cap = std::max(cap, d);
        return d;
      };
      note_pole(aff, "time term");
      for (const Expo& m : monos) {
        RatFn M(MPoly::monomial(m, 1));
        std::vector<RatFn> fld = {diff(M, VY), RatFn(0) - diff(M, VX),
                                  diff(M, VW), RatFn(0) - diff(M, VZ)};
        RatFn dot;
        for (size_t j = 0; j < C.vars.size(); j++)
          dot = dot + dF[j] * fld[j];
        RatFn P = substitute(dot, to_chart);
        if (P.is_zero()) continue;
        note_pole(P, "field term");
        pf.emplace_back(m, P);
      }
      if (cap == 0) continue;  // component already polynomial for any ansatz

      // Laurent-tail coefficients: clear everything to the common cap and
      // collect the monomials whose pole-variable exponent stays below it
      for (size_t k = 0; k < ansatz.columns.size(); k++) {
        const auto& [m, b] = ansatz.columns[k];
        if (total_degree(m) == 0) continue;
        auto it = std::find_if(pf.begin(), pf.end(),
                               [&](const auto& p) { return p.first == m; });
        if (it == pf.end()) continue;
        int d = monomial_pole(it->second, "field term").second;
        for (const auto& [e, c] : it->second.num.t) {
          if (e[blow] >= d) continue;
          Expo key = e;
          key[blow] = int16_t(key[blow] + cap - d);
          for (int bv : {int(VT), int(VAL2), int(VAL3)})
            key[bv] = int16_t(key[bv] + b[bv]);
          rows[{ci, i, key}].first[int(k)] += c;
        }
      }
      if (!aff.is_zero()) {
        int d = monomial_pole(aff, "time term").second;
        for (const auto& [e, c] : aff.num.t) {
          if (e[blow] >= d) continue;
          Expo key = e;
          key[blow] = int16_t(key[blow] + cap - d);
          rows[{ci, i, key}].second -= c;
        }
      }
    }
  }

  RecoverResult R;
  R.unknowns = ansatz.columns.size();
  R.equations = rows.size();

  // online Gaussian elimination with normalized pivot rows
  std::map<int, SRow> pivots;
  for (auto& [key, raw] : rows) {
    SRow r;
    for (auto& [col, c] : raw.first)
      if (c != 0) r.a.emplace_back(col, c);
    r.b = raw.second;
    while (!r.a.empty()) {
      auto it = pivots.find(r.a.front().first);
      if (it == pivots.end()) break;
      Rat lead = r.a.front().second;  // copy: row_axpy rewrites r.a
      row_axpy(r, lead, it->second);
    }
    if (r.a.empty()) {
      if (r.b != 0)
        throw math_error("recover_hamiltonian: inconsistent linear system");
      continue;
    }
    Rat lead = r.a.front().second;
    for (auto& e : r.a) e.second /= lead;
    r.b /= lead;
    pivots.emplace(r.a.front().first, std::move(r));
  }
  R.rank = pivots.size();

  // back-substitution, highest pivot first, for the reduced echelon form
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    SRow& r = it->second;
    for (size_t k = 1; k < r.a.size();) {
      auto p = pivots.find(r.a[k].first);
      if (p == pivots.end()) {
        k++;
        continue;
      }
      Rat c = r.a[k].second;  // copy: row_axpy rewrites r.a
      row_axpy(r, c, p->second);
      // the eliminated column disappeared; entries before it are unchanged
    }
  }

  auto column_poly = [&](size_t k) {
    const auto& [m, b] = ansatz.columns[k];
    Expo e = m;
    for (int v = 0; v < NVARS; v++) e[v] = int16_t(e[v] + b[v]);
    return e;
  };
  for (const auto& [col, r] : pivots)
    if (r.b != 0)
      R.particular = R.particular + MPoly::monomial(column_poly(size_t(col)), r.b);
  for (size_t f = 0; f < ansatz.columns.size(); f++) {
    if (pivots.count(int(f))) continue;
    MPoly dir = MPoly::monomial(column_poly(f), 1);
    for (const auto& [col, r] : pivots)
      for (const auto& [c, v] : r.a)
        if (c == int(f) && v != 0) dir = dir + MPoly::monomial(column_poly(size_t(col)), -v);
    R.basis.push_back(dir);
  }
  return R;
}

}  // namespace pain2
