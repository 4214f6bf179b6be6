#include "pain2/algebra.hpp"

#include <chrono>

#include <algorithm>
#include <sstream>

namespace pain2 {

namespace {
const char* kNames[NVARS] = {
    "x",  "y",  "z",  "w",  "t",  "s",  "q1", "p1", "q2",
    "p2", "alpha1", "alpha2", "alpha3", "a", "a1", "a2", "a3",
};
}  // namespace

const char* var_name(int v) {
  if (v < 0 || v >= NVARS) throw math_error("variable index out of range");
  return kNames[v];
}

int var_index(const std::string& name) {
  for (int i = 0; i < NVARS; i++)
    if (name == kNames[i]) return i;
  return -1;
}

MPoly MPoly::one() { return constant(Rat(1)); }

MPoly MPoly::constant(const Rat& c) {
  MPoly p;
  if (c != 0) p.t.emplace(Expo{}, c);
  return p;
}

MPoly MPoly::variable(int v) {
  if (v < 0 || v >= NVARS) throw math_error("variable index out of range");
  Expo e{};
  e[v] = 1;
  MPoly p;
  p.t.emplace(e, Rat(1));
  return p;
}

MPoly MPoly::monomial(const Expo& e, const Rat& c) {
  MPoly p;
  if (c != 0) p.t.emplace(e, c);
  return p;
}

bool MPoly::is_constant() const {
  if (t.empty()) return true;
  return t.size() == 1 && total_degree(t.begin()->first) == 0;
}

bool MPoly::is_one() const {
  return t.size() == 1 && total_degree(t.begin()->first) == 0 &&
         t.begin()->second == 1;
}

int MPoly::degree() const {
  if (t.empty()) return -1;
  return total_degree(t.rbegin()->first);
}

int MPoly::degree_in(int v) const {
  int d = 0;
  for (const auto& [e, c] : t) d = std::max(d, int(e[v]));
  return d;
}

bool MPoly::contains(int v) const {
  for (const auto& [e, c] : t)
    if (e[v] > 0) return true;
  return false;
}

int MPoly::phase_degree(const std::vector<int>& vars) const {
  int d = 0;
  for (const auto& [e, c] : t) {
    int s = 0;
    for (int v : vars) s += e[v];
    d = std::max(d, s);
  }
  return d;
}

const std::pair<const Expo, Rat>& MPoly::leading() const {
  if (t.empty()) throw math_error("leading term of zero polynomial");
  return *t.rbegin();
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  MPoly r = a;
  for (const auto& [e, c] : b.t) {
    auto it = r.t.find(e);
    if (it == r.t.end()) {
      r.t.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) r.t.erase(it);
    }
  }
  return r;
}

MPoly operator-(const MPoly& a) {
  MPoly r = a;
  for (auto& [e, c] : r.t) c = -c;
  return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly r;
  for (const auto& [ea, ca] : a.t) {
    for (const auto& [eb, cb] : b.t) {
      Expo e;
      for (int i = 0; i < NVARS; i++) e[i] = int16_t(ea[i] + eb[i]);
      Rat c = ca * cb;
      auto it = r.t.find(e);
      if (it == r.t.end()) {
        r.t.emplace(e, c);
      } else {
        it->second += c;
        if (it->second == 0) r.t.erase(it);
      }
    }
  }
  return r;
}

MPoly operator*(const MPoly& a, const Rat& c) {
  if (c == 0) return MPoly::zero();
  MPoly r = a;
  for (auto& [e, k] : r.t) k *= c;
  return r;
}

MPoly pow(const MPoly& a, unsigned e) {
  MPoly r = MPoly::one();
  for (unsigned i = 0; i < e; i++) r = r * a;
  return r;
}

MPoly diff(const MPoly& a, int v) {
  if (v < 0 || v >= NVARS) throw math_error("differentiate: unknown variable");
  MPoly r;
  for (const auto& [e, c] : a.t) {
    if (e[v] == 0) continue;
    Expo d = e;
    d[v] = int16_t(d[v] - 1);
    r.t.emplace(d, c * e[v]);
  }
  return r;
}

std::optional<MPoly> try_divide_exact(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return MPoly::zero();
  const auto& [eb, cb] = b.leading();
  MPoly q, r = a;
  while (!r.is_zero()) {
    const auto& [er, cr] = r.leading();
    Expo qe;
    for (int i = 0; i < NVARS; i++) {
      int d = er[i] - eb[i];
      if (d < 0) return std::nullopt;  // leading monomial not divisible
      qe[i] = int16_t(d);
    }
    MPoly qt = MPoly::monomial(qe, cr / cb);
    q = q + qt;
    r = r - qt * b;
  }
  return q;
}

namespace {

// ---- multivariate gcd machinery -------------------------------------------

MPoly make_monic(const MPoly& a) {
  if (a.is_zero()) return a;
  Rat lc = a.leading().second;
  return a * (1 / lc);
}

Expo monomial_gcd_with(const MPoly& p, Expo g) {
  for (const auto& [e, c] : p.t) {
    for (int i = 0; i < NVARS; i++) g[i] = std::min(g[i], e[i]);
    if (total_degree(g) == 0) break;
  }
  return g;
}

MPoly coeff_wrt(const MPoly& p, int v, int k) {
  MPoly r;
  for (const auto& [e, c] : p.t) {
    if (e[v] != k) continue;
    Expo d = e;
    d[v] = 0;
    r.t.emplace(d, c);
  }
  return r;
}

MPoly shift_var(const MPoly& p, int v, int k) {
  MPoly r;
  for (const auto& [e, c] : p.t) {
    Expo d = e;
    d[v] = int16_t(d[v] + k);
    r.t.emplace(d, c);
  }
  return r;
}

// pseudo-remainder of a by b in the main variable v, with the classical
// lc(b)^(deg a - deg b + 1) premultiplier so later exact divisions hold
MPoly prem(const MPoly& a, const MPoly& b, int v) {
  int db = b.degree_in(v);
  MPoly lcb = coeff_wrt(b, v, db);
  MPoly r = a;
  int n = a.degree_in(v) - db + 1;
  while (!r.is_zero() && r.degree_in(v) >= db) {
    int dr = r.degree_in(v);
    MPoly lcr = coeff_wrt(r, v, dr);
    r = lcb * r - shift_var(lcr * b, v, dr - db);
    n--;
  }
  for (; n > 0; n--) r = lcb * r;
  return r;
}

MPoly content_wrt(const MPoly& p, int v) {
  MPoly cont = MPoly::zero();
  for (int k = 0; k <= p.degree_in(v); k++) {
    MPoly c = coeff_wrt(p, v, k);
    if (c.is_zero()) continue;
    cont = poly_gcd(cont, c);
    if (cont.is_one()) break;
  }
  return cont;
}

MPoly exact_divide(const MPoly& a, const MPoly& b, const char* where) {
  auto q = try_divide_exact(a, b);
  if (!q) throw math_error(std::string("gcd internal: inexact division in ") + where);
  return *q;
}

// ---- heuristic gcd (evaluate at a large integer, reconstruct, verify) ------
//
// The guaranteed subresultant PRS below is far too slow at proving random
// pairs coprime, so the primary engine is the classical evaluation gcd:
// substitute a big integer for one variable, recurse down to integer gcd,
// read the candidate back off base-xi digits and accept it only when exact
// division confirms it. Division-verified candidates are true gcds; on
// repeated failure we fall back to the PRS.

mpz_class int_content(const MPoly& p) {
  mpz_class c = 0;
  for (const auto& [e, k] : p.t) {
    mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), k.get_num().get_mpz_t());
    if (c == 1) break;
  }
  return c;
}

mpz_class max_coeff_norm(const MPoly& p) {
  mpz_class m = 0;
  for (const auto& [e, k] : p.t) {
    mpz_class a = abs(k.get_num());
    if (a > m) m = a;
  }
  return m;
}

MPoly scale_int(const MPoly& p, const mpz_class& c) {
  MPoly r;
  for (const auto& [e, k] : p.t) r.t.emplace(e, Rat(k.get_num() * c));
  return r;
}

MPoly divide_int(const MPoly& p, const mpz_class& c) {
  MPoly r;
  for (const auto& [e, k] : p.t) r.t.emplace(e, Rat(mpz_class(k.get_num() / c)));
  return r;
}

MPoly eval_var_at(const MPoly& p, int v, const mpz_class& xi) {
  MPoly r;
  std::vector<mpz_class> pw(size_t(p.degree_in(v)) + 1);
  pw[0] = 1;
  for (size_t k = 1; k < pw.size(); k++) pw[k] = pw[k - 1] * xi;
  for (const auto& [e, k] : p.t) {
    Expo d = e;
    d[v] = 0;
    Rat c(k.get_num() * pw[size_t(e[v])]);
    auto it = r.t.find(d);
    if (it == r.t.end()) {
      r.t.emplace(d, c);
    } else {
      it->second += c;
      if (it->second == 0) r.t.erase(it);
    }
  }
  return r;
}

// base-xi digit expansion with balanced residues in (-xi/2, xi/2]
MPoly reconstruct_from(const MPoly& h, int v, const mpz_class& xi) {
  MPoly gamma;
  MPoly rest = h;
  mpz_class half = xi / 2;
  for (int i = 0; !rest.is_zero(); i++) {
    MPoly digit;
    for (const auto& [e, k] : rest.t) {
      mpz_class m = k.get_num() % xi;  // gmp: sign follows the dividend
      if (m < 0) m += xi;
      if (m > half) m -= xi;
      if (m != 0) digit.t.emplace(e, Rat(m));
    }
    if (!digit.is_zero()) {
      MPoly shifted;
      for (const auto& [e, k] : digit.t) {
        Expo d = e;
        d[v] = int16_t(d[v] + i);
        shifted.t.emplace(d, k);
      }
      gamma = gamma + shifted;
    }
    rest = divide_int(rest - digit, xi);
  }
  return gamma;
}

std::optional<MPoly> heu_gcd(const MPoly& fin, const MPoly& gin, int depth) {
  if (depth > 24) return std::nullopt;
  mpz_class cf = int_content(fin), cg = int_content(gin);
  mpz_class c;
  mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  MPoly f = divide_int(fin, cf), g = divide_int(gin, cg);
  if (f.is_constant() || g.is_constant()) return MPoly::constant(Rat(c));
  int v = -1;
  for (int i = 0; i < NVARS && v < 0; i++)
    if (f.contains(i) && g.contains(i)) v = i;
  if (v < 0) return MPoly::constant(Rat(c));

  mpz_class nf = max_coeff_norm(f), ng = max_coeff_norm(g);
  mpz_class xi = 2 * (nf < ng ? nf : ng) + 2;
  if (xi < 4) xi = 4;
  for (int attempt = 0; attempt < 6; attempt++) {
    MPoly F = eval_var_at(f, v, xi);
    MPoly G = eval_var_at(g, v, xi);
    if (F.is_zero() || G.is_zero()) {  // xi hit a root; try a bigger one
      xi = xi * 73794 / 27011 + 1;
      continue;
    }
    auto h = heu_gcd(F, G, depth + 1);
    if (h) {
      MPoly gamma = reconstruct_from(*h, v, xi);
      mpz_class gc = int_content(gamma);
      if (gc > 1) gamma = divide_int(gamma, gc);
      if (!gamma.is_zero() && try_divide_exact(f, gamma) &&
          try_divide_exact(g, gamma))
        return scale_int(gamma, c);
    }
    xi = xi * 73794 / 27011 + 1;  // quasi-irrational growth, avoids repeats
  }
  return std::nullopt;
}

// clear rational coefficients to integers (gcd over Q ignores the scale)
MPoly clear_denominators(const MPoly& p) {
  mpz_class l = 1;
  for (const auto& [e, k] : p.t)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), k.get_den().get_mpz_t());
  if (l == 1) return p;
  MPoly r;
  for (const auto& [e, k] : p.t) r.t.emplace(e, Rat(k * l));
  return r;
}

Expo min_exponents(const MPoly& p) {
  Expo m;
  m.fill(INT16_MAX);
  return monomial_gcd_with(p, m);
}

// subresultant PRS on primitive parts, main variable v
MPoly prs_gcd(MPoly A, MPoly B, int v) {
  if (A.degree_in(v) < B.degree_in(v)) std::swap(A, B);
  MPoly g = MPoly::one(), h = MPoly::one();
  for (;;) {
    int delta = A.degree_in(v) - B.degree_in(v);
    MPoly r = prem(A, B, v);
    if (r.is_zero()) {
      MPoly cont = content_wrt(B, v);
      return exact_divide(B, cont, "primitive part");
    }
    if (r.degree_in(v) == 0) return MPoly::one();
    A = B;
    MPoly divisor = g * pow(h, unsigned(delta));
    B = exact_divide(r, divisor, "PRS step");
    g = coeff_wrt(A, v, A.degree_in(v));
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      h = exact_divide(pow(g, unsigned(delta)), pow(h, unsigned(delta - 1)),
                       "PRS h update");
    }
  }
}

}  // namespace

MPoly poly_gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return MPoly::one();
  if (a.is_monomial() || b.is_monomial()) {
    Expo g;
    g.fill(INT16_MAX);
    g = monomial_gcd_with(a, g);
    g = monomial_gcd_with(b, g);
    return MPoly::monomial(g, Rat(1));
  }
  // strip each side's monomial content; gcd(m_a*f, m_b*g) = gcd(m_a,m_b)*gcd(f,g)
  Expo ma = min_exponents(a), mb = min_exponents(b);
  if (total_degree(ma) > 0 || total_degree(mb) > 0) {
    MPoly fa = *try_divide_exact(a, MPoly::monomial(ma, Rat(1)));
    MPoly fb = *try_divide_exact(b, MPoly::monomial(mb, Rat(1)));
    Expo mc;
    for (int i = 0; i < NVARS; i++) mc[i] = std::min(ma[i], mb[i]);
    return make_monic(MPoly::monomial(mc, Rat(1)) * poly_gcd(fa, fb));
  }

  if (getenv("PAIN2_GCD_TRACE")) {
    auto t0 = std::chrono::steady_clock::now();
    auto h = heu_gcd(clear_denominators(a), clear_denominators(b), 0);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    if (ms > 200)
      fprintf(stderr, "[gcd] a=%zu b=%zu heu=%s g=%zu %.0fms\n", a.t.size(),
              b.t.size(), h ? "ok" : "FAIL", h ? h->t.size() : 0, ms);
    if (h) return make_monic(*h);
  } else if (auto h = heu_gcd(clear_denominators(a), clear_denominators(b), 0))
    return make_monic(*h);

  // guaranteed fallback: content split + subresultant PRS
  int v = -1;
  for (int i = 0; i < NVARS && v < 0; i++)
    if (a.contains(i) && b.contains(i)) v = i;
  if (v < 0) return MPoly::one();

  MPoly ca = content_wrt(a, v), cb = content_wrt(b, v);
  MPoly pa = exact_divide(a, ca, "content split");
  MPoly pb = exact_divide(b, cb, "content split");
  MPoly cg = poly_gcd(ca, cb);
  MPoly pg = prs_gcd(pa, pb, v);
  return make_monic(cg * pg);
}

// ---- RatFn -----------------------------------------------------------------

namespace {

void normalize(MPoly& num, MPoly& den) {
  if (den.is_zero()) throw math_error("division by zero");
  if (num.is_zero()) {
    den = MPoly::one();
    return;
  }
  if (den.is_constant()) {
    num = num * (1 / den.t.begin()->second);
    den = MPoly::one();
    return;
  }
  if (den.is_monomial() || num.is_monomial()) {
    Expo g;
    g.fill(INT16_MAX);
    g = monomial_gcd_with(num, g);
    g = monomial_gcd_with(den, g);
    if (total_degree(g) > 0) {
      MPoly m = MPoly::monomial(g, Rat(1));
      num = *try_divide_exact(num, m);
      den = *try_divide_exact(den, m);
    }
  } else {
    MPoly g = poly_gcd(num, den);
    if (!g.is_one()) {
      num = *try_divide_exact(num, g);
      den = *try_divide_exact(den, g);
    }
  }
  if (den.is_constant()) {
    num = num * (1 / den.t.begin()->second);
    den = MPoly::one();
    return;
  }
  Rat lc = den.leading().second;
  if (lc != 1) {
    Rat inv = 1 / lc;
    num = num * inv;
    den = den * inv;
  }
}

}  // namespace

RatFn::RatFn(const MPoly& n, const MPoly& d) : num(n), den(d) {
  normalize(num, den);
}

namespace {

// for sums known to be reduced already: skip the gcd, keep den monic
RatFn assemble_reduced(MPoly num, MPoly den) {
  RatFn r;
  if (num.is_zero()) {
    r.num = std::move(num);
    r.den = MPoly::one();
    return r;
  }
  r.num = std::move(num);
  r.den = std::move(den);
  return r;
}

}  // namespace

RatFn operator+(const RatFn& a, const RatFn& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den == b.den) return RatFn(a.num + b.num, a.den);
  // adding a polynomial to a reduced fraction cannot introduce a common factor
  if (a.is_polynomial()) return assemble_reduced(a.num * b.den + b.num, b.den);
  if (b.is_polynomial()) return assemble_reduced(a.num + b.num * a.den, a.den);
  MPoly g = poly_gcd(a.den, b.den);
  if (g.is_one()) {
    // reduced inputs with coprime denominators: the sum is already reduced
    return assemble_reduced(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  MPoly da = *try_divide_exact(a.den, g);
  MPoly db = *try_divide_exact(b.den, g);
  return RatFn(a.num * db + b.num * da, da * b.den);
}

RatFn operator-(const RatFn& a) {
  RatFn r = a;
  r.num = -r.num;
  return r;
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }

RatFn operator*(const RatFn& a, const RatFn& b) {
  if (a.is_zero() || b.is_zero()) return RatFn();
  // cross-cancel so the gcd calls see the smallest possible operands
  MPoly g1 = poly_gcd(a.num, b.den);
  MPoly g2 = poly_gcd(b.num, a.den);
  MPoly n1 = g1.is_one() ? a.num : *try_divide_exact(a.num, g1);
  MPoly d2 = g1.is_one() ? b.den : *try_divide_exact(b.den, g1);
  MPoly n2 = g2.is_one() ? b.num : *try_divide_exact(b.num, g2);
  MPoly d1 = g2.is_one() ? a.den : *try_divide_exact(a.den, g2);
  RatFn r;
  r.num = n1 * n2;
  r.den = d1 * d2;
  if (!r.den.is_constant()) {
    Rat lc = r.den.leading().second;
    if (lc != 1) {
      r.num = r.num * (1 / lc);
      r.den = r.den * (1 / lc);
    }
  } else if (!r.den.is_one()) {
    r.num = r.num * (1 / r.den.t.begin()->second);
    r.den = MPoly::one();
  }
  return r;
}

RatFn operator/(const RatFn& a, const RatFn& b) {
  if (b.is_zero()) throw math_error("division by zero");
  RatFn inv;
  inv.num = b.den;
  inv.den = b.num;
  if (!inv.den.is_constant()) {
    Rat lc = inv.den.leading().second;
    if (lc != 1) {
      inv.num = inv.num * (1 / lc);
      inv.den = inv.den * (1 / lc);
    }
  } else {
    inv.num = inv.num * (1 / inv.den.t.begin()->second);
    inv.den = MPoly::one();
  }
  return a * inv;
}

RatFn pow(const RatFn& a, int e) {
  if (e < 0) return RatFn(1) / pow(a, -e);
  RatFn r(1);
  for (int i = 0; i < e; i++) r = r * a;
  return r;
}

RatFn diff(const RatFn& a, int v) {
  MPoly dn = diff(a.num, v);
  if (a.is_polynomial()) return RatFn(dn);
  MPoly dd = diff(a.den, v);
  if (dd.is_zero()) return RatFn(dn, a.den);
  return RatFn(dn * a.den - a.num * dd, a.den * a.den);
}

namespace {

// One bound variable with its image and the clearing exponent: every term of
// the substituted polynomial is multiplied through by den^{cap - e_v}, so
// the overall result sits over prod_v den_v^{cap_v}.
struct BoundVar {
  int v;
  const MPoly* num;
  const MPoly* den;
  int cap;
};

// Cleared substitution by recursive Horner evaluation: splitting p into
// coefficient slices of v and folding acc = acc*num + c_k*den^{cap-k} does
// O(cap) large multiplies per variable instead of one chain per term.
MPoly subst_horner(const MPoly& p, const std::vector<BoundVar>& vs, size_t i) {
  if (i == vs.size() || p.is_zero()) return p;
  const BoundVar& b = vs[i];
  if (!p.contains(b.v)) {
    MPoly r = subst_horner(p, vs, i + 1);
    for (int k = 0; k < b.cap; k++) r = r * (*b.den);
    return r;
  }
  std::vector<MPoly> coeffs(size_t(b.cap) + 1);
  for (const auto& [e, c] : p.t) {
    Expo r = e;
    int k = e[b.v];
    r[b.v] = 0;
    coeffs[size_t(k)].t.emplace(r, c);
  }
  MPoly acc = subst_horner(coeffs[size_t(b.cap)], vs, i + 1);
  MPoly dcur = MPoly::one();
  for (int k = b.cap - 1; k >= 0; k--) {
    acc = acc * (*b.num);
    dcur = dcur * (*b.den);
    if (!coeffs[size_t(k)].is_zero())
      acc = acc + subst_horner(coeffs[size_t(k)], vs, i + 1) * dcur;
  }
  return acc;
}

std::vector<BoundVar> bound_vars(const std::map<int, RatFn>& bindings,
                                 const MPoly& a, const MPoly& b) {
  std::vector<BoundVar> vs;
  for (const auto& [v, f] : bindings) {
    int cap = std::max(a.degree_in(v), b.degree_in(v));
    if (cap > 0) vs.push_back({v, &f.num, &f.den, cap});
  }
  return vs;
}

// num over a denominator with known factorization: reduce by exact trial
// division against each factor instead of one blind gcd of two giants. The
// constructor still runs a final normalize, which is cheap once the shared
// factors are gone.
RatFn reduce_against_factors(MPoly num,
                             const std::vector<std::pair<MPoly, int>>& facs) {
  if (num.is_zero()) return RatFn();
  MPoly den = MPoly::one();
  for (const auto& [d, c] : facs) {
    int left = c;
    while (left > 0) {
      auto q = try_divide_exact(num, d);
      if (!q) break;
      num = std::move(*q);
      left--;
    }
    for (int k = 0; k < left; k++) den = den * d;
  }
  return RatFn(num, den);
}

}  // namespace

RatFn substitute(const RatFn& f, const std::map<int, RatFn>& bindings) {
  std::vector<BoundVar> vs = bound_vars(bindings, f.num, f.den);
  if (f.is_polynomial()) {
    std::vector<std::pair<MPoly, int>> facs;
    for (const BoundVar& b : vs)
      if (!b.den->is_one()) facs.emplace_back(*b.den, b.cap);
    return reduce_against_factors(subst_horner(f.num, vs, 0), facs);
  }
  MPoly dn = subst_horner(f.den, vs, 0);
  if (dn.is_zero()) {
    std::ostringstream msg;
    msg << "substitute: denominator vanished identically under bindings for";
    for (const auto& [v, g] : bindings)
      if (f.den.contains(v)) msg << " " << var_name(v);
    throw math_error(msg.str());
  }
  return RatFn(subst_horner(f.num, vs, 0), dn);
}

MPoly substitute_poly_vars(const MPoly& p, const std::map<int, int>& renames) {
  MPoly r;
  for (const auto& [e, c] : p.t) {
    Expo d{};
    for (int i = 0; i < NVARS; i++) {
      if (e[i] == 0) continue;
      auto it = renames.find(i);
      int j = it == renames.end() ? i : it->second;
      d[j] = int16_t(d[j] + e[i]);
    }
    auto it = r.t.find(d);
    if (it == r.t.end()) {
      r.t.emplace(d, c);
    } else {
      it->second += c;
      if (it->second == 0) r.t.erase(it);
    }
  }
  return r;
}

bool vanishes_on_variety(const RatFn& f,
                         const std::vector<std::pair<int, RatFn>>& constraints) {
  // triangular means: constraint i may use variables solved before it but
  // never ones solved after it
  for (size_t i = 0; i < constraints.size(); i++) {
    const RatFn& g = constraints[i].second;
    for (size_t j = i + 1; j < constraints.size(); j++) {
      int vj = constraints[j].first;
      if (g.num.contains(vj) || g.den.contains(vj))
        throw math_error(std::string("vanishes_on_variety: constraint for ") +
                         var_name(constraints[i].first) +
                         " is not triangular (uses " + var_name(vj) + ")");
    }
  }
  RatFn cur = f;
  for (auto it = constraints.rbegin(); it != constraints.rend(); ++it)
    cur = substitute(cur, {{it->first, it->second}});
  return cur.is_zero();
}

}  // namespace pain2
