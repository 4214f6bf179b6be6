// Exact symbolic kernel: arbitrary-precision rationals, sparse multivariate
// polynomials over a fixed variable registry, and normalized rational
// functions. Everything downstream (systems, transforms, charts, the linear
// recovery solver) is built on these three types.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pain2 {

using Rat = mpq_class;

struct math_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed global registry. Order matters: it fixes the monomial order and the
// canonical printing order, so it must never change between runs.
constexpr int NVARS = 17;
enum Var : int {
  VX = 0, VY, VZ, VW,       // principal phase variables
  VT, VS,                   // time variables
  VQ1, VP1, VQ2, VP2,       // phase variables of the two-time system
  VAL1, VAL2, VAL3,         // alpha1, alpha2, alpha3
  VCA, VC1, VC2, VC3,       // coupling a and family constants a1, a2, a3
};

const char* var_name(int v);
int var_index(const std::string& name);  // -1 when unknown

using Expo = std::array<int16_t, NVARS>;

inline int total_degree(const Expo& e) {
  int d = 0;
  for (int16_t x : e) d += x;
  return d;
}

// Graded lexicographic order: total degree first, ties broken by the
// registry order (more of an earlier variable sorts higher).
struct GrlexLess {
  bool operator()(const Expo& a, const Expo& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    for (int i = 0; i < NVARS; i++)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

struct MPoly {
  // Invariant: no zero coefficients stored.
  std::map<Expo, Rat, GrlexLess> t;

  static MPoly zero() { return MPoly{}; }
  static MPoly one();
  static MPoly constant(const Rat& c);
  static MPoly variable(int v);
  static MPoly monomial(const Expo& e, const Rat& c);

  bool is_zero() const { return t.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return t.size() == 1; }

  int degree() const;                  // total degree, -1 for the zero poly
  int degree_in(int v) const;
  bool contains(int v) const;
  int phase_degree(const std::vector<int>& vars) const;

  // leading term under grlex (throws on zero)
  const std::pair<const Expo, Rat>& leading() const;

  bool operator==(const MPoly& o) const { return t == o.t; }
};

MPoly operator+(const MPoly& a, const MPoly& b);
MPoly operator-(const MPoly& a, const MPoly& b);
MPoly operator-(const MPoly& a);
MPoly operator*(const MPoly& a, const MPoly& b);
MPoly operator*(const MPoly& a, const Rat& c);
MPoly pow(const MPoly& a, unsigned e);
MPoly diff(const MPoly& a, int v);

// Exact division: returns A/B when B divides A, nullopt otherwise.
std::optional<MPoly> try_divide_exact(const MPoly& a, const MPoly& b);

// gcd over Q (content/primitive split plus a subresultant remainder
// sequence on the recursive representation), normalized monic.
MPoly poly_gcd(const MPoly& a, const MPoly& b);

struct RatFn {
  // Invariant: den != 0, gcd(num, den) = 1, den monic under grlex.
  MPoly num, den;

  RatFn() : num(MPoly::zero()), den(MPoly::one()) {}
  RatFn(const MPoly& p) : num(p), den(MPoly::one()) {}
  RatFn(const Rat& c) : num(MPoly::constant(c)), den(MPoly::one()) {}
  RatFn(long c) : num(MPoly::constant(Rat(c))), den(MPoly::one()) {}
  RatFn(const MPoly& n, const MPoly& d);  // normalizes

  static RatFn variable(int v) { return RatFn(MPoly::variable(v)); }

  bool is_zero() const { return num.is_zero(); }
  bool is_polynomial() const { return den.is_one(); }
  bool is_constant() const { return num.is_constant() && den.is_one(); }

  bool operator==(const RatFn& o) const { return num == o.num && den == o.den; }
};

RatFn operator+(const RatFn& a, const RatFn& b);
RatFn operator-(const RatFn& a, const RatFn& b);
RatFn operator-(const RatFn& a);
RatFn operator*(const RatFn& a, const RatFn& b);
RatFn operator/(const RatFn& a, const RatFn& b);
RatFn pow(const RatFn& a, int e);
RatFn diff(const RatFn& a, int v);

// Simultaneous substitution of variables by rational functions.
// Throws math_error when the denominator collapses to zero identically.
RatFn substitute(const RatFn& f, const std::map<int, RatFn>& bindings);
MPoly substitute_poly_vars(const MPoly& p, const std::map<int, int>& renames);

// Membership test for triangular solved-form constraints v = g. Each g must
// be free of every variable solved later in the list.
bool vanishes_on_variety(const RatFn& f,
                         const std::vector<std::pair<int, RatFn>>& constraints);

}  // namespace pain2
