// Holomorphy charts: birational coordinate systems in which the catalog
// systems stay polynomial Hamiltonian. Provides chart pushforwards,
// polynomiality reports, the exterior two-form identities, and the linear
// recovery of the Hamiltonian from its charts.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pain2/algebra.hpp"
#include "pain2/systems.hpp"

namespace pain2 {

struct Chart {
  std::string id;
  std::vector<int> vars;   // phase variables; chart coordinates reuse indices
  std::vector<RatFn> fwd;  // chart coordinates in terms of the old (and t)
  std::vector<RatFn> inv;  // old coordinates in terms of the chart
  int time_var = VT;
  // F such that dx∧dy + dz∧dw − d(H+F)∧dt matches the chart-side form
  RatFn correction;
};

// ids: identity, m1, m2, m3 (atlas of the normalized system), g1, g2
// (coupling family, all constants symbolic), r1, r2, r3 (commuting pair)
Chart build_chart(const std::string& id);
std::vector<std::string> chart_ids();

// forward then inverse and inverse then forward both normalize to identity
bool chart_roundtrip_ok(const Chart& C);

// the system's field expressed in chart coordinates via chain rule plus
// inverse substitution, reduced by the system's parameter relation
VectorField chart_pushforward(const HamSystem& S, const Chart& C);

struct PolyReport {
  bool pass = true;
  std::vector<std::pair<int, MPoly>> offenders;  // component, denominator
};
PolyReport polynomiality_check(const VectorField& V);

// F rewritten in chart coordinates (old variables replaced by C.inv)
RatFn in_chart(const RatFn& F, const Chart& C);

// Exterior 2-form over a coordinate list; key (i,j), i<j, holds the
// coefficient of du_i ∧ du_j.
struct TwoForm {
  std::map<std::pair<int, int>, RatFn> coef;

  void add(int i, int j, const RatFn& v);
  bool is_zero() const;
  TwoForm operator+(const TwoForm& o) const;
  TwoForm operator-(const TwoForm& o) const;
};

// dA ∧ dB, differentials taken in the listed coordinates only
TwoForm wedge(const RatFn& A, const RatFn& B, const std::vector<int>& coords);

// exterior derivative of the 1-form sum_k omega_k(second) d(omega_k(first))
TwoForm one_form_d(const std::vector<std::pair<int, RatFn>>& omega,
                   const std::vector<int>& coords);

// canonical form minus its chart-side counterpart: dx∧dy + dz∧dw −
// d(H + correction)∧dt against dx1∧dy1 + dz1∧dw1 − dH_chart∧dt, with the
// chart-side phase wedges taken fiberwise (t frozen) and H_chart pulled back
// through the forward map; zero iff the identity holds
TwoForm two_form_residual(const HamSystem& S, const Chart& C,
                          const RatFn& H_chart);

// the unique polynomial H_chart, normalized to vanish at the phase origin,
// whose canonical equations reproduce chart_pushforward(S, C); throws when a
// curl condition fails or a pushforward component is not polynomial
RatFn derive_chart_hamiltonian(const HamSystem& S, const Chart& C);

// Degree-bounded Hamiltonian ansatz: one unknown per phase monomial times
// coefficient basis monomial in (t, alpha2, alpha3), affine in each. The
// constant phase monomial keeps only {1, t}: pure-parameter additions are
// invisible to the field and would only pad the solution space.
struct HamAnsatz {
  int degree = 5;
  std::vector<std::pair<Expo, Expo>> columns;  // (phase monomial, basis)
};
HamAnsatz build_ansatz(int degree);

struct RecoverResult {
  size_t unknowns = 0;
  size_t equations = 0;
  size_t rank = 0;
  MPoly particular;          // all free coefficients set to zero
  std::vector<MPoly> basis;  // homogeneous directions; dim = basis.size()
};

// All ansatz Hamiltonians whose canonical field stays polynomial through
// every given chart, under the sum-one parameter relation: the Laurent-tail
// coefficients of each pushforward component form an exact linear system,
// solved over the rationals. Throws if the system is inconsistent.
RecoverResult recover_hamiltonian(const std::vector<Chart>& charts,
                                  const HamAnsatz& ansatz);

}  // namespace pain2
