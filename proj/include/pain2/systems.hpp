// Catalog of the Hamiltonian systems under study plus the canonical-structure
// operations: induced vector fields, Poisson and Lie brackets, total time
// derivatives and invariant-cycle membership.
#pragma once

#include <string>
#include <vector>

#include "pain2/algebra.hpp"

namespace pain2 {

// Affine constraint tying alpha1, alpha2, alpha3 together. Checks against a
// system always eliminate alpha1 through the active relation first.
enum class Relation { None, SumOne, SumZero };

// 2*alpha1 + 2*alpha2 + alpha3 equals 1 (SumOne) or 0 (SumZero)
RatFn reduce_relation(const RatFn& f, Relation rel);

struct ParameterPoint {
  Relation rel = Relation::None;
  RatFn alpha1 = RatFn::variable(VAL1);
  RatFn alpha2 = RatFn::variable(VAL2);
  RatFn alpha3 = RatFn::variable(VAL3);

  RatFn reduce(const RatFn& f) const { return reduce_relation(f, rel); }
};

struct FamilyConstants {
  RatFn a = RatFn::variable(VCA);
  RatFn a1 = RatFn::variable(VC1);
  RatFn a2 = RatFn::variable(VC2);
  RatFn a3 = RatFn::variable(VC3);
};

struct VectorField {
  std::vector<int> vars;    // phase variable indices
  std::vector<RatFn> comp;  // one component per variable

  bool is_zero() const {
    for (const auto& c : comp)
      if (!c.is_zero()) return false;
    return true;
  }
};

struct HamSystem {
  std::string id;
  bool has_hamiltonian = true;
  RatFn H;                                 // polynomial in the phase variables
  std::vector<std::pair<int, int>> pairs;  // canonical (coordinate, momentum)
  std::vector<int> phase;                  // flattened phase variables
  int time_var = VT;
  ParameterPoint params;
  std::vector<RatFn> rhs;  // catalog right-hand side, one per phase variable
};

// ids: generic, hone, a1case, main, sys11, sys14, sys16, K1, K2.
// sys16 carries only a right-hand side (its planar field has nonzero
// divergence, so it is not Hamiltonian in canonical coordinates).
HamSystem build_system(const std::string& id);
std::vector<std::string> catalog_ids();

VectorField hamiltonian_vector_field(const HamSystem& S);

// Bracket convention: {F,G} = sum_i (dF/dp_i dG/dq_i - dF/dq_i dG/dp_i),
// so {p_i, q_j} = delta_ij and udot = {H, u}.
RatFn poisson_bracket(const RatFn& F, const RatFn& G,
                      const std::vector<std::pair<int, int>>& pairs);

VectorField lie_bracket(const VectorField& V, const VectorField& W);

RatFn total_time_derivative(const RatFn& F, const HamSystem& S);

struct InvariantCycle {
  std::string id;
  std::vector<RatFn> generators;
  int codimension;
  // the variety in solved form (triangular), e.g. z = -x then y = x^2+w+t
  std::vector<std::pair<int, RatFn>> solved;
  // extra parameter constraint required by the cycle, e.g. alpha2 = 0
  std::vector<std::pair<int, RatFn>> param_constraint;
};

bool invariant_cycle_check(const HamSystem& S, const InvariantCycle& C);
std::vector<InvariantCycle> invariant_cycles_main();

}  // namespace pain2
