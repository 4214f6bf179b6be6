// Two commuting Hamiltonian flows on one phase space: the pair (K1, K2),
// their derived partner K3, compatibility and involution residuals, the
// first-integral matrix, and the autonomous correspondence with the main
// system at frozen time.
#pragma once

#include <array>

#include "pain2/algebra.hpp"
#include "pain2/systems.hpp"

namespace pain2 {

struct TwoTimeSystem {
  MPoly K1, K2;
  std::vector<std::pair<int, int>> pairs;  // (q1,p1), (q2,p2)
  int t_var = VT;
  int s_var = VS;
  ParameterPoint params;  // relation: 2*alpha1 + 2*alpha2 + alpha3 = 0
};

TwoTimeSystem build_two_time();

// (4*K1^2 - 13*K2) / 4; polynomial because the numerator's content carries
// the 4
MPoly third_hamiltonian(const TwoTimeSystem& T);

// Lie bracket of the K1-flow and the K2-flow, relation imposed; the pair
// commutes iff this is the zero field
VectorField compatibility_residual(const TwoTimeSystem& T);

// {K1, K2}; the relation is imposed unless the caller disables it to inspect
// the raw residual
RatFn involution_residual(const TwoTimeSystem& T, bool impose_relation = true);

// entry (i,j): total derivative of K_{i+1} along the flow of K_{j+1}
std::array<std::array<RatFn, 2>, 2> first_integral_matrix(
    const TwoTimeSystem& T);

// K1 + (1/2)·H|_{t=0} with (x,y,z,w) renamed to (q1,p1,q2,p2); zero iff the
// frozen-time main system generates the K1-flow up to the -1/2 scale
RatFn autonomy_residual(const TwoTimeSystem& T, const HamSystem& S_main);

}  // namespace pain2
