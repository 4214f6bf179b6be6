#include "pain2/two_time.hpp"

namespace pain2 {

namespace {

VectorField flow_of(const MPoly& K, const TwoTimeSystem& T) {
  VectorField V;
  RatFn H{K};
  for (auto [q, p] : T.pairs) {
    V.vars.push_back(q);
    V.vars.push_back(p);
    V.comp.push_back(diff(H, p));
    V.comp.push_back(RatFn(0) - diff(H, q));
  }
  return V;
}

}  // namespace

TwoTimeSystem build_two_time() {
  TwoTimeSystem T;
  HamSystem k1 = build_system("K1"), k2 = build_system("K2");
  T.K1 = k1.H.num;
  T.K2 = k2.H.num;
  T.pairs = k1.pairs;
  T.t_var = k1.time_var;
  T.s_var = k2.time_var;
  T.params.rel = Relation::SumZero;
  return T;
}

MPoly third_hamiltonian(const TwoTimeSystem& T) {
  RatFn K3 = (RatFn(4) * RatFn(T.K1) * RatFn(T.K1) - RatFn(13) * RatFn(T.K2)) /
             RatFn(4);
  if (!K3.is_polynomial())
    throw math_error("third_hamiltonian: quarter scale did not divide out");
  return K3.num;
}

VectorField compatibility_residual(const TwoTimeSystem& T) {
  VectorField b = lie_bracket(flow_of(T.K1, T), flow_of(T.K2, T));
  for (auto& c : b.comp) c = T.params.reduce(c);
  return b;
}

RatFn involution_residual(const TwoTimeSystem& T, bool impose_relation) {
  RatFn br = poisson_bracket(RatFn(T.K1), RatFn(T.K2), T.pairs);
  return impose_relation ? T.params.reduce(br) : br;
}

std::array<std::array<RatFn, 2>, 2> first_integral_matrix(
    const TwoTimeSystem& T) {
  std::array<RatFn, 2> K = {RatFn(T.K1), RatFn(T.K2)};
  std::array<std::array<RatFn, 2>, 2> M;
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 2; j++)
      M[size_t(i)][size_t(j)] =
          T.params.reduce(poisson_bracket(K[size_t(j)], K[size_t(i)], T.pairs));
  return M;
}

RatFn autonomy_residual(const TwoTimeSystem& T, const HamSystem& S_main) {
  RatFn H0 = substitute(S_main.H, {{S_main.time_var, RatFn(0)},
                                   {VX, RatFn::variable(VQ1)},
                                   {VY, RatFn::variable(VP1)},
                                   {VZ, RatFn::variable(VQ2)},
                                   {VW, RatFn::variable(VP2)}});
  return RatFn(T.K1) + H0 / RatFn(2);
}

}  // namespace pain2
