// Birational symplectic maps: the Backlund-type symmetries of the coupled
// systems, the two structure-revealing changes of variables, composition,
// and the residual checks (symplecticity, invariance, conjugacy, group
// relations).
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "pain2/systems.hpp"

namespace pain2 {

// A birational change of the phase coordinates together with an affine action
// on (alpha1, alpha2, alpha3). Every map in the catalog fixes time. comp[i]
// is the image of vars[i], written in the source variables and parameters.
struct BirationalMap {
  std::string id;
  Relation rel = Relation::None;  // parameter relation the map lives under
  std::vector<int> vars;          // source phase variables, (q,p) pairs flat
  std::vector<RatFn> comp;
  std::array<RatFn, 3> pimg = {RatFn::variable(VAL1), RatFn::variable(VAL2),
                               RatFn::variable(VAL3)};
};

// ids: identity, S1, S2 (coupling-family symmetries), s1, s2, s3 (symmetries
// of the main system, parameters summing to one), ks1, ks2, ks3 (the q/p
// variants for the autonomous pair, parameters summing to zero), phi1, phi2.
BirationalMap build_map(const std::string& id);
std::vector<std::string> map_ids();

// substitution sending each source variable / parameter to its image under m
std::map<int, RatFn> image_substitution(const BirationalMap& m);

// apply m1 first, then m2
BirationalMap compose(const BirationalMap& m1, const BirationalMap& m2);

struct Residual {
  std::vector<RatFn> comp;

  bool pass() const {
    for (const auto& c : comp)
      if (!c.is_zero()) return false;
    return true;
  }
};

// Residuals of the canonical bracket table for the image components: with
// consecutive pairs (q_i, p_i) taken from m.vars (or given explicitly),
// {P_i, Q_i} - 1 and every cross bracket, evaluated in source coordinates.
Residual is_symplectic(const BirationalMap& m,
                       std::vector<std::pair<int, int>> pairs = {});

// Does m send solutions of s at parameters alpha to solutions of s at the
// mapped parameters? Component i is (time derivative of comp[i] along s)
// minus (rhs_i of s at the image point and mapped parameters), reduced by
// the system's parameter relation.
Residual invariance_residual(const HamSystem& s, const BirationalMap& m);

// Same chain-rule residual, but against a different target system.
Residual conjugacy_residual(const HamSystem& source, const BirationalMap& m,
                            const HamSystem& target);

// Compose the word left to right and compare with the expected map
// ("identity" allowed), modulo the active parameter relation.
bool group_relation_check(const std::vector<std::string>& word,
                          const std::string& expected);

}  // namespace pain2
