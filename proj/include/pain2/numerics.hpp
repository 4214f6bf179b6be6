// Complex-time numerical integration of the catalog flows: embedded
// Dormand-Prince 4(5) with PI step control over polyline paths, conservation
// drift, chart-switching continuation through movable poles, and the
// finite-difference cross-checks of the symbolic statements.
#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "pain2/holomorphy.hpp"
#include "pain2/systems.hpp"
#include "pain2/transforms.hpp"

namespace pain2 {

using cplx = std::complex<double>;
using State = std::vector<cplx>;

// numeric parameter point with alpha1 solved from the relation (exactly, so
// the relation holds to the last bit after conversion to double)
ParameterPoint num_params(Relation rel, const Rat& alpha2, const Rat& alpha3);

// A rational expression flattened for fast evaluation over complex doubles.
// All parameters must be bound before compilation; only the listed variables
// (plus the time variable) may remain.
struct CompiledExpr {
  struct Term {
    cplx c;
    std::vector<std::pair<int, int>> pows;  // (variable, exponent)
  };
  std::vector<Term> num, den;  // den empty means the denominator is 1

  cplx eval(const cplx* slots, double den_eps) const;
};

CompiledExpr compile_expr(const RatFn& f, const std::vector<int>& allowed);

// right-hand side u' = F(t, u) with u laid out along vars()
class CompiledFlow {
 public:
  CompiledFlow() = default;
  CompiledFlow(std::vector<int> vars, int time_var,
               const std::vector<RatFn>& comps, const ParameterPoint& at,
               const std::map<int, Rat>& constants = {});

  size_t dim() const { return comp_.size(); }
  const std::vector<int>& vars() const { return vars_; }
  void operator()(const cplx& t, const State& u, State& out) const;

 private:
  std::vector<int> vars_;
  int time_var_ = VT;
  std::vector<CompiledExpr> comp_;
};

CompiledFlow compile_flow(const HamSystem& S, const ParameterPoint& at,
                          const std::map<int, Rat>& constants = {});

// coordinate change or birational map, evaluated pointwise
struct CompiledMap {
  std::vector<int> in_vars;
  int time_var = VT;
  std::vector<CompiledExpr> comp;
  double den_eps = 1e-8;  // |denominator| below this throws math_error

  State apply(const cplx& t, const State& u) const;
};

CompiledMap compile_map(const std::vector<int>& in_vars, int time_var,
                        const std::vector<RatFn>& comps,
                        const ParameterPoint& at,
                        const std::map<int, Rat>& constants = {});

struct IntegrateOptions {
  double tol = 1e-10;       // relative and absolute local error target
  double max_step = 0.25;   // along the path parameter
  double sample_dt = 0;     // >0: force steps onto this grid and record there
  size_t max_steps = 2000000;
  double switch_threshold = 1e6;  // continue_through_pole only
  std::map<int, Rat> constants;   // extra bindings (coupling family a, a1..a3)
};

struct TrajPoint {
  cplx t;
  int chart = -1;  // -1 = principal coordinates, else index into the atlas
  State u;         // in the coordinates of that chart
  double err = 0;  // local error estimate of the step that produced the point
};

struct Trajectory {
  std::vector<TrajPoint> points;
  std::vector<std::string> chart_ids;  // names for the chart indices
  size_t steps = 0, rejected = 0, switches = 0;
  // worst relative defect of re-express-then-invert at the switch points
  double max_switch_defect = 0;

  std::string chart_name(int c) const {
    return c < 0 ? "identity" : chart_ids[size_t(c)];
  }
};

// Integrate S along a polyline of complex times. init is given at path[0].
// Throws math_error on step-size underflow, naming the blow-up coordinate.
Trajectory integrate(const HamSystem& S, const ParameterPoint& at,
                     const State& init, const std::vector<cplx>& path,
                     const IntegrateOptions& opt = {});

// Same, but when a coordinate magnitude exceeds opt.switch_threshold the
// state is re-expressed in whichever atlas chart keeps it smallest and
// integration continues with that chart's pushforward field; the principal
// chart is re-entered once the state fits under half the threshold. Throws
// when no chart keeps the state bounded.
Trajectory continue_through_pole(const HamSystem& S,
                                 const std::vector<Chart>& atlas,
                                 const ParameterPoint& at, const State& init,
                                 const std::vector<cplx>& path,
                                 const IntegrateOptions& opt = {});

// max |F(point) - F(first point)| over the principal-chart samples
double observable_drift(const MPoly& F, const std::vector<int>& vars,
                        int time_var, const ParameterPoint& at,
                        const Trajectory& traj);

// Map every sample of a uniformly spaced trajectory of `source` through M and
// compare the 4th-order central finite-difference time derivative with the
// rhs of `target` at the mapped point and mapped parameters; returns the max
// residual over components and interior samples. Throws if a sample sits
// within the map's denominator guard.
double numeric_conjugacy_check(const HamSystem& source, const BirationalMap& M,
                               const HamSystem& target,
                               const ParameterPoint& at,
                               const Trajectory& traj);

struct ParticularReport {
  // restriction of the 4-dim field to the plane y = w = 0
  RatFn ydot_on_plane;  // -2*alpha1 at the given parameters
  RatFn wdot_on_plane;  // identically zero
  bool reduces_to_planar = false;  // (x, z) components match the planar system
  bool symbolic_ok = false;

  double max_offplane = -1;  // max |y|, |w| along the 4-dim integration
  double max_gap = -1;       // (x, z) disagreement vs the planar integration
  bool numeric_ok = false;   // max_offplane <= 1e-9 and max_gap <= 1e-7
};

// The y = w = 0 particular solution: symbolic invariance of the plane and,
// when alpha1 = 0 holds numerically at `at`, a dual integration from
// (x0, 0, z0, 0) along `path` against the planar system started at (x0, z0).
ParticularReport particular_solution_check(const ParameterPoint& at,
                                           const cplx& x0, const cplx& z0,
                                           const std::vector<cplx>& path,
                                           double tol = 1e-10);

}  // namespace pain2
