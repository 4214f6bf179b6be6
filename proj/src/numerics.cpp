#include "pain2/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pain2 {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192,
                 A75 = -2187.0 / 6784, A76 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

cplx ipow(cplx b, int e) {
  cplx r(1.0);
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

cplx eval_terms(const std::vector<CompiledExpr::Term>& ts, const cplx* slots) {
  cplx acc(0.0);
  for (const auto& t : ts) {
    cplx v = t.c;
    for (const auto& [var, e] : t.pows) v *= ipow(slots[var], e);
    acc += v;
  }
  return acc;
}

Rat rat_value(const RatFn& f) {
  if (!f.is_constant())
    throw math_error("expected a numeric constant, got a symbolic expression");
  if (f.num.is_zero()) return Rat(0);
  return f.num.t.begin()->second / f.den.t.begin()->second;
}

std::map<int, RatFn> binding(const ParameterPoint& at,
                             const std::map<int, Rat>& constants) {
  std::map<int, RatFn> sub{
      {VAL1, at.alpha1}, {VAL2, at.alpha2}, {VAL3, at.alpha3}};
  for (const auto& [v, r] : constants) sub[v] = RatFn(r);
  return sub;
}

double maxmag(const State& v) {
  double m = 0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

ParameterPoint num_params(Relation rel, const Rat& alpha2, const Rat& alpha3) {
  ParameterPoint P;
  P.rel = rel;
  P.alpha2 = RatFn(alpha2);
  P.alpha3 = RatFn(alpha3);
  Rat sum = 2 * alpha2 + alpha3;
  if (rel == Relation::SumOne)
    P.alpha1 = RatFn(Rat(Rat(1) - sum) / 2);
  else if (rel == Relation::SumZero)
    P.alpha1 = RatFn(Rat(-sum) / 2);
  else
    throw math_error("num_params needs a relation to pin alpha1");
  return P;
}

cplx CompiledExpr::eval(const cplx* slots, double den_eps) const {
  cplx n = eval_terms(num, slots);
  if (den.empty()) return n;
  cplx d = eval_terms(den, slots);
  if (std::abs(d) < den_eps) {
    std::ostringstream os;
    os << "denominator magnitude " << std::abs(d) << " is below the guard "
       << den_eps << " at the evaluation point";
    throw math_error(os.str());
  }
  return n / d;
}

CompiledExpr compile_expr(const RatFn& f, const std::vector<int>& allowed) {
  auto conv = [&](const MPoly& p, std::vector<CompiledExpr::Term>& out) {
    for (const auto& [e, c] : p.t) {
      CompiledExpr::Term t;
      t.c = cplx(c.get_d());
      for (int v = 0; v < NVARS; v++)
        if (e[size_t(v)] != 0) {
          if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            throw math_error(std::string("cannot compile: variable ") +
                             var_name(v) + " has no numeric binding");
          t.pows.emplace_back(v, int(e[size_t(v)]));
        }
      out.push_back(std::move(t));
    }
  };
  CompiledExpr ce;
  conv(f.num, ce.num);
  if (!f.is_polynomial()) conv(f.den, ce.den);
  return ce;
}

CompiledFlow::CompiledFlow(std::vector<int> vars, int time_var,
                           const std::vector<RatFn>& comps,
                           const ParameterPoint& at,
                           const std::map<int, Rat>& constants)
    : vars_(std::move(vars)), time_var_(time_var) {
  if (comps.size() != vars_.size())
    throw math_error("flow needs one component per variable");
  std::vector<int> allowed = vars_;
  allowed.push_back(time_var_);
  auto sub = binding(at, constants);
  for (const auto& c : comps) comp_.push_back(compile_expr(substitute(c, sub), allowed));
}

void CompiledFlow::operator()(const cplx& t, const State& u, State& out) const {
  cplx slots[NVARS] = {};
  slots[time_var_] = t;
  for (size_t i = 0; i < vars_.size(); i++) slots[vars_[i]] = u[i];
  out.resize(comp_.size());
  for (size_t i = 0; i < comp_.size(); i++)
    out[i] = comp_[i].eval(slots, 1e-300);
}

CompiledFlow compile_flow(const HamSystem& S, const ParameterPoint& at,
                          const std::map<int, Rat>& constants) {
  return CompiledFlow(S.phase, S.time_var, S.rhs, at, constants);
}

State CompiledMap::apply(const cplx& t, const State& u) const {
  cplx slots[NVARS] = {};
  slots[time_var] = t;
  for (size_t i = 0; i < in_vars.size(); i++) slots[in_vars[i]] = u[i];
  State out(comp.size());
  for (size_t i = 0; i < comp.size(); i++) out[i] = comp[i].eval(slots, den_eps);
  return out;
}

CompiledMap compile_map(const std::vector<int>& in_vars, int time_var,
                        const std::vector<RatFn>& comps,
                        const ParameterPoint& at,
                        const std::map<int, Rat>& constants) {
  CompiledMap M;
  M.in_vars = in_vars;
  M.time_var = time_var;
  std::vector<int> allowed = in_vars;
  allowed.push_back(time_var);
  auto sub = binding(at, constants);
  for (const auto& c : comps) M.comp.push_back(compile_expr(substitute(c, sub), allowed));
  return M;
}

namespace {

// shared driver: integrate() is the empty-atlas case
Trajectory run(const HamSystem& S, const std::vector<Chart>& atlas,
               const ParameterPoint& at, const State& init,
               const std::vector<cplx>& path, const IntegrateOptions& opt) {
  if (path.size() < 2) throw math_error("path needs at least two nodes");
  if (init.size() != S.phase.size())
    throw math_error("initial state size does not match the system");
  if (!(opt.tol > 0)) throw math_error("tol must be positive");

  Trajectory traj;
  CompiledFlow principal = compile_flow(S, at, opt.constants);
  std::vector<CompiledFlow> cflow;
  std::vector<CompiledMap> cfwd, cinv;
  for (const Chart& C : atlas) {
    if (C.vars != S.phase)
      throw math_error("atlas chart " + C.id + " is over different variables");
    if (C.time_var != S.time_var)
      throw math_error("atlas chart " + C.id + " uses a different time");
    VectorField V = chart_pushforward(S, C);
    PolyReport rep = polynomiality_check(V);
    if (!rep.pass)
      throw math_error("chart " + C.id + " does not keep the field polynomial");
    cflow.emplace_back(V.vars, S.time_var, V.comp, at, opt.constants);
    cfwd.push_back(compile_map(S.phase, S.time_var, C.fwd, at, opt.constants));
    cinv.push_back(compile_map(S.phase, S.time_var, C.inv, at, opt.constants));
    cfwd.back().den_eps = 1e-13;
    cinv.back().den_eps = 1e-13;
    traj.chart_ids.push_back(C.id);
  }

  const size_t n = init.size();
  const double THR = opt.switch_threshold;
  State u = init;
  int chart = -1;

  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), utmp(n), unew(n);
  double errold = 1e-4;

  auto record = [&](const cplx& t, double errest) {
    traj.points.push_back({t, chart, u, errest});
  };
  record(path[0], 0.0);

  for (size_t seg = 0; seg + 1 < path.size(); seg++) {
    const cplx A = path[seg];
    const cplx B = path[seg + 1];
    const double len = std::abs(B - A);
    if (len == 0) continue;
    const cplx dir = (B - A) / len;
    const double tiny = 1e-12 * std::max(1.0, len);

    const CompiledFlow* F = chart < 0 ? &principal : &cflow[size_t(chart)];
    auto eval_f = [&](double s, const State& uu, State& out) {
      (*F)(A + s * dir, uu, out);
      for (size_t i = 0; i < n; i++) out[i] *= dir;
    };

    double sigma = 0;
    double next_sample = opt.sample_dt;
    eval_f(sigma, u, k1);
    double h = std::min({opt.max_step, len, 0.01 * len + 1e-6});

    while (sigma < len - tiny) {
      if (h < 1e-13 * std::max(1.0, len)) {
        size_t big = 0;
        for (size_t i = 1; i < n; i++)
          if (std::abs(u[i]) > std::abs(u[big])) big = i;
        std::ostringstream os;
        os << "step size underflow at t = " << A + sigma * dir;
        if (!cflow.empty())
          os << "; no atlas chart keeps the state bounded";
        os << "; largest coordinate " << var_name(S.phase[big])
           << " has magnitude " << std::abs(u[big]);
        throw math_error(os.str());
      }
      double cap = len - sigma;
      if (opt.sample_dt > 0 && next_sample - sigma > 1e-14)
        cap = std::min(cap, next_sample - sigma);
      const bool clipped = h > cap;
      const double hstep = clipped ? cap : h;

      for (size_t i = 0; i < n; i++) utmp[i] = u[i] + hstep * (A21 * k1[i]);
      eval_f(sigma + C2 * hstep, utmp, k2);
      for (size_t i = 0; i < n; i++)
        utmp[i] = u[i] + hstep * (A31 * k1[i] + A32 * k2[i]);
      eval_f(sigma + C3 * hstep, utmp, k3);
      for (size_t i = 0; i < n; i++)
        utmp[i] = u[i] + hstep * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
      eval_f(sigma + C4 * hstep, utmp, k4);
      for (size_t i = 0; i < n; i++)
        utmp[i] = u[i] + hstep * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] +
                                  A54 * k4[i]);
      eval_f(sigma + C5 * hstep, utmp, k5);
      for (size_t i = 0; i < n; i++)
        utmp[i] = u[i] + hstep * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] +
                                  A64 * k4[i] + A65 * k5[i]);
      eval_f(sigma + hstep, utmp, k6);
      for (size_t i = 0; i < n; i++)
        unew[i] = u[i] + hstep * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] +
                                  A75 * k5[i] + A76 * k6[i]);
      eval_f(sigma + hstep, unew, k7);

      double err = 0;
      for (size_t i = 0; i < n; i++) {
        cplx e = hstep * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                          E6 * k6[i] + E7 * k7[i]);
        double sc = opt.tol + opt.tol * std::max(std::abs(u[i]), std::abs(unew[i]));
        double r = std::abs(e) / sc;
        err += r * r;
      }
      err = std::sqrt(err / double(n));
      if (!std::isfinite(err)) err = 1e10;

      if (traj.steps + traj.rejected >= opt.max_steps)
        throw math_error("maximum step count exceeded");

      if (err > 1.0) {
        traj.rejected++;
        h = hstep * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        continue;
      }

      double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.17) *
                   std::pow(errold, 0.04);
      fac = std::clamp(fac, 0.2, 5.0);
      errold = std::max(err, 1e-4);
      sigma += hstep;
      std::swap(u, unew);
      std::swap(k1, k7);
      traj.steps++;
      if (!clipped) h = hstep * fac;

      const double errest = err * opt.tol;
      if (opt.sample_dt > 0) {
        if (sigma >= next_sample - tiny) {
          record(A + sigma * dir, errest);
          next_sample += opt.sample_dt;
        }
      } else {
        record(A + sigma * dir, errest);
      }

      // chart bookkeeping; never triggers with an infinite threshold, so the
      // step sequence then matches plain integration exactly
      if (!cflow.empty() && std::isfinite(THR)) {
        const cplx tnow = A + sigma * dir;
        bool moved = false;
        if (chart < 0) {
          const double mag = maxmag(u);
          if (mag > THR) {
            int best = -1;
            double bestm = mag;
            State bestv;
            for (size_t j = 0; j < cflow.size(); j++) {
              State v = cfwd[j].apply(tnow, u);
              if (double m = maxmag(v); m < bestm) {
                bestm = m;
                best = int(j);
                bestv = std::move(v);
              }
            }
            if (best >= 0) {
              State back = cinv[size_t(best)].apply(tnow, bestv);
              double defect = 0;
              for (size_t i = 0; i < n; i++)
                defect = std::max(defect, std::abs(back[i] - u[i]));
              traj.max_switch_defect =
                  std::max(traj.max_switch_defect, defect / (1.0 + mag));
              u = std::move(bestv);
              chart = best;
              moved = true;
            }
          }
        } else {
          State pr = cinv[size_t(chart)].apply(tnow, u);
          const double mpr = maxmag(pr);
          if (mpr < 0.5 * THR) {
            State back = cfwd[size_t(chart)].apply(tnow, pr);
            double defect = 0;
            for (size_t i = 0; i < n; i++)
              defect = std::max(defect, std::abs(back[i] - u[i]));
            traj.max_switch_defect = std::max(traj.max_switch_defect,
                                              defect / (1.0 + maxmag(u)));
            u = std::move(pr);
            chart = -1;
            moved = true;
          } else if (maxmag(u) > THR) {
            // the active chart is degenerating; hop through the principal
            // expression to whichever chart is smallest now
            int best = chart;
            double bestm = maxmag(u);
            State bestv;
            if (mpr < bestm) {
              best = -1;
              bestm = mpr;
              bestv = pr;
            }
            for (size_t j = 0; j < cflow.size(); j++) {
              if (int(j) == chart) continue;
              State v = cfwd[j].apply(tnow, pr);
              if (double m = maxmag(v); m < bestm) {
                bestm = m;
                best = int(j);
                bestv = std::move(v);
              }
            }
            if (best != chart) {
              State pr2 = best < 0 ? bestv : cinv[size_t(best)].apply(tnow, bestv);
              State back = cfwd[size_t(chart)].apply(tnow, pr2);
              double defect = 0;
              for (size_t i = 0; i < n; i++)
                defect = std::max(defect, std::abs(back[i] - u[i]));
              traj.max_switch_defect = std::max(traj.max_switch_defect,
                                                defect / (1.0 + maxmag(u)));
              u = std::move(bestv);
              chart = best;
              moved = true;
            }
          }
        }
        if (moved) {
          traj.switches++;
          F = chart < 0 ? &principal : &cflow[size_t(chart)];
          eval_f(sigma, u, k1);  // restart the FSAL stage in new coordinates
        }
      }
    }

    if (std::abs(traj.points.back().t - B) > tiny) record(B, 0.0);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const HamSystem& S, const ParameterPoint& at,
                     const State& init, const std::vector<cplx>& path,
                     const IntegrateOptions& opt) {
  return run(S, {}, at, init, path, opt);
}

Trajectory continue_through_pole(const HamSystem& S,
                                 const std::vector<Chart>& atlas,
                                 const ParameterPoint& at, const State& init,
                                 const std::vector<cplx>& path,
                                 const IntegrateOptions& opt) {
  return run(S, atlas, at, init, path, opt);
}

double observable_drift(const MPoly& F, const std::vector<int>& vars,
                        int time_var, const ParameterPoint& at,
                        const Trajectory& traj) {
  CompiledMap M = compile_map(vars, time_var, {RatFn(F)}, at);
  bool first = true;
  cplx f0;
  double worst = 0;
  for (const auto& p : traj.points) {
    if (p.chart != -1) continue;
    cplx v = M.apply(p.t, p.u)[0];
    if (first) {
      f0 = v;
      first = false;
    }
    worst = std::max(worst, std::abs(v - f0));
  }
  return worst;
}

double numeric_conjugacy_check(const HamSystem& source, const BirationalMap& M,
                               const HamSystem& target,
                               const ParameterPoint& at,
                               const Trajectory& traj) {
  if (M.vars != source.phase)
    throw math_error("map variables do not match the source system");
  if (traj.points.size() < 5)
    throw math_error("conjugacy check needs at least five samples");
  for (const auto& p : traj.points)
    if (p.chart != -1)
      throw math_error("conjugacy check needs a plain single-chart trajectory");
  const cplx h = traj.points[1].t - traj.points[0].t;
  for (size_t i = 1; i < traj.points.size(); i++)
    if (std::abs(traj.points[i].t - traj.points[i - 1].t - h) >
        1e-9 * std::max(1.0, std::abs(h)))
      throw math_error(
          "conjugacy check needs uniform samples; integrate with sample_dt");

  CompiledMap cm = compile_map(source.phase, source.time_var, M.comp, at);
  auto asub = binding(at, {});
  ParameterPoint tat;
  tat.rel = target.params.rel;
  tat.alpha1 = RatFn(rat_value(substitute(M.pimg[0], asub)));
  tat.alpha2 = RatFn(rat_value(substitute(M.pimg[1], asub)));
  tat.alpha3 = RatFn(rat_value(substitute(M.pimg[2], asub)));
  CompiledFlow trhs = compile_flow(target, tat);

  std::vector<State> v(traj.points.size());
  for (size_t i = 0; i < v.size(); i++)
    v[i] = cm.apply(traj.points[i].t, traj.points[i].u);

  double worst = 0;
  State f;
  for (size_t i = 2; i + 2 < v.size(); i++) {
    trhs(traj.points[i].t, v[i], f);
    for (size_t c = 0; c < f.size(); c++) {
      cplx fd = (-v[i + 2][c] + 8.0 * v[i + 1][c] - 8.0 * v[i - 1][c] +
                 v[i - 2][c]) /
                (12.0 * h);
      worst = std::max(worst, std::abs(fd - f[c]));
    }
  }
  return worst;
}

ParticularReport particular_solution_check(const ParameterPoint& at,
                                           const cplx& x0, const cplx& z0,
                                           const std::vector<cplx>& path,
                                           double tol) {
  ParticularReport rep;
  HamSystem S14 = build_system("sys14");
  HamSystem S16 = build_system("sys16");
  auto comp_of = [](const HamSystem& S, int v) -> const RatFn& {
    for (size_t i = 0; i < S.phase.size(); i++)
      if (S.phase[i] == v) return S.rhs[i];
    throw math_error("system lacks the requested variable");
  };
  const std::map<int, RatFn> plane{{VY, RatFn(0)}, {VW, RatFn(0)}};
  auto asub = binding(at, {});
  rep.ydot_on_plane = substitute(substitute(comp_of(S14, VY), plane), asub);
  rep.wdot_on_plane = substitute(substitute(comp_of(S14, VW), plane), asub);
  rep.reduces_to_planar =
      substitute(comp_of(S14, VX), plane) == comp_of(S16, VX) &&
      substitute(comp_of(S14, VZ), plane) == comp_of(S16, VZ);
  rep.symbolic_ok = rep.ydot_on_plane.is_zero() &&
                    rep.wdot_on_plane.is_zero() && rep.reduces_to_planar;

  const bool numeric_ready = at.alpha1.is_constant() &&
                             at.alpha2.is_constant() &&
                             at.alpha3.is_constant() && at.alpha1.is_zero();
  if (!numeric_ready) return rep;

  IntegrateOptions opt;
  opt.tol = tol;
  opt.sample_dt = 0.01;
  Trajectory t4 = integrate(S14, at, {x0, 0.0, z0, 0.0}, path, opt);
  Trajectory t2 = integrate(S16, at, {x0, z0}, path, opt);
  if (t4.points.size() != t2.points.size())
    throw math_error("sample grids of the two integrations diverged");
  rep.max_offplane = 0;
  rep.max_gap = 0;
  for (size_t i = 0; i < t4.points.size(); i++) {
    const State& a = t4.points[i].u;
    const State& b = t2.points[i].u;
    rep.max_offplane =
        std::max({rep.max_offplane, std::abs(a[1]), std::abs(a[3])});
    rep.max_gap =
        std::max({rep.max_gap, std::abs(a[0] - b[0]), std::abs(a[2] - b[1])});
  }
  rep.numeric_ok = rep.max_offplane <= 1e-9 && rep.max_gap <= 1e-7;
  return rep;
}

}  // namespace pain2
