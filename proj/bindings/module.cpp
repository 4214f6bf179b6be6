// Python surface for the toolkit. Everything crosses the boundary as
// strings (exact expressions) or plain floats/complex, so the exact
// arithmetic stays on the C++ side and no polynomial object model leaks
// into Python.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "pain2/holomorphy.hpp"
#include "pain2/numerics.hpp"
#include "pain2/parse.hpp"
#include "pain2/transforms.hpp"
#include "pain2/verify.hpp"

namespace py = pybind11;
using namespace pain2;

namespace {

Rat rat_of(const std::string& text) {
  RatFn f = parse_expr(text);
  if (!f.is_constant())
    throw py::value_error("expected a rational constant, got '" + text + "'");
  if (f.num.is_zero()) return Rat(0);
  return f.num.t.begin()->second / f.den.t.begin()->second;
}

int var_of(const std::string& name) {
  int v = var_index(name);
  if (v < 0) throw py::value_error("unknown variable '" + name + "'");
  return v;
}

std::vector<std::string> residual_strings(const Residual& r) {
  std::vector<std::string> out;
  for (const auto& c : r.comp) out.push_back(print_expr(c));
  return out;
}

ParameterPoint params_for(const HamSystem& S, const std::string& alpha1,
                          const std::string& alpha2,
                          const std::string& alpha3) {
  if (S.params.rel == Relation::None) {
    ParameterPoint P;
    P.alpha1 = RatFn(rat_of(alpha1));
    P.alpha2 = RatFn(rat_of(alpha2));
    P.alpha3 = RatFn(rat_of(alpha3));
    return P;
  }
  return num_params(S.params.rel, rat_of(alpha2), rat_of(alpha3));
}

py::dict traj_dict(const HamSystem& S, const Trajectory& tr) {
  py::dict d;
  d["steps"] = tr.steps;
  d["rejected"] = tr.rejected;
  d["switches"] = tr.switches;
  d["max_switch_defect"] = tr.max_switch_defect;
  py::list vars;
  for (int v : S.phase) vars.append(var_name(v));
  d["variables"] = vars;
  py::list pts;
  for (const auto& p : tr.points) {
    py::dict q;
    q["t"] = p.t;
    q["chart"] = tr.chart_name(p.chart);
    q["state"] = p.u;
    q["err"] = p.err;
    pts.append(q);
  }
  d["points"] = pts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pain2, m) {
  m.doc() =
      "coupled Painleve toolkit: exact residual checks, holomorphy charts, "
      "and complex-path integration";

  py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
  py::register_exception<math_error>(m, "MathError", PyExc_ArithmeticError);

  m.def("catalog", [] {
    py::dict d;
    d["systems"] = catalog_ids();
    d["maps"] = map_ids();
    d["charts"] = chart_ids();
    d["suites"] = verify_suites();
    return d;
  });

  m.def(
      "hamiltonian",
      [](const std::string& id) -> py::object {
        HamSystem S = build_system(id);
        if (!S.has_hamiltonian) return py::none();
        return py::str(print_expr(S.H));
      },
      py::arg("system"));

  m.def(
      "rhs",
      [](const std::string& id) {
        HamSystem S = build_system(id);
        py::dict d;
        for (size_t i = 0; i < S.phase.size(); i++)
          d[var_name(S.phase[i])] = print_expr(S.rhs[i]);
        return d;
      },
      py::arg("system"));

  m.def(
      "simplify",
      [](const std::string& expr) { return print_expr(parse_expr(expr)); },
      py::arg("expr"), "parse and reprint in canonical form");

  m.def(
      "poisson",
      [](const std::string& f, const std::string& g,
         const std::vector<std::pair<std::string, std::string>>& pairs) {
        std::vector<std::pair<int, int>> ps;
        for (const auto& [q, p] : pairs) ps.push_back({var_of(q), var_of(p)});
        return print_expr(poisson_bracket(parse_expr(f), parse_expr(g), ps));
      },
      py::arg("f"), py::arg("g"),
      py::arg("pairs") =
          std::vector<std::pair<std::string, std::string>>{{"x", "y"},
                                                           {"z", "w"}});

  m.def(
      "invariance_residual",
      [](const std::string& system, const std::string& map) {
        return residual_strings(
            invariance_residual(build_system(system), build_map(map)));
      },
      py::arg("system"), py::arg("map"));

  m.def(
      "conjugacy_residual",
      [](const std::string& source, const std::string& map,
         const std::string& target) {
        return residual_strings(conjugacy_residual(
            build_system(source), build_map(map), build_system(target)));
      },
      py::arg("source"), py::arg("map"), py::arg("target"));

  m.def(
      "is_symplectic",
      [](const std::string& map) {
        return is_symplectic(build_map(map)).pass();
      },
      py::arg("map"));

  m.def(
      "group_relation",
      [](const std::vector<std::string>& word, const std::string& expected) {
        return group_relation_check(word, expected);
      },
      py::arg("word"), py::arg("expected") = "identity");

  m.def(
      "parameter_action",
      [](const std::vector<std::string>& word) {
        if (word.empty()) throw py::value_error("empty word");
        BirationalMap m0 = build_map(word[0]);
        for (size_t i = 1; i < word.size(); i++)
          m0 = compose(m0, build_map(word[i]));
        std::vector<std::string> out;
        for (const auto& a : m0.pimg) out.push_back(print_expr(a));
        return out;
      },
      py::arg("word"), "alpha images of the left-to-right composition");

  m.def(
      "pushforward",
      [](const std::string& system, const std::string& chart) {
        HamSystem S = build_system(system);
        Chart C = build_chart(chart);
        VectorField V = chart_pushforward(S, C);
        PolyReport rep = polynomiality_check(V);
        py::dict d;
        d["polynomial"] = rep.pass;
        py::dict comp;
        for (size_t i = 0; i < V.comp.size(); i++)
          comp[var_name(C.vars[i])] = print_expr(V.comp[i]);
        d["field"] = comp;
        return d;
      },
      py::arg("system"), py::arg("chart"));

  m.def(
      "recover",
      [](int degree, const std::vector<std::string>& charts) {
        std::vector<Chart> cs;
        for (const auto& id : charts) cs.push_back(build_chart(id));
        RecoverResult R = recover_hamiltonian(cs, build_ansatz(degree));
        py::dict d;
        d["unknowns"] = R.unknowns;
        d["equations"] = R.equations;
        d["rank"] = R.rank;
        d["dimension"] = R.basis.size();
        py::list basis;
        for (const auto& b : R.basis) basis.append(print_poly(b));
        d["basis"] = basis;
        d["particular"] = print_poly(R.particular);
        return d;
      },
      py::arg("degree") = 5,
      py::arg("charts") = std::vector<std::string>{"m1", "m2", "m3"});

  m.def(
      "verify",
      [](const std::string& suite) {
        py::list out;
        for (const auto& r : run_suite(suite)) {
          py::dict d;
          d["id"] = r.id;
          d["anchor"] = r.anchor;
          d["status"] = r.status;
          d["residual"] = r.residual;
          d["residual_hash"] = r.residual_hash;
          d["ms"] = r.ms;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "all");

  m.def(
      "integrate",
      [](const std::string& system, const std::vector<cplx>& init,
         const std::vector<cplx>& path, const std::string& alpha1,
         const std::string& alpha2, const std::string& alpha3, double tol,
         double sample_dt, bool chart_switch,
         const std::vector<std::string>& atlas, double threshold,
         const std::map<std::string, std::string>& constants) {
        HamSystem S = build_system(system);
        ParameterPoint P = params_for(S, alpha1, alpha2, alpha3);
        IntegrateOptions opt;
        opt.tol = tol;
        opt.sample_dt = sample_dt;
        opt.switch_threshold = threshold;
        for (const auto& [k, v] : constants)
          opt.constants[var_of(k)] = rat_of(v);
        if (init.size() != S.phase.size())
          throw py::value_error("init needs one value per phase variable");
        Trajectory tr;
        if (chart_switch) {
          std::vector<Chart> cs;
          for (const auto& id : atlas) cs.push_back(build_chart(id));
          tr = continue_through_pole(S, cs, P, init, path, opt);
        } else {
          tr = integrate(S, P, init, path, opt);
        }
        return traj_dict(S, tr);
      },
      py::arg("system"), py::arg("init"), py::arg("path"),
      py::arg("alpha1") = "0", py::arg("alpha2") = "0",
      py::arg("alpha3") = "0", py::arg("tol") = 1e-10,
      py::arg("sample_dt") = 0.0, py::arg("chart_switch") = false,
      py::arg("atlas") = std::vector<std::string>{"m1", "m2", "m3"},
      py::arg("threshold") = 1e6,
      py::arg("constants") = std::map<std::string, std::string>{});

  m.def(
      "particular_check",
      [](const std::string& alpha2, const std::string& alpha3, cplx x0,
         cplx z0, const std::vector<cplx>& path, double tol) {
        ParameterPoint at =
            num_params(Relation::SumOne, rat_of(alpha2), rat_of(alpha3));
        ParticularReport R = particular_solution_check(at, x0, z0, path, tol);
        py::dict d;
        d["ydot_on_plane"] = print_expr(R.ydot_on_plane);
        d["wdot_on_plane"] = print_expr(R.wdot_on_plane);
        d["reduces_to_planar"] = R.reduces_to_planar;
        d["symbolic_ok"] = R.symbolic_ok;
        d["max_offplane"] = R.max_offplane;
        d["max_gap"] = R.max_gap;
        d["numeric_ok"] = R.numeric_ok;
        return d;
      },
      py::arg("alpha2"), py::arg("alpha3"), py::arg("x0"), py::arg("z0"),
      py::arg("path"), py::arg("tol") = 1e-10);
}
