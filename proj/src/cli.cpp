#include "pain2/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pain2/holomorphy.hpp"
#include "pain2/numerics.hpp"
#include "pain2/parse.hpp"
#include "pain2/transforms.hpp"
#include "pain2/verify.hpp"

namespace pain2 {

namespace {

// Bad option values are usage problems (exit 2), unlike math_error (exit 1).
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rat rat_of(const std::string& text) {
  RatFn f = parse_expr(text);
  if (!f.is_constant())
    throw usage_error("expected a rational constant, got '" + text + "'");
  if (f.num.is_zero()) return Rat(0);
  return f.num.t.begin()->second / f.den.t.begin()->second;
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// Accepts decimals and simple fractions: "0.5", "1/2", "-3/4".
double num_of(const std::string& p) {
  size_t slash = p.find('/');
  if (slash != std::string::npos)
    return num_of(p.substr(0, slash)) / num_of(p.substr(slash + 1));
  size_t used = 0;
  double v = std::stod(p, &used);
  if (used != p.size()) throw usage_error("bad number '" + p + "'");
  return v;
}

cplx parse_cplx(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ' && c != '\t') s += c;
  if (s.empty()) throw usage_error("empty complex literal");
  size_t split = std::string::npos;
  for (size_t i = 1; i < s.size(); i++)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E')
      split = i;
  auto part = [](const std::string& p) -> double {
    if (p.empty() || p == "+") return 1.0;
    if (p == "-") return -1.0;
    return num_of(p);
  };
  if (s.back() == 'i') {
    std::string body = s.substr(0, s.size() - 1);
    if (split == std::string::npos) return cplx(0.0, part(body));
    return cplx(part(body.substr(0, split)), part(body.substr(split)));
  }
  try {
    return cplx(num_of(s));
  } catch (const usage_error&) {
    throw usage_error("bad complex literal '" + raw + "'");
  }
}

std::vector<cplx> parse_path(const std::string& text) {
  std::vector<cplx> nodes;
  size_t pos = 0;
  while (true) {
    size_t arrow = text.find("->", pos);
    std::string tok = arrow == std::string::npos
                          ? text.substr(pos)
                          : text.substr(pos, arrow - pos);
    nodes.push_back(parse_cplx(strip(tok)));
    if (arrow == std::string::npos) break;
    pos = arrow + 2;
  }
  if (nodes.size() < 2)
    throw usage_error("path needs at least two nodes, e.g. \"0 -> 3\"");
  return nodes;
}

State parse_init(const std::string& text, const std::vector<int>& phase) {
  State u(phase.size(), cplx(0));
  std::vector<bool> seen(phase.size(), false);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (item.empty()) continue;
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw usage_error("init entries look like x=0, got '" + item + "'");
    std::string name = strip(item.substr(0, eq));
    size_t idx = phase.size();
    for (size_t i = 0; i < phase.size(); i++)
      if (name == var_name(phase[i])) idx = i;
    if (idx == phase.size())
      throw usage_error("unknown coordinate '" + name + "' in --init");
    u[idx] = parse_cplx(item.substr(eq + 1));
    seen[idx] = true;
  }
  for (size_t i = 0; i < phase.size(); i++)
    if (!seen[i])
      throw usage_error(std::string("--init misses coordinate ") +
                               var_name(phase[i]));
  return u;
}

nlohmann::json report_json(const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports)
    arr.push_back({{"id", r.id},
                   {"anchor", r.anchor},
                   {"status", r.status},
                   {"residual", r.residual},
                   {"residual_hash", r.residual_hash},
                   {"ms", r.ms}});
  return arr;
}

int cmd_verify(const std::string& suite, const std::string& json_path,
               std::ostream& out) {
  std::vector<CheckReport> reports = run_suite(suite);
  size_t failed = 0;
  for (const auto& r : reports) {
    out << std::left << std::setw(6) << (r.status == "pass" ? "pass" : "FAIL")
        << std::setw(28) << r.id << std::right << std::fixed
        << std::setprecision(1) << std::setw(9) << r.ms << " ms\n";
    if (r.status != "pass") {
      failed++;
      out << "      " << r.status << ": " << r.residual << "\n";
    }
  }
  out << reports.size() << " checks, " << failed << " failed\n";
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    f << report_json(reports).dump(2) << "\n";
  }
  return failed == 0 ? 0 : 1;
}

struct IntegrateArgs {
  std::string system = "main";
  std::string alpha1 = "0", alpha2 = "0", alpha3 = "0";
  std::string init, path, json_path;
  std::vector<std::string> consts;
  double tol = 1e-10, threshold = 1e6, sample_dt = 0, max_step = 0.25;
  bool chart_switch = false;
  bool alpha1_given = false;
};

std::vector<Chart> default_atlas(const std::string& system) {
  if (system == "main")
    return {build_chart("m1"), build_chart("m2"), build_chart("m3")};
  if (system == "generic") return {build_chart("g1"), build_chart("g2")};
  if (system == "K1" || system == "K2")
    return {build_chart("r1"), build_chart("r2"), build_chart("r3")};
  throw std::runtime_error("no atlas is wired for system '" + system + "'");
}

int cmd_integrate(const IntegrateArgs& a, std::ostream& out) {
  HamSystem S = build_system(a.system);
  ParameterPoint P;
  if (S.params.rel == Relation::None) {
    P.alpha1 = RatFn(rat_of(a.alpha1));
    P.alpha2 = RatFn(rat_of(a.alpha2));
    P.alpha3 = RatFn(rat_of(a.alpha3));
  } else {
    if (a.alpha1_given)
      throw usage_error("alpha1 is fixed by the parameter relation of '" +
                        a.system + "'; pass --alpha2/--alpha3 only");
    P = num_params(S.params.rel, rat_of(a.alpha2), rat_of(a.alpha3));
  }

  IntegrateOptions opt;
  opt.tol = a.tol;
  opt.switch_threshold = a.threshold;
  opt.sample_dt = a.sample_dt;
  opt.max_step = a.max_step;
  const std::map<std::string, int> cnames{
      {"a", VCA}, {"a1", VC1}, {"a2", VC2}, {"a3", VC3}};
  for (const auto& kv : a.consts) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw usage_error("--const entries look like a=-3");
    auto it = cnames.find(strip(kv.substr(0, eq)));
    if (it == cnames.end())
      throw usage_error("unknown constant in --const: " + kv);
    opt.constants[it->second] = rat_of(kv.substr(eq + 1));
  }

  State init = parse_init(a.init, S.phase);
  std::vector<cplx> path = parse_path(a.path);

  Trajectory tr = a.chart_switch
                      ? continue_through_pole(S, default_atlas(a.system), P,
                                              init, path, opt)
                      : integrate(S, P, init, path, opt);

  out << a.system << ": " << tr.steps << " steps, " << tr.rejected
      << " rejected, " << tr.switches << " chart switches\n";
  if (tr.switches > 0)
    out << "max switch re-expression defect " << std::scientific
        << std::setprecision(3) << tr.max_switch_defect << std::defaultfloat
        << "\n";
  const TrajPoint& last = tr.points.back();
  out << "final t = " << last.t << " in chart " << tr.chart_name(last.chart)
      << "\n";
  for (size_t i = 0; i < last.u.size(); i++)
    out << "  " << var_name(S.phase[i]) << " = " << std::setprecision(15)
        << last.u[i] << "\n";

  if (!a.json_path.empty()) {
    std::ofstream f(a.json_path);
    for (const auto& p : tr.points) {
      nlohmann::json line{{"t_re", p.t.real()},
                          {"t_im", p.t.imag()},
                          {"chart", tr.chart_name(p.chart)},
                          {"err", p.err}};
      nlohmann::json st = nlohmann::json::array();
      for (const auto& c : p.u) {
        st.push_back(c.real());
        st.push_back(c.imag());
      }
      line["state"] = st;
      f << line.dump() << "\n";
    }
    out << tr.points.size() << " samples written to " << a.json_path << "\n";
  }
  return 0;
}

int cmd_recover(int degree, const std::string& charts_arg,
                const std::string& json_path, std::ostream& out) {
  std::vector<Chart> charts;
  std::stringstream ss(charts_arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = strip(tok);
    if (tok == "1" || tok == "2" || tok == "3") tok = "m" + tok;
    charts.push_back(build_chart(tok));
  }
  RecoverResult R = recover_hamiltonian(charts, build_ansatz(degree));
  out << "unknowns " << R.unknowns << ", equations " << R.equations
      << ", rank " << R.rank << ", solution dimension " << R.basis.size()
      << "\n";
  out << "particular: " << print_poly(R.particular) << "\n";
  for (size_t i = 0; i < R.basis.size(); i++)
    out << "free direction " << i << ": " << print_poly(R.basis[i]) << "\n";
  bool matches = R.particular == build_system("main").H.num;
  out << "particular matches the catalog Hamiltonian: "
      << (matches ? "yes" : "no") << "\n";
  if (!json_path.empty()) {
    nlohmann::json j{{"unknowns", R.unknowns},
                     {"equations", R.equations},
                     {"rank", R.rank},
                     {"dimension", R.basis.size()},
                     {"particular", print_poly(R.particular)},
                     {"matches_catalog", matches}};
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& b : R.basis) basis.push_back(print_poly(b));
    j["basis"] = basis;
    std::ofstream f(json_path);
    f << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_catalog(std::ostream& out) {
  out << "systems:\n";
  for (const auto& id : catalog_ids()) {
    HamSystem S = build_system(id);
    out << "  " << std::left << std::setw(8) << id << " phase (";
    for (size_t i = 0; i < S.phase.size(); i++)
      out << (i ? "," : "") << var_name(S.phase[i]);
    out << "), time " << var_name(S.time_var) << ", "
        << (S.has_hamiltonian ? "hamiltonian" : "rhs only") << "\n";
  }
  out << "maps:\n ";
  for (const auto& id : map_ids()) out << " " << id;
  out << "\ncharts:\n ";
  for (const auto& id : chart_ids()) out << " " << id;
  out << "\nverify suites:\n  all";
  for (const auto& id : verify_suites()) out << " " << id;
  out << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact and numerical toolkit for the coupled Painleve systems"};
  app.set_config("--config");
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run exact residual checks");
  std::string suite = "all", verify_json;
  verify->add_option("--suite", suite, "all, symmetry, holomorphy, structures, two-time")
      ->check(CLI::IsMember({"all", "symmetry", "holomorphy", "structures",
                             "two-time"}));
  verify->add_option("--json", verify_json, "write the report array here");

  auto* integ = app.add_subcommand("integrate", "integrate a catalog system");
  IntegrateArgs ia;
  integ->add_option("--system", ia.system, "catalog system id")
      ->check(CLI::IsMember(catalog_ids()));
  integ->add_option("--alpha1", ia.alpha1,
                    "alpha1 (relation-free systems only)");
  integ->add_option("--alpha2", ia.alpha2, "alpha2 as an exact rational");
  integ->add_option("--alpha3", ia.alpha3, "alpha3 as an exact rational");
  integ->add_option("--init", ia.init, "e.g. \"x=0,y=1,z=0,w=1\"")->required();
  integ->add_option("--path", ia.path, "polyline, e.g. \"0 -> 3+2i\"")
      ->required();
  integ->add_option("--tol", ia.tol, "local error target");
  integ->add_option("--max-step", ia.max_step, "step-size cap");
  integ->add_option("--sample-dt", ia.sample_dt,
                    "force samples onto this grid");
  integ->add_flag("--chart-switch", ia.chart_switch,
                  "continue through poles with the system's atlas");
  integ->add_option("--threshold", ia.threshold,
                    "coordinate magnitude that triggers a chart switch");
  integ->add_option("--const", ia.consts,
                    "bind a coupling constant, e.g. a=-3 (repeatable)");
  integ->add_option("--json", ia.json_path, "write JSON-lines samples here");

  auto* recover = app.add_subcommand("recover",
                                     "solve for Hamiltonians polynomial in "
                                     "the given charts");
  int degree = 5;
  std::string charts_arg = "1,2,3", recover_json;
  recover->add_option("--degree", degree, "ansatz phase degree")
      ->check(CLI::PositiveNumber);
  recover->add_option("--charts", charts_arg, "comma list: 1,2,3 or names");
  recover->add_option("--json", recover_json, "write the summary here");

  auto* catalog = app.add_subcommand("catalog", "list systems, maps, charts");

  std::vector<const char*> argv{"pain2"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(suite, verify_json, out);
    ia.alpha1_given = integ->count("--alpha1") > 0;
    if (integ->parsed()) return cmd_integrate(ia, out);
    if (recover->parsed())
      return cmd_recover(degree, charts_arg, recover_json, out);
    if (catalog->parsed()) return cmd_catalog(out);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << " (offset " << e.offset << ")\n";
    return 2;
  } catch (const math_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace pain2
