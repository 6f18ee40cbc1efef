// pvakit: command-line front end for sessions and the shipped fixtures.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pvakit/catalog.hpp"
#include "pvakit/defo.hpp"
#include "pvakit/errors.hpp"
#include "pvakit/parallel.hpp"
#include "pvakit/sampling.hpp"
#include "pvakit/session.hpp"

using namespace pvakit;
using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

struct Item {
  std::string name;
  bool pass = true;
  std::vector<std::string> details;  // residuals or rendered lines
};

struct Report {
  std::string command;
  std::uint64_t seed = kDefaultSeed;
  std::vector<Item> items;
  std::vector<std::string> lines;  // free output (conditions, tables)
  std::optional<double> seconds;

  bool pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

void print_text(const Report& r) {
  std::cout << "# " << r.command << "\n# seed " << r.seed << "\n";
  for (const auto& l : r.lines) std::cout << l << "\n";
  for (const auto& it : r.items) {
    std::cout << (it.pass ? "PASS " : "FAIL ") << it.name << "\n";
    for (const auto& d : it.details) std::cout << "  " << d << "\n";
  }
  if (r.seconds) std::cout << "# time " << *r.seconds << " s\n";
}

void print_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["lines"] = r.lines;
  json items = json::array();
  for (const auto& it : r.items) items.push_back({{"name", it.name}, {"pass", it.pass}, {"details", it.details}});
  j["items"] = items;
  j["pass"] = r.pass();
  if (r.seconds) j["seconds"] = *r.seconds;
  std::cout << j.dump(2) << "\n";
}

struct Options {
  std::uint64_t seed = kDefaultSeed;
  int samples = 50;
  int jet_order = 3;
  bool json = false;
  bool timing = false;
};

SamplingOptions sampling(const Options& o) {
  SamplingOptions s;
  s.seed = o.seed;
  s.samples = o.samples;
  return s;
}

const GeneratorBracket& find_bracket(const Session& s, const std::string& name) {
  auto it = s.brackets.find(name);
  if (it == s.brackets.end()) throw Error("no bracket named '" + name + "'");
  return it->second;
}

std::optional<NormalForm> catalog_entry(const GeneratorBracket& b) {
  if (!(b.dims() == Dims{2, 2})) return std::nullopt;
  for (auto w : {NormalForm::P1, NormalForm::P2, NormalForm::LP})
    if (b == normal_form(w)) return w;
  return std::nullopt;
}

// Entries are indexed row-major by `arity` generator indices.
void add_residuals(Item& it, const std::vector<LambdaPoly>& entries, const Names& nm, const std::string& prefix, int n,
                   int arity) {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].is_zero()) continue;
    it.pass = false;
    std::string idx;
    std::size_t r = k;
    for (int a = 0; a < arity; ++a) {
      idx = std::to_string(r % static_cast<std::size_t>(n) + 1) + (a ? " " : "") + idx;
      r /= static_cast<std::size_t>(n);
    }
    it.details.push_back(prefix + "(" + idx + ") = " + to_text(entries[k], nm));
  }
}

Report cmd_check(const Session& s, const std::string& bracket, bool skew, bool jacobi) {
  Report r;
  const GeneratorBracket& b = find_bracket(s, bracket);
  if (!skew && !jacobi) skew = jacobi = true;
  if (skew) {
    Item it{"skew " + bracket};
    add_residuals(it, skew_residual(b), s.names, "skew", s.dims.n, 2);
    r.items.push_back(it);
  }
  if (jacobi) {
    Item it{"jacobi " + bracket};
    if (!is_skew(b)) {
      it.pass = false;
      it.details.push_back("not skewsymmetric");
    } else {
      add_residuals(it, jacobi_residual(b), s.names, "jacobi", s.dims.n, 3);
    }
    r.items.push_back(it);
  }
  return r;
}

enum class Rendering { Text, Latex, Sexpr };

void render_system(Report& r, const ConditionSystem& sys, const Names& nm, Rendering how) {
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const ScalarExpr& e = sys.equations()[k];
    const std::string& label = sys.labels()[k];
    std::string num = std::to_string(k + 1);
    switch (how) {
      case Rendering::Text:
        r.lines.push_back(num + ". [" + label + "] " + to_text(e, nm) + " = 0");
        break;
      case Rendering::Latex:
        r.lines.push_back("% " + num + " " + label);
        r.lines.push_back("\\begin{equation}" + to_latex(e, nm) + " = 0\\end{equation}");
        break;
      case Rendering::Sexpr:
        r.lines.push_back("(eq " + num + " \"" + label + "\" " + to_sexpr(e, nm) + ")");
        break;
    }
  }
}

Report cmd_conditions(const Session& s, const std::string& target, const std::string& name, Rendering how,
                      const std::string& against, bool alternates, const Options& o) {
  Report r;
  ConditionSystem sys;
  bool polynomial = false;
  if (target == "mokhov") {
    if (auto h = s.hydros.find(name); h != s.hydros.end()) {
      sys = mokhov_conditions(h->second);
    } else {
      auto h2 = as_hydro(find_bracket(s, name));
      if (!h2) throw Unsupported("'" + name + "' is not hydrodynamic");
      sys = mokhov_conditions(*h2);
    }
    polynomial = true;
  } else if (target == "symmetry") {
    sys = symmetry_conditions(find_bracket(s, name));
  } else if (target == "defo-skew") {
    sys = skew_deformation_conditions(DeformationAnsatz(s.dims));
  } else if (target == "defo-jacobi") {
    auto w = catalog_entry(find_bracket(s, name));
    if (!w) throw Unsupported("defo-jacobi needs a catalog bracket P1, P2 or LP with d=n=2");
    DeformationReduction red = first_order_jacobi_conditions(*w);
    for (const auto& t : red.elimination.order)
      r.lines.push_back("solved " + t + " = " + to_text(red.elimination.solved.at(t), s.names));
    std::string free = "free";
    for (const auto& f : red.free_functions) free += " " + f;
    r.lines.push_back(free);
    sys = red.elimination.residual;
  } else {
    throw Unsupported("unknown target '" + target + "'");
  }
  render_system(r, sys, s.names, how);
  if (!against.empty()) {
    auto it = s.systems.find(against);
    if (it == s.systems.end()) throw Error("no system named '" + against + "'");
    std::map<std::string, int> pick;
    if (alternates)
      for (const auto& e : it->second.eqs)
        if (!e.alternates.empty()) pick[e.label] = 1;
    ConditionSystem ref = it->second.system(pick);
    Item item{"equivalent to " + against};
    if (polynomial) {
      SpanReport rep = compare_polynomial_spans(sys, ref, s.dims.n, 1, sampling(o));
      item.pass = rep.pass();
      for (const auto& m : rep.missing_in_right) item.details.push_back("generated " + m + " not implied");
      for (const auto& m : rep.missing_in_left) item.details.push_back(against + " " + m + " not implied");
    } else {
      EquivalenceReport rep = compare_linear_systems(sys, ref, s.dims.n, sampling(o));
      item.pass = rep.pass();
      for (const auto& m : rep.missing_in_right) item.details.push_back("generated " + m + " not implied");
      for (const auto& m : rep.missing_in_left) item.details.push_back(against + " " + m + " not implied");
    }
    r.items.push_back(item);
  }
  return r;
}

Report cmd_verify(const Session& s, const std::string& system, const std::string& assignment, bool alternates,
                  const std::vector<std::string>& eliminate_names, const Options& o) {
  Report r;
  auto si = s.systems.find(system);
  if (si == s.systems.end()) throw Error("no system named '" + system + "'");
  auto ai = s.assignments.find(assignment);
  if (ai == s.assignments.end()) throw Error("no assignment named '" + assignment + "'");
  std::map<std::string, int> spick, apick;
  if (alternates) {
    for (const auto& e : si->second.eqs)
      if (!e.alternates.empty()) spick[e.label] = 1;
    for (const auto& [k, v] : ai->second.alternates) apick[k] = 1;
  }
  ConditionSystem sys = si->second.system(spick);
  auto table = ai->second.pick(apick);
  if (eliminate_names.empty()) {
    VerifyReport v = verify_assignment(sys, table);
    for (std::size_t k = 0; k < sys.size(); ++k) {
      Item it{sys.labels()[k]};
      if (!v.residuals[k].is_zero()) {
        it.pass = false;
        it.details.push_back(to_text(v.residuals[k], s.names));
      }
      r.items.push_back(it);
    }
    return r;
  }
  // Solvability for the eliminated functions: every compatibility condition
  // must vanish on the assignment.
  std::set<std::string> elim(eliminate_names.begin(), eliminate_names.end());
  SamplePoint at{o.seed};
  auto conds = compatibility_conditions(sys, elim, s.dims.n, o.jet_order, at);
  Item it{"solvable for"};
  for (const auto& e : eliminate_names) it.name += " " + e;
  std::size_t bad = 0;
  for (const auto& c : conds)
    if (apply(c, table, at) != 0) ++bad;
  it.pass = bad == 0;
  it.details.push_back(std::to_string(conds.size()) + " compatibility conditions at jet order " +
                       std::to_string(o.jet_order) + ", " + std::to_string(bad) + " violated");
  r.items.push_back(it);
  return r;
}

Report cmd_miura(const Session& s, const std::string& bracket, const std::string& miura) {
  Report r;
  const GeneratorBracket& b = find_bracket(s, bracket);
  auto mi = s.miuras.find(miura);
  if (mi == s.miuras.end()) throw Error("no miura map named '" + miura + "'");
  GeneratorBracket b1 = miura_pushforward_first_order(mi->second, b);
  int n = s.dims.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!b1(i, j).is_zero())
        r.lines.push_back("e1 " + std::to_string(i + 1) + " " + std::to_string(j + 1) + " = " + to_text(b1(i, j), s.names));
  if (s.dims == Dims{2, 2}) {
    for (const auto& [k, v] : extract_tilde(b1))
      if (!v.is_zero()) r.lines.push_back(k + " = " + to_text(v, s.names));
  }
  Item sk{"skew e1"};
  add_residuals(sk, skew_residual(b1), s.names, "skew", n, 2);
  r.items.push_back(sk);
  Item jc{"first-order jacobi"};
  add_residuals(jc, first_order_jacobi_residual(b, b1), s.names, "jacobi", n, 3);
  r.items.push_back(jc);
  return r;
}

Report cmd_fixtures_list() {
  Report r;
  for (const auto& path : fixture_files()) {
    Session s = load_session(path);
    r.lines.push_back(std::filesystem::path(path).filename().string());
    for (const auto& [kind, name] : s.declared) r.lines.push_back("  " + kind + " " + name);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks and condition generators for Poisson vertex algebras"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "Seed for all randomized sampling")->default_val(kDefaultSeed);
  app.add_option("--samples", o.samples, "Sample points for equivalence tests")->default_val(50);
  app.add_option("--jet-order", o.jet_order, "Jet order for compatibility conditions")->default_val(3);
  app.add_flag("--json", o.json, "Machine-readable report");
  app.add_flag("--timing", o.timing, "Report wall time");

  std::string file, bracket, target, name, system, assignment, miura, against;
  bool skew = false, jacobi = false, latex = false, sexpr = false, alternates = false;
  std::vector<std::string> eliminate_names;

  auto* check = app.add_subcommand("check", "Skew and Jacobi residuals of a bracket");
  check->add_option("file", file)->required();
  check->add_option("bracket", bracket)->required();
  check->add_flag("--skew", skew);
  check->add_flag("--jacobi", jacobi);

  auto* conditions = app.add_subcommand("conditions", "Generate a condition system");
  conditions->add_option("target", target)->required()->check(CLI::IsMember({"mokhov", "symmetry", "defo-skew", "defo-jacobi"}));
  conditions->add_option("file", file)->required();
  conditions->add_option("name", name, "Bracket or hydro declaration");
  auto* lx = conditions->add_flag("--latex", latex);
  conditions->add_flag("--sexpr", sexpr)->excludes(lx);
  conditions->add_option("--against", against, "Compare with a system of the file by sampling");
  conditions->add_flag("--alt", alternates, "Use the alternative readings of the reference system");

  auto* verify = app.add_subcommand("verify", "Substitute an assignment into a system");
  verify->add_option("file", file)->required();
  verify->add_option("system", system)->required();
  verify->add_option("assignment", assignment)->required();
  verify->add_flag("--alt", alternates, "Use the alternative readings");
  verify->add_option("--eliminate", eliminate_names, "Check solvability for these unknown functions instead");

  auto* miura_cmd = app.add_subcommand("miura", "First-order Miura pushforward of a hydrodynamic bracket");
  miura_cmd->add_option("file", file)->required();
  miura_cmd->add_option("bracket", bracket)->required();
  miura_cmd->add_option("miura", miura)->required();

  auto* fixtures = app.add_subcommand("fixtures", "Shipped fixture files");
  fixtures->require_subcommand(1);
  auto* fixtures_list = fixtures->add_subcommand("list", "List fixture files and their declarations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ostringstream echo;
  echo << "pvakit";
  for (int k = 1; k < argc; ++k) echo << " " << argv[k];

  auto start = std::chrono::steady_clock::now();
  Report r;
  try {
    if (check->parsed()) {
      r = cmd_check(load_session(file), bracket, skew, jacobi);
    } else if (conditions->parsed()) {
      Rendering how = latex ? Rendering::Latex : sexpr ? Rendering::Sexpr : Rendering::Text;
      if (name.empty() && target != "defo-skew") throw Unsupported(target + " needs a bracket name");
      r = cmd_conditions(load_session(file), target, name, how, against, alternates, o);
    } else if (verify->parsed()) {
      r = cmd_verify(load_session(file), system, assignment, alternates, eliminate_names, o);
    } else if (miura_cmd->parsed()) {
      r = cmd_miura(load_session(file), bracket, miura);
    } else if (fixtures_list->parsed()) {
      r = cmd_fixtures_list();
    }
  } catch (const ParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  r.command = echo.str();
  r.seed = o.seed;
  if (o.timing)
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.json)
    print_json(r);
  else
    print_text(r);
  return r.pass() ? 0 : 1;
}
