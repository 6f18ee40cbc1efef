// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>

#include "gen.hpp"
#include "oracles.hpp"
#include "pvakit/bracket.hpp"
#include "pvakit/catalog.hpp"
#include "pvakit/defo.hpp"
#include "pvakit/errors.hpp"
#include "pvakit/sampling.hpp"
#include "pvakit/session.hpp"
#include "pvakit/tables.hpp"
#include "pvakit/text.hpp"

using namespace pvakit;

namespace {

const Dims kD2{2, 2};
constexpr int kSamples = 50;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

SamplingOptions samples(int k = kSamples) {
  SamplingOptions o;
  o.samples = k;
  return o;
}

const Session& fixture(const std::string& name) {
  static std::map<std::string, Session> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, load_session(fixture_dir() + "/" + name + ".pva")).first;
  return it->second;
}

const DeformationReduction& reduction(NormalForm w) {
  static std::map<NormalForm, DeformationReduction> cache;
  auto it = cache.find(w);
  if (it == cache.end()) it = cache.emplace(w, first_order_jacobi_conditions(w)).first;
  return it->second;
}

template <class T>
std::map<std::string, int> all_alternates(const T& x) {
  std::map<std::string, int> pick;
  if constexpr (std::is_same_v<T, FixtureSystem>) {
    for (const auto& e : x.eqs)
      if (!e.alternates.empty()) pick[e.label] = 1;
  } else {
    for (const auto& [k, v] : x.alternates) pick[k] = 1;
  }
  return pick;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

const std::vector<std::pair<std::string, NormalForm>> kCatalog = {
    {"p1", NormalForm::P1}, {"p2", NormalForm::P2}, {"lp", NormalForm::LP}};

EvolutionaryVF vf_from(const std::map<std::string, ScalarExpr>& table) {
  return first_order_vf(kD2, [&](int a, int b, int i) {
    auto it = table.find(vf_name(a, b, i));
    return it == table.end() ? ScalarExpr() : it->second;
  });
}

// ---------------------------------------------------------------- criteria

LambdaPoly lam(Dims dm, int a, int power = 1) {
  MultiIndex m;
  m.set(a, static_cast<std::uint8_t>(power));
  return LambdaPoly::monomial(dm, m);
}
DiffPoly num(Dims dm, long k) { return DiffPoly(dm, ScalarExpr(k)); }

Outcome kdv() {
  Outcome o;
  Dims dm{1, 1};
  DiffPoly u = DiffPoly::generator(dm, 0);
  DiffPoly v = u * u + ScalarExpr::i() * DiffPoly::jet(dm, 0, {1});
  GeneratorBracket gzf(dm);
  gzf.set(0, 0, lam(dm, 0));
  LambdaPoly got = master_bracket(v, v, gzf);
  LambdaPoly want = lam(dm, 0, 3) + num(dm, 4) * v * lam(dm, 0) + LambdaPoly(num(dm, 2) * total_derivative(v, 0));
  o.require(got == want, "{v_λ v} = λ³ + 4vλ + 2∂v, got " + to_text(got.coefficient({})) + " + ...");
  return o;
}

Outcome catalog_validity() {
  Outcome o;
  for (auto [name, w] : kCatalog) {
    GeneratorBracket b = normal_form(w);
    o.require(all_zero(skew_residual(b)), name + " skew");
    o.require(all_zero(jacobi_residual(b)), name + " jacobi");
  }
  GeneratorBracket lp3 = normal_form(NormalForm::LP, {3, 3});
  o.require(all_zero(skew_residual(lp3)), "lp d=n=3 skew");
  o.require(all_zero(jacobi_residual(lp3)), "lp d=n=3 jacobi");
  return o;
}

Outcome mokhov() {
  Outcome o;
  HydroData h = generic_hydro(kD2);
  ConditionSystem gen = mokhov_conditions(h), skew;
  for (std::size_t k = 0; k < gen.size(); ++k)
    if (gen.labels()[k].rfind("skew", 0) == 0) skew.add_raw(gen.equations()[k], gen.labels()[k]);
  auto r = compare_linear_systems(skew, oracle::mokhov_skew(h), 2, samples());
  o.require(r.missing_in_right.empty(), "generated skew conditions implied by M1-M2");
  o.require(r.missing_in_left.empty(), "M1-M2 implied by generated skew conditions");
  HydroData hs = oracle::skew_solved_hydro(kD2);
  SpanReport s = compare_polynomial_spans(mokhov_conditions(hs), oracle::mokhov_jacobi(hs), 2, 1, samples());
  o.require(s.missing_in_right.empty(), "generated Jacobi conditions in span of M3-M7 (" + join(s.missing_in_right) + ")");
  o.require(s.missing_in_left.empty(), "M3-M7 in span of generated Jacobi conditions (" + join(s.missing_in_left) + ")");
  o.note(std::to_string(gen.size()) + " generated conditions; Jacobi span rank " + std::to_string(s.rank_left) + "/" +
         std::to_string(s.rank_right) + " at " + std::to_string(s.points) + " points");
  return o;
}

Outcome counts() {
  Outcome o;
  DeformationAnsatz ans(kD2);
  Elimination el = eliminate(skew_deformation_conditions(ans), ans.unknowns());
  o.require(ans.unknowns().size() == 108, "108 ansatz functions");
  o.require(el.unsolved.size() == 43 && el.residual.empty(), "43 after skew solving");
  std::string per;
  for (auto [name, w] : kCatalog) {
    auto n = reduction(w).free_functions.size();
    o.require(n == 9, name + " has 9 free functions");
    per += " " + name + ":" + std::to_string(n);
  }
  o.note(std::to_string(ans.unknowns().size()) + " -> " + std::to_string(el.unsolved.size()) + " ->" + per);
  return o;
}

Outcome solved_tables() {
  Outcome o;
  for (auto [name, w] : kCatalog) {
    const auto& fa = fixture(name).assignments.at("solved");
    const auto& solved = reduction(w).elimination.solved;
    ConditionSystem residual = fixture(name).systems.at("residual").system();
    auto table = fa.pick(all_alternates(fa));
    auto cmp = compare_table(solved, table, residual, 2, samples(3));
    std::vector<std::string> wrong, missing;
    for (const auto& c : cmp) {
      if (c.agreement == Agreement::Missing) {
        missing.push_back(c.name);
        continue;
      }
      bool ok = c.agreement == Agreement::Exact || c.agreement == Agreement::ModuloResidual;
      if (ok == (fa.flagged.count(c.name) > 0)) wrong.push_back(c.name);
    }
    o.require(wrong.empty(), name + " entries disagreeing with the flag list: " + join(wrong));
    // Substituted into the whole first-order Jacobi system.
    std::size_t printed_bad = 0;
    for (const auto& c : substitute_table(reduction(w).full, close_table(table), residual, 2, samples(3)))
      if (c.agreement == Agreement::Mismatch) ++printed_bad;
    // With flagged and unlisted entries taken from the engine nothing may remain.
    auto repaired = table;
    for (const auto& f : fa.flagged) repaired[f] = solved.at(f);
    for (const auto& f : missing) repaired[f] = solved.at(f);
    std::vector<std::string> left;
    auto checks = substitute_table(reduction(w).full, close_table(repaired), residual, 2, samples(3));
    for (const auto& c : checks)
      if (c.agreement == Agreement::Mismatch) left.push_back(c.label);
    o.require(left.empty(), name + " nonzero residuals not caused by flagged entries: " + join(left));
    if (fa.flagged.empty() && missing.empty())
      o.require(printed_bad == 0, name + " table leaves " + std::to_string(printed_bad) + " nonzero residuals");
    std::string flagged;
    for (const auto& f : fa.flagged) flagged += " " + f;
    o.note(name + ": " + std::to_string(checks.size()) + " equations, " + std::to_string(printed_bad) +
           " nonzero with the fixture table" + (flagged.empty() ? "" : "; flagged" + flagged) +
           (missing.empty() ? "" : "; unlisted " + join(missing)));
  }
  return o;
}

Outcome reduced_systems() {
  Outcome o;
  for (auto [name, w] : kCatalog) {
    auto r = compare_linear_systems(reduction(w).elimination.residual, fixture(name).systems.at("residual").system(), 2,
                                    samples());
    o.require(r.pass(), name + " residual system (" + join(r.missing_in_right) + " | " + join(r.missing_in_left) + ")");
  }
  const auto& fx = fixture("lp").systems.at("symmetry");
  ConditionSystem gen = symmetry_conditions(normal_form(NormalForm::LP));
  auto r = compare_linear_systems(gen, fx.system(all_alternates(fx)), 2, samples());
  o.require(r.pass(), "lp symmetry system (" + join(r.missing_in_right) + " | " + join(r.missing_in_left) + ")");
  auto printed = compare_linear_systems(gen, fx.system(), 2, samples(3));
  o.require(printed.missing_in_left == std::vector<std::string>{"d1", "d6"},
            "printed lp equations outside the generated system are exactly d1, d6 (got " +
                join(printed.missing_in_left) + ")");
  o.note("lp symmetry uses the alternative readings of d1, d6; printed readings fail there only");
  return o;
}

Outcome miura() {
  Outcome o;
  for (auto [name, w] : kCatalog) {
    GeneratorBracket b0 = normal_form(w);
    GeneratorBracket b1 = miura_pushforward_first_order(generic_miura(kD2), b0);
    auto got = extract_tilde(b1);
    const auto& fa = fixture(name).assignments.at("miura");
    std::vector<std::string> diff;
    for (const auto& [k, v] : fa.pick(all_alternates(fa)))
      if (got.at(k) != v) diff.push_back(k);
    o.require(diff.empty(), name + " (a) tilde table: " + join(diff));
    o.require(is_skew(b1), name + " (b) skew");
    o.require(all_zero(first_order_jacobi_residual(b0, b1)), name + " (b) first-order jacobi");
    ConditionSystem fsys;
    for (const auto& k : retained_tildes(w)) fsys.add_raw(ScalarExpr::function(k) - got.at(k), k);
    std::set<std::string> elim;
    for (int a = 0; a < 2; ++a)
      for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i) elim.insert(miura_name(a, l, i));
    auto c = compare_compatibility(fsys, elim, fixture(name).systems.at("residual").system(), 2, 3, samples());
    o.require(c.implied_by_fixture, name + " (c) compatibility conditions vanish modulo the residual system");
    o.require(c.implies_fixture, name + " (c) residual system implied by the compatibility conditions");
    o.note(name + ": " + std::to_string(c.conditions) + " compatibility conditions at jet order 3");
    if (!fa.alternates.empty()) {
      std::vector<std::string> alts;
      for (const auto& [k, v] : fa.alternates) alts.push_back(k);
      o.note(name + " alternative readings: " + join(alts));
    }
  }
  return o;
}

Outcome cohomology() {
  Outcome o;
  auto p1 = fixture("p1").assignments.at("symmetry_family").pick();
  auto p2 = fixture("p2").assignments.at("symmetry_family").pick();
  o.require(all_zero(symmetry_residual(vf_from(p1), normal_form(NormalForm::P1))), "(a) P1 family is a symmetry");
  o.require(all_zero(symmetry_residual(vf_from(p2), normal_form(NormalForm::P2))), "(b) P2 family is a symmetry");
  for (auto [name, family] : {std::pair{"p1", p1}, std::pair{"p2", p2}}) {
    ConditionSystem eqs = fixture(name).systems.at("hamiltonian_vf_equations").system();
    for (std::uint64_t seed : {12345u, 777u}) {
      SamplePoint at{seed};
      auto conds = compatibility_conditions(eqs, {"h"}, 2, 3, at);
      for (auto [c1, c2] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}, std::pair{2, -3}}) {
        std::map<std::string, ScalarExpr> table;
        for (const auto& [k, v] : family)
          table[k] = substitute(v, [&](const Atom& a) -> std::optional<ScalarExpr> {
            if (a.kind != AtomKind::Constant) return std::nullopt;
            return ScalarExpr(a.name == "c1" ? c1 : c2);
          });
        bool solvable = true;
        for (const auto& c : conds)
          if (apply(c, table, at) != 0) solvable = false;
        std::string tag = std::string(name) + " c=(" + std::to_string(c1) + "," + std::to_string(c2) + ")";
        if (c1 == 0 && c2 == 0)
          o.require(solvable, "(c) " + tag + " is Hamiltonian");
        else
          o.require(!solvable, "(c) " + tag + " fails Hamiltonian solvability");
      }
    }
  }
  const Session& s = fixture("lp");
  const auto& fa = s.assignments.at("hamiltonian_vf");
  ConditionSystem alg;
  for (const auto& e : s.systems.at("symmetry").eqs)
    if (e.label.rfind("alg", 0) == 0) alg.add_raw(e.eq, e.label);
  Elimination el = eliminate(alg, {"A21_1", "A12_2", "A21_2"});
  ConditionSystem sym = symmetry_conditions(normal_form(NormalForm::LP));
  auto table = fa.pick(all_alternates(fa));
  for (const auto& [k, v] : el.solved) table[k] = substitute_functions(v, table);
  o.require(verify_assignment(sym, table).pass(), "(d) LP Hamiltonian field satisfies the symmetry system");
  auto printed = fa.pick();
  for (const auto& [k, v] : el.solved) printed[k] = substitute_functions(v, printed);
  o.require(!verify_assignment(sym, printed).pass(), "(d) printed A22_2 is rejected");
  DiffPoly h(kD2, ScalarExpr::function("h"));
  o.require(hamiltonian_symmetry_residual(normal_form(NormalForm::LP)).size() == 4 &&
                all_zero(hamiltonian_symmetry_residual(normal_form(NormalForm::LP))),
            "(d) symbolic LP Hamiltonian field is a symmetry");
  o.note("(d) uses A22_2 with p*h_pq; the printed h_pq is rejected");
  return o;
}

Outcome virasoro() {
  Outcome o;
  ScalarDeformationReport r = virasoro_scalar_check();
  o.require(r.forces_zero, "deformation forced to zero");
  o.note("solved in order " + join(r.elimination.order));
  return o;
}

Outcome axioms() {
  Outcome o;
  constexpr int kCases = 100;
  for (auto [name, w] : kCatalog) {
    GeneratorBracket b = normal_form(w);
    auto start = std::chrono::steady_clock::now();
    Dims dm = b.dims();
    testgen::Gen g(1000 + static_cast<std::uint64_t>(w));
    int bad[5] = {0, 0, 0, 0, 0};
    for (int t = 0; t < kCases; ++t) {
      DiffPoly f = g.diff_poly(dm, 2, 2), x = g.diff_poly(dm, 2, 2), y = g.diff_poly(dm, 2, 2);
      LambdaPoly fx = master_bracket(f, x, b);
      bool sesq = true;
      for (int a = 0; a < dm.d; ++a)
        sesq = sesq && master_bracket(total_derivative(f, a), x, b) == -(fx * lam(dm, a)) &&
               master_bracket(f, total_derivative(x, a), b) == fx * lam(dm, a) + total_derivative(fx, MultiIndex::unit(a));
      if (!sesq) ++bad[0];
      if (master_bracket(f, x * y, b) != y * fx + x * master_bracket(f, y, b)) ++bad[1];
      if (master_bracket(x * y, f, b) != shifted_apply(master_bracket(x, f, b), y) + shifted_apply(master_bracket(y, f, b), x))
        ++bad[2];
      if (!(fx + arrow_negate(master_bracket(x, f, b))).is_zero()) ++bad[3];
      if (!jacobi_combination(f, x, y, b, b).is_zero()) ++bad[4];
    }
    const char* what[5] = {"sesquilinearity", "right Leibniz", "left Leibniz", "skew lifting", "Jacobi lifting"};
    for (int k = 0; k < 5; ++k)
      o.require(bad[k] == 0, name + " " + what[k] + ": " + std::to_string(bad[k]) + "/" + std::to_string(kCases));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s: %d cases, %.1f s", name.c_str(), kCases,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    o.note(buf);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> run;
    double budget;  // seconds
  };
  std::vector<Criterion> all = {
      {1, "KdV master bracket", kdv, 1},
      {2, "catalog skew and Jacobi residuals vanish", catalog_validity, 30},
      {3, "Mokhov conditions match M1-M7", mokhov, 300},
      {4, "free-function counts 108, 43, 9", counts, 0},
      {5, "solved tables give zero residuals", solved_tables, 0},
      {6, "reduced systems match the transcribed ones", reduced_systems, 0},
      {7, "Miura pushforwards are trivial deformations", miura, 900},
      {8, "symmetry and Hamiltonian checks", cohomology, 0},
      {9, "scalar deformation is forced to zero", virasoro, 0},
      {10, "axiom property suites", axioms, 0},
  };
  bool ok = true;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0 && secs > c.budget) {
      o.pass = false;
      o.notes.push_back("over the " + std::to_string(static_cast<int>(c.budget)) + " s budget");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << buf << ")\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
