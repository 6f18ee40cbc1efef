#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pvakit/catalog.hpp"
#include "pvakit/defo.hpp"
#include "pvakit/parse.hpp"

namespace pvakit {

// One equation of a transcribed system, with optional alternative readings.
struct FixtureEquation {
  std::string label;
  ScalarExpr eq;
  std::vector<ScalarExpr> alternates;
  int line = 0;
};

struct FixtureSystem {
  std::vector<FixtureEquation> eqs;
  // Reading `pick[label]` (0 = primary) for labels listed; primary elsewhere.
  ConditionSystem system(const std::map<std::string, int>& pick = {}) const;
};

struct FixtureAssignment {
  std::map<std::string, ScalarExpr> values;
  std::map<std::string, std::vector<ScalarExpr>> alternates;
  std::vector<std::string> order;
  std::set<std::string> flagged;  // entries known to disagree with the source
  std::map<std::string, ScalarExpr> pick(const std::map<std::string, int>& choice = {}) const;
};

// Text format, one declaration per block:
//   dims d n / generators p q / constants K
//   bracket NAME [catalog P1|P2|LP | ansatz | tilde] ... i j = expr ... end
//   vf NAME [generic] ... i = expr ... end
//   miura NAME [generic] ... a l i = expr ... end
//   hydro NAME [generic] ... g i j a = expr / b i j a k = expr ... end
//   hamiltonian NAME = expr
//   system NAME ... [label:] lhs [= rhs] / alt [label:] ... ... end
//   assignment NAME ... f = expr / alt f = expr / flagged f g ... end
// Indices are 1-based; '#' starts a comment; a trailing '\' continues a line.
struct Session {
  Dims dims{1, 1};
  Names names;
  std::set<std::string> constants;
  std::map<std::string, GeneratorBracket> brackets;
  std::map<std::string, EvolutionaryVF> vfs;
  std::map<std::string, MiuraFirstOrder> miuras;
  std::map<std::string, DiffPoly> hamiltonians;
  std::map<std::string, HydroData> hydros;
  std::map<std::string, FixtureSystem> systems;
  std::map<std::string, FixtureAssignment> assignments;
  std::vector<std::pair<std::string, std::string>> declared;  // (kind, name) in file order

  ParseContext context() const;
};

// Throws ParseError (with file line and column) or DimensionMismatch.
Session parse_session(const std::string& text);
Session load_session(const std::string& path);
// Canonical rendering; parse_session(write_session(s)) reproduces s.
std::string write_session(const Session& s);

// Shipped fixture files.
std::string fixture_dir();
std::vector<std::string> fixture_files();

}  // namespace pvakit
