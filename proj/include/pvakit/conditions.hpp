#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pvakit/lambda_poly.hpp"
#include "pvakit/scalar_expr.hpp"

namespace pvakit {

// Numerator of e scaled to leading coefficient +1; zero stays zero.
ScalarExpr canonical_condition(const ScalarExpr& e);

// Finite set of equations e = 0, canonicalized and deduplicated, in
// insertion order.
class ConditionSystem {
 public:
  // Returns false if the equation was zero or a duplicate.
  bool add(const ScalarExpr& e, const std::string& label = {});
  // Adds without canonicalization (fixtures keep their printed form).
  void add_raw(const ScalarExpr& e, const std::string& label = {});
  void merge(const ConditionSystem& o);

  std::size_t size() const { return eqs_.size(); }
  bool empty() const { return eqs_.empty(); }
  const std::vector<ScalarExpr>& equations() const { return eqs_; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Names of the unknown functions appearing in the equations.
  std::set<std::string> unknowns() const;

 private:
  std::vector<ScalarExpr> eqs_;
  std::vector<std::string> labels_;
  std::set<ScalarExpr> seen_;
};

// Adds every (λ, μ, jet-monomial) coefficient of the entries. The label of a
// condition is "<prefix>(<entry index>) <bucket>".
void collect_conditions(ConditionSystem& sys, const std::vector<LambdaPoly>& entries, const std::string& prefix,
                        const std::vector<std::string>& entry_names = {});

std::set<std::string> function_names(const ScalarExpr& e);

// Linear elimination of unknown functions. A target is solved from an
// equation where it occurs linearly, underived, with a coefficient free of
// unknown functions, and none of its derivatives occur. Equations free of
// derivatives of any unsolved target are used first; ties go to the earlier
// target in the list.
struct Elimination {
  std::map<std::string, ScalarExpr> solved;  // in terms of the remaining unknowns
  std::vector<std::string> order;            // order of solving
  std::vector<std::string> unsolved;         // targets left over
  ConditionSystem residual;
};
Elimination eliminate(const ConditionSystem& sys, const std::vector<std::string>& targets);

struct VerifyReport {
  std::vector<ScalarExpr> residuals;  // one per equation, canonical
  std::vector<std::size_t> failing;
  bool pass() const { return failing.empty(); }
};
// Throws IncompleteAssignment if an unknown of sys has no image.
VerifyReport verify_assignment(const ConditionSystem& sys, const std::map<std::string, ScalarExpr>& assignment);

}  // namespace pvakit
