#include "pvakit/conditions.hpp"

#include "pvakit/errors.hpp"
#include "pvakit/parallel.hpp"
#include "pvakit/text.hpp"

namespace pvakit {

ScalarExpr canonical_condition(const ScalarExpr& e) {
  if (e.is_zero()) return {};
  const Poly& n = e.num();
  if (n.leading_coeff().is_one()) return ScalarExpr(n);
  return ScalarExpr(n.scaled(n.leading_coeff().inverse()));
}

bool ConditionSystem::add(const ScalarExpr& e, const std::string& label) {
  ScalarExpr c = canonical_condition(e);
  if (c.is_zero()) return false;
  if (!seen_.insert(c).second) return false;
  eqs_.push_back(std::move(c));
  labels_.push_back(label);
  return true;
}

void ConditionSystem::add_raw(const ScalarExpr& e, const std::string& label) {
  seen_.insert(canonical_condition(e));
  eqs_.push_back(e);
  labels_.push_back(label);
}

void ConditionSystem::merge(const ConditionSystem& o) {
  for (std::size_t k = 0; k < o.size(); ++k) add(o.eqs_[k], o.labels_[k]);
}

std::set<std::string> function_names(const ScalarExpr& e) {
  std::set<std::string> out;
  for (const auto& a : e.atoms())
    if (a.kind == AtomKind::Function) out.insert(a.name);
  return out;
}

std::set<std::string> ConditionSystem::unknowns() const {
  std::set<std::string> out;
  for (const auto& e : eqs_) out.merge(function_names(e));
  return out;
}

namespace {

std::string bucket_name(const LambdaKey& k, const JetMonomial& m, const Names& names) {
  std::string s;
  auto powers = [&](const MultiIndex& idx, const char* var) {
    for (int a = 0; a < names.dims.d; ++a) {
      if (!idx[a]) continue;
      if (!s.empty()) s += "*";
      s += var + std::to_string(a + 1);
      if (idx[a] > 1) s += "^" + std::to_string(idx[a]);
    }
  };
  powers(k.lam, "l");
  powers(k.mu, "m");
  for (const auto& [v, e] : m) {
    if (!s.empty()) s += "*";
    s += to_text(v, names);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

}  // namespace

void collect_conditions(ConditionSystem& sys, const std::vector<LambdaPoly>& entries, const std::string& prefix,
                        const std::vector<std::string>& entry_names) {
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    const auto& entry = entries[idx];
    Names names(entry.dims());
    std::string where = idx < entry_names.size() ? entry_names[idx] : std::to_string(idx);
    for (const auto& [k, c] : entry.terms())
      for (const auto& [m, x] : c.terms()) sys.add(x, prefix + "(" + where + ") " + bucket_name(k, m, names));
  }
}

}  // namespace pvakit

namespace pvakit {

namespace {

struct Pivot {
  ScalarExpr value;  // target = value
  bool ok = false;
};

// Solves eq = 0 for F[name] if the shape allows it.
Pivot try_solve(const ScalarExpr& eq, const std::string& name) {
  Atom x = Atom::function(name, {});
  bool present = false;
  for (const auto& a : eq.atoms()) {
    if (a.kind != AtomKind::Function || a.name != name) continue;
    if (!a.deriv.is_zero()) return {};
    present = true;
  }
  if (!present) return {};
  const Poly& n = eq.num();
  if (n.degree_in(x) != 1) return {};
  auto parts = n.coefficients_in(x);
  for (const auto& a : parts[1].atoms())
    if (a.kind == AtomKind::Function) return {};
  return {-ScalarExpr(parts[0]) / ScalarExpr(parts[1]), true};
}

bool has_target_jets(const ScalarExpr& eq, const std::set<std::string>& open) {
  for (const auto& a : eq.atoms())
    if (a.kind == AtomKind::Function && !a.deriv.is_zero() && open.count(a.name)) return true;
  return false;
}

}  // namespace

Elimination eliminate(const ConditionSystem& sys, const std::vector<std::string>& targets) {
  Elimination out;
  std::vector<ScalarExpr> eqs = sys.equations();
  std::vector<std::string> labels = sys.labels();
  std::set<std::string> open(targets.begin(), targets.end());
  while (!open.empty()) {
    std::optional<std::pair<std::size_t, std::string>> pick;
    Pivot pivot;
    for (int pass = 0; pass < 2 && !pick; ++pass) {
      for (const auto& t : targets) {
        if (!open.count(t)) continue;
        for (std::size_t k = 0; k < eqs.size(); ++k) {
          if (pass == 0 && has_target_jets(eqs[k], open)) continue;
          Pivot p = try_solve(eqs[k], t);
          if (p.ok) {
            pick = {k, t};
            pivot = std::move(p);
            break;
          }
        }
        if (pick) break;
      }
    }
    if (!pick) break;
    const auto& [row, name] = *pick;
    std::map<std::string, ScalarExpr> sub{{name, pivot.value}};
    eqs.erase(eqs.begin() + static_cast<long>(row));
    labels.erase(labels.begin() + static_cast<long>(row));
    parallel_for(eqs.size(), [&](std::size_t k) { eqs[k] = canonical_condition(substitute_functions(eqs[k], sub)); });
    for (auto& [n, v] : out.solved) v = substitute_functions(v, sub);
    out.solved.emplace(name, pivot.value);
    out.order.push_back(name);
    open.erase(name);
    // Drop the equations that became zero.
    std::vector<ScalarExpr> keep;
    std::vector<std::string> keep_labels;
    for (std::size_t k = 0; k < eqs.size(); ++k)
      if (!eqs[k].is_zero()) {
        keep.push_back(std::move(eqs[k]));
        keep_labels.push_back(std::move(labels[k]));
      }
    eqs = std::move(keep);
    labels = std::move(keep_labels);
  }
  for (const auto& t : targets)
    if (open.count(t)) out.unsolved.push_back(t);
  for (std::size_t k = 0; k < eqs.size(); ++k) out.residual.add(eqs[k], labels[k]);
  return out;
}

VerifyReport verify_assignment(const ConditionSystem& sys, const std::map<std::string, ScalarExpr>& assignment) {
  for (const auto& name : sys.unknowns())
    if (!assignment.count(name)) throw IncompleteAssignment("no value for " + name);
  VerifyReport r;
  r.residuals.resize(sys.size());
  parallel_for(sys.size(), [&](std::size_t k) {
    r.residuals[k] = canonical_condition(substitute_functions(sys.equations()[k], assignment));
  });
  for (std::size_t k = 0; k < r.residuals.size(); ++k)
    if (!r.residuals[k].is_zero()) r.failing.push_back(k);
  return r;
}

}  // namespace pvakit
