#include "pvakit/tables.hpp"

#include "pvakit/errors.hpp"
#include "pvakit/parallel.hpp"

namespace pvakit {

std::map<std::string, ScalarExpr> close_table(const std::map<std::string, ScalarExpr>& table) {
  std::map<std::string, ScalarExpr> cur = table;
  for (std::size_t round = 0; round <= table.size(); ++round) {
    bool open = false;
    for (const auto& [name, v] : cur)
      for (const auto& f : function_names(v))
        if (cur.count(f)) open = true;
    if (!open) return cur;
    std::map<std::string, ScalarExpr> next;
    for (const auto& [name, v] : cur) next.emplace(name, substitute_functions(v, cur));
    cur = std::move(next);
  }
  throw Error("table entries refer to each other cyclically");
}

std::string to_string(Agreement a) {
  switch (a) {
    case Agreement::Exact: return "exact";
    case Agreement::ModuloResidual: return "modulo residual";
    case Agreement::Mismatch: return "mismatch";
    case Agreement::Missing: return "missing";
  }
  return "?";
}

namespace {

// Marks nonzero entries that lie in the residual span as ModuloResidual and the
// rest as Mismatch.
template <class T>
void classify(std::vector<T>& items, const std::vector<std::size_t>& nonzero, const std::vector<ScalarExpr>& values,
              const ConditionSystem& residual, int n, const SamplingOptions& opt) {
  std::vector<ScalarExpr> exprs;
  for (auto k : nonzero) exprs.push_back(values[k]);
  for (auto k : nonzero) items[k].agreement = Agreement::ModuloResidual;
  if (residual.empty()) {
    for (auto k : nonzero) items[k].agreement = Agreement::Mismatch;
    return;
  }
  for (auto j : outside_span(exprs, residual, n, opt)) items[nonzero[j]].agreement = Agreement::Mismatch;
}

}  // namespace

std::vector<EntryComparison> compare_table(const std::map<std::string, ScalarExpr>& reference,
                                           const std::map<std::string, ScalarExpr>& table,
                                           const ConditionSystem& residual, int n, const SamplingOptions& opt) {
  auto closed = close_table(table);
  std::vector<EntryComparison> out;
  std::vector<ScalarExpr> diffs;
  std::vector<std::size_t> nonzero;
  for (const auto& [name, ref] : reference) {
    EntryComparison c;
    c.name = name;
    auto it = closed.find(name);
    if (it == closed.end()) {
      c.agreement = Agreement::Missing;
    } else {
      c.difference = it->second - ref;
      if (!c.difference.is_zero()) nonzero.push_back(out.size());
    }
    diffs.push_back(c.difference);
    out.push_back(std::move(c));
  }
  classify(out, nonzero, diffs, residual, n, opt);
  return out;
}

std::vector<EquationCheck> substitute_table(const ConditionSystem& sys, const std::map<std::string, ScalarExpr>& table,
                                            const ConditionSystem& residual, int n, const SamplingOptions& opt) {
  auto closed = close_table(table);
  std::vector<EquationCheck> out(sys.size());
  std::vector<ScalarExpr> values(sys.size());
  parallel_for(sys.size(), [&](std::size_t k) {
    values[k] = canonical_condition(substitute_functions(sys.equations()[k], closed));
  });
  std::vector<std::size_t> nonzero;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    out[k].index = k;
    out[k].label = sys.labels()[k];
    out[k].value = values[k];
    if (!values[k].is_zero()) nonzero.push_back(k);
  }
  classify(out, nonzero, values, residual, n, opt);
  return out;
}

}  // namespace pvakit
