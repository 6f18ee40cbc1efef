#pragma once

#include <map>
#include <string>
#include <vector>

#include "pvakit/conditions.hpp"
#include "pvakit/sampling.hpp"

namespace pvakit {

// Substitutes the table into its own entries until no entry refers to
// another one. Throws Error on a cycle.
std::map<std::string, ScalarExpr> close_table(const std::map<std::string, ScalarExpr>& table);

enum class Agreement { Exact, ModuloResidual, Mismatch, Missing };
std::string to_string(Agreement a);

struct EntryComparison {
  std::string name;
  Agreement agreement = Agreement::Exact;
  ScalarExpr difference;  // table minus reference
};

// Entry-wise comparison of a table against reference values. A nonzero
// difference lying in the span of the prolonged residual system at every
// sample counts as ModuloResidual.
std::vector<EntryComparison> compare_table(const std::map<std::string, ScalarExpr>& reference,
                                           const std::map<std::string, ScalarExpr>& table,
                                           const ConditionSystem& residual, int n, const SamplingOptions& opt = {});

struct EquationCheck {
  std::size_t index = 0;
  std::string label;
  Agreement agreement = Agreement::Exact;
  ScalarExpr value;
};
// Substitutes the (closed) table into sys. Functions without an entry stay
// unknown. Residuals are classified as in compare_table.
std::vector<EquationCheck> substitute_table(const ConditionSystem& sys, const std::map<std::string, ScalarExpr>& table,
                                            const ConditionSystem& residual, int n, const SamplingOptions& opt = {});

}  // namespace pvakit
