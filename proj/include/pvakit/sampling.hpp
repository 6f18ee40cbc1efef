#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pvakit/conditions.hpp"
#include "pvakit/scalar_expr.hpp"

namespace pvakit {

// Arithmetic modulo a 62-bit prime P ≡ 1 (mod 4); i maps to a square root of -1.
namespace modp {
inline constexpr std::uint64_t P = 4611686018427387817ULL;
inline constexpr std::uint64_t I = 120863620846201794ULL;
std::uint64_t add(std::uint64_t a, std::uint64_t b);
std::uint64_t sub(std::uint64_t a, std::uint64_t b);
std::uint64_t mul(std::uint64_t a, std::uint64_t b);
std::uint64_t inv(std::uint64_t a);  // throws ZeroDivide on 0
// Throws ZeroDivide if the denominator vanishes mod P.
std::uint64_t reduce(const GaussianRational& c);
}  // namespace modp

// An equation linear in the jets of unknown functions: Σ coeff·jet + rest.
struct LinearExpr {
  std::map<Atom, ScalarExpr> coeffs;  // function atoms only
  ScalarExpr rest;                    // free of function atoms

  int order() const;  // highest derivative order among the jets
};

// Throws Error if e is not linear in its function atoms.
LinearExpr linearize(const ScalarExpr& e);
LinearExpr total_partial(const LinearExpr& e, int v);
// All ∂^D e with order(e) + |D| <= max_order, D = 0 first.
std::vector<LinearExpr> prolong(const LinearExpr& e, int n, int max_order);

// Sparse vector over function jets mod P; the constant slot has the key
// Atom::constant("1").
using ModVector = std::map<Atom, std::uint64_t>;

// Values mod P of base variables and constants at one sample point.
struct SamplePoint {
  std::uint64_t seed = 0;
  std::uint64_t value(const Atom& a) const;
};
// Throws ZeroDivide when a coefficient denominator vanishes at the point.
ModVector evaluate(const LinearExpr& e, const SamplePoint& at);

// Incremental row echelon form. Atoms of lower priority are pivoted first.
class ModSpan {
 public:
  using Priority = std::function<int(const Atom&)>;
  using Key = std::pair<int, Atom>;
  explicit ModSpan(Priority priority = {}) : priority_(std::move(priority)) {}

  // Returns true if v was independent of the rows so far.
  bool add(const ModVector& v);
  bool contains(const ModVector& v) const;
  std::size_t rank() const { return rows_.size(); }
  // Rows whose pivot has priority >= p; all their entries do too.
  std::vector<ModVector> rows_from(int p) const;

 private:
  // Dense over the columns seen so far; returns false if v has a column not
  // seen yet (then it cannot lie in the span).
  bool dense(const ModVector& v, std::vector<std::uint64_t>& out) const;
  void reduce(std::vector<std::uint64_t>& v) const;
  Priority priority_;
  std::map<Atom, std::size_t> column_;
  std::vector<Key> keys_;
  std::vector<std::vector<std::uint64_t>> rows_;  // pivot entry 1, zero at earlier pivots
  std::vector<std::size_t> pivots_;
};

struct SamplingOptions {
  int samples = 50;
  std::uint64_t seed = 20240601;
  int extra_order = 1;  // prolong beyond the highest order present
};

// Span-membership comparison of two linear systems with prolongation, both
// directions, at sampled points.
struct EquivalenceReport {
  std::vector<std::uint64_t> seeds;
  int prolongation_order = 0;
  std::vector<std::string> missing_in_right;  // labels of left equations outside span(right)
  std::vector<std::string> missing_in_left;
  bool pass() const { return missing_in_right.empty() && missing_in_left.empty(); }
};
EquivalenceReport compare_linear_systems(const ConditionSystem& left, const ConditionSystem& right, int n,
                                         const SamplingOptions& opt = {});

// Constant-coefficient comparison of polynomial systems: every equation of
// one side must be a linear combination, with constant coefficients, of the
// other side's equations and their base partials up to `partial_order`.
// Tested by evaluating all of them at opt.samples + (number of spanning
// polynomials) random points.
struct SpanReport {
  std::size_t points = 0;
  std::size_t rank_left = 0, rank_right = 0;
  std::vector<std::string> missing_in_right;
  std::vector<std::string> missing_in_left;
  bool pass() const { return missing_in_right.empty() && missing_in_left.empty(); }
};
SpanReport compare_polynomial_spans(const ConditionSystem& left, const ConditionSystem& right, int n,
                                    int partial_order = 1, const SamplingOptions& opt = {});

// Linear conditions on the jets of the kept functions implied by sys, after
// eliminating every jet of the functions in `eliminate` from the
// prolongation of sys up to jet order `order`. Evaluated at one point.
std::vector<ModVector> compatibility_conditions(const ConditionSystem& sys, const std::set<std::string>& eliminate,
                                                int n, int order, const SamplePoint& at);

struct CompatibilityReport {
  std::vector<std::uint64_t> seeds;
  std::size_t conditions = 0;     // at the first point
  bool implied_by_fixture = true;  // every condition lies in span(prolonged fixture)
  bool implies_fixture = true;     // every fixture equation lies in span(conditions, their prolongation)
};
// Indices of the expressions (linear in unknown-function jets) lying outside
// span(prolonged sys) at some sample point.
std::vector<std::size_t> outside_span(const std::vector<ScalarExpr>& exprs, const ConditionSystem& sys, int n,
                                      const SamplingOptions& opt = {});

// Compatibility conditions of sys (eliminating `eliminate`) against a
// reference system on the remaining functions.
CompatibilityReport compare_compatibility(const ConditionSystem& sys, const std::set<std::string>& eliminate,
                                          const ConditionSystem& reference, int n, int order,
                                          const SamplingOptions& opt = {});

// Exact values at a rational point: base variables, constants and jets of
// unassigned functions get deterministic random values from the seed; jets
// of assigned functions are derivatives of their images.
AtomValues point_values(const std::map<std::string, ScalarExpr>& assignment, std::uint64_t seed);
bool vanishes_at(const ConditionSystem& sys, const AtomValues& values);

// Values mod P for jets of the assigned functions (others random), used to
// test compatibility vectors on an assignment.
std::uint64_t apply(const ModVector& v, const std::map<std::string, ScalarExpr>& assignment, const SamplePoint& at);

}  // namespace pvakit
