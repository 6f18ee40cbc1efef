#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "pvakit/multi_index.hpp"
#include "pvakit/scalar_expr.hpp"

namespace pvakit {

// d independent variables, n generators.
struct Dims {
  int d = 1;
  int n = 1;
  void validate() const;  // 1 <= d,n <= 4
  friend bool operator==(const Dims&, const Dims&) = default;
};

// u^gen_idx with |idx| >= 1. The 0-jets live inside ScalarExpr coefficients as
// base variables.
struct JetVar {
  int gen = 0;
  MultiIndex idx;
  // Graded lexicographic by (|I|, I, i).
  friend std::strong_ordering operator<=>(const JetVar& a, const JetVar& b);
  friend bool operator==(const JetVar& a, const JetVar& b) = default;
};

using JetMonomial = std::vector<std::pair<JetVar, unsigned>>;

struct JetMonomialLess {
  bool operator()(const JetMonomial& a, const JetMonomial& b) const;
};

int differential_degree(const JetMonomial& m);
JetMonomial jet_monomial_mul(const JetMonomial& a, const JetMonomial& b);

class DiffPoly {
 public:
  using TermMap = std::map<JetMonomial, ScalarExpr, JetMonomialLess>;

  explicit DiffPoly(Dims dims);
  DiffPoly(Dims dims, const ScalarExpr& c);
  static DiffPoly generator(Dims dims, int i);
  static DiffPoly jet(Dims dims, int i, const MultiIndex& idx);

  const Dims& dims() const { return dims_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  ScalarExpr coefficient(const JetMonomial& m) const;
  std::vector<JetVar> jet_vars() const;  // sorted, unique
  // Highest |I| among jets of generator i (0 if none).
  int max_order(int gen) const;

  void add_term(const JetMonomial& m, const ScalarExpr& c);

  DiffPoly operator-() const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const ScalarExpr& c, const DiffPoly& a);
  DiffPoly map_coefficients(const std::function<ScalarExpr(const ScalarExpr&)>& f) const;

  friend bool operator==(const DiffPoly& a, const DiffPoly& b);

 private:
  Dims dims_;
  TermMap terms_;
};

void check_same_dims(const Dims& a, const Dims& b);

DiffPoly total_derivative(const DiffPoly& f, int alpha);
DiffPoly total_derivative(const DiffPoly& f, const MultiIndex& k);
// v with |idx| = 0 differentiates the coefficients.
DiffPoly jet_partial(const DiffPoly& f, const JetVar& v);
DiffPoly variational_derivative(const DiffPoly& f, int gen);
// Common differential degree of all terms; nullopt when non-homogeneous.
// The zero polynomial has degree 0.
std::optional<int> degree(const DiffPoly& f);

}  // namespace pvakit
