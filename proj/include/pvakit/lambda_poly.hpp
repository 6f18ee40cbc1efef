#pragma once

#include <compare>
#include <map>
#include <vector>

#include "pvakit/diff_poly.hpp"

namespace pvakit {

struct LambdaKey {
  MultiIndex lam;
  MultiIndex mu;
  friend std::strong_ordering operator<=>(const LambdaKey& a, const LambdaKey& b) {
    if (auto c = a.lam <=> b.lam; c != 0) return c;
    return a.mu <=> b.mu;
  }
  friend bool operator==(const LambdaKey&, const LambdaKey&) = default;
};

enum class Family { Lambda, Mu };

// Polynomial in λ_1..λ_d (and μ_1..μ_d) with DiffPoly coefficients.
class LambdaPoly {
 public:
  using TermMap = std::map<LambdaKey, DiffPoly>;

  explicit LambdaPoly(Dims dims);
  explicit LambdaPoly(const DiffPoly& constant);
  static LambdaPoly monomial(Dims dims, const MultiIndex& lam, const MultiIndex& mu = {});

  const Dims& dims() const { return dims_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_mu() const;
  DiffPoly coefficient(const MultiIndex& lam, const MultiIndex& mu = {}) const;
  int max_lambda_order() const;

  void add_term(const LambdaKey& k, const DiffPoly& c);

  LambdaPoly operator-() const;
  LambdaPoly& operator+=(const LambdaPoly& o);
  LambdaPoly& operator-=(const LambdaPoly& o);
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
  friend LambdaPoly operator*(const DiffPoly& c, const LambdaPoly& a);
  LambdaPoly times(const MultiIndex& lam, const MultiIndex& mu = {}) const;

  friend bool operator==(const LambdaPoly& a, const LambdaPoly& b);

 private:
  Dims dims_;
  TermMap terms_;
};

// Coefficientwise total derivative ∂^K.
LambdaPoly total_derivative(const LambdaPoly& x, const MultiIndex& k);
// (ν+∂)^S X with ν the chosen family; ∂ acts on the coefficients of X.
LambdaPoly shift(const MultiIndex& s, const LambdaPoly& x, Family fam = Family::Lambda);
// Σ_N C_N (λ+∂)^N target.
LambdaPoly shifted_apply(const LambdaPoly& l, const DiffPoly& target);
// Σ_N C_N (λ+∂)^N X for a λ-polynomial target X.
LambdaPoly shifted_apply(const LambdaPoly& l, const LambdaPoly& x);
// Σ_N (−λ−∂)^N C_N.
LambdaPoly arrow_negate(const LambdaPoly& l);
LambdaPoly rename_lambda_to_mu(const LambdaPoly& l);
// λ ↦ λ+μ in a μ-free polynomial.
LambdaPoly substitute_lambda_plus_mu(const LambdaPoly& l);
DiffPoly at_lambda_zero(const LambdaPoly& l);

}  // namespace pvakit
