#pragma once

#include <map>
#include <vector>

#include "pvakit/lambda_poly.hpp"

namespace pvakit {

// P[j][i][S] = coefficient P^{ji}_S of the Hamiltonian operator.
using OperatorTable = std::vector<std::vector<std::map<MultiIndex, DiffPoly>>>;

// n×n table of {u^i_λ u^j}.
class GeneratorBracket {
 public:
  explicit GeneratorBracket(Dims dims);

  const Dims& dims() const { return dims_; }
  const LambdaPoly& operator()(int i, int j) const { return table_[index(i, j)]; }
  void set(int i, int j, LambdaPoly entry);

  // Entry (i, j) is Σ_S P^{ji}_S λ^S.
  static GeneratorBracket from_operator_symbol(Dims dims, const OperatorTable& ops);
  OperatorTable operator_symbol() const;

  GeneratorBracket operator+(const GeneratorBracket& o) const;
  friend bool operator==(const GeneratorBracket& a, const GeneratorBracket& b);

 private:
  std::size_t index(int i, int j) const;
  Dims dims_;
  std::vector<LambdaPoly> table_;
};

LambdaPoly master_bracket(const DiffPoly& f, const DiffPoly& g, const GeneratorBracket& b);

// Entry (i,j) at index i*n+j.
std::vector<LambdaPoly> skew_residual(const GeneratorBracket& b);
bool is_skew(const GeneratorBracket& b);

// {f_λ{g_μ h}_Y}_X − {g_μ{f_λ h}_Y}_X − {{f_λ g}_Y {}_{λ+μ} h}_X.
LambdaPoly jacobi_combination(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h, const GeneratorBracket& outer,
                              const GeneratorBracket& inner);

// Entry (i,j,k) at index (i*n+j)*n+k. Throws NotSkew unless b is skew.
std::vector<LambdaPoly> jacobi_residual(const GeneratorBracket& b);
// Same combination with mixed brackets and no skewness check.
std::vector<LambdaPoly> jacobi_residual(const GeneratorBracket& outer, const GeneratorBracket& inner);

DiffPoly bracket_at_zero(const DiffPoly& f, const DiffPoly& g, const GeneratorBracket& b);

bool all_zero(const std::vector<LambdaPoly>& entries);

}  // namespace pvakit
