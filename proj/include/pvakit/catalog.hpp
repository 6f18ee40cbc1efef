#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pvakit/bracket.hpp"
#include "pvakit/conditions.hpp"

namespace pvakit {

// Hydrodynamic data: {u^i_λ u^j} = g^{ijα} λ_α + b^{ijα}_k ∂_α u^k.
class HydroData {
 public:
  explicit HydroData(Dims dims);

  const Dims& dims() const { return dims_; }
  ScalarExpr& g(int i, int j, int a) { return g_[gi(i, j, a)]; }
  const ScalarExpr& g(int i, int j, int a) const { return g_[gi(i, j, a)]; }
  ScalarExpr& b(int i, int j, int a, int k) { return b_[bi(i, j, a, k)]; }
  const ScalarExpr& b(int i, int j, int a, int k) const { return b_[bi(i, j, a, k)]; }

  friend bool operator==(const HydroData&, const HydroData&) = default;

 private:
  std::size_t gi(int i, int j, int a) const;
  std::size_t bi(int i, int j, int a, int k) const;
  Dims dims_;
  std::vector<ScalarExpr> g_, b_;
};

GeneratorBracket make_hydro(const HydroData& h);
// Inverse of make_hydro; nullopt unless every entry is degree-1 homogeneous
// of hydrodynamic shape.
std::optional<HydroData> as_hydro(const GeneratorBracket& b);
// g^{ijα} = F[g{i}{j}{α}], b^{ijα}_k = F[b{i}{j}{α}_{k}] (1-based digits).
HydroData generic_hydro(Dims dims);

// Point change of generators w = ψ(u) with inverse u = φ(w). Returns the
// hydrodynamic data of the same bracket written in the w generators; both
// maps are expressions in base variables (of u for ψ, of w for φ).
HydroData transform_hydro(const HydroData& h, const std::vector<ScalarExpr>& psi, const std::vector<ScalarExpr>& phi);

enum class NormalForm { P1, P2, LP };
std::optional<NormalForm> parse_normal_form(const std::string& s);
std::string to_string(NormalForm w);

// P1, P2 need d=n=2; LP needs d=n<=4. Throws Unsupported otherwise.
GeneratorBracket normal_form(NormalForm which, Dims dims = {2, 2});
HydroData normal_form_hydro(NormalForm which, Dims dims = {2, 2});

// Coefficients of the skew residual followed by those of the Jacobi residual.
ConditionSystem mokhov_conditions(const HydroData& h);

// Degree-2 ansatz A λλ + B λ∂u + C ∂u∂u + D ∂²u with index symmetries built in.
class DeformationAnsatz {
 public:
  explicit DeformationAnsatz(Dims dims);

  const Dims& dims() const { return dims_; }
  // Symmetric lookups; indices are 0-based.
  ScalarExpr A(int a, int b, int i, int j) const;
  ScalarExpr B(int a, int b, int l, int i, int j) const;
  ScalarExpr C(int a, int l, int b, int m, int i, int j) const;
  ScalarExpr D(int a, int b, int l, int i, int j) const;

  // Names of the independent unknown functions.
  const std::vector<std::string>& unknowns() const { return unknowns_; }
  GeneratorBracket bracket() const;

  static std::string a_name(Dims dims, int a, int b, int i, int j);
  static std::string b_name(Dims dims, int a, int b, int l, int i, int j);
  static std::string c_name(Dims dims, int a, int l, int b, int m, int i, int j);
  static std::string d_name(Dims dims, int a, int b, int l, int i, int j);

 private:
  Dims dims_;
  std::vector<std::string> unknowns_;
};

// Degree-2 bracket from tables of coefficients (same symmetric conventions).
struct DegreeTwoTables {
  std::function<ScalarExpr(int a, int b, int i, int j)> A;
  std::function<ScalarExpr(int a, int b, int l, int i, int j)> B;
  std::function<ScalarExpr(int a, int l, int b, int m, int i, int j)> C;
  std::function<ScalarExpr(int a, int b, int l, int i, int j)> D;
};
GeneratorBracket degree_two_bracket(Dims dims, const DegreeTwoTables& t);
// Reads A, B, C, D back from a degree-2 bracket. Symmetric slots are
// averaged the way the sums in the bracket combine them.
DegreeTwoTables degree_two_tables(const GeneratorBracket& b);

ConditionSystem skew_deformation_conditions(const DeformationAnsatz& ans);

// Tilde parametrization for d=n=2.
namespace tilde {
std::string a(int a, int b);                      // At{a}{b}, a<=b
std::string b(int a, int b, int l, int i, int j);  // Bt{a}_{b}{l}_{i}{j}, ij in {11,22,12}
std::string c(int a, int l, int b, int m);         // Ct{a}{l}_{b}{m}, (a,l)<=(b,m)
std::string d(int a, int b, int l);                // Dt{a}{b}_{l}, a<=b
std::vector<std::string> all();                   // the 43 names
}  // namespace tilde

// Skew-by-construction degree-2 bracket for d=n=2. The map gives an
// expression per tilde name; missing names stand for the unknown itself.
GeneratorBracket apply_tilde(const std::map<std::string, ScalarExpr>& tildes = {});
// Tilde values of a skew degree-2 bracket (d=n=2).
std::map<std::string, ScalarExpr> extract_tilde(const GeneratorBracket& b);

}  // namespace pvakit
