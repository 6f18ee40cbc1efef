#pragma once

#include <map>
#include <string>
#include <vector>

#include "pvakit/bracket.hpp"
#include "pvakit/catalog.hpp"
#include "pvakit/conditions.hpp"

namespace pvakit {

// Evolutionary vector field with characteristics X^i.
struct EvolutionaryVF {
  Dims dims;
  std::vector<DiffPoly> chars;
};

// Σ_{i,I} ∂^I X^i · ∂f/∂u^i_I.
DiffPoly vf_apply(const EvolutionaryVF& xi, const DiffPoly& f);
LambdaPoly vf_apply(const EvolutionaryVF& xi, const LambdaPoly& f);

// X_i = Σ A^{ab}_i ∂_a u^b from a coefficient table A(a, b, i).
EvolutionaryVF first_order_vf(Dims dims, const std::function<ScalarExpr(int a, int b, int i)>& A);
// Generic first-order field with unknowns F[A{a}{b}_{i}].
EvolutionaryVF generic_first_order_vf(Dims dims);
std::string vf_name(int a, int b, int i);

// Entry (i,j) = ξ{u^i_λu^j} − {X^i_λ u^j} − {u^i_λ X^j}.
std::vector<LambdaPoly> symmetry_residual(const EvolutionaryVF& xi, const GeneratorBracket& b);
// Coefficients of the residual for the generic first-order field.
ConditionSystem symmetry_conditions(const GeneratorBracket& b);

EvolutionaryVF hamiltonian_vf(const DiffPoly& h, const GeneratorBracket& b);
// Symmetry residual of the Hamiltonian field of an unknown density F[h].
std::vector<LambdaPoly> hamiltonian_symmetry_residual(const GeneratorBracket& b);

// First-order Miura map u_i ↦ u_i + ε F^{al}_i ∂_a u_l.
struct MiuraFirstOrder {
  Dims dims;
  std::function<ScalarExpr(int a, int l, int i)> F;
};
MiuraFirstOrder generic_miura(Dims dims);  // F[F{a}{l}_{i}]
std::string miura_name(int a, int l, int i);

// ε¹ part of the bracket in the new generators. Throws Unsupported unless b is
// hydrodynamic.
GeneratorBracket miura_pushforward_first_order(const MiuraFirstOrder& m, const GeneratorBracket& b);

// ε¹ part of the Jacobi identity for b0 + ε b1, entry (i,j,k).
std::vector<LambdaPoly> first_order_jacobi_residual(const GeneratorBracket& b0, const GeneratorBracket& b1);
ConditionSystem first_order_jacobi_system(const GeneratorBracket& b0, const GeneratorBracket& b1);

// The nine tilde functions kept free for each catalog bracket.
std::vector<std::string> retained_tildes(NormalForm which);

struct DeformationReduction {
  ConditionSystem full;                      // first-order Jacobi on the tilde bracket
  Elimination elimination;                   // solved tildes and residual system
  std::vector<std::string> free_functions;  // unknowns of the result
};
DeformationReduction first_order_jacobi_conditions(NormalForm which);

// Scalar remark: skew + first-order Jacobi for the Virasoro-Magri bracket.
struct ScalarDeformationReport {
  ConditionSystem skew;
  ConditionSystem jacobi;
  Elimination elimination;  // of A, D, C, B in that order
  bool forces_zero = false;
};
ScalarDeformationReport virasoro_scalar_check();

}  // namespace pvakit
