#include "pvakit/defo.hpp"

#include <algorithm>

#include "pvakit/errors.hpp"
#include "pvakit/parallel.hpp"

namespace pvakit {

namespace {

std::string digit(int k) { return std::to_string(k + 1); }

DiffPoly gen(Dims dm, int i) { return DiffPoly::generator(dm, i); }

}  // namespace

DiffPoly vf_apply(const EvolutionaryVF& xi, const DiffPoly& f) {
  check_same_dims(xi.dims, f.dims());
  DiffPoly r(f.dims());
  for (int i = 0; i < xi.dims.n; ++i) {
    const DiffPoly& x = xi.chars[static_cast<std::size_t>(i)];
    r += x * jet_partial(f, JetVar{i, {}});
    for (const auto& v : f.jet_vars())
      if (v.gen == i) r += total_derivative(x, v.idx) * jet_partial(f, v);
  }
  return r;
}

LambdaPoly vf_apply(const EvolutionaryVF& xi, const LambdaPoly& f) {
  LambdaPoly r(f.dims());
  for (const auto& [k, c] : f.terms()) r.add_term(k, vf_apply(xi, c));
  return r;
}

std::string vf_name(int a, int b, int i) { return "A" + digit(a) + digit(b) + "_" + digit(i); }

EvolutionaryVF first_order_vf(Dims dims, const std::function<ScalarExpr(int, int, int)>& A) {
  EvolutionaryVF xi{dims, {}};
  for (int i = 0; i < dims.n; ++i) {
    DiffPoly x(dims);
    for (int a = 0; a < dims.d; ++a)
      for (int b = 0; b < dims.n; ++b) x += A(a, b, i) * DiffPoly::jet(dims, b, MultiIndex::unit(a));
    xi.chars.push_back(std::move(x));
  }
  return xi;
}

EvolutionaryVF generic_first_order_vf(Dims dims) {
  return first_order_vf(dims, [](int a, int b, int i) { return ScalarExpr::function(vf_name(a, b, i)); });
}

std::vector<LambdaPoly> symmetry_residual(const EvolutionaryVF& xi, const GeneratorBracket& b) {
  const Dims dm = b.dims();
  check_same_dims(dm, xi.dims);
  auto n = static_cast<std::size_t>(dm.n);
  std::vector<LambdaPoly> out(n * n, LambdaPoly(dm));
  parallel_for(n * n, [&](std::size_t idx) {
    int i = static_cast<int>(idx / n), j = static_cast<int>(idx % n);
    out[idx] = vf_apply(xi, b(i, j)) - master_bracket(xi.chars[static_cast<std::size_t>(i)], gen(dm, j), b) -
               master_bracket(gen(dm, i), xi.chars[static_cast<std::size_t>(j)], b);
  });
  return out;
}

ConditionSystem symmetry_conditions(const GeneratorBracket& b) {
  ConditionSystem sys;
  std::vector<std::string> names;
  for (int i = 0; i < b.dims().n; ++i)
    for (int j = 0; j < b.dims().n; ++j) names.push_back(digit(i) + "," + digit(j));
  collect_conditions(sys, symmetry_residual(generic_first_order_vf(b.dims()), b), "sym", names);
  return sys;
}

EvolutionaryVF hamiltonian_vf(const DiffPoly& h, const GeneratorBracket& b) {
  EvolutionaryVF xi{b.dims(), {}};
  for (int i = 0; i < b.dims().n; ++i) xi.chars.push_back(bracket_at_zero(h, gen(b.dims(), i), b));
  return xi;
}

std::vector<LambdaPoly> hamiltonian_symmetry_residual(const GeneratorBracket& b) {
  DiffPoly h(b.dims(), ScalarExpr::function("h"));
  return symmetry_residual(hamiltonian_vf(h, b), b);
}

std::string miura_name(int a, int l, int i) { return "F" + digit(a) + digit(l) + "_" + digit(i); }

MiuraFirstOrder generic_miura(Dims dims) {
  return {dims, [](int a, int l, int i) { return ScalarExpr::function(miura_name(a, l, i)); }};
}

GeneratorBracket miura_pushforward_first_order(const MiuraFirstOrder& m, const GeneratorBracket& b) {
  const Dims dm = b.dims();
  check_same_dims(dm, m.dims);
  if (!as_hydro(b)) throw Unsupported("Miura pushforward needs a hydrodynamic bracket");
  EvolutionaryVF xi = first_order_vf(dm, [&](int a, int l, int i) { return m.F(a, l, i); });
  // {P_i λ P_j} at ε¹ is the negated symmetry residual of ξ_F.
  std::vector<LambdaPoly> r = symmetry_residual(xi, b);
  GeneratorBracket out(dm);
  for (int i = 0; i < dm.n; ++i)
    for (int j = 0; j < dm.n; ++j) out.set(i, j, -r[static_cast<std::size_t>(i * dm.n + j)]);
  return out;
}

std::vector<LambdaPoly> first_order_jacobi_residual(const GeneratorBracket& b0, const GeneratorBracket& b1) {
  const Dims dm = b0.dims();
  check_same_dims(dm, b1.dims());
  auto n = static_cast<std::size_t>(dm.n);
  std::vector<LambdaPoly> out(n * n * n, LambdaPoly(dm));
  parallel_for(n * n * n, [&](std::size_t idx) {
    int k = static_cast<int>(idx % n), j = static_cast<int>((idx / n) % n), i = static_cast<int>(idx / (n * n));
    DiffPoly ui = gen(dm, i), uj = gen(dm, j), uk = gen(dm, k);
    out[idx] = jacobi_combination(ui, uj, uk, b1, b0) + jacobi_combination(ui, uj, uk, b0, b1);
  });
  return out;
}

ConditionSystem first_order_jacobi_system(const GeneratorBracket& b0, const GeneratorBracket& b1) {
  ConditionSystem sys;
  std::vector<std::string> names;
  const int n = b0.dims().n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) names.push_back(digit(i) + "," + digit(j) + "," + digit(k));
  collect_conditions(sys, first_order_jacobi_residual(b0, b1), "jacobi1", names);
  return sys;
}

std::vector<std::string> retained_tildes(NormalForm which) {
  switch (which) {
    case NormalForm::P1:
      return {"At11", "At12", "At22", "Bt1_12_11", "Bt1_22_11", "Bt2_11_11", "Bt2_21_22", "Bt2_11_22", "Bt1_22_22"};
    case NormalForm::P2:
      return {"At11", "At12", "At22", "Bt1_11_11", "Bt1_21_11", "Bt1_12_22", "Bt2_11_22", "Bt2_12_22", "Bt2_21_22"};
    case NormalForm::LP:
      return {"At11", "At12", "At22", "Bt1_22_11", "Bt2_11_11", "Bt1_21_11", "Bt2_11_22", "Bt1_22_22", "Bt2_12_22"};
  }
  return {};
}

DeformationReduction first_order_jacobi_conditions(NormalForm which) {
  DeformationReduction out;
  out.full = first_order_jacobi_system(normal_form(which), apply_tilde());
  auto keep = retained_tildes(which);
  std::vector<std::string> targets;
  for (const auto& t : tilde::all())
    if (std::find(keep.begin(), keep.end(), t) == keep.end()) targets.push_back(t);
  out.elimination = eliminate(out.full, targets);
  std::set<std::string> names = out.elimination.residual.unknowns();
  for (const auto& [n, v] : out.elimination.solved) names.merge(function_names(v));
  for (const auto& t : out.elimination.unsolved) names.insert(t);
  out.free_functions.assign(names.begin(), names.end());
  return out;
}

ScalarDeformationReport virasoro_scalar_check() {
  const Dims dm{1, 1};
  ScalarDeformationReport r;
  DeformationAnsatz ans(dm);
  r.skew = skew_deformation_conditions(ans);
  r.jacobi = first_order_jacobi_system(normal_form(NormalForm::LP, dm), ans.bracket());
  ConditionSystem all = r.skew;
  all.merge(r.jacobi);
  r.elimination = eliminate(all, {"A", "D", "C", "B"});
  r.forces_zero = r.elimination.unsolved.empty() && r.elimination.residual.empty();
  for (const auto& [n, v] : r.elimination.solved) r.forces_zero = r.forces_zero && v.is_zero();
  return r;
}

}  // namespace pvakit
