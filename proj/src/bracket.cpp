#include "pvakit/bracket.hpp"

#include "pvakit/errors.hpp"
#include "pvakit/parallel.hpp"

namespace pvakit {

GeneratorBracket::GeneratorBracket(Dims dims) : dims_(dims) {
  dims_.validate();
  table_.assign(static_cast<std::size_t>(dims.n * dims.n), LambdaPoly(dims));
}

std::size_t GeneratorBracket::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= dims_.n || j >= dims_.n) throw DimensionMismatch("generator index out of range");
  return static_cast<std::size_t>(i * dims_.n + j);
}

void GeneratorBracket::set(int i, int j, LambdaPoly entry) {
  check_same_dims(dims_, entry.dims());
  if (entry.has_mu()) throw Error("bracket entries must be mu-free");
  table_[index(i, j)] = std::move(entry);
}

GeneratorBracket GeneratorBracket::from_operator_symbol(Dims dims, const OperatorTable& ops) {
  GeneratorBracket b(dims);
  for (int i = 0; i < dims.n; ++i)
    for (int j = 0; j < dims.n; ++j) {
      LambdaPoly e(dims);
      for (const auto& [s, c] : ops.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(i)))
        e.add_term(LambdaKey{s, {}}, c);
      b.set(i, j, e);
    }
  return b;
}

OperatorTable GeneratorBracket::operator_symbol() const {
  auto n = static_cast<std::size_t>(dims_.n);
  OperatorTable ops(n, std::vector<std::map<MultiIndex, DiffPoly>>(n));
  for (int i = 0; i < dims_.n; ++i)
    for (int j = 0; j < dims_.n; ++j)
      for (const auto& [k, c] : (*this)(i, j).terms())
        ops[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].emplace(k.lam, c);
  return ops;
}

GeneratorBracket GeneratorBracket::operator+(const GeneratorBracket& o) const {
  check_same_dims(dims_, o.dims_);
  GeneratorBracket r(dims_);
  for (std::size_t k = 0; k < table_.size(); ++k) r.table_[k] = table_[k] + o.table_[k];
  return r;
}

bool operator==(const GeneratorBracket& a, const GeneratorBracket& b) {
  return a.dims_ == b.dims_ && a.table_ == b.table_;
}

namespace {

// Jets of generator i on which f depends, with the 0-jet first.
std::vector<MultiIndex> jets_of(const DiffPoly& f, int i) {
  std::vector<MultiIndex> out{MultiIndex{}};
  for (const auto& v : f.jet_vars())
    if (v.gen == i) out.push_back(v.idx);
  return out;
}

}  // namespace

LambdaPoly master_bracket(const DiffPoly& f, const DiffPoly& g, const GeneratorBracket& b) {
  const Dims dm = b.dims();
  check_same_dims(f.dims(), dm);
  check_same_dims(g.dims(), dm);
  // Y_i = Σ_M (−λ−∂)^M ∂f/∂u^i_M.
  std::vector<LambdaPoly> y;
  for (int i = 0; i < dm.n; ++i) {
    LambdaPoly yi(dm);
    for (const auto& m : jets_of(f, i)) {
      DiffPoly df = jet_partial(f, JetVar{i, m});
      if (df.is_zero()) continue;
      LambdaPoly t = shift(m, LambdaPoly(df));
      if (m.order() % 2)
        yi -= t;
      else
        yi += t;
    }
    y.push_back(std::move(yi));
  }
  LambdaPoly result(dm);
  for (int j = 0; j < dm.n; ++j) {
    std::vector<std::pair<MultiIndex, DiffPoly>> dg;
    for (const auto& nidx : jets_of(g, j)) {
      DiffPoly d = jet_partial(g, JetVar{j, nidx});
      if (!d.is_zero()) dg.emplace_back(nidx, std::move(d));
    }
    if (dg.empty()) continue;
    // Q_j = {f_λ u^j} = Σ_i {u^i_{λ+∂} u^j} Y_i.
    LambdaPoly qj(dm);
    for (int i = 0; i < dm.n; ++i)
      if (!y[static_cast<std::size_t>(i)].is_zero()) qj += shifted_apply(b(i, j), y[static_cast<std::size_t>(i)]);
    if (qj.is_zero()) continue;
    for (const auto& [nidx, d] : dg) result += d * shift(nidx, qj);
  }
  return result;
}

std::vector<LambdaPoly> skew_residual(const GeneratorBracket& b) {
  int n = b.dims().n;
  std::vector<LambdaPoly> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(b(i, j) + arrow_negate(b(j, i)));
  return out;
}

bool all_zero(const std::vector<LambdaPoly>& entries) {
  for (const auto& e : entries)
    if (!e.is_zero()) return false;
  return true;
}

bool is_skew(const GeneratorBracket& b) { return all_zero(skew_residual(b)); }

LambdaPoly jacobi_combination(const DiffPoly& f, const DiffPoly& g, const DiffPoly& h, const GeneratorBracket& outer,
                              const GeneratorBracket& inner) {
  const Dims dm = outer.dims();
  check_same_dims(dm, inner.dims());
  LambdaPoly r(dm);
  // {f_λ {g_μ h}}: the inner bracket is a μ-polynomial with constant μ.
  const LambdaPoly gh = master_bracket(g, h, inner);
  for (const auto& [k, c] : gh.terms()) r += master_bracket(f, c, outer).times({}, k.lam);
  // {g_μ {f_λ h}}.
  const LambdaPoly fh = master_bracket(f, h, inner);
  for (const auto& [k, c] : fh.terms())
    r -= rename_lambda_to_mu(master_bracket(g, c, outer)).times(k.lam);
  // {{f_λ g}_{λ+μ} h}.
  const LambdaPoly fg = master_bracket(f, g, inner);
  for (const auto& [k, c] : fg.terms())
    r -= substitute_lambda_plus_mu(master_bracket(c, h, outer)).times(k.lam);
  return r;
}

std::vector<LambdaPoly> jacobi_residual(const GeneratorBracket& outer, const GeneratorBracket& inner) {
  const Dims dm = outer.dims();
  auto n = static_cast<std::size_t>(dm.n);
  std::vector<LambdaPoly> out(n * n * n, LambdaPoly(dm));
  parallel_for(n * n * n, [&](std::size_t idx) {
    int k = static_cast<int>(idx % n), j = static_cast<int>((idx / n) % n), i = static_cast<int>(idx / (n * n));
    out[idx] = jacobi_combination(DiffPoly::generator(dm, i), DiffPoly::generator(dm, j), DiffPoly::generator(dm, k),
                                  outer, inner);
  });
  return out;
}

std::vector<LambdaPoly> jacobi_residual(const GeneratorBracket& b) {
  if (!is_skew(b)) throw NotSkew();
  return jacobi_residual(b, b);
}

DiffPoly bracket_at_zero(const DiffPoly& f, const DiffPoly& g, const GeneratorBracket& b) {
  return at_lambda_zero(master_bracket(f, g, b));
}

}  // namespace pvakit
