#include "pvakit/diff_poly.hpp"

#include <algorithm>

#include "pvakit/errors.hpp"

namespace pvakit {

void Dims::validate() const {
  if (d < 1 || d > kMaxDim || n < 1 || n > kMaxDim)
    throw DimensionMismatch("dimensions must satisfy 1 <= d,n <= 4");
}

std::strong_ordering operator<=>(const JetVar& a, const JetVar& b) {
  if (auto c = a.idx <=> b.idx; c != 0) return c;  // MultiIndex order is graded
  return a.gen <=> b.gen;
}

bool JetMonomialLess::operator()(const JetMonomial& a, const JetMonomial& b) const {
  int da = differential_degree(a), db = differential_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
    if (auto c = x.first <=> y.first; c != 0) return c < 0;
    return x.second < y.second;
  });
}

int differential_degree(const JetMonomial& m) {
  int s = 0;
  for (const auto& [v, e] : m) s += v.idx.order() * static_cast<int>(e);
  return s;
}

JetMonomial jet_monomial_mul(const JetMonomial& a, const JetMonomial& b) {
  JetMonomial r;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    auto c = a[i].first <=> b[j].first;
    if (c < 0)
      r.push_back(a[i++]);
    else if (c > 0)
      r.push_back(b[j++]);
    else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) r.push_back(b[j]);
  return r;
}

void check_same_dims(const Dims& a, const Dims& b) {
  if (!(a == b)) throw DimensionMismatch("operands live over different (d, n)");
}

DiffPoly::DiffPoly(Dims dims) : dims_(dims) { dims_.validate(); }

DiffPoly::DiffPoly(Dims dims, const ScalarExpr& c) : DiffPoly(dims) {
  if (!c.is_zero()) terms_.emplace(JetMonomial{}, c);
}

DiffPoly DiffPoly::generator(Dims dims, int i) { return DiffPoly(dims, ScalarExpr::base(i)); }

DiffPoly DiffPoly::jet(Dims dims, int i, const MultiIndex& idx) {
  if (idx.is_zero()) return generator(dims, i);
  DiffPoly f(dims);
  f.terms_.emplace(JetMonomial{{JetVar{i, idx}, 1u}}, ScalarExpr(1));
  return f;
}

ScalarExpr DiffPoly::coefficient(const JetMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? ScalarExpr() : it->second;
}

std::vector<JetVar> DiffPoly::jet_vars() const {
  std::vector<JetVar> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int DiffPoly::max_order(int gen) const {
  int k = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m)
      if (v.gen == gen) k = std::max(k, v.idx.order());
  return k;
}

void DiffPoly::add_term(const JetMonomial& m, const ScalarExpr& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  check_same_dims(dims_, o.dims_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  check_same_dims(dims_, o.dims_);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  check_same_dims(a.dims_, b.dims_);
  DiffPoly r(a.dims_);
  for (const auto& [m1, c1] : a.terms_)
    for (const auto& [m2, c2] : b.terms_) r.add_term(jet_monomial_mul(m1, m2), c1 * c2);
  return r;
}

DiffPoly operator*(const ScalarExpr& c, const DiffPoly& a) {
  DiffPoly r(a.dims_);
  if (c.is_zero()) return r;
  for (const auto& [m, x] : a.terms_) r.add_term(m, c * x);
  return r;
}

DiffPoly DiffPoly::map_coefficients(const std::function<ScalarExpr(const ScalarExpr&)>& f) const {
  DiffPoly r(dims_);
  for (const auto& [m, c] : terms_) r.add_term(m, f(c));
  return r;
}

bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.dims_ == b.dims_ && a.terms_ == b.terms_; }

DiffPoly total_derivative(const DiffPoly& f, int alpha) {
  const Dims& dm = f.dims();
  if (alpha < 0 || alpha >= dm.d) throw DimensionMismatch("direction out of range");
  DiffPoly r(dm);
  for (const auto& [m, c] : f.terms()) {
    // Chain rule through the 0-jets inside the coefficient.
    for (int v = 0; v < dm.n; ++v) {
      ScalarExpr dc = base_partial(c, v);
      if (dc.is_zero()) continue;
      r.add_term(jet_monomial_mul(m, {{JetVar{v, MultiIndex::unit(alpha)}, 1u}}), dc);
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto& [jv, e] = m[k];
      JetMonomial rest = m;
      if (e == 1)
        rest.erase(rest.begin() + static_cast<long>(k));
      else
        rest[k].second = e - 1;
      rest = jet_monomial_mul(rest, {{JetVar{jv.gen, jv.idx.plus_unit(alpha)}, 1u}});
      r.add_term(rest, c * ScalarExpr(static_cast<long>(e)));
    }
  }
  return r;
}

DiffPoly total_derivative(const DiffPoly& f, const MultiIndex& k) {
  DiffPoly r = f;
  for (int a = 0; a < f.dims().d; ++a)
    for (int t = 0; t < k[a]; ++t) r = total_derivative(r, a);
  return r;
}

DiffPoly jet_partial(const DiffPoly& f, const JetVar& v) {
  DiffPoly r(f.dims());
  if (v.idx.is_zero()) {
    for (const auto& [m, c] : f.terms()) r.add_term(m, base_partial(c, v.gen));
    return r;
  }
  for (const auto& [m, c] : f.terms()) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (!(m[k].first == v)) continue;
      unsigned e = m[k].second;
      JetMonomial rest = m;
      if (e == 1)
        rest.erase(rest.begin() + static_cast<long>(k));
      else
        rest[k].second = e - 1;
      r.add_term(rest, c * ScalarExpr(static_cast<long>(e)));
    }
  }
  return r;
}

DiffPoly variational_derivative(const DiffPoly& f, int gen) {
  DiffPoly r = jet_partial(f, JetVar{gen, {}});
  for (const auto& v : f.jet_vars()) {
    if (v.gen != gen) continue;
    DiffPoly t = total_derivative(jet_partial(f, v), v.idx);
    if (v.idx.order() % 2)
      r -= t;
    else
      r += t;
  }
  return r;
}

std::optional<int> degree(const DiffPoly& f) {
  std::optional<int> d;
  for (const auto& [m, c] : f.terms()) {
    int k = differential_degree(m);
    if (d && *d != k) return std::nullopt;
    d = k;
  }
  return d.value_or(0);
}

}  // namespace pvakit
