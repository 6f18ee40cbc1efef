#include "pvakit/lambda_poly.hpp"

#include "pvakit/errors.hpp"

namespace pvakit {

LambdaPoly::LambdaPoly(Dims dims) : dims_(dims) { dims_.validate(); }

LambdaPoly::LambdaPoly(const DiffPoly& constant) : LambdaPoly(constant.dims()) {
  if (!constant.is_zero()) terms_.emplace(LambdaKey{}, constant);
}

LambdaPoly LambdaPoly::monomial(Dims dims, const MultiIndex& lam, const MultiIndex& mu) {
  LambdaPoly l(dims);
  l.terms_.emplace(LambdaKey{lam, mu}, DiffPoly(dims, 1));
  return l;
}

bool LambdaPoly::has_mu() const {
  for (const auto& [k, c] : terms_)
    if (!k.mu.is_zero()) return true;
  return false;
}

DiffPoly LambdaPoly::coefficient(const MultiIndex& lam, const MultiIndex& mu) const {
  auto it = terms_.find(LambdaKey{lam, mu});
  return it == terms_.end() ? DiffPoly(dims_) : it->second;
}

int LambdaPoly::max_lambda_order() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, k.lam.order());
  return m;
}

void LambdaPoly::add_term(const LambdaKey& k, const DiffPoly& c) {
  check_same_dims(dims_, c.dims());
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LambdaPoly LambdaPoly::operator-() const {
  LambdaPoly r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o) {
  check_same_dims(dims_, o.dims_);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& o) {
  check_same_dims(dims_, o.dims_);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  check_same_dims(a.dims_, b.dims_);
  LambdaPoly r(a.dims_);
  for (const auto& [k1, c1] : a.terms_)
    for (const auto& [k2, c2] : b.terms_) r.add_term(LambdaKey{k1.lam + k2.lam, k1.mu + k2.mu}, c1 * c2);
  return r;
}

LambdaPoly operator*(const DiffPoly& c, const LambdaPoly& a) {
  check_same_dims(c.dims(), a.dims_);
  LambdaPoly r(a.dims_);
  if (c.is_zero()) return r;
  for (const auto& [k, x] : a.terms_) r.add_term(k, c * x);
  return r;
}

LambdaPoly LambdaPoly::times(const MultiIndex& lam, const MultiIndex& mu) const {
  LambdaPoly r(dims_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(LambdaKey{k.lam + lam, k.mu + mu}, c);
  return r;
}

bool operator==(const LambdaPoly& a, const LambdaPoly& b) { return a.dims_ == b.dims_ && a.terms_ == b.terms_; }

LambdaPoly total_derivative(const LambdaPoly& x, const MultiIndex& k) {
  if (k.is_zero()) return x;
  LambdaPoly r(x.dims());
  for (const auto& [key, c] : x.terms()) r.add_term(key, total_derivative(c, k));
  return r;
}

LambdaPoly shift(const MultiIndex& s, const LambdaPoly& x, Family fam) {
  if (s.is_zero()) return x;
  LambdaPoly r(x.dims());
  for (const auto& t : sub_indices(s, x.dims().d)) {
    long long b = multi_binomial(s, t);
    LambdaPoly dx = total_derivative(x, t);
    MultiIndex rest = s - t;
    LambdaPoly term = fam == Family::Lambda ? dx.times(rest) : dx.times({}, rest);
    r += DiffPoly(x.dims(), ScalarExpr(static_cast<long>(b))) * term;
  }
  return r;
}

LambdaPoly shifted_apply(const LambdaPoly& l, const LambdaPoly& x) {
  if (l.has_mu()) throw Error("shifted_apply expects a mu-free polynomial");
  LambdaPoly r(x.dims());
  for (const auto& [k, c] : l.terms()) r += c * shift(k.lam, x);
  return r;
}

LambdaPoly shifted_apply(const LambdaPoly& l, const DiffPoly& target) { return shifted_apply(l, LambdaPoly(target)); }

LambdaPoly arrow_negate(const LambdaPoly& l) {
  if (l.has_mu()) throw Error("arrow_negate expects a mu-free polynomial");
  LambdaPoly r(l.dims());
  for (const auto& [k, c] : l.terms()) {
    LambdaPoly t = shift(k.lam, LambdaPoly(c));
    if (k.lam.order() % 2)
      r -= t;
    else
      r += t;
  }
  return r;
}

LambdaPoly rename_lambda_to_mu(const LambdaPoly& l) {
  if (l.has_mu()) throw Error("rename expects a mu-free polynomial");
  LambdaPoly r(l.dims());
  for (const auto& [k, c] : l.terms()) r.add_term(LambdaKey{{}, k.lam}, c);
  return r;
}

LambdaPoly substitute_lambda_plus_mu(const LambdaPoly& l) {
  if (l.has_mu()) throw Error("substitution expects a mu-free polynomial");
  LambdaPoly r(l.dims());
  for (const auto& [k, c] : l.terms()) {
    for (const auto& t : sub_indices(k.lam, l.dims().d)) {
      long long b = multi_binomial(k.lam, t);
      r.add_term(LambdaKey{k.lam - t, t}, ScalarExpr(static_cast<long>(b)) * c);
    }
  }
  return r;
}

DiffPoly at_lambda_zero(const LambdaPoly& l) { return l.coefficient({}, {}); }

}  // namespace pvakit
