#include "pvakit/scalar_expr.hpp"

#include <algorithm>
#include <random>

#include "pvakit/errors.hpp"

namespace pvakit {

// ---------------------------------------------------------------- atoms

Atom Atom::base(int i) {
  Atom a;
  a.kind = AtomKind::Base;
  a.index = static_cast<std::uint8_t>(i);
  return a;
}

Atom Atom::constant(std::string name) {
  Atom a;
  a.kind = AtomKind::Constant;
  a.name = std::move(name);
  return a;
}

Atom Atom::function(std::string name, MultiIndex deriv) {
  Atom a;
  a.kind = AtomKind::Function;
  a.name = std::move(name);
  a.deriv = deriv;
  return a;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  switch (a.kind) {
    case AtomKind::Base:
      return a.index <=> b.index;
    case AtomKind::Constant:
      return a.name.compare(b.name) <=> 0;
    case AtomKind::Function:
      if (int c = a.name.compare(b.name); c != 0) return c <=> 0;
      return a.deriv <=> b.deriv;
  }
  return std::strong_ordering::equal;
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case AtomKind::Base:
      return a.index == b.index;
    case AtomKind::Constant:
      return a.name == b.name;
    case AtomKind::Function:
      return a.deriv == b.deriv && a.name == b.name;
  }
  return false;
}

std::string Atom::key() const {
  switch (kind) {
    case AtomKind::Base:
      return "u" + std::to_string(index);
    case AtomKind::Constant:
      return "c:" + name;
    case AtomKind::Function:
      return "F:" + name + deriv.str(kMaxDim);
  }
  return {};
}

// ---------------------------------------------------------------- monomials

unsigned monomial_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [a, e] : m) d += e;
  return d;
}

std::strong_ordering monomial_cmp(const Monomial& a, const Monomial& b) {
  if (auto c = monomial_degree(a) <=> monomial_degree(b); c != 0) return c;
  std::size_t i = 0;
  for (; i < a.size() && i < b.size(); ++i) {
    if (auto c = a[i].first <=> b[i].first; c != 0) return c < 0 ? std::strong_ordering::greater : std::strong_ordering::less;
    if (auto c = a[i].second <=> b[i].second; c != 0) return c;
  }
  return a.size() <=> b.size();
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    auto c = a[i].first <=> b[j].first;
    if (c < 0) {
      r.push_back(a[i++]);
    } else if (c > 0) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) r.push_back(b[j]);
  return r;
}

unsigned exponent_of(const Monomial& m, const Atom& a) {
  for (const auto& [x, e] : m)
    if (x == a) return e;
  return 0;
}

namespace {

bool divides(const Monomial& d, const Monomial& m) {
  std::size_t j = 0;
  for (const auto& [a, e] : d) {
    while (j < m.size() && m[j].first < a) ++j;
    if (j == m.size() || !(m[j].first == a) || m[j].second < e) return false;
  }
  return true;
}

Monomial monomial_div(const Monomial& m, const Monomial& d) {
  Monomial r;
  std::size_t j = 0;
  for (const auto& [a, e] : m) {
    unsigned k = e;
    if (j < d.size() && d[j].first == a) k -= d[j++].second;
    if (k) r.emplace_back(a, k);
  }
  return r;
}

bool term_greater(const Poly::Term& x, const Poly::Term& y) { return monomial_cmp(x.mono, y.mono) > 0; }

}  // namespace

// ---------------------------------------------------------------- polynomials

Poly::Poly(GaussianRational c) {
  if (!c.is_zero()) terms_.push_back({{}, std::move(c)});
}

Poly Poly::atom(const Atom& a, unsigned e) {
  Poly p;
  if (e == 0)
    p.terms_.push_back({{}, GaussianRational(1)});
  else
    p.terms_.push_back({{{a, e}}, GaussianRational(1)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }

bool Poly::is_one() const { return terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].coeff.is_one(); }

std::vector<Atom> Poly::atoms() const {
  std::vector<Atom> out;
  for (const auto& t : terms_)
    for (const auto& [a, e] : t.mono) out.push_back(a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Poly::contains(const Atom& a) const {
  for (const auto& t : terms_)
    if (exponent_of(t.mono, a)) return true;
  return false;
}

unsigned Poly::degree_in(const Atom& a) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, exponent_of(t.mono, a));
  return d;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Poly Poly::merge(const Poly& a, const Poly& b, bool subtract) {
  std::vector<Poly::Term> out;
  const auto& x = a.terms();
  const auto& y = b.terms();
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    std::strong_ordering c = std::strong_ordering::equal;
    if (i == x.size())
      c = std::strong_ordering::less;
    else if (j == y.size())
      c = std::strong_ordering::greater;
    else
      c = monomial_cmp(x[i].mono, y[j].mono);
    if (c > 0) {
      out.push_back(x[i++]);
    } else if (c < 0) {
      out.push_back(y[j++]);
      if (subtract) out.back().coeff = -out.back().coeff;
    } else {
      GaussianRational s = subtract ? x[i].coeff - y[j].coeff : x[i].coeff + y[j].coeff;
      if (!s.is_zero()) out.push_back({x[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  Poly r;
  r.terms_ = std::move(out);
  return r;
}

Poly& Poly::operator+=(const Poly& o) { return *this = merge(*this, o, false); }
Poly& Poly::operator-=(const Poly& o) { return *this = merge(*this, o, true); }
Poly operator+(const Poly& a, const Poly& b) { return Poly::merge(a, b, false); }
Poly operator-(const Poly& a, const Poly& b) { return Poly::merge(a, b, true); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::vector<Poly::Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& s : a.terms())
    for (const auto& t : b.terms()) out.push_back({monomial_mul(s.mono, t.mono), s.coeff * t.coeff});
  return Poly::from_terms(std::move(out));
}

Poly Poly::scaled(const GaussianRational& c) const {
  if (c.is_zero()) return {};
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

Poly Poly::times_monomial(const Monomial& m, const GaussianRational& c) const {
  if (c.is_zero()) return {};
  Poly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({monomial_mul(t.mono, m), t.coeff * c});
  return r;  // order preserved: monomial order is multiplicative
}

Poly Poly::pow(unsigned e) const {
  Poly r(GaussianRational(1)), b = *this;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Poly Poly::base_partial(int v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < t.mono.size(); ++k) {
      const auto& [a, e] = t.mono[k];
      if (a.kind == AtomKind::Constant) continue;
      if (a.kind == AtomKind::Base && a.index != v) continue;
      Monomial rest = t.mono;
      if (e == 1)
        rest.erase(rest.begin() + static_cast<long>(k));
      else
        rest[k].second = e - 1;
      GaussianRational c = t.coeff * GaussianRational(static_cast<long>(e));
      if (a.kind == AtomKind::Function) {
        Atom da = Atom::function(a.name, a.deriv.plus_unit(v));
        rest = monomial_mul(rest, {{da, 1u}});
      }
      out.push_back({std::move(rest), std::move(c)});
    }
  }
  return from_terms(std::move(out));
}

std::vector<Poly> Poly::coefficients_in(const Atom& x) const {
  std::vector<Poly> out(degree_in(x) + 1);
  for (const auto& t : terms_) {
    unsigned e = 0;
    Monomial rest;
    rest.reserve(t.mono.size());
    for (const auto& [a, k] : t.mono) {
      if (a == x)
        e = k;
      else
        rest.emplace_back(a, k);
    }
    out[e].terms_.push_back({std::move(rest), t.coeff});
  }
  return out;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k)
    if (!(a.terms_[k].coeff == b.terms_[k].coeff) || a.terms_[k].mono != b.terms_[k].mono) return false;
  return true;
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (auto c = monomial_cmp(a.terms_[k].mono, b.terms_[k].mono); c != 0) return c;
    if (auto c = a.terms_[k].coeff <=> b.terms_[k].coeff; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

// ---------------------------------------------------------------- division and gcd

Poly exact_div(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ZeroDivide();
  if (b.is_one()) return a;
  if (b.is_monomial()) {
    const auto& bm = b.leading_monomial();
    GaussianRational inv = b.leading_coeff().inverse();
    std::vector<Poly::Term> out;
    out.reserve(a.terms().size());
    for (const auto& t : a.terms()) {
      if (!divides(bm, t.mono)) throw Error("inexact polynomial division");
      out.push_back({monomial_div(t.mono, bm), t.coeff * inv});
    }
    return Poly::from_terms(std::move(out));
  }
  GaussianRational inv = b.leading_coeff().inverse();
  const auto& lm = b.leading_monomial();
  std::vector<Poly::Term> q;
  Poly r = a;
  while (!r.is_zero()) {
    const auto& t = r.terms().front();
    if (!divides(lm, t.mono)) throw Error("inexact polynomial division");
    Monomial m = monomial_div(t.mono, lm);
    GaussianRational c = t.coeff * inv;
    r -= b.times_monomial(m, c);
    q.push_back({std::move(m), std::move(c)});
  }
  return Poly::from_terms(std::move(q));
}

namespace {

Poly monic(const Poly& p) {
  if (p.is_zero() || p.leading_coeff().is_one()) return p;
  return p.scaled(p.leading_coeff().inverse());
}

Poly gcd_rec(const Poly& a, const Poly& b);

Poly content_in(const Poly& p, const Atom& x) {
  Poly g;
  for (const auto& c : p.coefficients_in(x)) {
    if (c.is_zero()) continue;
    g = gcd_rec(g, c);
    if (g.is_one()) break;
  }
  return g;
}

int degree_of(const std::vector<Poly>& cs) {
  for (int e = static_cast<int>(cs.size()) - 1; e >= 0; --e)
    if (!cs[static_cast<std::size_t>(e)].is_zero()) return e;
  return -1;
}

// Pseudo-remainder of a by b as polynomials in x.
Poly prem(const Poly& a, const Poly& b, const Atom& x) {
  auto bc = b.coefficients_in(x);
  int db = degree_of(bc);
  const Poly& lb = bc[static_cast<std::size_t>(db)];
  Poly r = a;
  while (true) {
    auto rc = r.coefficients_in(x);
    int dr = degree_of(rc);
    if (dr < db) return r;
    Poly lr = rc[static_cast<std::size_t>(dr)];
    Monomial shift;
    if (dr - db > 0) shift = {{x, static_cast<unsigned>(dr - db)}};
    r = r * lb - (lr * b).times_monomial(shift, GaussianRational(1));
  }
}

Poly primitive_part(const Poly& p, const Atom& x) {
  Poly c = content_in(p, x);
  return c.is_one() ? p : exact_div(p, c);
}

Poly gcd_monomial(const Poly& m, const Poly& p) {
  Monomial g = m.leading_monomial();
  for (const auto& t : p.terms()) {
    Monomial next;
    for (const auto& [a, e] : g) {
      unsigned k = std::min(e, exponent_of(t.mono, a));
      if (k) next.emplace_back(a, k);
    }
    g.swap(next);
    if (g.empty()) break;
  }
  return Poly(GaussianRational(1)).times_monomial(g, GaussianRational(1));
}

Poly gcd_rec(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(GaussianRational(1));
  if (a.is_monomial()) return gcd_monomial(a, b);
  if (b.is_monomial()) return gcd_monomial(b, a);
  auto va = a.atoms();
  auto vb = b.atoms();
  for (const auto& x : va)
    if (!std::binary_search(vb.begin(), vb.end(), x)) {
      Poly g = monic(b);
      for (const auto& c : a.coefficients_in(x)) {
        if (c.is_zero()) continue;
        g = gcd_rec(g, c);
        if (g.is_one()) break;
      }
      return g;
    }
  for (const auto& x : vb)
    if (!std::binary_search(va.begin(), va.end(), x)) {
      Poly g = monic(a);
      for (const auto& c : b.coefficients_in(x)) {
        if (c.is_zero()) continue;
        g = gcd_rec(g, c);
        if (g.is_one()) break;
      }
      return g;
    }
  const Atom& x = va.front();
  Poly ca = content_in(a, x), cb = content_in(b, x);
  Poly c = gcd_rec(ca, cb);
  Poly p = exact_div(a, ca), q = exact_div(b, cb);
  if (p.degree_in(x) < q.degree_in(x)) std::swap(p, q);
  while (true) {
    Poly r = prem(p, q, x);
    if (r.is_zero()) break;
    if (r.degree_in(x) == 0) {
      q = Poly(GaussianRational(1));
      break;
    }
    p = std::move(q);
    q = primitive_part(r, x);
  }
  return monic(c * primitive_part(q, x));
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcd_rec(a, b); }

// ---------------------------------------------------------------- scalar expressions

ScalarExpr::ScalarExpr(long v) : num_(GaussianRational(v)), den_(GaussianRational(1)) {}
ScalarExpr::ScalarExpr(GaussianRational c) : num_(std::move(c)), den_(GaussianRational(1)) {}
ScalarExpr::ScalarExpr(Poly p) : num_(std::move(p)), den_(GaussianRational(1)) {}

ScalarExpr::ScalarExpr(Poly num, Poly den) {
  if (den.is_zero()) throw ZeroDivide();
  if (num.is_zero()) {
    den_ = Poly(GaussianRational(1));
    return;
  }
  if (!den.is_constant()) {
    Poly g = gcd(num, den);
    if (!g.is_one()) {
      num = exact_div(num, g);
      den = exact_div(den, g);
    }
  }
  if (!den.leading_coeff().is_one()) {
    GaussianRational inv = den.leading_coeff().inverse();
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  num_ = std::move(num);
  den_ = std::move(den);
}

std::vector<Atom> ScalarExpr::atoms() const {
  auto a = num_.atoms();
  auto b = den_.atoms();
  std::vector<Atom> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool ScalarExpr::has_function_atoms() const {
  for (const auto& a : atoms())
    if (a.kind == AtomKind::Function) return true;
  return false;
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr r = *this;
  r.num_ = -r.num_;
  return r;
}

ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) return *this = ScalarExpr(num_ + o.num_, den_);
  return *this = ScalarExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& o) { return *this += -o; }

ScalarExpr& ScalarExpr::operator*=(const ScalarExpr& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = ScalarExpr();
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ * o.num_;
    return *this;
  }
  // Cross-cancel first to keep the gcd in the constructor small.
  Poly g1 = o.den_.is_one() ? Poly(GaussianRational(1)) : gcd(num_, o.den_);
  Poly g2 = den_.is_one() ? Poly(GaussianRational(1)) : gcd(o.num_, den_);
  Poly n = exact_div(num_, g1) * exact_div(o.num_, g2);
  Poly d = exact_div(den_, g2) * exact_div(o.den_, g1);
  return *this = ScalarExpr(std::move(n), std::move(d));
}

ScalarExpr ScalarExpr::inverse() const {
  if (is_zero()) throw ZeroDivide();
  return ScalarExpr(den_, num_);
}

ScalarExpr& ScalarExpr::operator/=(const ScalarExpr& o) { return *this *= o.inverse(); }

ScalarExpr ScalarExpr::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  ScalarExpr r(1), b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

std::strong_ordering operator<=>(const ScalarExpr& a, const ScalarExpr& b) {
  if (auto c = a.num_ <=> b.num_; c != 0) return c;
  return a.den_ <=> b.den_;
}

ScalarExpr normalize(const ScalarExpr& e) { return ScalarExpr(e.num(), e.den()); }

ScalarExpr base_partial(const ScalarExpr& e, int v) {
  if (e.is_polynomial()) return ScalarExpr(e.num().base_partial(v));
  Poly dn = e.num().base_partial(v);
  Poly dd = e.den().base_partial(v);
  if (dd.is_zero()) return ScalarExpr(dn, e.den());
  return ScalarExpr(dn * e.den() - e.num() * dd, e.den() * e.den());
}

ScalarExpr base_partial(const ScalarExpr& e, const MultiIndex& d) {
  ScalarExpr r = e;
  for (int v = 0; v < kMaxDim; ++v)
    for (int k = 0; k < d[v]; ++k) r = base_partial(r, v);
  return r;
}

GaussianRational evaluate(const Poly& p, const AtomValues& values) {
  std::map<Atom, GaussianRational> cache;
  GaussianRational s;
  for (const auto& t : p.terms()) {
    GaussianRational x = t.coeff;
    for (const auto& [a, e] : t.mono) {
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, values(a)).first;
      x *= it->second.pow(e);
    }
    s += x;
  }
  return s;
}

GaussianRational evaluate(const ScalarExpr& e, const AtomValues& values) {
  GaussianRational d = evaluate(e.den(), values);
  if (d.is_zero()) throw ZeroDivide();
  return evaluate(e.num(), values) / d;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}
}  // namespace

GaussianRational random_atom_value(const Atom& a, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, fnv1a(a.key())));
  // Explicit arithmetic instead of std::uniform_int_distribution keeps the
  // stream identical across standard libraries.
  long num = static_cast<long>(rng() % 2000) - 1000;
  if (num >= 0) ++num;  // skip zero
  long den = static_cast<long>(rng() % 1000) + 1;
  return GaussianRational(mpq_class(num, den));
}

GaussianRational random_eval(const ScalarExpr& e, std::uint64_t seed, int max_tries) {
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::uint64_t s = attempt == 0 ? seed : mix_seed(seed, static_cast<std::uint64_t>(attempt));
    AtomValues values = [s](const Atom& a) { return random_atom_value(a, s); };
    GaussianRational d = evaluate(e.den(), values);
    if (d.is_zero()) continue;
    return evaluate(e.num(), values) / d;
  }
  throw UnluckyPoint(max_tries);
}

namespace {

void subst_poly(const Poly& p, std::map<Atom, ScalarExpr>& cache, const AtomImage& image, ScalarExpr& out) {
  out = ScalarExpr();
  for (const auto& t : p.terms()) {
    ScalarExpr x(t.coeff);
    for (const auto& [a, e] : t.mono) {
      auto it = cache.find(a);
      if (it == cache.end()) {
        auto img = image(a);
        it = cache.emplace(a, img ? *img : ScalarExpr::atom(a)).first;
      }
      x *= e == 1 ? it->second : it->second.pow(static_cast<int>(e));
    }
    out += x;
  }
}

}  // namespace

ScalarExpr substitute(const ScalarExpr& e, const AtomImage& image) {
  std::map<Atom, ScalarExpr> cache;
  ScalarExpr n, d;
  subst_poly(e.num(), cache, image, n);
  if (e.den().is_one()) return n;
  subst_poly(e.den(), cache, image, d);
  return n / d;
}

ScalarExpr substitute_functions(const ScalarExpr& e, const std::map<std::string, ScalarExpr>& assignment) {
  std::map<std::pair<std::string, MultiIndex>, ScalarExpr> jets;
  return substitute(e, [&](const Atom& a) -> std::optional<ScalarExpr> {
    if (a.kind != AtomKind::Function) return std::nullopt;
    auto it = assignment.find(a.name);
    if (it == assignment.end()) return std::nullopt;
    auto key = std::make_pair(a.name, a.deriv);
    auto jt = jets.find(key);
    if (jt == jets.end()) jt = jets.emplace(key, base_partial(it->second, a.deriv)).first;
    return jt->second;
  });
}

}  // namespace pvakit
