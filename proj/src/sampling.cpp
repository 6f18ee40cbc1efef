#include "pvakit/sampling.hpp"

#include <memory>
#include <mutex>

#include "pvakit/errors.hpp"
#include "pvakit/parallel.hpp"

namespace pvakit {

namespace modp {

std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= P ? s - P : s;
}

std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + P - b; }

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % P);
}

std::uint64_t inv(std::uint64_t a) {
  if (a == 0) throw ZeroDivide();
  std::uint64_t r = 1, e = P - 2;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

namespace {
std::uint64_t reduce_z(const mpz_class& z) {
  mpz_class r = z % mpz_class(std::to_string(P));
  if (r < 0) r += mpz_class(std::to_string(P));
  return r.get_ui();
}
std::uint64_t reduce_q(const mpq_class& q) { return mul(reduce_z(q.get_num()), inv(reduce_z(q.get_den()))); }
}  // namespace

std::uint64_t reduce(const GaussianRational& c) {
  std::uint64_t re = reduce_q(c.re());
  if (sgn(c.im()) == 0) return re;
  return add(re, mul(reduce_q(c.im()), I));
}

}  // namespace modp

namespace {

const Atom kOne = Atom::constant("1");

std::uint64_t pow_mod(std::uint64_t a, unsigned e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = modp::mul(r, a);
    a = modp::mul(a, a);
    e >>= 1;
  }
  return r;
}

template <class Values>
std::uint64_t poly_mod(const Poly& p, const Values& value) {
  std::uint64_t acc = 0;
  for (const auto& t : p.terms()) {
    std::uint64_t x = modp::reduce(t.coeff);
    for (const auto& [a, e] : t.mono) x = modp::mul(x, pow_mod(value(a), e));
    acc = modp::add(acc, x);
  }
  return acc;
}

template <class Values>
std::uint64_t expr_mod(const ScalarExpr& e, const Values& value) {
  std::uint64_t n = poly_mod(e.num(), value);
  if (e.den().is_one()) return n;
  return modp::mul(n, modp::inv(poly_mod(e.den(), value)));
}

}  // namespace

int LinearExpr::order() const {
  int o = 0;
  for (const auto& [a, c] : coeffs) o = std::max(o, a.deriv.order());
  return o;
}

LinearExpr linearize(const ScalarExpr& e) {
  for (const Atom& a : e.den().atoms())
    if (a.kind == AtomKind::Function) throw Error("equation is not linear: " + a.name + " in a denominator");
  std::map<Atom, std::vector<Poly::Term>> parts;
  std::vector<Poly::Term> rest;
  for (const auto& t : e.num().terms()) {
    const Atom* fn = nullptr;
    Monomial others;
    for (const auto& [a, k] : t.mono) {
      if (a.kind != AtomKind::Function) {
        others.emplace_back(a, k);
        continue;
      }
      if (fn || k != 1) throw Error("equation is not linear in " + a.name);
      fn = &a;
    }
    if (fn)
      parts[*fn].push_back({others, t.coeff});
    else
      rest.push_back(t);
  }
  LinearExpr out;
  for (auto& [a, terms] : parts) out.coeffs.emplace(a, ScalarExpr(Poly::from_terms(std::move(terms)), e.den()));
  out.rest = ScalarExpr(Poly::from_terms(std::move(rest)), e.den());
  return out;
}

LinearExpr total_partial(const LinearExpr& e, int v) {
  LinearExpr out;
  out.rest = base_partial(e.rest, v);
  auto bump = [&](const Atom& a, const ScalarExpr& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = out.coeffs.emplace(a, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) out.coeffs.erase(it);
    }
  };
  for (const auto& [a, c] : e.coeffs) {
    bump(a, base_partial(c, v));
    bump(Atom::function(a.name, a.deriv.plus_unit(v)), c);
  }
  return out;
}

std::vector<LinearExpr> prolong(const LinearExpr& e, int n, int max_order) {
  int room = max_order - e.order();
  if (room < 0) return {};
  std::map<MultiIndex, LinearExpr> done;
  std::vector<LinearExpr> out;
  for (const MultiIndex& d : indices_up_to(n, room)) {
    if (d.is_zero()) {
      done.emplace(d, e);
      out.push_back(e);
      continue;
    }
    int v = 0;
    while (d[v] == 0) ++v;
    LinearExpr x = total_partial(done.at(d - MultiIndex::unit(v)), v);
    done.emplace(d, x);
    out.push_back(std::move(x));
  }
  return out;
}

std::uint64_t SamplePoint::value(const Atom& a) const { return modp::reduce(random_atom_value(a, seed)); }

ModVector evaluate(const LinearExpr& e, const SamplePoint& at) {
  std::map<Atom, std::uint64_t> cache;
  auto value = [&](const Atom& a) {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    return cache[a] = at.value(a);
  };
  ModVector out;
  for (const auto& [a, c] : e.coeffs)
    if (std::uint64_t x = expr_mod(c, value)) out[a] = x;
  if (!e.rest.is_zero())
    if (std::uint64_t x = expr_mod(e.rest, value)) out[kOne] = x;
  return out;
}

// ---------------------------------------------------------------- ModSpan

bool ModSpan::dense(const ModVector& v, std::vector<std::uint64_t>& out) const {
  out.assign(keys_.size(), 0);
  for (const auto& [a, x] : v) {
    if (!x) continue;
    auto it = column_.find(a);
    if (it == column_.end()) return false;
    out[it->second] = x;
  }
  return true;
}

void ModSpan::reduce(std::vector<std::uint64_t>& v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    std::uint64_t c = v[pivots_[r]];
    if (!c) continue;
    const auto& row = rows_[r];
    for (std::size_t k = 0; k < row.size(); ++k)
      if (row[k]) v[k] = modp::sub(v[k], modp::mul(c, row[k]));
  }
}

bool ModSpan::add(const ModVector& v) {
  for (const auto& [a, x] : v) {
    if (!x || column_.count(a)) continue;
    column_.emplace(a, keys_.size());
    keys_.push_back(Key{priority_ ? priority_(a) : 0, a});
  }
  std::vector<std::uint64_t> d;
  dense(v, d);
  reduce(d);
  std::size_t pivot = d.size();
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] && (pivot == d.size() || keys_[k] < keys_[pivot])) pivot = k;
  if (pivot == d.size()) return false;
  std::uint64_t s = modp::inv(d[pivot]);
  for (auto& x : d) x = modp::mul(x, s);
  for (auto& row : rows_) row.resize(keys_.size(), 0);
  rows_.push_back(std::move(d));
  pivots_.push_back(pivot);
  return true;
}

bool ModSpan::contains(const ModVector& v) const {
  std::vector<std::uint64_t> d;
  if (!dense(v, d)) return false;
  reduce(d);
  for (auto x : d)
    if (x) return false;
  return true;
}

std::vector<ModVector> ModSpan::rows_from(int p) const {
  std::vector<ModVector> out;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (keys_[pivots_[r]].first < p) continue;
    ModVector v;
    for (std::size_t k = 0; k < rows_[r].size(); ++k)
      if (rows_[r][k]) v.emplace(keys_[k].second, rows_[r][k]);
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------- systems

namespace {

std::vector<LinearExpr> linearize_all(const ConditionSystem& sys) {
  std::vector<LinearExpr> out(sys.size());
  parallel_for(sys.size(), [&](std::size_t k) { out[k] = linearize(sys.equations()[k]); });
  return out;
}

int max_order(const std::vector<LinearExpr>& v) {
  int o = 0;
  for (const auto& e : v) o = std::max(o, e.order());
  return o;
}

std::vector<LinearExpr> prolong_all(const std::vector<LinearExpr>& eqs, int n, int order) {
  std::vector<std::vector<LinearExpr>> parts(eqs.size());
  parallel_for(eqs.size(), [&](std::size_t k) { parts[k] = prolong(eqs[k], n, order); });
  std::vector<LinearExpr> out;
  for (auto& p : parts)
    for (auto& e : p) out.push_back(std::move(e));
  return out;
}

// Runs body on `samples` points that avoid vanishing denominators.
std::vector<std::uint64_t> run_samples(const SamplingOptions& opt, const std::function<void(const SamplePoint&)>& body) {
  std::vector<std::uint64_t> used;
  for (std::uint64_t k = 0; static_cast<int>(used.size()) < opt.samples; ++k) {
    if (k > static_cast<std::uint64_t>(opt.samples) * 4 + 16) throw UnluckyPoint(static_cast<int>(k));
    SamplePoint at{mix_seed(opt.seed, k)};
    try {
      body(at);
    } catch (const ZeroDivide&) {
      continue;
    }
    used.push_back(at.seed);
  }
  return used;
}

std::vector<ModVector> evaluate_all(const std::vector<LinearExpr>& rows, const SamplePoint& at) {
  std::vector<ModVector> out(rows.size());
  parallel_for(rows.size(), [&](std::size_t k) { out[k] = evaluate(rows[k], at); });
  return out;
}

}  // namespace

EquivalenceReport compare_linear_systems(const ConditionSystem& left, const ConditionSystem& right, int n,
                                         const SamplingOptions& opt) {
  auto l = linearize_all(left), r = linearize_all(right);
  EquivalenceReport rep;
  rep.prolongation_order = std::max(max_order(l), max_order(r)) + opt.extra_order;
  auto lp = prolong_all(l, n, rep.prolongation_order), rp = prolong_all(r, n, rep.prolongation_order);
  std::set<std::size_t> miss_r, miss_l;
  rep.seeds = run_samples(opt, [&](const SamplePoint& at) {
    auto lrows = evaluate_all(lp, at), rrows = evaluate_all(rp, at);
    auto lo = evaluate_all(l, at), ro = evaluate_all(r, at);
    ModSpan ls, rs;
    for (const auto& v : lrows) ls.add(v);
    for (const auto& v : rrows) rs.add(v);
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (!rs.contains(lo[k])) miss_r.insert(k);
    for (std::size_t k = 0; k < ro.size(); ++k)
      if (!ls.contains(ro[k])) miss_l.insert(k);
  });
  auto label = [](const ConditionSystem& s, std::size_t k) {
    return s.labels()[k].empty() ? "#" + std::to_string(k + 1) : s.labels()[k];
  };
  for (auto k : miss_r) rep.missing_in_right.push_back(label(left, k));
  for (auto k : miss_l) rep.missing_in_left.push_back(label(right, k));
  return rep;
}

namespace {

std::vector<ScalarExpr> with_partials(const ConditionSystem& sys, int n, int order) {
  std::vector<ScalarExpr> out(sys.equations().begin(), sys.equations().end());
  std::size_t from = 0;
  for (int k = 0; k < order; ++k) {
    std::size_t to = out.size();
    for (std::size_t e = from; e < to; ++e)
      for (int v = 0; v < n; ++v) out.push_back(base_partial(out[e], v));
    from = to;
  }
  return out;
}

// Echelon form of dense vectors, pivot = first nonzero entry.
class DenseSpan {
 public:
  void add(std::vector<std::uint64_t> v) {
    reduce(v);
    std::size_t p = 0;
    while (p < v.size() && !v[p]) ++p;
    if (p == v.size()) return;
    std::uint64_t s = modp::inv(v[p]);
    for (auto& x : v) x = modp::mul(x, s);
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
  }
  bool contains(std::vector<std::uint64_t> v) const {
    reduce(v);
    for (auto x : v)
      if (x) return false;
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  void reduce(std::vector<std::uint64_t>& v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::uint64_t c = v[pivots_[r]];
      if (!c) continue;
      for (std::size_t k = pivots_[r]; k < v.size(); ++k)
        if (rows_[r][k]) v[k] = modp::sub(v[k], modp::mul(c, rows_[r][k]));
    }
  }
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace

SpanReport compare_polynomial_spans(const ConditionSystem& left, const ConditionSystem& right, int n,
                                    int partial_order, const SamplingOptions& opt) {
  auto lp = with_partials(left, n, partial_order), rp = with_partials(right, n, partial_order);
  SpanReport rep;
  rep.points = std::max(lp.size(), rp.size()) + static_cast<std::size_t>(opt.samples);
  std::vector<std::vector<std::uint64_t>> lv(lp.size(), std::vector<std::uint64_t>(rep.points)),
      rv(rp.size(), std::vector<std::uint64_t>(rep.points));
  parallel_for(rep.points, [&](std::size_t k) {
    SamplePoint at{mix_seed(opt.seed, k)};
    std::map<Atom, std::uint64_t> cache;
    auto value = [&](const Atom& a) {
      auto it = cache.find(a);
      return it != cache.end() ? it->second : cache[a] = at.value(a);
    };
    for (std::size_t e = 0; e < lp.size(); ++e) lv[e][k] = expr_mod(lp[e], value);
    for (std::size_t e = 0; e < rp.size(); ++e) rv[e][k] = expr_mod(rp[e], value);
  });
  DenseSpan ls, rs;
  for (const auto& v : lv) ls.add(v);
  for (const auto& v : rv) rs.add(v);
  rep.rank_left = ls.rank();
  rep.rank_right = rs.rank();
  auto label = [](const ConditionSystem& s, std::size_t k) {
    return s.labels()[k].empty() ? "#" + std::to_string(k + 1) : s.labels()[k];
  };
  for (std::size_t k = 0; k < left.size(); ++k)
    if (!rs.contains(lv[k])) rep.missing_in_right.push_back(label(left, k));
  for (std::size_t k = 0; k < right.size(); ++k)
    if (!ls.contains(rv[k])) rep.missing_in_left.push_back(label(right, k));
  return rep;
}

std::vector<std::size_t> outside_span(const std::vector<ScalarExpr>& exprs, const ConditionSystem& sys, int n,
                                      const SamplingOptions& opt) {
  if (exprs.empty()) return {};
  std::vector<LinearExpr> lin(exprs.size());
  parallel_for(exprs.size(), [&](std::size_t k) { lin[k] = linearize(exprs[k]); });
  auto base = linearize_all(sys);
  int order = std::max(max_order(lin), max_order(base)) + opt.extra_order;
  auto rows = prolong_all(base, n, order);
  std::set<std::size_t> out;
  run_samples(opt, [&](const SamplePoint& at) {
    ModSpan span;
    for (const auto& v : evaluate_all(rows, at)) span.add(v);
    auto vs = evaluate_all(lin, at);
    for (std::size_t k = 0; k < vs.size(); ++k)
      if (!span.contains(vs[k])) out.insert(k);
  });
  return {out.begin(), out.end()};
}

namespace {

std::vector<ModVector> compat_rows(const std::vector<LinearExpr>& rows, const std::set<std::string>& eliminate,
                                   const SamplePoint& at) {
  ModSpan span([&](const Atom& a) { return a.kind == AtomKind::Function && eliminate.count(a.name) ? 0 : 1; });
  for (const auto& v : evaluate_all(rows, at)) span.add(v);
  return span.rows_from(1);
}

int vector_order(const ModVector& v) {
  int o = 0;
  for (const auto& [a, x] : v) o = std::max(o, a.deriv.order());
  return o;
}

}  // namespace

std::vector<ModVector> compatibility_conditions(const ConditionSystem& sys, const std::set<std::string>& eliminate,
                                                int n, int order, const SamplePoint& at) {
  return compat_rows(prolong_all(linearize_all(sys), n, order), eliminate, at);
}

CompatibilityReport compare_compatibility(const ConditionSystem& sys, const std::set<std::string>& eliminate,
                                          const ConditionSystem& reference, int n, int order,
                                          const SamplingOptions& opt) {
  auto rows = prolong_all(linearize_all(sys), n, order);
  auto ref = linearize_all(reference);
  std::map<int, std::vector<LinearExpr>> ref_prolonged;
  CompatibilityReport rep;
  bool first = true;
  rep.seeds = run_samples(opt, [&](const SamplePoint& at) {
    auto conds = compat_rows(rows, eliminate, at);
    int k = 0;
    for (const auto& c : conds) k = std::max(k, vector_order(c));
    k = std::max(k, max_order(ref));
    auto it = ref_prolonged.find(k);
    if (it == ref_prolonged.end()) it = ref_prolonged.emplace(k, prolong_all(ref, n, k)).first;
    ModSpan rs, cs;
    for (const auto& v : evaluate_all(it->second, at)) rs.add(v);
    for (const auto& c : conds) {
      cs.add(c);
      if (!rs.contains(c)) rep.implied_by_fixture = false;
    }
    for (const auto& v : evaluate_all(ref, at))
      if (!cs.contains(v)) rep.implies_fixture = false;
    if (first) rep.conditions = conds.size();
    first = false;
  });
  return rep;
}

AtomValues point_values(const std::map<std::string, ScalarExpr>& assignment, std::uint64_t seed) {
  auto cache = std::make_shared<std::map<Atom, GaussianRational>>();
  auto mutex = std::make_shared<std::mutex>();
  auto self = std::make_shared<AtomValues>();
  *self = [assignment, seed, cache, mutex, weak = std::weak_ptr<AtomValues>(self)](const Atom& a) -> GaussianRational {
    {
      std::lock_guard<std::mutex> lock(*mutex);
      auto it = cache->find(a);
      if (it != cache->end()) return it->second;
    }
    GaussianRational v;
    auto img = a.kind == AtomKind::Function ? assignment.find(a.name) : assignment.end();
    if (img == assignment.end()) {
      v = random_atom_value(a, seed);
    } else {
      auto fn = weak.lock();
      ScalarExpr d = base_partial(img->second, a.deriv);
      GaussianRational den = evaluate(d.den(), *fn);
      if (den.is_zero()) throw ZeroDivide();
      v = evaluate(d.num(), *fn) / den;
    }
    std::lock_guard<std::mutex> lock(*mutex);
    return (*cache)[a] = v;
  };
  // The returned copy keeps `self` alive through a strong reference.
  return [self](const Atom& a) { return (*self)(a); };
}

bool vanishes_at(const ConditionSystem& sys, const AtomValues& values) {
  for (const auto& e : sys.equations())
    if (!evaluate(e.num(), values).is_zero()) return false;
  return true;
}

std::uint64_t apply(const ModVector& v, const std::map<std::string, ScalarExpr>& assignment, const SamplePoint& at) {
  std::map<Atom, std::uint64_t> cache;
  std::function<std::uint64_t(const Atom&)> value = [&](const Atom& a) -> std::uint64_t {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    std::uint64_t x;
    auto img = a.kind == AtomKind::Function ? assignment.find(a.name) : assignment.end();
    if (img == assignment.end())
      x = at.value(a);
    else
      x = expr_mod(base_partial(img->second, a.deriv), value);
    return cache[a] = x;
  };
  std::uint64_t acc = 0;
  for (const auto& [a, x] : v) acc = modp::add(acc, modp::mul(x, a == kOne ? 1 : value(a)));
  return acc;
}

}  // namespace pvakit
