#include "pvakit/catalog.hpp"

#include <algorithm>

#include "pvakit/errors.hpp"

namespace pvakit {

namespace {

std::string digit(int k) { return std::to_string(k + 1); }

DiffPoly djet(Dims dm, int gen, const MultiIndex& idx) { return DiffPoly::jet(dm, gen, idx); }

LambdaPoly lam_monomial(Dims dm, const MultiIndex& m, const DiffPoly& c) {
  LambdaPoly r(dm);
  r.add_term({m, {}}, c);
  return r;
}

MultiIndex two_units(int a, int b) { return MultiIndex::unit(a) + MultiIndex::unit(b); }

}  // namespace

// ---------------------------------------------------------------- hydrodynamic data

HydroData::HydroData(Dims dims) : dims_(dims) {
  dims_.validate();
  auto n = static_cast<std::size_t>(dims.n), d = static_cast<std::size_t>(dims.d);
  g_.assign(n * n * d, ScalarExpr());
  b_.assign(n * n * d * n, ScalarExpr());
}

std::size_t HydroData::gi(int i, int j, int a) const {
  return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dims_.n) + static_cast<std::size_t>(j)) *
             static_cast<std::size_t>(dims_.d) +
         static_cast<std::size_t>(a);
}

std::size_t HydroData::bi(int i, int j, int a, int k) const {
  return gi(i, j, a) * static_cast<std::size_t>(dims_.n) + static_cast<std::size_t>(k);
}

GeneratorBracket make_hydro(const HydroData& h) {
  const Dims dm = h.dims();
  GeneratorBracket out(dm);
  for (int i = 0; i < dm.n; ++i)
    for (int j = 0; j < dm.n; ++j) {
      LambdaPoly e(dm);
      for (int a = 0; a < dm.d; ++a) {
        e.add_term({MultiIndex::unit(a), {}}, DiffPoly(dm, h.g(i, j, a)));
        DiffPoly jets(dm);
        for (int k = 0; k < dm.n; ++k) jets += h.b(i, j, a, k) * djet(dm, k, MultiIndex::unit(a));
        e.add_term({}, jets);
      }
      out.set(i, j, std::move(e));
    }
  return out;
}

std::optional<HydroData> as_hydro(const GeneratorBracket& b) {
  const Dims dm = b.dims();
  HydroData h(dm);
  for (int i = 0; i < dm.n; ++i)
    for (int j = 0; j < dm.n; ++j)
      for (const auto& [key, c] : b(i, j).terms()) {
        if (!key.mu.is_zero()) return std::nullopt;
        if (key.lam.order() == 1) {
          if (c.terms().size() != 1 || !c.terms().begin()->first.empty()) return std::nullopt;
          int a = 0;
          while (key.lam[a] == 0) ++a;
          h.g(i, j, a) = c.terms().begin()->second;
        } else if (key.lam.is_zero()) {
          for (const auto& [m, x] : c.terms()) {
            if (m.size() != 1 || m[0].second != 1 || m[0].first.idx.order() != 1) return std::nullopt;
            int a = 0;
            while (m[0].first.idx[a] == 0) ++a;
            h.b(i, j, a, m[0].first.gen) = x;
          }
        } else {
          return std::nullopt;
        }
      }
  return h;
}

HydroData generic_hydro(Dims dims) {
  HydroData h(dims);
  for (int i = 0; i < dims.n; ++i)
    for (int j = 0; j < dims.n; ++j)
      for (int a = 0; a < dims.d; ++a) {
        h.g(i, j, a) = ScalarExpr::function("g" + digit(i) + digit(j) + digit(a));
        for (int k = 0; k < dims.n; ++k)
          h.b(i, j, a, k) = ScalarExpr::function("b" + digit(i) + digit(j) + digit(a) + "_" + digit(k));
      }
  return h;
}

HydroData transform_hydro(const HydroData& h, const std::vector<ScalarExpr>& psi, const std::vector<ScalarExpr>& phi) {
  const Dims dm = h.dims();
  if (psi.size() != static_cast<std::size_t>(dm.n) || phi.size() != psi.size())
    throw DimensionMismatch("point transformation needs one image per generator");
  GeneratorBracket b = make_hydro(h);
  auto to_w = [&](const ScalarExpr& e) {
    return substitute(e, [&](const Atom& a) -> std::optional<ScalarExpr> {
      if (a.kind == AtomKind::Base) return phi[static_cast<std::size_t>(a.index)];
      return std::nullopt;
    });
  };
  HydroData out(dm);
  for (int x = 0; x < dm.n; ++x)
    for (int y = 0; y < dm.n; ++y) {
      LambdaPoly e = master_bracket(DiffPoly(dm, psi[static_cast<std::size_t>(x)]),
                                    DiffPoly(dm, psi[static_cast<std::size_t>(y)]), b);
      for (int a = 0; a < dm.d; ++a) {
        out.g(x, y, a) = to_w(e.coefficient(MultiIndex::unit(a)).coefficient({}));
        DiffPoly jets = e.coefficient({});
        for (int c = 0; c < dm.n; ++c) {
          // u^k_α = Σ_c ∂φ^k/∂w^c w^c_α
          ScalarExpr acc;
          for (int k = 0; k < dm.n; ++k) {
            ScalarExpr coeff = jets.coefficient({{JetVar{k, MultiIndex::unit(a)}, 1u}});
            if (coeff.is_zero()) continue;
            acc += to_w(coeff) * base_partial(phi[static_cast<std::size_t>(k)], c);
          }
          out.b(x, y, a, c) = acc;
        }
      }
    }
  return out;
}

// ---------------------------------------------------------------- normal forms

std::optional<NormalForm> parse_normal_form(const std::string& s) {
  if (s == "P1") return NormalForm::P1;
  if (s == "P2") return NormalForm::P2;
  if (s == "LP") return NormalForm::LP;
  return std::nullopt;
}

std::string to_string(NormalForm w) {
  switch (w) {
    case NormalForm::P1:
      return "P1";
    case NormalForm::P2:
      return "P2";
    case NormalForm::LP:
      return "LP";
  }
  return {};
}

HydroData normal_form_hydro(NormalForm which, Dims dims) {
  dims.validate();
  if (which != NormalForm::LP && !(dims.d == 2 && dims.n == 2))
    throw Unsupported(to_string(which) + " is defined for d=n=2 only");
  if (which == NormalForm::LP && dims.d != dims.n) throw Unsupported("LP needs d=n");
  HydroData h(dims);
  switch (which) {
    case NormalForm::P1:
      for (int i = 0; i < 2; ++i) h.g(i, i, i) = ScalarExpr(1);
      break;
    case NormalForm::P2:
      h.g(0, 1, 0) = ScalarExpr(1);
      h.g(1, 0, 0) = ScalarExpr(1);
      h.g(1, 1, 1) = ScalarExpr(1);
      break;
    case NormalForm::LP:
      for (int i = 0; i < dims.n; ++i)
        for (int j = 0; j < dims.n; ++j) {
          for (int a = 0; a < dims.d; ++a) {
            ScalarExpr g;
            if (j == a) g -= ScalarExpr::base(i);
            if (i == a) g -= ScalarExpr::base(j);
            h.g(i, j, a) = g;
          }
          h.b(i, j, i, j) = ScalarExpr(-1);
        }
      break;
  }
  return h;
}

GeneratorBracket normal_form(NormalForm which, Dims dims) { return make_hydro(normal_form_hydro(which, dims)); }

// ---------------------------------------------------------------- Mokhov

namespace {

// Splits entries into their jet-free part and the rest.
std::pair<std::vector<LambdaPoly>, std::vector<LambdaPoly>> split_jet_free(const std::vector<LambdaPoly>& entries) {
  std::vector<LambdaPoly> free, rest;
  for (const auto& e : entries) {
    LambdaPoly f(e.dims()), r(e.dims());
    for (const auto& [k, c] : e.terms()) {
      DiffPoly cf(e.dims()), cr(e.dims());
      for (const auto& [m, x] : c.terms()) (m.empty() ? cf : cr).add_term(m, x);
      f.add_term(k, cf);
      r.add_term(k, cr);
    }
    free.push_back(std::move(f));
    rest.push_back(std::move(r));
  }
  return {free, rest};
}

std::vector<std::string> pair_names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(digit(i) + "," + digit(j));
  return out;
}

std::vector<std::string> triple_names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.push_back(digit(i) + "," + digit(j) + "," + digit(k));
  return out;
}

}  // namespace

ConditionSystem mokhov_conditions(const HydroData& h) {
  GeneratorBracket b = make_hydro(h);
  const int n = h.dims().n;
  ConditionSystem sys;
  auto [free, rest] = split_jet_free(skew_residual(b));
  collect_conditions(sys, free, "skew", pair_names(n));
  collect_conditions(sys, rest, "skew", pair_names(n));
  collect_conditions(sys, jacobi_residual(b, b), "jacobi", triple_names(n));
  return sys;
}

// ---------------------------------------------------------------- degree-2 brackets

namespace {

std::string ij(Dims dm, int i, int j) { return dm.n == 1 && dm.d == 1 ? "" : "_" + digit(i) + digit(j); }

bool scalar_case(Dims dm) { return dm.n == 1 && dm.d == 1; }

}  // namespace

std::string DeformationAnsatz::a_name(Dims dm, int a, int b, int i, int j) {
  if (scalar_case(dm)) return "A";
  if (a > b) std::swap(a, b);
  return "A" + digit(a) + digit(b) + ij(dm, i, j);
}

std::string DeformationAnsatz::b_name(Dims dm, int a, int b, int l, int i, int j) {
  if (scalar_case(dm)) return "B";
  return "B" + digit(a) + "_" + digit(b) + digit(l) + ij(dm, i, j);
}

std::string DeformationAnsatz::c_name(Dims dm, int a, int l, int b, int m, int i, int j) {
  if (scalar_case(dm)) return "C";
  if (std::pair(a, l) > std::pair(b, m)) {
    std::swap(a, b);
    std::swap(l, m);
  }
  return "C" + digit(a) + digit(l) + "_" + digit(b) + digit(m) + ij(dm, i, j);
}

std::string DeformationAnsatz::d_name(Dims dm, int a, int b, int l, int i, int j) {
  if (scalar_case(dm)) return "D";
  if (a > b) std::swap(a, b);
  return "D" + digit(a) + digit(b) + "_" + digit(l) + ij(dm, i, j);
}

DeformationAnsatz::DeformationAnsatz(Dims dims) : dims_(dims) {
  dims_.validate();
  const int d = dims.d, n = dims.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) unknowns_.push_back(a_name(dims, a, b, i, j));
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int l = 0; l < n; ++l) unknowns_.push_back(b_name(dims, a, b, l, i, j));
      for (int a = 0; a < d; ++a)
        for (int l = 0; l < n; ++l)
          for (int b = 0; b < d; ++b)
            for (int m = 0; m < n; ++m)
              if (std::pair(a, l) <= std::pair(b, m)) unknowns_.push_back(c_name(dims, a, l, b, m, i, j));
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
          for (int l = 0; l < n; ++l) unknowns_.push_back(d_name(dims, a, b, l, i, j));
    }
}

ScalarExpr DeformationAnsatz::A(int a, int b, int i, int j) const {
  return ScalarExpr::function(a_name(dims_, a, b, i, j));
}
ScalarExpr DeformationAnsatz::B(int a, int b, int l, int i, int j) const {
  return ScalarExpr::function(b_name(dims_, a, b, l, i, j));
}
ScalarExpr DeformationAnsatz::C(int a, int l, int b, int m, int i, int j) const {
  return ScalarExpr::function(c_name(dims_, a, l, b, m, i, j));
}
ScalarExpr DeformationAnsatz::D(int a, int b, int l, int i, int j) const {
  return ScalarExpr::function(d_name(dims_, a, b, l, i, j));
}

GeneratorBracket DeformationAnsatz::bracket() const {
  DegreeTwoTables t{[this](int a, int b, int i, int j) { return A(a, b, i, j); },
                    [this](int a, int b, int l, int i, int j) { return B(a, b, l, i, j); },
                    [this](int a, int l, int b, int m, int i, int j) { return C(a, l, b, m, i, j); },
                    [this](int a, int b, int l, int i, int j) { return D(a, b, l, i, j); }};
  return degree_two_bracket(dims_, t);
}

GeneratorBracket degree_two_bracket(Dims dm, const DegreeTwoTables& t) {
  GeneratorBracket out(dm);
  const int d = dm.d, n = dm.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      LambdaPoly e(dm);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          e += lam_monomial(dm, two_units(a, b), DiffPoly(dm, t.A(a, b, i, j)));
          for (int l = 0; l < n; ++l) {
            e += lam_monomial(dm, MultiIndex::unit(a), t.B(a, b, l, i, j) * djet(dm, l, MultiIndex::unit(b)));
            e += LambdaPoly(t.D(a, b, l, i, j) * djet(dm, l, two_units(a, b)));
            for (int m = 0; m < n; ++m)
              e += LambdaPoly(t.C(a, l, b, m, i, j) *
                              (djet(dm, l, MultiIndex::unit(a)) * djet(dm, m, MultiIndex::unit(b))));
          }
        }
      out.set(i, j, std::move(e));
    }
  return out;
}

DegreeTwoTables degree_two_tables(const GeneratorBracket& br) {
  const Dims dm = br.dims();
  auto entry = [br](int i, int j) { return br(i, j); };
  const ScalarExpr half = ScalarExpr(GaussianRational(mpq_class(1, 2)));
  DegreeTwoTables t;
  t.A = [=](int a, int b, int i, int j) {
    ScalarExpr c = at_lambda_zero(LambdaPoly(entry(i, j).coefficient(two_units(a, b)))).coefficient({});
    return a == b ? c : half * c;
  };
  t.B = [=](int a, int b, int l, int i, int j) {
    return entry(i, j).coefficient(MultiIndex::unit(a)).coefficient({{JetVar{l, MultiIndex::unit(b)}, 1u}});
  };
  t.C = [=](int a, int l, int b, int m, int i, int j) {
    JetVar x{l, MultiIndex::unit(a)}, y{m, MultiIndex::unit(b)};
    DiffPoly c0 = entry(i, j).coefficient({});
    if (x == y) return c0.coefficient({{x, 2u}});
    JetMonomial mono = x < y ? JetMonomial{{x, 1u}, {y, 1u}} : JetMonomial{{y, 1u}, {x, 1u}};
    return half * c0.coefficient(mono);
  };
  t.D = [=](int a, int b, int l, int i, int j) {
    ScalarExpr c = entry(i, j).coefficient({}).coefficient({{JetVar{l, two_units(a, b)}, 1u}});
    return a == b ? c : half * c;
  };
  return t;
}

ConditionSystem skew_deformation_conditions(const DeformationAnsatz& ans) {
  ConditionSystem sys;
  collect_conditions(sys, skew_residual(ans.bracket()), "skew", pair_names(ans.dims().n));
  return sys;
}

// ---------------------------------------------------------------- tilde parametrization

namespace tilde {

std::string a(int a, int b) {
  if (a > b) std::swap(a, b);
  return "At" + digit(a) + digit(b);
}

std::string b(int a, int b, int l, int i, int j) {
  if (i > j) std::swap(i, j);
  return "Bt" + digit(a) + "_" + digit(b) + digit(l) + "_" + digit(i) + digit(j);
}

std::string c(int a, int l, int b, int m) {
  if (std::pair(a, l) > std::pair(b, m)) {
    std::swap(a, b);
    std::swap(l, m);
  }
  return "Ct" + digit(a) + digit(l) + "_" + digit(b) + digit(m);
}

std::string d(int a, int b, int l) {
  if (a > b) std::swap(a, b);
  return "Dt" + digit(a) + digit(b) + "_" + digit(l);
}

std::vector<std::string> all() {
  std::vector<std::string> out;
  for (int x = 0; x < 2; ++x)
    for (int y = x; y < 2; ++y) out.push_back(a(x, y));
  for (auto [i, j] : {std::pair(0, 0), std::pair(1, 1), std::pair(0, 1)})
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int l = 0; l < 2; ++l) out.push_back(b(x, y, l, i, j));
  for (int x = 0; x < 2; ++x)
    for (int l = 0; l < 2; ++l)
      for (int y = 0; y < 2; ++y)
        for (int m = 0; m < 2; ++m)
          if (std::pair(x, l) <= std::pair(y, m)) out.push_back(c(x, l, y, m));
  for (int x = 0; x < 2; ++x)
    for (int y = x; y < 2; ++y)
      for (int l = 0; l < 2; ++l) out.push_back(d(x, y, l));
  return out;
}

}  // namespace tilde

GeneratorBracket apply_tilde(const std::map<std::string, ScalarExpr>& tildes) {
  const Dims dm{2, 2};
  auto get = [tildes](const std::string& name) {
    auto it = tildes.find(name);
    return it == tildes.end() ? ScalarExpr::function(name) : it->second;
  };
  auto sign = [](int i, int j) { return i == j ? 0L : (i < j ? 1L : -1L); };
  const ScalarExpr quarter = ScalarExpr(GaussianRational(mpq_class(1, 4)));
  // Antisymmetric part of B: ±∂Ã^{ab}/∂p_l off the diagonal.
  auto b_anti = [=](int a, int b, int l, int i, int j) {
    return ScalarExpr(sign(i, j)) * base_partial(get(tilde::a(a, b)), l);
  };
  DegreeTwoTables t;
  t.A = [=](int a, int b, int i, int j) { return ScalarExpr(sign(i, j)) * get(tilde::a(a, b)); };
  t.B = [=](int a, int b, int l, int i, int j) { return get(tilde::b(a, b, l, i, j)) + b_anti(a, b, l, i, j); };
  t.C = [=](int a, int l, int b, int m, int i, int j) {
    ScalarExpr sym = quarter * (base_partial(get(tilde::b(a, b, m, i, j)), l) + base_partial(get(tilde::b(b, a, l, i, j)), m));
    return sym + ScalarExpr(sign(i, j)) * get(tilde::c(a, l, b, m));
  };
  t.D = [=](int a, int b, int l, int i, int j) {
    ScalarExpr sym = quarter * (get(tilde::b(a, b, l, i, j)) + get(tilde::b(b, a, l, i, j)));
    return sym + ScalarExpr(sign(i, j)) * get(tilde::d(a, b, l));
  };
  return degree_two_bracket(dm, t);
}

std::map<std::string, ScalarExpr> extract_tilde(const GeneratorBracket& br) {
  if (!(br.dims() == Dims{2, 2})) throw Unsupported("tilde parameters are defined for d=n=2");
  DegreeTwoTables t = degree_two_tables(br);
  const ScalarExpr half = ScalarExpr(GaussianRational(mpq_class(1, 2)));
  std::map<std::string, ScalarExpr> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      out[tilde::a(a, b)] = t.A(a, b, 0, 1);
      for (int l = 0; l < 2; ++l) {
        out[tilde::b(a, b, l, 0, 0)] = t.B(a, b, l, 0, 0);
        out[tilde::b(a, b, l, 1, 1)] = t.B(a, b, l, 1, 1);
        out[tilde::b(a, b, l, 0, 1)] = half * (t.B(a, b, l, 0, 1) + t.B(a, b, l, 1, 0));
        out[tilde::d(a, b, l)] = half * (t.D(a, b, l, 0, 1) - t.D(a, b, l, 1, 0));
        for (int m = 0; m < 2; ++m) out[tilde::c(a, l, b, m)] = half * (t.C(a, l, b, m, 0, 1) - t.C(a, l, b, m, 1, 0));
      }
    }
  return out;
}

}  // namespace pvakit
