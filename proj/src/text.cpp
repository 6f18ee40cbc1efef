#include "pvakit/text.hpp"

#include <cctype>
#include <ostream>

namespace pvakit {

std::string Names::generator(int i) const {
  if (static_cast<std::size_t>(i) < generators.size()) return generators[static_cast<std::size_t>(i)];
  return "u" + std::to_string(i + 1);
}

namespace {

std::string deriv_list(const MultiIndex& m, int n) {
  std::string s;
  for (int k = 0; k < n; ++k) {
    if (k) s += ",";
    s += std::to_string(m[k]);
  }
  return s;
}

bool needs_parens(const Poly& p) { return p.terms().size() > 1; }

std::string monomial_text(const Monomial& m, const Names& names) {
  std::string s;
  for (const auto& [a, e] : m) {
    if (!s.empty()) s += "*";
    s += to_text(a, names);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

// Appends "coeff*rest" with a leading sign handled by the caller's joiner.
void append_term(std::string& out, const GaussianRational& c, const std::string& rest) {
  bool first = out.empty();
  if (rest.empty()) {
    std::string cs = to_text(c);
    if (!first) {
      if (cs[0] == '-')
        out += " - " + cs.substr(1);
      else
        out += " + " + cs;
    } else {
      out += cs;
    }
    return;
  }
  bool negative = c.is_real() && sgn(c.re()) < 0;
  GaussianRational mag = negative ? -c : c;
  std::string body = mag.is_one() ? rest : to_text(mag) + "*" + rest;
  if (first)
    out += (negative ? "-" : "") + body;
  else
    out += (negative ? " - " : " + ") + body;
}

}  // namespace

std::string to_text(const GaussianRational& c) {
  if (c.is_real()) return c.re().get_str();
  return c.str();
}

std::string to_text(const Atom& a, const Names& names) {
  switch (a.kind) {
    case AtomKind::Base:
      return names.generator(a.index);
    case AtomKind::Constant:
      return a.name;
    case AtomKind::Function:
      if (a.deriv.is_zero()) return "F[" + a.name + "]";
      return "F[" + a.name + ";" + deriv_list(a.deriv, names.dims.n) + "]";
  }
  return {};
}

std::string to_text(const Poly& p, const Names& names) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& t : p.terms()) append_term(out, t.coeff, monomial_text(t.mono, names));
  return out;
}

std::string to_text(const ScalarExpr& e, const Names& names) {
  if (e.is_polynomial()) return to_text(e.num(), names);
  std::string n = to_text(e.num(), names), d = to_text(e.den(), names);
  if (needs_parens(e.num()) || n[0] == '-') n = "(" + n + ")";
  if (needs_parens(e.den()) || !e.den().is_monomial() || !e.den().terms()[0].coeff.is_one() ||
      e.den().terms()[0].mono.size() > 1 || (e.den().terms()[0].mono.size() == 1 && e.den().terms()[0].mono[0].second > 1))
    d = "(" + d + ")";
  return n + "/" + d;
}

std::string to_text(const JetVar& v, const Names& names) {
  return names.generator(v.gen) + "_" + v.idx.str(names.dims.d);
}

std::string to_text(const DiffPoly& f, const Names& names) {
  if (f.is_zero()) return "0";
  std::string out;
  // Highest differential degree first, mirroring the scalar term order.
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    std::string jets;
    for (const auto& [v, e] : m) {
      if (!jets.empty()) jets += "*";
      jets += to_text(v, names);
      if (e > 1) jets += "^" + std::to_string(e);
    }
    if (c.is_polynomial() && c.num().terms().size() == 1) {
      const auto& t = c.num().terms()[0];
      std::string rest = monomial_text(t.mono, names);
      if (!jets.empty()) rest = rest.empty() ? jets : rest + "*" + jets;
      append_term(out, t.coeff, rest);
      continue;
    }
    std::string cs = "(" + to_text(c, names) + ")";
    if (jets.empty()) {
      out += out.empty() ? cs : " + " + cs;
    } else {
      out += (out.empty() ? "" : " + ") + cs + "*" + jets;
    }
  }
  return out;
}

std::string to_text(const ScalarExpr& e) { return to_text(e, Names(Dims{kMaxDim, kMaxDim})); }
std::string to_text(const DiffPoly& f) { return to_text(f, Names(f.dims())); }

// ---------------------------------------------------------------- S-expressions

namespace {

std::string sexpr_coeff(const GaussianRational& c) {
  if (c.is_real()) return c.re().get_str();
  return "(complex " + c.re().get_str() + " " + c.im().get_str() + ")";
}

std::string sexpr_atom(const Atom& a, const Names& names) {
  if (a.kind != AtomKind::Function) return to_text(a, names);
  std::string s = "(F " + a.name;
  for (int k = 0; k < names.dims.n; ++k) s += " " + std::to_string(a.deriv[k]);
  return s + ")";
}

std::string sexpr_product(const GaussianRational& c, std::vector<std::string> factors) {
  if (!c.is_one() || factors.empty()) factors.insert(factors.begin(), sexpr_coeff(c));
  if (factors.size() == 1) return factors[0];
  std::string s = "(*";
  for (auto& f : factors) s += " " + f;
  return s + ")";
}

std::vector<std::string> sexpr_monomial(const Monomial& m, const Names& names) {
  std::vector<std::string> out;
  for (const auto& [a, e] : m) {
    std::string x = sexpr_atom(a, names);
    out.push_back(e == 1 ? x : "(^ " + x + " " + std::to_string(e) + ")");
  }
  return out;
}

std::string sexpr_sum(const std::vector<std::string>& items) {
  if (items.empty()) return "0";
  if (items.size() == 1) return items[0];
  std::string s = "(+";
  for (const auto& t : items) s += " " + t;
  return s + ")";
}

std::string sexpr_poly(const Poly& p, const Names& names) {
  std::vector<std::string> items;
  for (const auto& t : p.terms()) items.push_back(sexpr_product(t.coeff, sexpr_monomial(t.mono, names)));
  return sexpr_sum(items);
}

}  // namespace

std::string to_sexpr(const ScalarExpr& e, const Names& names) {
  if (e.is_polynomial()) return sexpr_poly(e.num(), names);
  return "(/ " + sexpr_poly(e.num(), names) + " " + sexpr_poly(e.den(), names) + ")";
}

std::string to_sexpr(const DiffPoly& f, const Names& names) {
  std::vector<std::string> items;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    std::vector<std::string> factors;
    if (!it->second.is_one()) factors.push_back(to_sexpr(it->second, names));
    for (const auto& [v, e] : it->first) {
      std::string x = "(jet " + names.generator(v.gen);
      for (int k = 0; k < names.dims.d; ++k) x += " " + std::to_string(v.idx[k]);
      x += ")";
      factors.push_back(e == 1 ? x : "(^ " + x + " " + std::to_string(e) + ")");
    }
    items.push_back(factors.empty() ? "1" : (factors.size() == 1 ? factors[0] : [&] {
      std::string s = "(*";
      for (auto& x : factors) s += " " + x;
      return s + ")";
    }()));
  }
  return sexpr_sum(items);
}

// ---------------------------------------------------------------- LaTeX

namespace {

// "Bt1_12_11" -> \tilde{B}^{1,12}_{11}; "h" -> h.
std::string latex_name(const std::string& name) {
  std::size_t k = 0;
  while (k < name.size() && std::isalpha(static_cast<unsigned char>(name[k]))) ++k;
  std::string head = name.substr(0, k), rest = name.substr(k);
  if (head.size() == 2 && head[1] == 't') head = "\\tilde{" + head.substr(0, 1) + "}";
  if (rest.empty()) return head;
  std::vector<std::string> groups;
  std::string cur;
  for (char ch : rest) {
    if (ch == '_') {
      groups.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  groups.push_back(cur);
  // Ct and Dt carry upper indices only.
  bool all_upper = groups.size() == 1 || name.rfind("Ct", 0) == 0 || name.rfind("Dt", 0) == 0;
  if (all_upper) {
    std::string sup;
    for (std::size_t g = 0; g < groups.size(); ++g) sup += (g ? "," : "") + groups[g];
    return head + "^{" + sup + "}";
  }
  std::string sup;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) sup += (g ? "," : "") + groups[g];
  return head + "^{" + sup + "}_{" + groups.back() + "}";
}

std::string latex_atom(const Atom& a, const Names& names) {
  if (a.kind == AtomKind::Base) return names.generator(a.index);
  if (a.kind == AtomKind::Constant) {
    if (a.name.size() > 1 && a.name[0] == 'c') return "c_{" + a.name.substr(1) + "}";
    return a.name;
  }
  std::string s = latex_name(a.name);
  if (a.deriv.is_zero()) return s;
  std::string sub;
  for (int v = 0; v < names.dims.n; ++v)
    for (int t = 0; t < a.deriv[v]; ++t) sub += names.generator(v);
  return "\\left(" + s + "\\right)_{" + sub + "}";
}

std::string latex_coeff(const GaussianRational& c) {
  auto q = [](const mpq_class& x) {
    mpq_class a = abs(x);
    if (a.get_den() == 1) return a.get_num().get_str();
    return "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
  };
  if (c.is_real()) return q(c.re());
  std::string s = "(" + (sgn(c.re()) < 0 ? std::string("-") : "") + q(c.re()) + (sgn(c.im()) < 0 ? "-" : "+") + q(c.im()) + "i)";
  return s;
}

std::string latex_poly(const Poly& p, const Names& names) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& t : p.terms()) {
    bool neg = t.coeff.is_real() && sgn(t.coeff.re()) < 0;
    GaussianRational mag = neg ? -t.coeff : t.coeff;
    std::string body;
    for (const auto& [a, e] : t.mono) {
      body += latex_atom(a, names);
      if (e > 1) body += "^{" + std::to_string(e) + "}";
      body += " ";
    }
    if (!body.empty()) body.pop_back();
    std::string cs = latex_coeff(mag);
    if (body.empty())
      body = cs;
    else if (!mag.is_one())
      body = cs + " " + body;
    if (out.empty())
      out = (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
  }
  return out;
}

}  // namespace

std::string to_latex(const ScalarExpr& e, const Names& names) {
  if (e.is_polynomial()) return latex_poly(e.num(), names);
  return "\\frac{" + latex_poly(e.num(), names) + "}{" + latex_poly(e.den(), names) + "}";
}

std::string to_latex(const DiffPoly& f, const Names& names) {
  if (f.is_zero()) return "0";
  std::string out;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    std::string jets;
    for (const auto& [v, e] : it->first) {
      std::string sub;
      for (int a = 0; a < names.dims.d; ++a)
        for (int t = 0; t < v.idx[a]; ++t) sub += std::to_string(a + 1);
      jets += " \\partial_{" + sub + "}" + names.generator(v.gen);
      if (e > 1) jets = "(" + jets + ")^{" + std::to_string(e) + "}";
    }
    std::string c = to_latex(it->second, names);
    if (!out.empty()) out += " + ";
    out += "\\left(" + c + "\\right)" + jets;
  }
  return out;
}

void PrintTo(const ScalarExpr& e, std::ostream* os) { *os << to_text(e); }
void PrintTo(const DiffPoly& f, std::ostream* os) { *os << to_text(f); }

}  // namespace pvakit
