#include "pvakit/parse.hpp"

#include <cctype>
#include <optional>

#include "pvakit/errors.hpp"

namespace pvakit {

namespace {

// Scalars stay ScalarExpr until a jet or λ shows up.
struct Value {
  std::optional<ScalarExpr> scalar;
  std::optional<LambdaPoly> poly;

  static Value of(ScalarExpr s) { return Value{std::move(s), std::nullopt}; }
  static Value of(LambdaPoly l) { return Value{std::nullopt, std::move(l)}; }
  LambdaPoly lift(Dims dims) const {
    if (poly) return *poly;
    return LambdaPoly(DiffPoly(dims, *scalar));
  }
};

// Returns the coefficient if l is a jet- and λ-free constant.
std::optional<ScalarExpr> as_scalar(const LambdaPoly& l) {
  if (l.is_zero()) return ScalarExpr();
  if (l.terms().size() != 1) return std::nullopt;
  const auto& [k, c] = *l.terms().begin();
  if (!k.lam.is_zero() || !k.mu.is_zero()) return std::nullopt;
  if (c.terms().size() != 1 || !c.terms().begin()->first.empty()) return std::nullopt;
  return c.terms().begin()->second;
}

class Parser {
 public:
  Parser(const std::string& text, const ParseContext& ctx) : s_(text), ctx_(ctx), dims_(ctx.names.dims) {}

  Value run() {
    Value v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    int line = ctx_.line, col = ctx_.column;
    for (std::size_t k = 0; k < at && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Value expr() {
    Value acc = term();
    for (;;) {
      if (accept('+'))
        acc = add(acc, term(), false);
      else if (accept('-'))
        acc = add(acc, term(), true);
      else
        return acc;
    }
  }

  Value term() {
    Value acc = unary();
    for (;;) {
      std::size_t at = (skip_ws(), pos_);
      if (accept('*')) {
        acc = mul(acc, unary());
      } else if (accept('/')) {
        Value d = unary();
        acc = div(acc, d, at);
      } else {
        return acc;
      }
    }
  }

  Value unary() {
    if (accept('-')) return neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  Value power() {
    Value base = primary();
    std::size_t at = (skip_ws(), pos_);
    if (!accept('^')) return base;
    bool negative = accept('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int e = std::stoi(s_.substr(start, pos_ - start));
    if (base.scalar) {
      if (negative && base.scalar->is_zero()) fail_at("zero to a negative power", at);
      return Value::of(base.scalar->pow(negative ? -e : e));
    }
    if (negative) fail_at("negative power of a non-scalar", at);
    LambdaPoly r = LambdaPoly(DiffPoly(dims_, ScalarExpr(1)));
    for (int k = 0; k < e; ++k) r = r * *base.poly;
    return Value::of(std::move(r));
  }

  Value primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Value::of(ScalarExpr(GaussianRational(mpq_class(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return symbol(s_.substr(start, pos_ - start), start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::vector<int> int_list(char close, std::size_t count) {
    std::vector<int> out;
    for (;;) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected non-negative integer");
      out.push_back(std::stoi(s_.substr(start, pos_ - start)));
      if (accept(close)) break;
      expect(',');
    }
    if (out.size() != count) fail("expected " + std::to_string(count) + " entries");
    return out;
  }

  MultiIndex to_index(const std::vector<int>& v) {
    MultiIndex m;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] > 255) fail("derivative order too large");
      m.set(static_cast<int>(k), v[k]);
    }
    return m;
  }

  Value symbol(const std::string& name, std::size_t at) {
    if (name == "F" && pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      if (start == pos_) fail("expected function name");
      std::string fname = s_.substr(start, pos_ - start);
      MultiIndex d;
      if (accept(';')) d = to_index(int_list(']', static_cast<std::size_t>(dims_.n)));
      else expect(']');
      return Value::of(ScalarExpr::function(fname, d));
    }
    if (name == "D" && pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      std::vector<int> vars;
      for (;;) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string v = s_.substr(start, pos_ - start);
        int g = 0;
        while (g < dims_.n && ctx_.names.generator(g) != v) ++g;
        if (g == dims_.n) fail_at("expected a generator name", start);
        vars.push_back(g);
        if (accept(']')) break;
        expect(',');
      }
      std::size_t arg = (skip_ws(), pos_);
      expect('(');
      Value v = expr();
      expect(')');
      std::optional<ScalarExpr> e = v.scalar;
      if (!e) e = as_scalar(*v.poly);
      if (!e) fail_at("D[..] applies to expressions in the base variables", arg);
      for (int g : vars) *e = base_partial(*e, g);
      return Value::of(*e);
    }
    for (int g = 0; g < dims_.n; ++g) {
      if (ctx_.names.generator(g) != name) continue;
      if (pos_ + 1 < s_.size() && s_[pos_] == '_' && s_[pos_ + 1] == '(') {
        pos_ += 2;
        MultiIndex idx = to_index(int_list(')', static_cast<std::size_t>(dims_.d)));
        if (idx.is_zero()) return Value::of(ScalarExpr::base(g));
        return Value::of(LambdaPoly(DiffPoly::jet(dims_, g, idx)));
      }
      return Value::of(ScalarExpr::base(g));
    }
    if (name == "i") return Value::of(ScalarExpr::i());
    if (ctx_.allow_lambda && name.size() == 2 && (name[0] == 'l' || name[0] == 'm') && name[1] >= '1' &&
        name[1] - '1' < dims_.d) {
      MultiIndex e = MultiIndex::unit(name[1] - '1');
      if (name[0] == 'l') return Value::of(LambdaPoly::monomial(dims_, e));
      return Value::of(LambdaPoly::monomial(dims_, {}, e));
    }
    bool numbered = name.size() > 1 && name[0] == 'c' &&
                    name.find_first_not_of("0123456789", 1) == std::string::npos;
    if (numbered || ctx_.constants.count(name)) return Value::of(ScalarExpr::constant(name));
    fail_at("unknown symbol '" + name + "'", at);
  }

  Value add(const Value& a, const Value& b, bool subtract) {
    if (a.scalar && b.scalar) return Value::of(subtract ? *a.scalar - *b.scalar : *a.scalar + *b.scalar);
    LambdaPoly x = a.lift(dims_), y = b.lift(dims_);
    return Value::of(subtract ? x - y : x + y);
  }
  Value mul(const Value& a, const Value& b) {
    if (a.scalar && b.scalar) return Value::of(*a.scalar * *b.scalar);
    if (a.scalar) return Value::of(DiffPoly(dims_, *a.scalar) * *b.poly);
    if (b.scalar) return Value::of(DiffPoly(dims_, *b.scalar) * *a.poly);
    return Value::of(*a.poly * *b.poly);
  }
  Value div(const Value& a, const Value& b, std::size_t at) {
    std::optional<ScalarExpr> d = b.scalar;
    if (!d) d = as_scalar(*b.poly);
    if (!d) fail_at("division by a jet or λ expression", at);
    if (d->is_zero()) fail_at("division by zero", at);
    if (a.scalar) return Value::of(*a.scalar / *d);
    return Value::of(DiffPoly(dims_, d->inverse()) * *a.poly);
  }
  Value neg(const Value& a) {
    if (a.scalar) return Value::of(-*a.scalar);
    return Value::of(-*a.poly);
  }

  const std::string& s_;
  const ParseContext& ctx_;
  Dims dims_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse_scalar(const std::string& text, const ParseContext& ctx) {
  Parser p(text, ctx);
  Value v = p.run();
  if (v.scalar) return *v.scalar;
  if (auto s = as_scalar(*v.poly)) return *s;
  p.fail_at("expected an expression in the base variables", 0);
}

DiffPoly parse_diff(const std::string& text, const ParseContext& ctx) {
  Parser p(text, ctx);
  Value v = p.run();
  if (v.scalar) return DiffPoly(ctx.names.dims, *v.scalar);
  if (v.poly->is_zero()) return DiffPoly(ctx.names.dims);
  if (v.poly->terms().size() == 1 && v.poly->terms().begin()->first == LambdaKey{})
    return v.poly->terms().begin()->second;
  p.fail_at("λ is not allowed here", 0);
}

LambdaPoly parse_lambda(const std::string& text, const ParseContext& ctx) {
  Parser p(text, ctx);
  return p.run().lift(ctx.names.dims);
}

namespace {

std::string lambda_monomial(const LambdaKey& k, int d, const char* lam, const char* mu, bool latex) {
  std::string s;
  auto emit = [&](const MultiIndex& m, const char* sym) {
    for (int a = 0; a < d; ++a) {
      if (m[a] == 0) continue;
      if (!s.empty()) s += latex ? " " : "*";
      s += latex ? std::string(sym) + "_{" + std::to_string(a + 1) + "}" : std::string(sym) + std::to_string(a + 1);
      if (m[a] > 1) s += latex ? "^{" + std::to_string(m[a]) + "}" : "^" + std::to_string(m[a]);
    }
  };
  emit(k.lam, lam);
  emit(k.mu, mu);
  return s;
}

}  // namespace

std::string to_text(const LambdaPoly& l, const Names& names) {
  if (l.is_zero()) return "0";
  std::string out;
  for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it) {
    std::string mono = lambda_monomial(it->first, names.dims.d, "l", "m", false);
    std::string c = to_text(it->second, names);
    std::string item;
    if (mono.empty())
      item = it->second.terms().size() > 1 ? "(" + c + ")" : c;
    else if (c == "1")
      item = mono;
    else
      item = "(" + c + ")*" + mono;
    out += out.empty() ? item : " + " + item;
  }
  return out;
}

std::string to_latex(const LambdaPoly& l, const Names& names) {
  if (l.is_zero()) return "0";
  std::string out;
  for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it) {
    std::string mono = lambda_monomial(it->first, names.dims.d, "\\lambda", "\\mu", true);
    std::string item = "\\left(" + to_latex(it->second, names) + "\\right)";
    if (!mono.empty()) item += " " + mono;
    out += out.empty() ? item : " + " + item;
  }
  return out;
}

std::string to_sexpr(const LambdaPoly& l, const Names& names) {
  if (l.is_zero()) return "0";
  std::vector<std::string> items;
  for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it) {
    std::string s = "(* " + to_sexpr(it->second, names);
    for (int a = 0; a < names.dims.d; ++a) {
      if (it->first.lam[a]) s += " (^ (lambda " + std::to_string(a + 1) + ") " + std::to_string(it->first.lam[a]) + ")";
      if (it->first.mu[a]) s += " (^ (mu " + std::to_string(a + 1) + ") " + std::to_string(it->first.mu[a]) + ")";
    }
    items.push_back(s + ")");
  }
  if (items.size() == 1) return items[0];
  std::string s = "(+";
  for (const auto& x : items) s += " " + x;
  return s + ")";
}

}  // namespace pvakit

namespace pvakit {

namespace {

struct SNode {
  std::string atom;
  std::vector<SNode> items;
  bool list = false;
  std::size_t at = 0;
};

class SReader {
 public:
  SReader(const std::string& s, const ParseContext& ctx) : s_(s), ctx_(ctx), dims_(ctx.names.dims) {}

  SNode read_all() {
    SNode n = read();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input", pos_);
    return n;
  }

  LambdaPoly eval(const SNode& n) {
    if (!n.list) return atom(n);
    if (n.items.empty()) fail("empty list", n.at);
    const std::string& head = n.items[0].atom;
    auto args = [&](std::size_t want) {
      if (n.items.size() != want + 1) fail("wrong number of arguments to " + head, n.at);
    };
    if (head == "+") {
      LambdaPoly acc(dims_);
      for (std::size_t k = 1; k < n.items.size(); ++k) acc += eval(n.items[k]);
      return acc;
    }
    if (head == "*") {
      LambdaPoly acc(DiffPoly(dims_, ScalarExpr(1)));
      for (std::size_t k = 1; k < n.items.size(); ++k) acc = acc * eval(n.items[k]);
      return acc;
    }
    if (head == "^") {
      args(2);
      LambdaPoly base = eval(n.items[1]);
      int e = integer(n.items[2]);
      LambdaPoly acc(DiffPoly(dims_, ScalarExpr(1)));
      for (int k = 0; k < e; ++k) acc = acc * base;
      return acc;
    }
    if (head == "/") {
      args(2);
      auto d = as_scalar(eval(n.items[2]));
      if (!d || d->is_zero()) fail("bad divisor", n.items[2].at);
      return DiffPoly(dims_, d->inverse()) * eval(n.items[1]);
    }
    if (head == "complex") {
      args(2);
      GaussianRational c(mpq_class(n.items[1].atom), mpq_class(n.items[2].atom));
      return LambdaPoly(DiffPoly(dims_, ScalarExpr(c)));
    }
    if (head == "F") {
      if (n.items.size() < 2) fail("F needs a name", n.at);
      MultiIndex d;
      if (n.items.size() != 2) {
        args(static_cast<std::size_t>(dims_.n) + 1);
        for (int k = 0; k < dims_.n; ++k) d.set(k, integer(n.items[static_cast<std::size_t>(k) + 2]));
      }
      return LambdaPoly(DiffPoly(dims_, ScalarExpr::function(n.items[1].atom, d)));
    }
    if (head == "jet") {
      args(static_cast<std::size_t>(dims_.d) + 1);
      int g = generator(n.items[1]);
      MultiIndex idx;
      for (int k = 0; k < dims_.d; ++k) idx.set(k, integer(n.items[static_cast<std::size_t>(k) + 2]));
      if (idx.is_zero()) return LambdaPoly(DiffPoly(dims_, ScalarExpr::base(g)));
      return LambdaPoly(DiffPoly::jet(dims_, g, idx));
    }
    if (head == "lambda" || head == "mu") {
      args(1);
      int a = integer(n.items[1]) - 1;
      if (a < 0 || a >= dims_.d) fail("index out of range", n.items[1].at);
      MultiIndex e = MultiIndex::unit(a);
      return head == "lambda" ? LambdaPoly::monomial(dims_, e) : LambdaPoly::monomial(dims_, {}, e);
    }
    fail("unknown head '" + head + "'", n.at);
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    int line = ctx_.line, col = ctx_.column;
    for (std::size_t k = 0; k < at && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  SNode read() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input", pos_);
    SNode n;
    n.at = pos_;
    if (s_[pos_] == '(') {
      ++pos_;
      n.list = true;
      for (;;) {
        skip_ws();
        if (pos_ >= s_.size()) fail("missing ')'", n.at);
        if (s_[pos_] == ')') {
          ++pos_;
          return n;
        }
        n.items.push_back(read());
      }
    }
    if (s_[pos_] == ')') fail("unexpected ')'", pos_);
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' && s_[pos_] != ')')
      n.atom += s_[pos_++];
    return n;
  }

  int integer(const SNode& n) {
    if (n.list || n.atom.empty() || n.atom.find_first_not_of("0123456789") != std::string::npos)
      fail("expected non-negative integer", n.at);
    return std::stoi(n.atom);
  }

  int generator(const SNode& n) {
    for (int g = 0; g < dims_.n; ++g)
      if (!n.list && ctx_.names.generator(g) == n.atom) return g;
    fail("unknown generator", n.at);
  }

  LambdaPoly atom(const SNode& n) {
    const std::string& a = n.atom;
    char c0 = a[0];
    if (std::isdigit(static_cast<unsigned char>(c0)) || ((c0 == '-' || c0 == '+') && a.size() > 1)) {
      mpq_class q;
      if (q.set_str(a, 10) != 0) fail("bad number", n.at);
      q.canonicalize();
      return LambdaPoly(DiffPoly(dims_, ScalarExpr(GaussianRational(q))));
    }
    for (int g = 0; g < dims_.n; ++g)
      if (ctx_.names.generator(g) == a) return LambdaPoly(DiffPoly(dims_, ScalarExpr::base(g)));
    if (a == "i") return LambdaPoly(DiffPoly(dims_, ScalarExpr::i()));
    bool numbered = a.size() > 1 && a[0] == 'c' && a.find_first_not_of("0123456789", 1) == std::string::npos;
    if (numbered || ctx_.constants.count(a)) return LambdaPoly(DiffPoly(dims_, ScalarExpr::constant(a)));
    fail("unknown symbol '" + a + "'", n.at);
  }

  const std::string& s_;
  const ParseContext& ctx_;
  Dims dims_;
  std::size_t pos_ = 0;
};

}  // namespace

LambdaPoly parse_sexpr(const std::string& text, const ParseContext& ctx) {
  SReader r(text, ctx);
  SNode n = r.read_all();
  return r.eval(n);
}

}  // namespace pvakit
