#include "pvakit/session.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pvakit/errors.hpp"

namespace pvakit {

ConditionSystem FixtureSystem::system(const std::map<std::string, int>& pick) const {
  ConditionSystem out;
  for (const auto& e : eqs) {
    auto it = pick.find(e.label);
    int k = it == pick.end() ? 0 : it->second;
    const ScalarExpr& x = k == 0 ? e.eq : e.alternates.at(static_cast<std::size_t>(k - 1));
    out.add_raw(x, e.label);
  }
  return out;
}

std::map<std::string, ScalarExpr> FixtureAssignment::pick(const std::map<std::string, int>& choice) const {
  std::map<std::string, ScalarExpr> out = values;
  for (const auto& [name, k] : choice)
    if (k > 0) out[name] = alternates.at(name).at(static_cast<std::size_t>(k - 1));
  return out;
}

ParseContext Session::context() const {
  ParseContext ctx;
  ctx.names = names;
  ctx.constants = constants;
  return ctx;
}

namespace {

struct Line {
  std::string text;
  int number = 0;
  int indent = 0;  // column of the first character of text, 1-based
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Joins continuation lines and strips comments and blank lines.
std::vector<Line> logical_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  bool cont = false;
  while (std::getline(in, raw)) {
    ++number;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.pop_back();
    bool next_cont = !raw.empty() && raw.back() == '\\';
    if (next_cont) raw.pop_back();
    std::size_t first = raw.find_first_not_of(" \t");
    if (cont && !out.empty()) {
      if (first != std::string::npos) out.back().text += " " + raw.substr(first);
    } else if (first != std::string::npos) {
      out.push_back({raw.substr(first), number, static_cast<int>(first) + 1});
    }
    cont = next_cont;
  }
  return out;
}

class Loader {
 public:
  explicit Loader(const std::string& text) : lines_(logical_lines(text)) {}

  Session run() {
    while (pos_ < lines_.size()) statement();
    return std::move(s_);
  }

 private:
  [[noreturn]] void fail(const Line& l, const std::string& msg, int col_offset = 0) const {
    throw ParseError(msg, l.number, l.indent + col_offset);
  }

  ParseContext ctx_at(const Line& l, std::size_t offset) const {
    ParseContext c = s_.context();
    c.line = l.number;
    c.column = l.indent + static_cast<int>(offset);
    return c;
  }

  int index(const Line& l, const std::string& w, int limit) const {
    if (w.empty() || w.find_first_not_of("0123456789") != std::string::npos) fail(l, "expected an index, got '" + w + "'");
    int k = std::stoi(w);
    if (k < 1 || k > limit) throw DimensionMismatch(std::to_string(l.number) + ": index " + w + " out of range 1.." + std::to_string(limit));
    return k - 1;
  }

  void unique(const Line& l, const std::string& kind, const std::string& name) {
    for (const auto& [k, n] : s_.declared)
      if (n == name) fail(l, "duplicate name '" + name + "'");
    s_.declared.emplace_back(kind, name);
  }

  // Lines of a block up to the matching "end".
  std::vector<Line> body(const Line& head) {
    std::vector<Line> out;
    while (pos_ < lines_.size()) {
      const Line& l = lines_[pos_++];
      if (l.text == "end") return out;
      out.push_back(l);
    }
    fail(head, "missing 'end'");
  }

  // Splits "k1 k2 ... = expr" into index words and the expression offset.
  std::pair<std::vector<std::string>, std::size_t> lhs_indices(const Line& l) const {
    auto eq = l.text.find('=');
    if (eq == std::string::npos) fail(l, "expected '='");
    return {split_ws(l.text.substr(0, eq)), eq + 1};
  }

  void statement() {
    const Line& l = lines_[pos_++];
    auto words = split_ws(l.text);
    const std::string& kw = words[0];
    if (kw == "dims") {
      if (words.size() != 3) fail(l, "expected 'dims d n'");
      Dims d{std::stoi(words[1]), std::stoi(words[2])};
      try {
        d.validate();
      } catch (const Error& e) {
        fail(l, e.what());
      }
      if (!s_.declared.empty()) fail(l, "dims must come before declarations");
      s_.dims = d;
      s_.names = Names(d, s_.names.generators);
      return;
    }
    if (kw == "generators") {
      std::vector<std::string> g(words.begin() + 1, words.end());
      if (static_cast<int>(g.size()) != s_.dims.n) throw DimensionMismatch(std::to_string(l.number) + ": expected " + std::to_string(s_.dims.n) + " generator names");
      s_.names = Names(s_.dims, g);
      return;
    }
    if (kw == "constants") {
      for (std::size_t k = 1; k < words.size(); ++k) s_.constants.insert(words[k]);
      return;
    }
    if (words.size() < 2) fail(l, "expected a name after '" + kw + "'");
    const std::string& name = words[1];
    if (kw == "hamiltonian") {
      auto eq = l.text.find('=');
      if (eq == std::string::npos) fail(l, "expected '='");
      unique(l, kw, name);
      s_.hamiltonians.emplace(name, parse_diff(l.text.substr(eq + 1), ctx_at(l, eq + 1)));
      return;
    }
    std::string mode = words.size() > 2 ? words[2] : "";
    if (kw == "bracket") return bracket(l, name, words);
    if (kw == "vf") return vf(l, name, mode);
    if (kw == "miura") return miura(l, name, mode);
    if (kw == "hydro") return hydro(l, name, mode);
    if (kw == "system") return system(l, name);
    if (kw == "assignment") return assignment(l, name);
    fail(l, "unknown declaration '" + kw + "'");
  }

  void bracket(const Line& l, const std::string& name, const std::vector<std::string>& words) {
    unique(l, "bracket", name);
    if (words.size() > 2) {
      if (words[2] == "catalog") {
        if (words.size() != 4) fail(l, "expected 'catalog P1|P2|LP'");
        auto w = parse_normal_form(words[3]);
        if (!w) fail(l, "unknown catalog entry '" + words[3] + "'");
        s_.brackets.emplace(name, normal_form(*w, s_.dims));
      } else if (words[2] == "ansatz") {
        s_.brackets.emplace(name, DeformationAnsatz(s_.dims).bracket());
      } else if (words[2] == "tilde") {
        if (!(s_.dims == Dims{2, 2})) throw DimensionMismatch(std::to_string(l.number) + ": tilde brackets need d=n=2");
        s_.brackets.emplace(name, apply_tilde());
      } else {
        fail(l, "unknown bracket source '" + words[2] + "'");
      }
      return;
    }
    GeneratorBracket b(s_.dims);
    for (const Line& e : body(l)) {
      auto [idx, off] = lhs_indices(e);
      if (idx.size() != 2) fail(e, "expected 'i j = entry'");
      b.set(index(e, idx[0], s_.dims.n), index(e, idx[1], s_.dims.n), parse_lambda(e.text.substr(off), ctx_at(e, off)));
    }
    s_.brackets.emplace(name, std::move(b));
  }

  void vf(const Line& l, const std::string& name, const std::string& mode) {
    unique(l, "vf", name);
    if (mode == "generic") {
      s_.vfs.emplace(name, generic_first_order_vf(s_.dims));
      return;
    }
    if (!mode.empty()) fail(l, "unknown vf source '" + mode + "'");
    EvolutionaryVF x{s_.dims, std::vector<DiffPoly>(static_cast<std::size_t>(s_.dims.n), DiffPoly(s_.dims))};
    for (const Line& e : body(l)) {
      auto [idx, off] = lhs_indices(e);
      if (idx.size() != 1) fail(e, "expected 'i = characteristic'");
      auto ctx = ctx_at(e, off);
      ctx.allow_lambda = false;
      x.chars[static_cast<std::size_t>(index(e, idx[0], s_.dims.n))] = parse_diff(e.text.substr(off), ctx);
    }
    s_.vfs.emplace(name, std::move(x));
  }

  void miura(const Line& l, const std::string& name, const std::string& mode) {
    unique(l, "miura", name);
    if (mode == "generic") {
      s_.miuras.emplace(name, generic_miura(s_.dims));
      return;
    }
    if (!mode.empty()) fail(l, "unknown miura source '" + mode + "'");
    auto table = std::make_shared<std::map<std::tuple<int, int, int>, ScalarExpr>>();
    for (const Line& e : body(l)) {
      auto [idx, off] = lhs_indices(e);
      if (idx.size() != 3) fail(e, "expected 'a l i = F'");
      (*table)[{index(e, idx[0], s_.dims.d), index(e, idx[1], s_.dims.n), index(e, idx[2], s_.dims.n)}] =
          parse_scalar(e.text.substr(off), ctx_at(e, off));
    }
    s_.miuras.emplace(name, MiuraFirstOrder{s_.dims, [table](int a, int ll, int i) {
                                              auto it = table->find({a, ll, i});
                                              return it == table->end() ? ScalarExpr() : it->second;
                                            }});
  }

  void hydro(const Line& l, const std::string& name, const std::string& mode) {
    unique(l, "hydro", name);
    if (mode == "generic") {
      s_.hydros.emplace(name, generic_hydro(s_.dims));
      return;
    }
    if (!mode.empty()) fail(l, "unknown hydro source '" + mode + "'");
    HydroData h(s_.dims);
    for (const Line& e : body(l)) {
      auto [idx, off] = lhs_indices(e);
      if (idx.empty()) fail(e, "expected 'g i j a' or 'b i j a k'");
      ScalarExpr v = parse_scalar(e.text.substr(off), ctx_at(e, off));
      int n = s_.dims.n, d = s_.dims.d;
      if (idx[0] == "g" && idx.size() == 4)
        h.g(index(e, idx[1], n), index(e, idx[2], n), index(e, idx[3], d)) = v;
      else if (idx[0] == "b" && idx.size() == 5)
        h.b(index(e, idx[1], n), index(e, idx[2], n), index(e, idx[3], d), index(e, idx[4], n)) = v;
      else
        fail(e, "expected 'g i j a' or 'b i j a k'");
    }
    s_.hydros.emplace(name, std::move(h));
  }

  // "[alt] [label:] lhs [= rhs]" -> (alt, label, expression)
  std::tuple<bool, std::string, ScalarExpr> equation(const Line& e) {
    std::string t = e.text;
    std::size_t off = 0;
    bool alt = t.rfind("alt ", 0) == 0;
    if (alt) off = t.find_first_not_of(' ', 4);
    std::string label;
    if (auto c = t.find(':', off); c != std::string::npos) {
      label = t.substr(off, c - off);
      while (!label.empty() && label.back() == ' ') label.pop_back();
      off = c + 1;
    }
    auto eq = t.find('=', off);
    ScalarExpr x;
    if (eq == std::string::npos) {
      x = parse_scalar(t.substr(off), ctx_at(e, off));
    } else {
      x = parse_scalar(t.substr(off, eq - off), ctx_at(e, off)) - parse_scalar(t.substr(eq + 1), ctx_at(e, eq + 1));
    }
    return {alt, label, x};
  }

  void system(const Line& l, const std::string& name) {
    unique(l, "system", name);
    FixtureSystem sys;
    for (const Line& e : body(l)) {
      auto [alt, label, x] = equation(e);
      if (alt) {
        if (sys.eqs.empty()) fail(e, "'alt' without a preceding equation");
        if (!label.empty() && label != sys.eqs.back().label) fail(e, "'alt' label differs from the preceding equation");
        sys.eqs.back().alternates.push_back(x);
        continue;
      }
      if (label.empty()) label = "#" + std::to_string(sys.eqs.size() + 1);
      sys.eqs.push_back({label, x, {}, e.number});
    }
    s_.systems.emplace(name, std::move(sys));
  }

  void assignment(const Line& l, const std::string& name) {
    unique(l, "assignment", name);
    FixtureAssignment a;
    for (const Line& e : body(l)) {
      std::string t = e.text;
      if (t.rfind("flagged ", 0) == 0) {
        for (const auto& w : split_ws(t.substr(8))) a.flagged.insert(w);
        continue;
      }
      bool alt = t.rfind("alt ", 0) == 0;
      std::size_t off = alt ? 4 : 0;
      auto eq = t.find('=', off);
      if (eq == std::string::npos) fail(e, "expected 'name = expr'");
      auto w = split_ws(t.substr(off, eq - off));
      if (w.size() != 1) fail(e, "expected a single function name");
      ScalarExpr v = parse_scalar(t.substr(eq + 1), ctx_at(e, eq + 1));
      if (alt) {
        if (!a.values.count(w[0])) fail(e, "'alt' for an unassigned name");
        a.alternates[w[0]].push_back(v);
        continue;
      }
      if (a.values.count(w[0])) fail(e, "duplicate assignment to '" + w[0] + "'");
      a.values.emplace(w[0], v);
      a.order.push_back(w[0]);
    }
    s_.assignments.emplace(name, std::move(a));
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  Session s_;
};

}  // namespace

Session parse_session(const std::string& text) { return Loader(text).run(); }

Session load_session(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_session(ss.str());
}

std::string write_session(const Session& s) {
  std::ostringstream out;
  const Names& nm = s.names;
  int n = s.dims.n, d = s.dims.d;
  out << "dims " << d << " " << n << "\n";
  out << "generators";
  for (int g = 0; g < n; ++g) out << " " << nm.generator(g);
  out << "\n";
  if (!s.constants.empty()) {
    out << "constants";
    for (const auto& c : s.constants) out << " " << c;
    out << "\n";
  }
  for (const auto& [kind, name] : s.declared) {
    out << "\n";
    if (kind == "bracket") {
      const auto& b = s.brackets.at(name);
      out << "bracket " << name << "\n";
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!b(i, j).is_zero()) out << "  " << i + 1 << " " << j + 1 << " = " << to_text(b(i, j), nm) << "\n";
      out << "end\n";
    } else if (kind == "vf") {
      const auto& x = s.vfs.at(name);
      out << "vf " << name << "\n";
      for (int i = 0; i < n; ++i) out << "  " << i + 1 << " = " << to_text(x.chars[static_cast<std::size_t>(i)], nm) << "\n";
      out << "end\n";
    } else if (kind == "miura") {
      const auto& m = s.miuras.at(name);
      out << "miura " << name << "\n";
      for (int a = 0; a < d; ++a)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i) {
            ScalarExpr v = m.F(a, l, i);
            if (!v.is_zero()) out << "  " << a + 1 << " " << l + 1 << " " << i + 1 << " = " << to_text(v, nm) << "\n";
          }
      out << "end\n";
    } else if (kind == "hydro") {
      const auto& h = s.hydros.at(name);
      out << "hydro " << name << "\n";
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int a = 0; a < d; ++a) {
            if (!h.g(i, j, a).is_zero())
              out << "  g " << i + 1 << " " << j + 1 << " " << a + 1 << " = " << to_text(h.g(i, j, a), nm) << "\n";
            for (int k = 0; k < n; ++k)
              if (!h.b(i, j, a, k).is_zero())
                out << "  b " << i + 1 << " " << j + 1 << " " << a + 1 << " " << k + 1 << " = "
                    << to_text(h.b(i, j, a, k), nm) << "\n";
          }
      out << "end\n";
    } else if (kind == "hamiltonian") {
      out << "hamiltonian " << name << " = " << to_text(s.hamiltonians.at(name), nm) << "\n";
    } else if (kind == "system") {
      out << "system " << name << "\n";
      for (const auto& e : s.systems.at(name).eqs) {
        // Generated labels start with '#' and are regenerated on reading.
        std::string label = e.label[0] == '#' ? "" : e.label + ": ";
        out << "  " << label << to_text(e.eq, nm) << "\n";
        for (const auto& a : e.alternates) out << "  alt " << label << to_text(a, nm) << "\n";
      }
      out << "end\n";
    } else if (kind == "assignment") {
      const auto& a = s.assignments.at(name);
      out << "assignment " << name << "\n";
      if (!a.flagged.empty()) {
        out << "  flagged";
        for (const auto& f : a.flagged) out << " " << f;
        out << "\n";
      }
      for (const auto& f : a.order) {
        out << "  " << f << " = " << to_text(a.values.at(f), nm) << "\n";
        if (auto it = a.alternates.find(f); it != a.alternates.end())
          for (const auto& v : it->second) out << "  alt " << f << " = " << to_text(v, nm) << "\n";
      }
      out << "end\n";
    }
  }
  return out.str();
}

std::string fixture_dir() {
  if (const char* env = std::getenv("PVAKIT_FIXTURES")) return env;
  return PVAKIT_FIXTURE_DIR;
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir(), ec))
    if (entry.path().extension() == ".pva") out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pvakit
