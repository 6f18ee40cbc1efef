#pragma once

#include <string>
#include <vector>

#include "pvakit/diff_poly.hpp"
#include "pvakit/scalar_expr.hpp"

namespace pvakit {

// Display names for the generators; empty means u1..un.
struct Names {
  Dims dims;
  std::vector<std::string> generators;

  Names() = default;
  explicit Names(Dims dm, std::vector<std::string> gens = {}) : dims(dm), generators(std::move(gens)) {}
  std::string generator(int i) const;
};

// Canonical text in the shared expression grammar; parse(to_text(x)) == x.
std::string to_text(const GaussianRational& c);
std::string to_text(const Atom& a, const Names& names);
std::string to_text(const Poly& p, const Names& names);
std::string to_text(const ScalarExpr& e, const Names& names);
std::string to_text(const JetVar& v, const Names& names);
std::string to_text(const DiffPoly& f, const Names& names);

// Convenience for diagnostics, with generic generator names.
std::string to_text(const ScalarExpr& e);
std::string to_text(const DiffPoly& f);

// S-expressions: (+ a b), (* c x y), (^ x k), (/ n d), (F name d1 .. dn),
// (jet gen d1 .. dd), (complex re im).
std::string to_sexpr(const ScalarExpr& e, const Names& names);
std::string to_sexpr(const DiffPoly& f, const Names& names);

// Display-only LaTeX.
std::string to_latex(const ScalarExpr& e, const Names& names);
std::string to_latex(const DiffPoly& f, const Names& names);

void PrintTo(const ScalarExpr& e, std::ostream* os);
void PrintTo(const DiffPoly& f, std::ostream* os);

}  // namespace pvakit
