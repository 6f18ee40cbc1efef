#pragma once

#include <set>
#include <string>

#include "pvakit/lambda_poly.hpp"
#include "pvakit/text.hpp"

namespace pvakit {

// Symbols: generator names (jets as p_(1,0)), declared constants and c1, c2,
// ..., the unit i, unknown functions F[name] / F[name; d1,..,dn], and in
// bracket entries l1..ld for λ and m1..md for μ. D[p](e) and D[p,q](e) are
// partial derivatives of a jet-free e in the base variables.
struct ParseContext {
  Names names;
  std::set<std::string> constants;
  bool allow_lambda = true;
  // Position of the text inside its file, for error messages.
  int line = 1;
  int column = 1;
};

ScalarExpr parse_scalar(const std::string& text, const ParseContext& ctx);
DiffPoly parse_diff(const std::string& text, const ParseContext& ctx);
LambdaPoly parse_lambda(const std::string& text, const ParseContext& ctx);

// Reader for the S-expression rendering; ParseContext supplies the names.
LambdaPoly parse_sexpr(const std::string& text, const ParseContext& ctx);

std::string to_text(const LambdaPoly& l, const Names& names);
std::string to_latex(const LambdaPoly& l, const Names& names);
std::string to_sexpr(const LambdaPoly& l, const Names& names);

}  // namespace pvakit
