#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pvakit/gauss_rational.hpp"
#include "pvakit/multi_index.hpp"

namespace pvakit {

enum class AtomKind : std::uint8_t { Base = 0, Constant = 1, Function = 2 };

// Base variable (0-jet u^i), named constant, or a jet of an unknown function
// of the base variables.
struct Atom {
  AtomKind kind = AtomKind::Base;
  std::uint8_t index = 0;  // base variable index (0-based)
  MultiIndex deriv;        // function atoms only
  std::string name;        // constants and functions

  static Atom base(int i);
  static Atom constant(std::string name);
  static Atom function(std::string name, MultiIndex deriv = {});

  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
  friend bool operator==(const Atom& a, const Atom& b);

  std::string key() const;  // stable identity string, used for seeding
};

// Sorted (by atom) list of atom powers; exponents positive.
using Monomial = std::vector<std::pair<Atom, unsigned>>;

// Graded, then lexicographic with smaller atoms most significant.
std::strong_ordering monomial_cmp(const Monomial& a, const Monomial& b);
Monomial monomial_mul(const Monomial& a, const Monomial& b);
unsigned monomial_degree(const Monomial& m);
unsigned exponent_of(const Monomial& m, const Atom& a);

// Sparse multivariate polynomial over GaussianRational, terms sorted with the
// leading monomial first.
class Poly {
 public:
  struct Term {
    Monomial mono;
    GaussianRational coeff;
  };

  Poly() = default;
  explicit Poly(GaussianRational c);
  static Poly atom(const Atom& a, unsigned e = 1);
  static Poly from_terms(std::vector<Term> terms);  // sorts and combines

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  const GaussianRational& leading_coeff() const { return terms_.front().coeff; }
  const Monomial& leading_monomial() const { return terms_.front().mono; }
  std::vector<Atom> atoms() const;
  bool contains(const Atom& a) const;
  unsigned degree_in(const Atom& a) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const GaussianRational& c) const;
  Poly times_monomial(const Monomial& m, const GaussianRational& c) const;
  Poly pow(unsigned e) const;

  Poly base_partial(int v) const;
  // Coefficients with respect to x, indexed by the power of x.
  std::vector<Poly> coefficients_in(const Atom& x) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

 private:
  static Poly merge(const Poly& a, const Poly& b, bool subtract);
  std::vector<Term> terms_;
};

// Exact quotient; throws Error if b does not divide a.
Poly exact_div(const Poly& a, const Poly& b);
// Greatest common divisor, normalized to leading coefficient 1 (0 if both 0).
Poly gcd(const Poly& a, const Poly& b);

// Canonical rational function: gcd(num, den) = 1, den has leading coefficient 1.
class ScalarExpr {
 public:
  ScalarExpr() : den_(GaussianRational(1)) {}
  ScalarExpr(long v);                // NOLINT(implicit)
  ScalarExpr(GaussianRational c);    // NOLINT(implicit)
  explicit ScalarExpr(Poly p);
  ScalarExpr(Poly num, Poly den);    // normalizes; throws ZeroDivide
  static ScalarExpr base(int i) { return ScalarExpr(Poly::atom(Atom::base(i))); }
  static ScalarExpr constant(const std::string& name) { return ScalarExpr(Poly::atom(Atom::constant(name))); }
  static ScalarExpr function(const std::string& name, MultiIndex d = {}) {
    return ScalarExpr(Poly::atom(Atom::function(name, d)));
  }
  static ScalarExpr atom(const Atom& a) { return ScalarExpr(Poly::atom(a)); }
  static ScalarExpr i() { return ScalarExpr(GaussianRational::unit_i()); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  std::vector<Atom> atoms() const;
  bool has_function_atoms() const;

  ScalarExpr operator-() const;
  ScalarExpr& operator+=(const ScalarExpr& o);
  ScalarExpr& operator-=(const ScalarExpr& o);
  ScalarExpr& operator*=(const ScalarExpr& o);
  ScalarExpr& operator/=(const ScalarExpr& o);
  friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
  friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }
  friend ScalarExpr operator*(ScalarExpr a, const ScalarExpr& b) { return a *= b; }
  friend ScalarExpr operator/(ScalarExpr a, const ScalarExpr& b) { return a /= b; }
  ScalarExpr pow(int e) const;
  ScalarExpr inverse() const;

  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const ScalarExpr& a, const ScalarExpr& b);

 private:
  Poly num_;
  Poly den_;
};

// Kernel operations.
ScalarExpr normalize(const ScalarExpr& e);
ScalarExpr base_partial(const ScalarExpr& e, int v);
ScalarExpr base_partial(const ScalarExpr& e, const MultiIndex& d);

using AtomValues = std::function<GaussianRational(const Atom&)>;
GaussianRational evaluate(const Poly& p, const AtomValues& values);
// Throws ZeroDivide if the denominator vanishes at the point.
GaussianRational evaluate(const ScalarExpr& e, const AtomValues& values);

// Deterministic random rational for an atom: numerator in [-1000,1000]\{0},
// denominator in [1,1000]. Depends only on (seed, atom).
GaussianRational random_atom_value(const Atom& a, std::uint64_t seed);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
GaussianRational random_eval(const ScalarExpr& e, std::uint64_t seed, int max_tries = 8);

// Homomorphic substitution. The callback returns the image of an atom or
// nullopt to keep it.
using AtomImage = std::function<std::optional<ScalarExpr>(const Atom&)>;
ScalarExpr substitute(const ScalarExpr& e, const AtomImage& image);

// Replace every jet F_D of an assigned function by the D-th base partial of
// its image.
ScalarExpr substitute_functions(const ScalarExpr& e, const std::map<std::string, ScalarExpr>& assignment);

}  // namespace pvakit
