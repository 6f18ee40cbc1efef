#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace pvakit {

inline constexpr int kMaxDim = 4;

// Non-negative integer tuple. Only the first d (or n) slots are used; the
// rest stay zero, so comparisons work across contexts of the same size.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> entries);
  static MultiIndex unit(int alpha);

  int operator[](int k) const { return e_[k]; }
  void set(int k, int v);
  int order() const;
  bool is_zero() const { return order() == 0; }

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;  // requires o <= *this
  MultiIndex plus_unit(int alpha) const;
  bool leq(const MultiIndex& o) const;  // componentwise

  // Graded, then lexicographic on the entries.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;

  std::string str(int dim) const;  // "(2,0)"

 private:
  std::array<std::uint8_t, kMaxDim> e_{};
};

// Componentwise product of binomials; 0 unless B <= A.
long long multi_binomial(const MultiIndex& a, const MultiIndex& b);

// All K with K <= N componentwise (including 0 and N).
std::vector<MultiIndex> sub_indices(const MultiIndex& n, int dim);

// All multi-indices of dimension dim with |I| <= order, graded order.
std::vector<MultiIndex> indices_up_to(int dim, int order);

}  // namespace pvakit
