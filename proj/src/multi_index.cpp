#include "pvakit/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

#include "pvakit/errors.hpp"

namespace pvakit {

MultiIndex::MultiIndex(std::initializer_list<int> entries) {
  if (entries.size() > kMaxDim) throw DimensionMismatch("multi-index longer than 4");
  int k = 0;
  for (int v : entries) set(k++, v);
}

MultiIndex MultiIndex::unit(int alpha) {
  MultiIndex m;
  m.e_[alpha] = 1;
  return m;
}

void MultiIndex::set(int k, int v) {
  if (v < 0 || v > 255) throw Error("multi-index entry out of range");
  e_[k] = static_cast<std::uint8_t>(v);
}

int MultiIndex::order() const {
  int s = 0;
  for (auto v : e_) s += v;
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r;
  for (int k = 0; k < kMaxDim; ++k) r.set(k, e_[k] + o.e_[k]);
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  MultiIndex r;
  for (int k = 0; k < kMaxDim; ++k) {
    if (o.e_[k] > e_[k]) throw Error("multi-index difference undefined");
    r.e_[k] = static_cast<std::uint8_t>(e_[k] - o.e_[k]);
  }
  return r;
}

MultiIndex MultiIndex::plus_unit(int alpha) const {
  MultiIndex r = *this;
  r.set(alpha, e_[alpha] + 1);
  return r;
}

bool MultiIndex::leq(const MultiIndex& o) const {
  for (int k = 0; k < kMaxDim; ++k)
    if (e_[k] > o.e_[k]) return false;
  return true;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  for (int k = 0; k < kMaxDim; ++k)
    if (auto c = b.e_[k] <=> a.e_[k]; c != 0) return c;  // (1,0) before (0,1)
  return std::strong_ordering::equal;
}

std::string MultiIndex::str(int dim) const {
  std::string s = "(";
  for (int k = 0; k < dim; ++k) {
    if (k) s += ",";
    s += std::to_string(e_[k]);
  }
  return s + ")";
}

long long multi_binomial(const MultiIndex& a, const MultiIndex& b) {
  long long r = 1;
  for (int k = 0; k < kMaxDim; ++k) {
    int n = a[k], m = b[k];
    if (m > n) return 0;
    long long c = 1;
    for (int t = 1; t <= m; ++t) c = c * (n - m + t) / t;
    r *= c;
  }
  return r;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& n, int dim) {
  std::vector<MultiIndex> out{MultiIndex{}};
  for (int k = 0; k < dim; ++k) {
    std::vector<MultiIndex> next;
    for (const auto& m : out)
      for (int v = 0; v <= n[k]; ++v) {
        MultiIndex x = m;
        x.set(k, v);
        next.push_back(x);
      }
    out.swap(next);
  }
  return out;
}

std::vector<MultiIndex> indices_up_to(int dim, int order) {
  MultiIndex top;
  for (int k = 0; k < dim; ++k) top.set(k, order);
  std::vector<MultiIndex> out;
  for (auto& m : sub_indices(top, dim))
    if (m.order() <= order) out.push_back(m);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pvakit
