#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace mta {

// Index of one basis tensor of grade (k, l): k contravariant slots and
// l covariant slots, each holding a value in 1..n.
struct MultiIndex {
  std::vector<int> up;    // contravariant slot values
  std::vector<int> down;  // covariant slot values

  int k() const { return static_cast<int>(up.size()); }
  int l() const { return static_cast<int>(down.size()); }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

// Row-major position of a multi-index in the n^(k+l)-dimensional coordinate
// space of its grade. Contravariant slots vary slowest, and within each
// group the first slot is the most significant digit.
std::uint64_t flatten_index(const MultiIndex& mi, int n);

// Inverse of flatten_index for grade (k, l) over dimension n.
MultiIndex unflatten_index(std::uint64_t flat, int n, int k, int l);

// n^(k+l), checked against uint64 overflow.
std::uint64_t grade_dimension(int n, int k, int l);

}  // namespace mta
