#include "mta/multi_index.hpp"

#include <stdexcept>

namespace mta {

std::uint64_t grade_dimension(int n, int k, int l) {
  if (n < 1 || k < 0 || l < 0) throw std::invalid_argument("bad grade parameters");
  std::uint64_t dim = 1;
  for (int i = 0; i < k + l; ++i) {
    if (dim > UINT64_MAX / static_cast<std::uint64_t>(n)) {
      throw std::overflow_error("grade dimension overflows uint64");
    }
    dim *= static_cast<std::uint64_t>(n);
  }
  return dim;
}

std::uint64_t flatten_index(const MultiIndex& mi, int n) {
  std::uint64_t flat = 0;
  for (int v : mi.up) {
    if (v < 1 || v > n) throw std::out_of_range("index value out of range");
    flat = flat * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v - 1);
  }
  for (int v : mi.down) {
    if (v < 1 || v > n) throw std::out_of_range("index value out of range");
    flat = flat * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v - 1);
  }
  return flat;
}

MultiIndex unflatten_index(std::uint64_t flat, int n, int k, int l) {
  MultiIndex mi;
  mi.up.resize(k);
  mi.down.resize(l);
  for (int pos = k + l - 1; pos >= 0; --pos) {
    int digit = static_cast<int>(flat % static_cast<std::uint64_t>(n)) + 1;
    flat /= static_cast<std::uint64_t>(n);
    if (pos >= k) {
      mi.down[pos - k] = digit;
    } else {
      mi.up[pos] = digit;
    }
  }
  if (flat != 0) throw std::out_of_range("flat index out of range for grade");
  return mi;
}

}  // namespace mta
