#pragma once

// Digit arithmetic on flattened grade coordinates. A coordinate of grade
// (k,l) over dimension n is a (k+l)-digit base-n number, contravariant
// digits first, first slot most significant (matches flatten_index).
// Internal to the library; rows here are sparse, sorted by coordinate.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

#include "mta/scalar.hpp"

namespace mta::internal {

struct GradeSpace {
  int n = 1, k = 0, l = 0;
  std::vector<std::uint64_t> pow;  // pow[i] = n^i, i <= k+l

  GradeSpace() = default;
  GradeSpace(int n_, int k_, int l_) : n(n_), k(k_), l(l_) {
    pow.resize(k + l + 1);
    pow[0] = 1;
    for (int i = 1; i <= k + l; ++i) pow[i] = pow[i - 1] * static_cast<std::uint64_t>(n);
  }

  std::uint64_t dim() const { return pow[k + l]; }

  // Exponent (significance) of the digit for contravariant slot p (0-based).
  int up_exp(int p) const { return k + l - 1 - p; }
  // Exponent of the digit for covariant slot q (0-based).
  int down_exp(int q) const { return l - 1 - q; }

  int digit(std::uint64_t c, int exp) const {
    return static_cast<int>((c / pow[exp]) % static_cast<std::uint64_t>(n));
  }

  // Removes the digit at `exp`, shifting more significant digits down.
  std::uint64_t remove_digit(std::uint64_t c, int exp) const {
    std::uint64_t high = c / pow[exp + 1];
    std::uint64_t low = c % pow[exp];
    return high * pow[exp] + low;
  }

  std::uint64_t swap_digits(std::uint64_t c, int e1, int e2) const {
    int d1 = digit(c, e1), d2 = digit(c, e2);
    return c + (static_cast<std::int64_t>(d2) - d1) * pow[e1] +
           (static_cast<std::int64_t>(d1) - d2) * pow[e2];
  }
};

template <class V>
using SparseRow = std::vector<std::pair<std::uint32_t, V>>;

inline bool value_is_zero(const std::complex<double>& v) {
  return std::abs(v) < kFloatDropEps;
}
template <class V>
bool value_is_zero(const V& v) {
  return v.is_zero();
}

// Sorts by coordinate, folds duplicate coordinates with +, drops zeros.
template <class V>
void normalize_row(SparseRow<V>& row) {
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t out = 0;
  for (size_t i = 0; i < row.size();) {
    std::uint32_t c = row[i].first;
    V acc = row[i].second;
    for (++i; i < row.size() && row[i].first == c; ++i) acc = acc + row[i].second;
    if (!value_is_zero(acc)) row[out++] = {c, acc};
  }
  row.resize(out);
}

// Product row in the concatenated grade (ka+kb, la+lb): digits are
// a.up ++ b.up ++ a.down ++ b.down.
template <class V>
SparseRow<V> row_product(const GradeSpace& a, const GradeSpace& b,
                         const SparseRow<V>& x, const SparseRow<V>& y) {
  SparseRow<V> out;
  out.reserve(x.size() * y.size());
  for (const auto& [ca, va] : x) {
    std::uint64_t ua = ca / a.pow[a.l];
    std::uint64_t da = ca % a.pow[a.l];
    for (const auto& [cb, vb] : y) {
      std::uint64_t ub = cb / b.pow[b.l];
      std::uint64_t db = cb % b.pow[b.l];
      std::uint64_t c = ((ua * b.pow[b.k] + ub) * a.pow[a.l] + da) * b.pow[b.l] + db;
      out.emplace_back(static_cast<std::uint32_t>(c), va * vb);
    }
  }
  normalize_row(out);
  return out;
}

// Contraction of contravariant slot p against covariant slot q (0-based).
template <class V>
SparseRow<V> row_contract(const GradeSpace& g, const SparseRow<V>& x, int p, int q) {
  SparseRow<V> out;
  int eu = g.up_exp(p), ed = g.down_exp(q);
  for (const auto& [c, v] : x) {
    if (g.digit(c, eu) != g.digit(c, ed)) continue;
    std::uint64_t r = g.remove_digit(c, eu);  // eu > ed: up digits sit higher
    r = g.remove_digit(r, ed);
    out.emplace_back(static_cast<std::uint32_t>(r), v);
  }
  normalize_row(out);
  return out;
}

// Star image in the (l,k) space: up' = reversed down, down' = reversed up;
// the caller supplies conjugation for the value type.
template <class V, class ConjFn>
SparseRow<V> row_star(const GradeSpace& g, const SparseRow<V>& x, ConjFn conj_value) {
  SparseRow<V> out;
  out.reserve(x.size());
  for (const auto& [c, v] : x) {
    std::uint64_t r = 0;
    for (int q = g.l - 1; q >= 0; --q) {
      r = r * static_cast<std::uint64_t>(g.n) + g.digit(c, g.down_exp(q));
    }
    for (int p = g.k - 1; p >= 0; --p) {
      r = r * static_cast<std::uint64_t>(g.n) + g.digit(c, g.up_exp(p));
    }
    out.emplace_back(static_cast<std::uint32_t>(r), conj_value(v));
  }
  normalize_row(out);
  return out;
}

// Swap of adjacent contravariant slots (p, p+1); 0-based.
template <class V>
SparseRow<V> row_swap_up(const GradeSpace& g, const SparseRow<V>& x, int p) {
  SparseRow<V> out;
  out.reserve(x.size());
  for (const auto& [c, v] : x) {
    out.emplace_back(
        static_cast<std::uint32_t>(g.swap_digits(c, g.up_exp(p), g.up_exp(p + 1))), v);
  }
  normalize_row(out);
  return out;
}

// Swap of adjacent covariant slots (q, q+1); 0-based.
template <class V>
SparseRow<V> row_swap_down(const GradeSpace& g, const SparseRow<V>& x, int q) {
  SparseRow<V> out;
  out.reserve(x.size());
  for (const auto& [c, v] : x) {
    out.emplace_back(
        static_cast<std::uint32_t>(g.swap_digits(c, g.down_exp(q), g.down_exp(q + 1))), v);
  }
  normalize_row(out);
  return out;
}

}  // namespace mta::internal
