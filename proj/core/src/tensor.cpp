#include "mta/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mta {

namespace {

void check_same_shape(const MixedTensor& x, const MixedTensor& y) {
  if (x.n != y.n) throw std::invalid_argument("tensor dimension mismatch");
  if (x.mode != y.mode) throw std::invalid_argument("tensor mode mismatch");
}

void check_same_grade(const MixedTensor& x, const MixedTensor& y) {
  check_same_shape(x, y);
  if (x.k != y.k || x.l != y.l) throw std::invalid_argument("tensor grade mismatch");
}

void check_index_range(const std::vector<int>& vals, int n) {
  for (int v : vals) {
    if (v < 1 || v > n) throw std::out_of_range("basis index out of range");
  }
}

bool is_permutation_image(const std::vector<int>& image) {
  int m = static_cast<int>(image.size());
  std::vector<char> seen(m, 0);
  for (int v : image) {
    if (v < 1 || v > m || seen[v - 1]) return false;
    seen[v - 1] = 1;
  }
  return true;
}

}  // namespace

Scalar MixedTensor::coefficient(const MultiIndex& mi) const {
  auto it = entries.find(mi);
  return it == entries.end() ? Scalar::zero(mode) : it->second;
}

void MixedTensor::accumulate(const MultiIndex& mi, const Scalar& c) {
  auto [it, inserted] = entries.try_emplace(mi, c);
  if (!inserted) it->second += c;
  if (it->second.negligible()) entries.erase(it);
}

MixedTensor make_zero_tensor(int n, int k, int l, ScalarMode mode) {
  if (n < 1 || k < 0 || l < 0) throw std::invalid_argument("bad tensor shape");
  MixedTensor t;
  t.n = n;
  t.k = k;
  t.l = l;
  t.mode = mode;
  return t;
}

MixedTensor make_scalar_tensor(int n, const Scalar& value) {
  MixedTensor t = make_zero_tensor(n, 0, 0, value.mode());
  if (!value.negligible()) t.entries.emplace(MultiIndex{}, value);
  return t;
}

MixedTensor make_basis_tensor(int n, std::vector<int> up, std::vector<int> down,
                              ScalarMode mode) {
  check_index_range(up, n);
  check_index_range(down, n);
  MixedTensor t = make_zero_tensor(n, static_cast<int>(up.size()),
                                   static_cast<int>(down.size()), mode);
  t.entries.emplace(MultiIndex{std::move(up), std::move(down)}, Scalar::one(mode));
  return t;
}

MixedTensor linear_combine(const std::vector<std::pair<Scalar, MixedTensor>>& terms) {
  if (terms.empty()) throw std::invalid_argument("linear_combine needs at least one term");
  const MixedTensor& first = terms.front().second;
  MixedTensor out = make_zero_tensor(first.n, first.k, first.l, first.mode);
  for (const auto& [c, t] : terms) {
    check_same_grade(first, t);
    if (c.mode() != first.mode) throw std::invalid_argument("coefficient mode mismatch");
    if (c.is_zero()) continue;
    for (const auto& [mi, v] : t.entries) out.accumulate(mi, c * v);
  }
  return out;
}

MixedTensor scale(const Scalar& c, const MixedTensor& x) { return linear_combine({{c, x}}); }

MixedTensor add(const MixedTensor& x, const MixedTensor& y) {
  return linear_combine({{Scalar::one(x.mode), x}, {Scalar::one(y.mode), y}});
}

MixedTensor subtract(const MixedTensor& x, const MixedTensor& y) {
  return linear_combine({{Scalar::one(x.mode), x}, {-Scalar::one(y.mode), y}});
}

MixedTensor tensor_product(const MixedTensor& x, const MixedTensor& y) {
  check_same_shape(x, y);
  MixedTensor out = make_zero_tensor(x.n, x.k + y.k, x.l + y.l, x.mode);
  for (const auto& [xi, xv] : x.entries) {
    for (const auto& [yi, yv] : y.entries) {
      MultiIndex mi;
      mi.up.reserve(xi.up.size() + yi.up.size());
      mi.up = xi.up;
      mi.up.insert(mi.up.end(), yi.up.begin(), yi.up.end());
      mi.down = xi.down;
      mi.down.insert(mi.down.end(), yi.down.begin(), yi.down.end());
      out.accumulate(mi, xv * yv);
    }
  }
  return out;
}

MixedTensor star(const MixedTensor& x) {
  MixedTensor out = make_zero_tensor(x.n, x.l, x.k, x.mode);
  for (const auto& [mi, v] : x.entries) {
    MultiIndex si;
    si.up.assign(mi.down.rbegin(), mi.down.rend());
    si.down.assign(mi.up.rbegin(), mi.up.rend());
    out.accumulate(si, v.conj());
  }
  return out;
}

MixedTensor contract(const MixedTensor& x, int p, int q) {
  if (p < 1 || p > x.k || q < 1 || q > x.l) throw std::out_of_range("contraction slot");
  MixedTensor out = make_zero_tensor(x.n, x.k - 1, x.l - 1, x.mode);
  for (const auto& [mi, v] : x.entries) {
    if (mi.up[p - 1] != mi.down[q - 1]) continue;
    MultiIndex ci;
    ci.up = mi.up;
    ci.up.erase(ci.up.begin() + (p - 1));
    ci.down = mi.down;
    ci.down.erase(ci.down.begin() + (q - 1));
    out.accumulate(ci, v);
  }
  return out;
}

MixedTensor mutate(const MixedTensor& x, const std::vector<int>& sigma,
                   const std::vector<int>& tau) {
  if (static_cast<int>(sigma.size()) != x.k || static_cast<int>(tau.size()) != x.l) {
    throw std::invalid_argument("mutation permutation size mismatch");
  }
  if (!is_permutation_image(sigma) || !is_permutation_image(tau)) {
    throw std::invalid_argument("not a permutation");
  }
  MixedTensor out = make_zero_tensor(x.n, x.k, x.l, x.mode);
  for (const auto& [mi, v] : x.entries) {
    MultiIndex pi;
    pi.up.resize(mi.up.size());
    pi.down.resize(mi.down.size());
    for (int i = 0; i < x.k; ++i) pi.up[sigma[i] - 1] = mi.up[i];
    for (int j = 0; j < x.l; ++j) pi.down[tau[j] - 1] = mi.down[j];
    out.accumulate(pi, v);
  }
  return out;
}

MixedTensor flip(const MixedTensor& x, const std::vector<int>& lower,
                 const std::vector<int>& raise) {
  std::vector<char> lower_mask(x.k, 0), raise_mask(x.l, 0);
  for (int s : lower) {
    if (s < 1 || s > x.k) throw std::out_of_range("flip slot");
    lower_mask[s - 1] = 1;
  }
  for (int s : raise) {
    if (s < 1 || s > x.l) throw std::out_of_range("flip slot");
    raise_mask[s - 1] = 1;
  }
  int nl = 0, nr = 0;
  for (char c : lower_mask) nl += c;
  for (char c : raise_mask) nr += c;
  MixedTensor out = make_zero_tensor(x.n, x.k - nl + nr, x.l - nr + nl, x.mode);
  for (const auto& [mi, v] : x.entries) {
    MultiIndex fi;
    fi.up.reserve(out.k);
    fi.down.reserve(out.l);
    for (int i = 0; i < x.k; ++i) {
      if (!lower_mask[i]) fi.up.push_back(mi.up[i]);
    }
    for (int j = 0; j < x.l; ++j) {
      if (raise_mask[j]) fi.up.push_back(mi.down[j]);
    }
    for (int j = 0; j < x.l; ++j) {
      if (!raise_mask[j]) fi.down.push_back(mi.down[j]);
    }
    for (int i = 0; i < x.k; ++i) {
      if (lower_mask[i]) fi.down.push_back(mi.up[i]);
    }
    out.accumulate(fi, v);
  }
  return out;
}

MixedTensor apply_group_element(const MixedTensor& x, const GroupElement& g) {
  if (g.u.rows() != x.n || g.u.cols() != x.n) {
    throw std::invalid_argument("group element dimension mismatch");
  }
  if (g.u.mode() != x.mode) throw std::invalid_argument("group element mode mismatch");
  MixedTensor out = make_zero_tensor(x.n, x.k, x.l, x.mode);
  // Image of a basis entry is the product of one matrix column per slot;
  // expand depth-first, pruning zero branches.
  MultiIndex work;
  work.up.resize(x.k);
  work.down.resize(x.l);
  for (const auto& [mi, v] : x.entries) {
    auto expand = [&](auto&& self, int slot, const Scalar& acc) -> void {
      if (acc.is_zero()) return;
      if (slot == x.k + x.l) {
        out.accumulate(work, acc);
        return;
      }
      bool is_up = slot < x.k;
      const CMatrix& m = is_up ? g.u : g.u_inv_t;
      int src = is_up ? mi.up[slot] : mi.down[slot - x.k];
      for (int r = 1; r <= x.n; ++r) {
        const Scalar& entry = m.at(r - 1, src - 1);
        if (entry.is_zero()) continue;
        if (is_up) {
          work.up[slot] = r;
        } else {
          work.down[slot - x.k] = r;
        }
        self(self, slot + 1, acc * entry);
      }
    };
    expand(expand, 0, v);
  }
  return out;
}

MixedTensor mat_mul(const MixedTensor& y, const MixedTensor& z) {
  if (y.k != 1 || y.l != 1 || z.k != 1 || z.l != 1) {
    throw std::invalid_argument("mat_mul needs grade (1,1) operands");
  }
  return contract(tensor_product(y, z), 2, 1);
}

Scalar inner_product(const MixedTensor& x, const MixedTensor& y) {
  check_same_shape(x, y);
  Scalar acc = Scalar::zero(x.mode);
  if (x.k != y.k || x.l != y.l) return acc;
  for (const auto& [mi, v] : x.entries) {
    auto it = y.entries.find(mi);
    if (it != y.entries.end()) acc += v.conj() * it->second;
  }
  return acc;
}

MixedTensor to_float(const MixedTensor& x) {
  MixedTensor out = make_zero_tensor(x.n, x.k, x.l, ScalarMode::kFloat);
  for (const auto& [mi, v] : x.entries) out.accumulate(mi, v.to_float());
  return out;
}

double frobenius_norm(const MixedTensor& x) {
  double s = 0;
  for (const auto& [mi, v] : x.entries) {
    double m = std::abs(v.as_complex());
    s += m * m;
  }
  return std::sqrt(s);
}

double max_entry_distance(const MixedTensor& x, const MixedTensor& y) {
  if (x.n != y.n || x.k != y.k || x.l != y.l) {
    throw std::invalid_argument("tensor grade mismatch");
  }
  double worst = 0;
  for (const auto& [mi, v] : x.entries) {
    auto it = y.entries.find(mi);
    std::complex<double> other = it == y.entries.end() ? 0.0 : it->second.as_complex();
    worst = std::max(worst, std::abs(v.as_complex() - other));
  }
  for (const auto& [mi, v] : y.entries) {
    if (x.entries.find(mi) == x.entries.end()) {
      worst = std::max(worst, std::abs(v.as_complex()));
    }
  }
  return worst;
}

bool approx_equal(const MixedTensor& x, const MixedTensor& y, double tol) {
  return max_entry_distance(x, y) <= tol;
}

std::string tensor_to_string(const MixedTensor& x) {
  std::ostringstream os;
  os << "(" << x.k << "," << x.l << ") n=" << x.n << " " << to_string(x.mode) << " {";
  bool first = true;
  for (const auto& [mi, v] : x.entries) {
    if (!first) os << ", ";
    first = false;
    os << "[";
    for (size_t i = 0; i < mi.up.size(); ++i) os << (i ? "," : "") << mi.up[i];
    os << "|";
    for (size_t i = 0; i < mi.down.size(); ++i) os << (i ? "," : "") << mi.down[i];
    os << "]: " << v.str();
  }
  os << "}";
  return os.str();
}

std::vector<int> identity_permutation(int m) {
  std::vector<int> image(m);
  for (int i = 0; i < m; ++i) image[i] = i + 1;
  return image;
}

int permutation_sign(const std::vector<int>& image) {
  int m = static_cast<int>(image.size());
  std::vector<char> seen(m, 0);
  int sign = 1;
  for (int i = 0; i < m; ++i) {
    if (seen[i]) continue;
    int len = 0;
    int j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = image[j] - 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace mta
