#include "mta/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "json.hpp"
#include "mta/multi_index.hpp"

namespace mta {

std::uint64_t SubspaceBasis::ambient_dim() const { return grade_dimension(n, k, l); }

ExactRow tensor_to_exact_row(const MixedTensor& t) {
  if (t.mode != ScalarMode::kExact) throw std::invalid_argument("tensor is not exact");
  ExactRow row;
  row.reserve(t.entries.size());
  for (const auto& [mi, v] : t.entries) {
    row.emplace_back(static_cast<std::uint32_t>(flatten_index(mi, t.n)),
                     v.exact_value());
  }
  // Map iteration order coincides with flat order, so the row is sorted.
  return row;
}

FloatRow tensor_to_float_row(const MixedTensor& t) {
  FloatRow row(grade_dimension(t.n, t.k, t.l), std::complex<double>(0, 0));
  for (const auto& [mi, v] : t.entries) row[flatten_index(mi, t.n)] = v.as_complex();
  return row;
}

MixedTensor exact_row_to_tensor(const ExactRow& row, int n, int k, int l) {
  MixedTensor t = make_zero_tensor(n, k, l, ScalarMode::kExact);
  for (const auto& [c, v] : row) {
    t.entries.emplace(unflatten_index(c, n, k, l), Scalar::exact(v));
  }
  return t;
}

MixedTensor float_row_to_tensor(const FloatRow& row, int n, int k, int l) {
  MixedTensor t = make_zero_tensor(n, k, l, ScalarMode::kFloat);
  for (std::uint64_t c = 0; c < row.size(); ++c) {
    if (std::abs(row[c]) >= kFloatDropEps) {
      t.entries.emplace(unflatten_index(c, n, k, l), Scalar::floating(row[c]));
    }
  }
  return t;
}

namespace {

// acc -= a * b without fresh allocations: `scratch` holds the product and
// is reused across calls once its limbs are warm.
void submul(GaussianRational& acc, const GaussianRational& a,
            const GaussianRational& b, GaussianRational& scratch) {
  const bool a_real = sgn(a.im) == 0;
  const bool b_real = sgn(b.im) == 0;
  if (a_real && b_real) {
    scratch.re = a.re * b.re;
    acc.re -= scratch.re;
    return;
  }
  scratch = a * b;
  acc -= scratch;
}

void neg_inplace(GaussianRational& v) {
  v.re.negate();
  v.im.negate();
}

// row -= coeff * other; both sorted sparse, merged linearly. Takes the row
// by value so untouched entries move instead of copying their limbs.
ExactRow subtract_scaled(ExactRow row, const GaussianRational& coeff,
                         const ExactRow& other) {
  ExactRow out;
  out.reserve(row.size() + other.size());
  GaussianRational scratch;
  size_t i = 0, j = 0;
  while (i < row.size() || j < other.size()) {
    if (j == other.size() || (i < row.size() && row[i].first < other[j].first)) {
      out.push_back(std::move(row[i++]));
    } else if (i == row.size() || other[j].first < row[i].first) {
      out.emplace_back(other[j].first, -(coeff * other[j].second));
      ++j;
    } else {
      GaussianRational v = std::move(row[i].second);
      submul(v, coeff, other[j].second, scratch);
      if (!v.is_zero()) out.emplace_back(row[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

double row_norm(const FloatRow& v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// Scatter space for exact reduction, reused across calls so elimination
// costs the eliminating row's length instead of a rebuild of the whole
// candidate per step. Generation stamps make reuse O(1).
struct ReduceWorkspace {
  std::vector<GaussianRational> val;
  std::vector<std::uint64_t> touch_gen;
  std::vector<std::uint64_t> done_gen;
  std::uint64_t gen = 0;
  GaussianRational scratch;
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>,
                      std::greater<std::uint32_t>>
      heap;

  void begin(std::uint64_t ambient) {
    if (val.size() < ambient) {
      val.resize(ambient);
      touch_gen.resize(ambient, 0);
      done_gen.resize(ambient, 0);
    }
    ++gen;
    heap = {};  // a previous call may have thrown mid-drain
  }
};

thread_local ReduceWorkspace t_reduce_ws;

}  // namespace

// Instrumentation counters, meaningful only when a single thread drives the
// builder; read by tooling via span_op_counters().
SpanOpCounters& span_op_counters() {
  static SpanOpCounters counters;
  return counters;
}

struct SpanBuilder::Impl {
  std::uint64_t ambient = 0;
  // Exact state: rows normalized to leading coefficient 1, one row per
  // pivot coordinate, kept mutually reduced: no stored row contains any
  // other row's pivot. Maintaining that on insertion keeps rows short,
  // which is what makes long insertion campaigns affordable.
  std::vector<ExactRow> exact;
  std::unordered_map<std::uint32_t, int> pivot_row;
  // coordinate -> indices of stored rows with a nonzero entry there.
  std::unordered_map<std::uint32_t, std::vector<int>> coord_rows;
  // Float state: orthonormal rows.
  std::vector<FloatRow> ortho;

  void index_row(int idx) {
    for (const auto& [c, v] : exact[idx]) coord_rows[c].push_back(idx);
  }

  void drop_coord(std::uint32_t c, int idx) {
    auto it = coord_rows.find(c);
    auto& list = it->second;
    list.erase(std::find(list.begin(), list.end(), idx));
    if (list.empty()) coord_rows.erase(it);
  }

  // Replaces exact[idx] with exact[idx] - coeff*row in one merge pass,
  // adjusting the coordinate index only where support actually changes.
  // Reindexing the whole row per update is what this avoids; most of the
  // row is carried over untouched.
  void subtract_scaled_indexed(int idx, const GaussianRational& coeff,
                               const ExactRow& row) {
    ExactRow& target = exact[idx];
    ExactRow out;
    out.reserve(target.size() + row.size());
    GaussianRational scratch;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < target.size() || j < row.size()) {
      if (j == row.size() ||
          (i < target.size() && target[i].first < row[j].first)) {
        out.push_back(std::move(target[i]));
        ++i;
      } else if (i == target.size() || row[j].first < target[i].first) {
        GaussianRational v = coeff * row[j].second;
        neg_inplace(v);
        coord_rows[row[j].first].push_back(idx);
        out.emplace_back(row[j].first, std::move(v));
        ++j;
      } else {
        GaussianRational v = std::move(target[i].second);
        submul(v, coeff, row[j].second, scratch);
        if (v.is_zero()) {
          drop_coord(target[i].first, idx);
        } else {
          out.emplace_back(target[i].first, std::move(v));
        }
        ++i;
        ++j;
      }
    }
    target = std::move(out);
  }

  // Eliminates coordinate p (the pivot of `row`, with coefficient 1) from
  // every stored row.
  void eliminate_everywhere(std::uint32_t p, const ExactRow& row) {
    auto hit = coord_rows.find(p);
    if (hit == coord_rows.end()) return;
    std::vector<int> affected = hit->second;  // lists mutate below
    SpanOpCounters& ops = span_op_counters();
    for (int idx : affected) {
      const ExactRow& r = exact[idx];
      auto it = std::lower_bound(
          r.begin(), r.end(), p,
          [](const auto& e, std::uint32_t c) { return e.first < c; });
      GaussianRational coeff = it->second;
      ++ops.eliminate_updates;
      ops.eliminate_terms += r.size() + row.size();
      subtract_scaled_indexed(idx, coeff, row);
    }
  }

  // Eliminates every stored pivot from the candidate and returns the fully
  // reduced remainder, empty exactly when the candidate is contained.
  // Coordinates are processed in ascending order on a scatter workspace;
  // that is sound because a pivot row's support never precedes its pivot,
  // so elimination only ever adds coordinates past the one being cleared.
  // When stop_at_first_free is set, returns a nonempty stub as soon as
  // non-containment is certain.
  ExactRow reduce(const ExactRow& row, std::uint64_t ambient,
                  bool stop_at_first_free = false) const {
    ReduceWorkspace& ws = t_reduce_ws;
    ws.begin(ambient);
    SpanOpCounters& ops = span_op_counters();
    ++ops.reduce_calls;
    ops.candidate_terms += row.size();
    auto fresh = [&ws](std::uint32_t c) {
      if (ws.touch_gen[c] != ws.gen) {
        ws.touch_gen[c] = ws.gen;
        ws.heap.push(c);
        return true;
      }
      return false;
    };
    for (const auto& [c, v] : row) {
      if (fresh(c)) {
        ws.val[c] = v;
      } else {
        ws.val[c] += v;
      }
    }
    ExactRow out;
    while (!ws.heap.empty()) {
      std::uint32_t c = ws.heap.top();
      ws.heap.pop();
      if (ws.done_gen[c] == ws.gen) continue;  // duplicate heap entry
      ws.done_gen[c] = ws.gen;
      GaussianRational& v = ws.val[c];
      if (v.is_zero()) continue;
      auto it = pivot_row.find(c);
      if (it == pivot_row.end()) {
        out.emplace_back(c, std::move(v));  // stamps make the slot reusable
        if (stop_at_first_free) {
          ws.heap = {};
          break;
        }
        continue;
      }
      const ExactRow& prow = exact[it->second];
      ++ops.pivot_hits;
      ops.tail_touches += prow.size() - 1;
      for (std::size_t i = 1; i < prow.size(); ++i) {
        const std::uint32_t tc = prow[i].first;
        if (fresh(tc)) {
          // val[tc] = -(v * tail); assign then negate in place.
          ws.val[tc] = v * prow[i].second;
          neg_inplace(ws.val[tc]);
        } else {
          submul(ws.val[tc], v, prow[i].second, ws.scratch);
        }
      }
    }
    return out;
  }

  // Orthogonal complement of v against ortho, with one reorthogonalization
  // pass; returns the residual norm via out-param.
  FloatRow project_out(FloatRow v, double* res_norm) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : ortho) {
        std::complex<double> ip(0, 0);
        for (size_t c = 0; c < v.size(); ++c) ip += std::conj(b[c]) * v[c];
        if (ip == std::complex<double>(0, 0)) continue;
        for (size_t c = 0; c < v.size(); ++c) v[c] -= ip * b[c];
      }
    }
    *res_norm = row_norm(v);
    return v;
  }
};

SpanBuilder::SpanBuilder(int n, int k, int l, ScalarMode mode, double tol)
    : n_(n), k_(k), l_(l), mode_(mode), tol_(tol), impl_(std::make_unique<Impl>()) {
  impl_->ambient = grade_dimension(n, k, l);  // validates shape and range
}

SpanBuilder::~SpanBuilder() = default;
SpanBuilder::SpanBuilder(SpanBuilder&&) noexcept = default;
SpanBuilder& SpanBuilder::operator=(SpanBuilder&&) noexcept = default;

bool SpanBuilder::add(const MixedTensor& t) {
  if (t.n != n_ || t.k != k_ || t.l != l_) throw std::invalid_argument("grade mismatch");
  if (mode_ == ScalarMode::kExact) {
    if (t.mode != ScalarMode::kExact) {
      throw std::invalid_argument("cannot add float tensor to exact span");
    }
    return add_exact_row(tensor_to_exact_row(t));
  }
  return add_float_row(tensor_to_float_row(t.mode == ScalarMode::kFloat ? t : to_float(t)));
}

bool SpanBuilder::add_exact_row(ExactRow row) {
  if (mode_ != ScalarMode::kExact) throw std::logic_error("span builder is float");
  row = impl_->reduce(row, impl_->ambient);
  if (row.empty()) return false;
  const GaussianRational lead = row.front().second;
  if (sgn(lead.im) == 0) {
    for (auto& [c, v] : row) {
      v.re /= lead.re;
      if (sgn(v.im) != 0) v.im /= lead.re;
    }
  } else {
    for (auto& [c, v] : row) v = v / lead;
  }
  std::uint32_t pivot = row.front().first;
  impl_->eliminate_everywhere(pivot, row);
  int idx = static_cast<int>(impl_->exact.size());
  impl_->pivot_row.emplace(pivot, idx);
  impl_->exact.push_back(std::move(row));
  impl_->index_row(idx);
  return true;
}

bool SpanBuilder::add_float_row(FloatRow row) {
  if (mode_ != ScalarMode::kFloat) throw std::logic_error("span builder is exact");
  double norm0 = row_norm(row);
  if (norm0 == 0) return false;
  double res = 0;
  FloatRow rem = impl_->project_out(std::move(row), &res);
  if (res <= tol_ * norm0) return false;
  for (auto& z : rem) z /= res;
  impl_->ortho.push_back(std::move(rem));
  return true;
}

bool SpanBuilder::contains(const MixedTensor& t) const {
  if (t.n != n_ || t.k != k_ || t.l != l_) throw std::invalid_argument("grade mismatch");
  if (mode_ == ScalarMode::kExact) {
    if (t.mode != ScalarMode::kExact) {
      throw std::invalid_argument("mode mismatch in span query");
    }
    return contains_exact_row(tensor_to_exact_row(t));
  }
  return residual_float_row(tensor_to_float_row(
             t.mode == ScalarMode::kFloat ? t : to_float(t))) <= tol_;
}

bool SpanBuilder::contains_exact_row(const ExactRow& row) const {
  return impl_->reduce(row, impl_->ambient, /*stop_at_first_free=*/true).empty();
}

double SpanBuilder::residual_float_row(const FloatRow& row) const {
  double norm0 = row_norm(row);
  if (norm0 == 0) return 0;
  double res = 0;
  impl_->project_out(row, &res);
  return res / norm0;
}

int SpanBuilder::dim() const {
  return static_cast<int>(mode_ == ScalarMode::kExact ? impl_->exact.size()
                                                      : impl_->ortho.size());
}

ExactRow SpanBuilder::stored_exact_row(int i) const {
  if (mode_ != ScalarMode::kExact) {
    throw std::invalid_argument("stored_exact_row: float-mode builder");
  }
  return impl_->exact.at(static_cast<std::size_t>(i));
}

FloatRow SpanBuilder::stored_float_row(int i) const {
  if (mode_ != ScalarMode::kFloat) {
    throw std::invalid_argument("stored_float_row: exact-mode builder");
  }
  return impl_->ortho.at(static_cast<std::size_t>(i));
}

std::size_t SpanBuilder::stored_row_size(int i) const {
  if (mode_ == ScalarMode::kExact) {
    return impl_->exact.at(static_cast<std::size_t>(i)).size();
  }
  return impl_->ortho.at(static_cast<std::size_t>(i)).size();
}

SubspaceBasis SpanBuilder::finalize() const {
  SubspaceBasis basis;
  basis.n = n_;
  basis.k = k_;
  basis.l = l_;
  basis.mode = mode_;
  basis.tol = tol_;
  if (mode_ == ScalarMode::kFloat) {
    basis.float_rows = impl_->ortho;
    return basis;
  }
  // Rows are kept mutually reduced on insertion, so reduced echelon form
  // only needs them ordered by pivot.
  std::vector<int> order(impl_->exact.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return impl_->exact[a].front().first < impl_->exact[b].front().first;
  });
  std::vector<ExactRow> rows;
  rows.reserve(order.size());
  for (int idx : order) rows.push_back(impl_->exact[idx]);
  basis.exact_rows = std::move(rows);
  return basis;
}

MixedTensor SubspaceBasis::row_tensor(int i) const {
  if (mode == ScalarMode::kExact) return exact_row_to_tensor(exact_rows.at(i), n, k, l);
  return float_row_to_tensor(float_rows.at(i), n, k, l);
}

double SubspaceBasis::residual(const MixedTensor& x) const {
  if (x.n != n || x.k != k || x.l != l) throw std::invalid_argument("grade mismatch");
  if (mode == ScalarMode::kExact) {
    if (x.mode != ScalarMode::kExact) throw std::invalid_argument("mode mismatch");
    ExactRow row = tensor_to_exact_row(x);
    // Rows are in RREF with increasing pivots: a single sweep reduces.
    for (const auto& basis_row : exact_rows) {
      if (row.empty()) break;
      std::uint32_t pivot = basis_row.front().first;
      auto it = std::lower_bound(
          row.begin(), row.end(), pivot,
          [](const auto& e, std::uint32_t c) { return e.first < c; });
      if (it != row.end() && it->first == pivot) {
        const GaussianRational coeff = it->second;  // row is moved from below
        row = subtract_scaled(std::move(row), coeff, basis_row);
      }
    }
    return row.empty() ? 0.0 : 1.0;
  }
  FloatRow v = tensor_to_float_row(x.mode == ScalarMode::kFloat ? x : to_float(x));
  double norm0 = row_norm(v);
  if (norm0 == 0) return 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : float_rows) {
      std::complex<double> ip(0, 0);
      for (size_t c = 0; c < v.size(); ++c) ip += std::conj(b[c]) * v[c];
      for (size_t c = 0; c < v.size(); ++c) v[c] -= ip * b[c];
    }
  }
  return row_norm(v) / norm0;
}

SubspaceBasis span_basis(const std::vector<MixedTensor>& vectors, double tol) {
  if (vectors.empty()) {
    SubspaceBasis basis;
    basis.tol = tol;
    return basis;
  }
  const MixedTensor& first = vectors.front();
  return span_basis_shaped(first.n, first.k, first.l, first.mode, vectors, tol);
}

SubspaceBasis span_basis_shaped(int n, int k, int l, ScalarMode mode,
                                const std::vector<MixedTensor>& vectors, double tol) {
  if (mode == ScalarMode::kExact) {
    SpanBuilder builder(n, k, l, mode, tol);
    for (const auto& v : vectors) builder.add(v);
    return builder.finalize();
  }
  // Batch float path: rank-revealing SVD with a relative cutoff.
  std::uint64_t dim = grade_dimension(n, k, l);
  Eigen::MatrixXcd m(vectors.size(), dim);
  for (size_t i = 0; i < vectors.size(); ++i) {
    const MixedTensor& t = vectors[i];
    if (t.n != n || t.k != k || t.l != l) throw std::invalid_argument("grade mismatch");
    FloatRow row = tensor_to_float_row(t.mode == ScalarMode::kFloat ? t : to_float(t));
    for (std::uint64_t c = 0; c < dim; ++c) m(i, c) = row[c];
  }
  SubspaceBasis basis;
  basis.n = n;
  basis.k = k;
  basis.l = l;
  basis.mode = ScalarMode::kFloat;
  basis.tol = tol;
  if (vectors.empty()) return basis;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() ? tol * sv(0) : 0;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0) ++rank;
  for (int r = 0; r < rank; ++r) {
    FloatRow row(dim);
    for (std::uint64_t c = 0; c < dim; ++c) row[c] = std::conj(svd.matrixV()(c, r));
    basis.float_rows.push_back(std::move(row));
  }
  return basis;
}

bool contains(const SubspaceBasis& basis, const MixedTensor& x) {
  return basis.residual(x) <= (basis.mode == ScalarMode::kExact ? 0.0 : basis.tol);
}

bool contains_space(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.n != b.n || a.k != b.k || a.l != b.l) throw std::invalid_argument("grade mismatch");
  if (a.mode == ScalarMode::kExact && b.mode == ScalarMode::kFloat) {
    throw std::invalid_argument("cannot test float rows against an exact basis");
  }
  for (int i = 0; i < b.dim(); ++i) {
    MixedTensor row = b.row_tensor(i);
    if (a.mode == ScalarMode::kFloat && b.mode == ScalarMode::kExact) row = to_float(row);
    if (!contains(a, row)) return false;
  }
  return true;
}

bool equal_spaces(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.n != b.n || a.k != b.k || a.l != b.l) throw std::invalid_argument("grade mismatch");
  if (a.mode != b.mode) throw std::invalid_argument("mode mismatch");
  if (a.dim() != b.dim()) return false;
  if (a.mode == ScalarMode::kExact) {
    return a.exact_rows == b.exact_rows;  // canonical reduced echelon form
  }
  return contains_space(a, b) && contains_space(b, a);
}

std::string subspace_to_json(const SubspaceBasis& basis) {
  nlohmann::ordered_json doc;
  doc["n"] = basis.n;
  doc["k"] = basis.k;
  doc["l"] = basis.l;
  doc["mode"] = to_string(basis.mode);
  doc["tol"] = basis.tol;
  auto rows = nlohmann::ordered_json::array();
  std::uint64_t dim = basis.ambient_dim();
  for (int i = 0; i < basis.dim(); ++i) {
    auto row = nlohmann::ordered_json::array();
    if (basis.mode == ScalarMode::kExact) {
      const ExactRow& er = basis.exact_rows[i];
      size_t j = 0;
      for (std::uint64_t c = 0; c < dim; ++c) {
        if (j < er.size() && er[j].first == c) {
          row.push_back({rational_to_string(er[j].second.re),
                         rational_to_string(er[j].second.im)});
          ++j;
        } else {
          row.push_back({"0", "0"});
        }
      }
    } else {
      for (std::uint64_t c = 0; c < dim; ++c) {
        const auto& z = basis.float_rows[i][c];
        row.push_back({z.real(), z.imag()});
      }
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump();
}

SubspaceBasis subspace_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  SubspaceBasis basis;
  basis.n = doc.at("n").get<int>();
  basis.k = doc.at("k").get<int>();
  basis.l = doc.at("l").get<int>();
  basis.mode = parse_scalar_mode(doc.at("mode").get<std::string>());
  basis.tol = doc.at("tol").get<double>();
  for (const auto& row : doc.at("rows")) {
    if (basis.mode == ScalarMode::kExact) {
      ExactRow er;
      std::uint32_t c = 0;
      for (const auto& pair : row) {
        GaussianRational g(rational_from_string(pair.at(0).get<std::string>()),
                           rational_from_string(pair.at(1).get<std::string>()));
        if (!g.is_zero()) er.emplace_back(c, std::move(g));
        ++c;
      }
      basis.exact_rows.push_back(std::move(er));
    } else {
      FloatRow fr;
      for (const auto& pair : row) {
        fr.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
      basis.float_rows.push_back(std::move(fr));
    }
  }
  return basis;
}

}  // namespace mta
