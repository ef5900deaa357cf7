#include "mta/closure.hpp"

#include <algorithm>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <queue>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <unordered_map>

#include "json.hpp"

#include "coords.hpp"
#include "mta/generators.hpp"
#include "mta/multi_index.hpp"

namespace mta {

bool GradedBasisTable::is_reported(int k, int l) const {
  return k >= 0 && l >= 0 && k <= cap_k && l <= cap_l &&
         k + l <= effective_degree_cap();
}

std::vector<std::pair<int, int>> GradedBasisTable::reported_grades() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [key, basis] : grades) {
    if (is_reported(key.first, key.second)) out.push_back(key);
  }
  return out;
}

const SubspaceBasis& GradedBasisTable::at(int k, int l) const {
  auto it = grades.find({k, l});
  if (it == grades.end()) {
    throw std::out_of_range("GradedBasisTable: grade not in working window");
  }
  return it->second;
}

namespace {

using internal::GradeSpace;
using internal::SparseRow;

GaussianRational conj_value(const GaussianRational& v) { return v.conj(); }
std::complex<double> conj_value(const std::complex<double>& v) {
  return std::conj(v);
}

SparseRow<GaussianRational> tensor_to_sparse(const MixedTensor& t,
                                             GaussianRational /*tag*/) {
  return tensor_to_exact_row(t);
}

SparseRow<std::complex<double>> tensor_to_sparse(const MixedTensor& t,
                                                 std::complex<double> /*tag*/) {
  SparseRow<std::complex<double>> out;
  out.reserve(t.entries.size());
  for (const auto& [mi, v] : t.entries) {
    out.emplace_back(static_cast<std::uint32_t>(flatten_index(mi, t.n)),
                     v.float_value());
  }
  return out;
}

// Grades above the reported caps exist only so their content can be
// contracted back down; their bases are never part of the result. Keeping
// them in exact rational echelon form is what used to dominate the whole
// run, so duplicate detection there happens in a homomorphic image instead:
// rows mapped entrywise into F_p^2 (p = 2^61 - 1, a field since p = 3 mod
// 4), where elimination is machine-word work and coefficients cannot grow.
// A genuinely new row can slip through only when its residual vanishes mod
// p, at probability ~ grade_dim / p per candidate; a miss would surface as
// a dimension shortfall against the independent oracles, never as a wrong
// basis entry, because everything that reaches a reported grade is computed
// from the exact rows.
constexpr std::uint64_t kModP = (std::uint64_t(1) << 61) - 1;

std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t r = a + b;
  return r >= kModP ? r - kModP : r;
}
std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) {
  return a >= b ? a - b : a + (kModP - b);
}
std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
  const std::uint64_t r = static_cast<std::uint64_t>(t & kModP) +
                          static_cast<std::uint64_t>(t >> 61);
  return r >= kModP ? r - kModP : r;
}
std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e != 0) {
    if (e & 1) r = mod_mul(r, b);
    b = mod_mul(b, b);
    e >>= 1;
  }
  return r;
}
std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kModP - 2); }

struct GaussianModp {
  std::uint64_t re = 0, im = 0;

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianModp operator*(const GaussianModp& o) const {
    return {mod_sub(mod_mul(re, o.re), mod_mul(im, o.im)),
            mod_add(mod_mul(re, o.im), mod_mul(im, o.re))};
  }
  GaussianModp& operator-=(const GaussianModp& o) {
    re = mod_sub(re, o.re);
    im = mod_sub(im, o.im);
    return *this;
  }
  GaussianModp inv() const {
    const std::uint64_t norm_inv =
        mod_inv(mod_add(mod_mul(re, re), mod_mul(im, im)));
    return {mod_mul(re, norm_inv), mod_mul(kModP - im, norm_inv)};
  }
};

using ModpRow = std::vector<std::pair<std::uint32_t, GaussianModp>>;

// True when every entry was representable: a denominator divisible by p
// has no image, and the caller then skips deduplication for the row.
bool row_mod_image(const SparseRow<GaussianRational>& row, ModpRow& out) {
  out.clear();
  out.reserve(row.size());
  for (const auto& [c, v] : row) {
    const std::uint64_t dre = v.re.den_mod(kModP);
    const std::uint64_t dim_ = v.im.den_mod(kModP);
    if (dre == 0 || dim_ == 0) return false;
    GaussianModp m{mod_mul(v.re.num_mod(kModP), mod_inv(dre)),
                   mod_mul(v.im.num_mod(kModP), mod_inv(dim_))};
    if (!m.is_zero()) out.emplace_back(c, m);
  }
  return true;
}

// Row space over F_p^2 with the same maintained-echelon discipline as the
// exact builder: pivot coefficient one, tails free of other pivots.
class ModpSpan {
 public:
  explicit ModpSpan(std::uint64_t ambient) : ambient_(ambient) {}

  int dim() const { return static_cast<int>(rows_.size()); }

  // Reduces the candidate against the stored rows; keeps the residual when
  // one survives. Returns false for a contained candidate.
  bool add(const ModpRow& cand) {
    ModpRow row = reduce(cand);
    if (row.empty()) return false;
    const GaussianModp lead_inv = row.front().second.inv();
    for (auto& [c, v] : row) v = v * lead_inv;
    const std::uint32_t pivot = row.front().first;
    eliminate_everywhere(pivot, row);
    const int idx = dim();
    pivot_row_.emplace(pivot, idx);
    rows_.push_back(std::move(row));
    for (const auto& [c, v] : rows_.back()) coord_rows_[c].push_back(idx);
    return true;
  }

 private:
  ModpRow reduce(const ModpRow& cand) const {
    auto& ws = workspace();
    ws.begin(ambient_);
    for (const auto& [c, v] : cand) {
      if (ws.fresh(c)) {
        ws.val[c] = v;
      } else {
        ws.val[c] = {mod_add(ws.val[c].re, v.re), mod_add(ws.val[c].im, v.im)};
      }
    }
    ModpRow out;
    while (!ws.heap.empty()) {
      const std::uint32_t c = ws.heap.top();
      ws.heap.pop();
      const GaussianModp v = ws.val[c];
      if (v.is_zero()) continue;
      auto it = pivot_row_.find(c);
      if (it == pivot_row_.end()) {
        out.emplace_back(c, v);
        continue;
      }
      const ModpRow& prow = rows_[static_cast<std::size_t>(it->second)];
      for (std::size_t i = 1; i < prow.size(); ++i) {
        const std::uint32_t tc = prow[i].first;
        const GaussianModp d = v * prow[i].second;
        if (ws.fresh(tc)) {
          ws.val[tc] = {mod_sub(0, d.re), mod_sub(0, d.im)};
        } else {
          ws.val[tc] -= d;
        }
      }
    }
    return out;
  }

  void eliminate_everywhere(std::uint32_t p, const ModpRow& row) {
    auto hit = coord_rows_.find(p);
    if (hit == coord_rows_.end()) return;
    std::vector<int> affected = hit->second;  // lists mutate below
    for (int idx : affected) {
      ModpRow& target = rows_[static_cast<std::size_t>(idx)];
      auto it = std::lower_bound(
          target.begin(), target.end(), p,
          [](const auto& e, std::uint32_t c) { return e.first < c; });
      const GaussianModp coeff = it->second;
      ModpRow out;
      out.reserve(target.size() + row.size());
      std::size_t i = 0, j = 0;
      while (i < target.size() || j < row.size()) {
        if (j == row.size() ||
            (i < target.size() && target[i].first < row[j].first)) {
          out.push_back(target[i++]);
        } else if (i == target.size() || row[j].first < target[i].first) {
          const GaussianModp d = coeff * row[j].second;
          coord_rows_[row[j].first].push_back(idx);
          out.emplace_back(row[j].first,
                           GaussianModp{mod_sub(0, d.re), mod_sub(0, d.im)});
          ++j;
        } else {
          GaussianModp v = target[i].second;
          v -= coeff * row[j].second;
          if (v.is_zero()) {
            drop_coord(target[i].first, idx);
          } else {
            out.emplace_back(target[i].first, v);
          }
          ++i;
          ++j;
        }
      }
      target = std::move(out);
    }
  }

  void drop_coord(std::uint32_t c, int idx) {
    auto it = coord_rows_.find(c);
    auto& list = it->second;
    list.erase(std::find(list.begin(), list.end(), idx));
    if (list.empty()) coord_rows_.erase(it);
  }

  struct Workspace {
    std::vector<GaussianModp> val;
    std::vector<std::uint64_t> touch_gen;
    std::uint64_t gen = 0;
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>,
                        std::greater<std::uint32_t>>
        heap;

    void begin(std::uint64_t ambient) {
      if (val.size() < ambient) {
        val.resize(ambient);
        touch_gen.resize(ambient, 0);
      }
      ++gen;
      heap = {};
    }
    bool fresh(std::uint32_t c) {
      if (touch_gen[c] == gen) return false;
      touch_gen[c] = gen;
      heap.push(c);
      return true;
    }
  };
  static Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
  }

  std::uint64_t ambient_;
  std::vector<ModpRow> rows_;
  std::unordered_map<std::uint32_t, int> pivot_row_;
  std::unordered_map<std::uint32_t, std::vector<int>> coord_rows_;
};

template <class V>
struct GradeSlot {
  GradeSpace space;
  SpanBuilder builder;
  // Margin grades (exact mode, above the reported caps) skip the exact
  // echelon entirely: accepted rows are kept verbatim for later products
  // and contractions, with containment decided in the mod-p image.
  bool margin = false;
  ModpSpan dedup;
  std::vector<SparseRow<V>> raw;

  GradeSlot(int n, int k, int l, ScalarMode mode, double tol, bool margin_)
      : space(n, k, l),
        builder(n, k, l, mode, tol),
        margin(margin_),
        dedup(space.dim()) {}
};

bool builder_add_row(SpanBuilder& b, const SparseRow<GaussianRational>& row) {
  return b.add_exact_row(row);
}

bool builder_add_row(SpanBuilder& b, const SparseRow<std::complex<double>>& row) {
  FloatRow dense(static_cast<std::size_t>(
                     grade_dimension(b.n(), b.grade_k(), b.grade_l())),
                 std::complex<double>(0.0, 0.0));
  for (const auto& [c, v] : row) dense[c] = v;
  return b.add_float_row(std::move(dense));
}

// The builder's current row for a given dimension index. Exact rows shrink
// as later insertions back-substitute into them, and any family whose rows
// span the same grade, snapshot by snapshot, yields the same
// product/contraction/star spans, so working with the freshest (shortest)
// version of each row is both sound and the cheapest choice.
SparseRow<GaussianRational> fetch_stored(const SpanBuilder& b, int idx,
                                         GaussianRational /*tag*/) {
  return b.stored_exact_row(idx);
}

SparseRow<std::complex<double>> fetch_stored(const SpanBuilder& b, int idx,
                                             std::complex<double> /*tag*/) {
  FloatRow dense = b.stored_float_row(idx);
  SparseRow<std::complex<double>> out;
  for (std::size_t c = 0; c < dense.size(); ++c) {
    if (std::abs(dense[c]) >= kFloatDropEps) {
      out.emplace_back(static_cast<std::uint32_t>(c), dense[c]);
    }
  }
  return out;
}

template <class V>
GradedBasisTable run_closure(const std::vector<MixedTensor>& seeds,
                             const ClosureOptions& options) {
  const ScalarMode mode = options.mode;
  int n = seeds.empty() ? 0 : seeds.front().n;
  for (const MixedTensor& s : seeds) {
    if (n != 0 && s.n != n) {
      throw std::invalid_argument("closure: seeds disagree on n");
    }
  }
  if (n == 0) throw std::invalid_argument("closure: need at least one seed");
  if (options.cap_k < 0 || options.cap_l < 0 || options.headroom < 0) {
    throw std::invalid_argument("closure: caps and headroom must be >= 0");
  }

  const int work_k = options.cap_k + options.headroom;
  const int work_l = options.cap_l + options.headroom;
  const int work_degree = options.effective_degree_cap() + options.headroom;
  auto in_window = [&](int k, int l) {
    return k >= 0 && l >= 0 && k <= work_k && l <= work_l && k + l <= work_degree;
  };

  GradedBasisTable table;
  table.n = n;
  table.cap_k = options.cap_k;
  table.cap_l = options.cap_l;
  table.headroom = options.headroom;
  table.degree_cap = options.degree_cap;
  table.mode = mode;

  std::map<std::pair<int, int>, GradeSlot<V>> slots;
  for (int k = 0; k <= work_k; ++k) {
    for (int l = 0; l <= work_l; ++l) {
      if (k + l > work_degree) continue;
      const bool margin =
          mode == ScalarMode::kExact && !table.is_reported(k, l);
      slots.emplace(std::piecewise_construct, std::forward_as_tuple(k, l),
                    std::forward_as_tuple(n, k, l, mode, options.tol, margin));
    }
  }

  V tag{};
  // Accepted rows are processed shortest-first. Slots then fill from sparse
  // combinations outward, so the echelon bases stay short while they are
  // rewritten most, which is what keeps the quadratic maintenance volume
  // down; the final spans do not depend on processing order because every
  // saturating operation is linear in each argument.
  struct WorkItem {
    int k, l, idx;
    std::size_t len;
    std::uint64_t seq;
  };
  struct LongerFirst {
    bool operator()(const WorkItem& a, const WorkItem& b) const {
      if (a.len != b.len) return a.len > b.len;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<WorkItem, std::vector<WorkItem>, LongerFirst> worklist;
  std::uint64_t next_seq = 0;
  auto insert = [&](int k, int l, SparseRow<V>&& row) {
    if (!in_window(k, l) || row.empty()) return;
    GradeSlot<V>& slot = slots.at({k, l});
    if constexpr (std::is_same_v<V, GaussianRational>) {
      if (slot.margin) {
        ModpRow image;
        if (row_mod_image(row, image) && !slot.dedup.add(image)) return;
        const int idx = static_cast<int>(slot.raw.size());
        const std::size_t len = row.size();
        slot.raw.push_back(std::move(row));
        worklist.push(WorkItem{k, l, idx, len, next_seq++});
        return;
      }
    }
    if (!builder_add_row(slot.builder, row)) return;
    const int idx = slot.builder.dim() - 1;
    worklist.push(
        WorkItem{k, l, idx, slot.builder.stored_row_size(idx), next_seq++});
  };

  for (const MixedTensor& s : seeds) {
    if (!in_window(s.k, s.l)) {
      std::ostringstream os;
      os << "seed of grade (" << s.k << ", " << s.l
         << ") lies outside the working window and was dropped";
      table.notes.push_back(os.str());
      continue;
    }
    MixedTensor converted = s.mode == mode
                                ? s
                                : (mode == ScalarMode::kFloat
                                       ? to_float(s)
                                       : throw std::invalid_argument(
                                             "closure: float seed in exact run"));
    insert(s.k, s.l, tensor_to_sparse(converted, tag));
  }
  if (in_window(1, 1)) {
    insert(1, 1, tensor_to_sparse(identity_tensor(n, mode), tag));
  }

  const bool progress = std::getenv("MTA_CLOSURE_PROGRESS") != nullptr;
  while (!worklist.empty()) {
    if (table.rounds >= options.max_rounds) {
      table.converged = false;
      break;
    }
    ++table.rounds;
    if (progress && table.rounds % 500 == 0) {
      const SpanOpCounters& ops = span_op_counters();
      std::size_t rows = 0;
      for (auto& [key, slot] : slots) rows += std::size_t(slot.builder.dim());
      std::cerr << "pop=" << table.rounds << " queued=" << worklist.size()
                << " rows=" << rows << " elim_terms=" << ops.eliminate_terms
                << " tail_touches=" << ops.tail_touches
                << " big_ops=" << rational_big_ops() << "\n";
    }
    const WorkItem item = worklist.top();
    worklist.pop();
    const int k = item.k;
    const int l = item.l;
    const int idx = item.idx;
    GradeSlot<V>& self = slots.at({k, l});
    const GradeSpace space = self.space;
    // Copy: inserts below may back-substitute into the builder's rows or
    // grow the raw list past its capacity.
    const SparseRow<V> row = self.margin
                                 ? self.raw[static_cast<std::size_t>(idx)]
                                 : fetch_stored(self.builder, idx, tag);

    insert(l, k, internal::row_star(space, row, [](const V& v) {
             return conj_value(v);
           }));
    for (int p = 0; p < k; ++p) {
      for (int q = 0; q < l; ++q) {
        insert(k - 1, l - 1, internal::row_contract(space, row, p, q));
      }
    }
    for (auto& [key, other] : slots) {
      const int nk = k + key.first;
      const int nl = l + key.second;
      if (!in_window(nk, nl)) continue;
      // Pairs added later are handled at their own pop.
      const int count = other.margin ? static_cast<int>(other.raw.size())
                                     : other.builder.dim();
      for (int j = 0; j < count; ++j) {
        const SparseRow<V> rj = other.margin
                                    ? other.raw[static_cast<std::size_t>(j)]
                                    : fetch_stored(other.builder, j, tag);
        insert(nk, nl, internal::row_product(space, other.space, row, rj));
        insert(nk, nl, internal::row_product(other.space, space, rj, row));
      }
    }
  }

  if (std::getenv("MTA_CLOSURE_STATS")) {
    const SpanOpCounters& ops = span_op_counters();
    std::cerr << "reduce_calls=" << ops.reduce_calls
              << " candidate_terms=" << ops.candidate_terms
              << " pivot_hits=" << ops.pivot_hits
              << " tail_touches=" << ops.tail_touches
              << " eliminate_updates=" << ops.eliminate_updates
              << " eliminate_terms=" << ops.eliminate_terms << "\n";
    for (auto& [key, slot] : slots) {
      std::size_t total = 0, longest = 0;
      const int cnt = slot.builder.dim();
      for (int i = 0; i < cnt; ++i) {
        const SparseRow<V> r = fetch_stored(slot.builder, i, tag);
        total += r.size();
        longest = std::max(longest, r.size());
      }
      std::cerr << "slot (" << key.first << "," << key.second << ") rows="
                << cnt << " avg_len="
                << (cnt == 0 ? 0.0 : double(total) / double(cnt))
                << " max_len=" << longest << "\n";
    }
  }
  for (auto& [key, slot] : slots) {
    table.grades.emplace(key, slot.builder.finalize());
  }

  // Joint column space of the grade-(1, 1) component, read off the finalized
  // basis rows viewed as n x n matrices.
  if (auto it = table.grades.find({1, 1}); it != table.grades.end()) {
    SpanBuilder columns(n, 1, 0, mode, options.tol);
    const SubspaceBasis& basis = it->second;
    if (mode == ScalarMode::kExact) {
      for (const ExactRow& r : basis.exact_rows) {
        for (int c = 0; c < n; ++c) {
          ExactRow column;
          for (const auto& [coord, v] : r) {
            if (static_cast<int>(coord % n) == c) {
              column.push_back({coord / static_cast<std::uint32_t>(n), v});
            }
          }
          if (!column.empty()) columns.add_exact_row(std::move(column));
        }
      }
    } else {
      for (const FloatRow& r : basis.float_rows) {
        for (int c = 0; c < n; ++c) {
          FloatRow column(n);
          for (int i = 0; i < n; ++i) column[i] = r[i * n + c];
          columns.add_float_row(std::move(column));
        }
      }
    }
    table.identity_component_column_dim = columns.dim();
  }
  return table;
}

}  // namespace

GradedBasisTable closure(const std::vector<MixedTensor>& seeds,
                         const ClosureOptions& options) {
  if (options.mode == ScalarMode::kExact) {
    return run_closure<GaussianRational>(seeds, options);
  }
  return run_closure<std::complex<double>>(seeds, options);
}

bool tables_agree_on_reported(const GradedBasisTable& a, const GradedBasisTable& b) {
  for (const auto& [k, l] : a.reported_grades()) {
    auto it = b.grades.find({k, l});
    if (it == b.grades.end()) return false;
    if (!equal_spaces(a.at(k, l), it->second)) return false;
  }
  return true;
}

bool headroom_stable(const std::vector<MixedTensor>& seeds,
                     const ClosureOptions& options) {
  ClosureOptions wider = options;
  wider.headroom = options.headroom + 1;
  GradedBasisTable base = closure(seeds, options);
  GradedBasisTable extended = closure(seeds, wider);
  return base.converged && extended.converged &&
         tables_agree_on_reported(base, extended);
}

std::string closure_table_to_json(const GradedBasisTable& table) {
  nlohmann::ordered_json j;
  j["n"] = table.n;
  j["cap_k"] = table.cap_k;
  j["cap_l"] = table.cap_l;
  j["headroom"] = table.headroom;
  j["degree_cap"] = table.degree_cap;
  j["mode"] = to_string(table.mode);
  j["converged"] = table.converged;
  j["rounds"] = table.rounds;
  j["identity_component_column_dim"] = table.identity_component_column_dim;
  j["notes"] = table.notes;
  j["grades"] = nlohmann::ordered_json::array();
  for (const auto& [k, l] : table.reported_grades()) {
    nlohmann::ordered_json entry;
    entry["k"] = k;
    entry["l"] = l;
    entry["basis"] = nlohmann::ordered_json::parse(subspace_to_json(table.at(k, l)));
    j["grades"].push_back(std::move(entry));
  }
  return j.dump(2);
}

}  // namespace mta
