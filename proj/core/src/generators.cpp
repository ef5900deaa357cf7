#include "mta/generators.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mta {

MixedTensor identity_tensor(int n, ScalarMode mode) {
  MixedTensor t = make_zero_tensor(n, 1, 1, mode);
  for (int i = 1; i <= n; ++i) t.accumulate({{i}, {i}}, Scalar::one(mode));
  return t;
}

MixedTensor det_tensor(int n, ScalarMode mode) {
  MixedTensor t = make_zero_tensor(n, 0, n, mode);
  std::vector<int> perm = identity_permutation(n);
  Scalar one = Scalar::one(mode);
  do {
    Scalar coeff = permutation_sign(perm) > 0 ? one : -one;
    t.accumulate({{}, perm}, coeff);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return t;
}

MixedTensor j_tensor(int n, int k, ScalarMode mode) {
  if (k < 1) throw std::invalid_argument("j_tensor needs k >= 1");
  MixedTensor t = make_zero_tensor(n, k, k, mode);
  for (int i = 1; i <= n; ++i) {
    MultiIndex mi;
    mi.up.assign(k, i);
    mi.down.assign(k, i);
    t.accumulate(mi, Scalar::one(mode));
  }
  return t;
}

MixedTensor f_tensor(int n, ScalarMode mode) {
  MixedTensor t = make_zero_tensor(n, 2, 0, mode);
  for (int i = 1; i <= n; ++i) t.accumulate({{i, i}, {}}, Scalar::one(mode));
  return t;
}

MixedTensor h_tensor(int n, int k, ScalarMode mode) {
  if (k < 1) throw std::invalid_argument("h_tensor needs k >= 1");
  MixedTensor t = make_zero_tensor(n, k, 0, mode);
  for (int i = 1; i <= n; ++i) {
    MultiIndex mi;
    mi.up.assign(k, i);
    t.accumulate(mi, Scalar::one(mode));
  }
  return t;
}

MixedTensor g_tensor(int n, int k, ScalarMode mode) {
  if (k < 0) throw std::invalid_argument("g_tensor needs k >= 0");
  if (k == 0) return make_scalar_tensor(n, Scalar::one(mode));
  MixedTensor t = make_zero_tensor(n, k, 0, mode);
  if (k > n) return t;
  std::vector<int> tuple;
  std::vector<char> used(n + 1, 0);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(tuple.size()) == k) {
      t.accumulate({tuple, {}}, Scalar::one(mode));
      return;
    }
    for (int i = 1; i <= n; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      tuple.push_back(i);
      self(self);
      tuple.pop_back();
      used[i] = 0;
    }
  };
  rec(rec);
  return t;
}

MixedTensor s_tensor(int n, ScalarMode mode) {
  if (n % 2 != 0) throw std::invalid_argument("s_tensor needs even n");
  int m = n / 2;
  MixedTensor t = make_zero_tensor(n, 2, 0, mode);
  for (int i = 1; i <= m; ++i) {
    t.accumulate({{i, m + i}, {}}, Scalar::one(mode));
    t.accumulate({{m + i, i}, {}}, -Scalar::one(mode));
  }
  return t;
}

MixedTensor alt_tensor(int n, const std::vector<int>& ks, ScalarMode mode) {
  if (static_cast<int>(ks.size()) != n) {
    throw std::invalid_argument("alt_tensor needs exactly n exponents");
  }
  int total = 0;
  for (int k : ks) {
    if (k < 0) throw std::invalid_argument("alt_tensor exponents must be >= 0");
    total += k;
  }
  MixedTensor t = make_zero_tensor(n, total, 0, mode);
  std::vector<int> perm = identity_permutation(n);
  Scalar one = Scalar::one(mode);
  do {
    MultiIndex mi;
    mi.up.reserve(total);
    for (int b = 0; b < n; ++b) mi.up.insert(mi.up.end(), ks[b], perm[b]);
    t.accumulate(mi, permutation_sign(perm) > 0 ? one : -one);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return t;
}

MixedTensor squared_distinct_tensor(int n, int k, ScalarMode mode) {
  if (k < 1) throw std::invalid_argument("squared_distinct_tensor needs k >= 1");
  MixedTensor t = make_zero_tensor(n, 2 * k, 0, mode);
  if (k > n) return t;
  std::vector<int> tuple;
  std::vector<char> used(n + 1, 0);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(tuple.size()) == k) {
      MultiIndex mi;
      mi.up.reserve(2 * k);
      for (int v : tuple) {
        mi.up.push_back(v);
        mi.up.push_back(v);
      }
      t.accumulate(mi, Scalar::one(mode));
      return;
    }
    for (int i = 1; i <= n; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      tuple.push_back(i);
      self(self);
      tuple.pop_back();
      used[i] = 0;
    }
  };
  rec(rec);
  return t;
}

std::string GeneratorId::name() const {
  std::ostringstream os;
  switch (tag) {
    case GeneratorTag::kIdentity: return "identity";
    case GeneratorTag::kDet: return "det";
    case GeneratorTag::kDetStar: return "det*";
    case GeneratorTag::kF: return "f";
    case GeneratorTag::kFStar: return "f*";
    case GeneratorTag::kS: return "s";
    case GeneratorTag::kSStar: return "s*";
    case GeneratorTag::kJ: os << "j:" << param; return os.str();
    case GeneratorTag::kH: os << "h:" << param; return os.str();
    case GeneratorTag::kG: os << "g:" << param; return os.str();
    case GeneratorTag::kPairedSquares: os << "sq:" << param; return os.str();
    case GeneratorTag::kDetPower: os << "det^" << param; return os.str();
    case GeneratorTag::kDetStarPower: os << "det*^" << param; return os.str();
    case GeneratorTag::kAlt:
      os << "alt:";
      for (size_t i = 0; i < tuple.size(); ++i) os << (i ? "," : "") << tuple[i];
      return os.str();
  }
  throw std::logic_error("unhandled generator tag");
}

std::pair<int, int> GeneratorId::grade(int n) const {
  switch (tag) {
    case GeneratorTag::kIdentity: return {1, 1};
    case GeneratorTag::kDet: return {0, n};
    case GeneratorTag::kDetStar: return {n, 0};
    case GeneratorTag::kJ: return {param, param};
    case GeneratorTag::kF: return {2, 0};
    case GeneratorTag::kFStar: return {0, 2};
    case GeneratorTag::kH: return {param, 0};
    case GeneratorTag::kG: return {param, 0};
    case GeneratorTag::kS: return {2, 0};
    case GeneratorTag::kSStar: return {0, 2};
    case GeneratorTag::kPairedSquares: return {2 * param, 0};
    case GeneratorTag::kDetPower: return {0, n * param};
    case GeneratorTag::kDetStarPower: return {n * param, 0};
    case GeneratorTag::kAlt: {
      int total = 0;
      for (int k : tuple) total += k;
      return {total, 0};
    }
  }
  throw std::logic_error("unhandled generator tag");
}

int GeneratorId::degree(int n) const {
  auto [k, l] = grade(n);
  return k + l;
}

GeneratorId parse_generator_name(const std::string& text) {
  GeneratorId id;
  std::string base = text;
  std::string arg;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    base = text.substr(0, colon);
    arg = text.substr(colon + 1);
  }
  if (base == "identity") {
    id.tag = GeneratorTag::kIdentity;
  } else if (base == "det") {
    id.tag = GeneratorTag::kDet;
  } else if (base == "f") {
    id.tag = GeneratorTag::kF;
  } else if (base == "s") {
    id.tag = GeneratorTag::kS;
  } else if (base == "j" || base == "h" || base == "g") {
    id.tag = base == "j" ? GeneratorTag::kJ
                         : (base == "h" ? GeneratorTag::kH : GeneratorTag::kG);
    if (arg.empty()) throw std::invalid_argument(base + " needs a parameter, e.g. " + base + ":2");
    id.param = std::stoi(arg);
  } else if (base == "alt") {
    id.tag = GeneratorTag::kAlt;
    if (arg.empty()) throw std::invalid_argument("alt needs exponents, e.g. alt:1,1");
    std::istringstream is(arg);
    std::string piece;
    while (std::getline(is, piece, ',')) id.tuple.push_back(std::stoi(piece));
  } else {
    throw std::invalid_argument("unknown generator name: " + text);
  }
  return id;
}

MixedTensor generator_tensor(const GeneratorId& id, int n, ScalarMode mode) {
  switch (id.tag) {
    case GeneratorTag::kIdentity: return identity_tensor(n, mode);
    case GeneratorTag::kDet: return det_tensor(n, mode);
    case GeneratorTag::kDetStar: return star(det_tensor(n, mode));
    case GeneratorTag::kJ: return j_tensor(n, id.param, mode);
    case GeneratorTag::kF: return f_tensor(n, mode);
    case GeneratorTag::kFStar: return star(f_tensor(n, mode));
    case GeneratorTag::kH: return h_tensor(n, id.param, mode);
    case GeneratorTag::kG: return g_tensor(n, id.param, mode);
    case GeneratorTag::kS: return s_tensor(n, mode);
    case GeneratorTag::kSStar: return star(s_tensor(n, mode));
    case GeneratorTag::kAlt: return alt_tensor(n, id.tuple, mode);
    case GeneratorTag::kPairedSquares: return squared_distinct_tensor(n, id.param, mode);
    case GeneratorTag::kDetPower:
    case GeneratorTag::kDetStarPower: {
      if (id.param < 1) throw std::invalid_argument("det power needs param >= 1");
      MixedTensor d = det_tensor(n, mode);
      MixedTensor acc = d;
      for (int i = 1; i < id.param; ++i) acc = tensor_product(acc, d);
      return id.tag == GeneratorTag::kDetPower ? acc : star(acc);
    }
  }
  throw std::logic_error("unhandled generator tag");
}

namespace {

// Non-increasing exponent tuples of length n with 1 <= sum <= max_total;
// when odd_only, every entry must be odd (>= 1).
std::vector<std::vector<int>> alt_exponent_tuples(int n, int max_total, bool odd_only) {
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(n, 0);
  auto rec = [&](auto&& self, int pos, int prev_max, int remaining) -> void {
    if (pos == n) {
      int total = 0;
      for (int v : tuple) total += v;
      if (total >= 1) out.push_back(tuple);
      return;
    }
    int lo = odd_only ? 1 : 0;
    for (int v = lo; v <= std::min(prev_max, remaining); v += odd_only ? 2 : 1) {
      tuple[pos] = v;
      self(self, pos + 1, v, remaining - v);
    }
  };
  rec(rec, 0, max_total, max_total);
  return out;
}

}  // namespace

FftCatalogEntry fft_catalog_entry(const GroupSpec& g, int max_total_degree) {
  g.validate();
  FftCatalogEntry entry;
  entry.group = g.tag;
  int d = std::max(max_total_degree, 0);
  auto add = [&](GeneratorTag tag, int param = 0, std::vector<int> tuple = {}) {
    entry.generators.push_back({tag, param, std::move(tuple)});
  };
  switch (g.tag) {
    case GroupTag::kGL:
    case GroupTag::kU:
      add(GeneratorTag::kIdentity);
      entry.flips_allowed = false;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kSL:
      add(GeneratorTag::kDet);
      add(GeneratorTag::kDetStar);
      add(GeneratorTag::kIdentity);
      entry.flips_allowed = false;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kSLk:
      add(GeneratorTag::kDetPower, g.k_param);
      add(GeneratorTag::kDetStarPower, g.k_param);
      add(GeneratorTag::kIdentity);
      entry.flips_allowed = false;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kMonomial:
      for (int m = 1; 2 * m <= d; ++m) add(GeneratorTag::kJ, m);
      if (entry.generators.empty()) add(GeneratorTag::kJ, 1);
      entry.flips_allowed = false;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kO:
      add(GeneratorTag::kIdentity);
      entry.flips_allowed = true;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kSO:
      add(GeneratorTag::kDet);
      add(GeneratorTag::kIdentity);
      entry.flips_allowed = true;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kSymmetric:
      for (int m = 1; m <= d; ++m) add(GeneratorTag::kH, m);
      entry.flips_allowed = true;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kSigned:
      for (int m = 2; m <= d; m += 2) add(GeneratorTag::kH, m);
      entry.flips_allowed = true;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kAlternating:
      for (int m = 1; m <= d; ++m) add(GeneratorTag::kH, m);
      for (auto& tuple : alt_exponent_tuples(g.n, d, false)) {
        add(GeneratorTag::kAlt, 0, std::move(tuple));
      }
      entry.flips_allowed = true;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kSignedAlternating:
      for (int m = 2; m <= d; m += 2) add(GeneratorTag::kH, m);
      for (auto& tuple : alt_exponent_tuples(g.n, d, true)) {
        add(GeneratorTag::kAlt, 0, std::move(tuple));
      }
      entry.flips_allowed = true;
      entry.mutations_allowed = true;
      break;
    case GroupTag::kSp:
      add(GeneratorTag::kS);
      add(GeneratorTag::kSStar);
      add(GeneratorTag::kIdentity);
      entry.flips_allowed = false;
      entry.mutations_allowed = false;
      break;
  }
  return entry;
}

std::optional<FftCatalogEntry> fft_catalog_variant(const GroupSpec& g,
                                                   int max_total_degree) {
  FftCatalogEntry entry;
  entry.group = g.tag;
  entry.flips_allowed = true;
  entry.mutations_allowed = true;
  if (g.tag == GroupTag::kSymmetric) {
    for (int m = 1; m <= std::min(g.n, max_total_degree); ++m) {
      entry.generators.push_back({GeneratorTag::kG, m, {}});
    }
    return entry;
  }
  if (g.tag == GroupTag::kSigned) {
    for (int m = 1; 2 * m <= max_total_degree && m <= g.n; ++m) {
      entry.generators.push_back({GeneratorTag::kPairedSquares, m, {}});
    }
    return entry;
  }
  return std::nullopt;
}

namespace {

// All distinct flips of a tensor, with the identity flip first.
std::vector<MixedTensor> enumerate_flips(const MixedTensor& t) {
  std::vector<MixedTensor> out;
  for (unsigned lmask = 0; lmask < (1u << t.k); ++lmask) {
    for (unsigned rmask = 0; rmask < (1u << t.l); ++rmask) {
      std::vector<int> lower, raise;
      for (int i = 0; i < t.k; ++i) {
        if (lmask & (1u << i)) lower.push_back(i + 1);
      }
      for (int j = 0; j < t.l; ++j) {
        if (rmask & (1u << j)) raise.push_back(j + 1);
      }
      MixedTensor f = flip(t, lower, raise);
      bool seen = false;
      for (const auto& prev : out) {
        if (prev == f) {
          seen = true;
          break;
        }
      }
      if (!seen) out.push_back(std::move(f));
    }
  }
  return out;
}

struct ProductEnumerator {
  int n, k, l;
  ScalarMode mode;
  int max_factors;
  bool flips;
  bool ordered_words;  // enumerate sequences instead of multisets
  std::vector<std::vector<MixedTensor>> factor_choices;  // flips per generator
  std::vector<int> factor_degrees;
  std::function<void(const MixedTensor&)> emit;

  void run() {
    MixedTensor unit = make_scalar_tensor(n, Scalar::one(mode));
    descend(unit, 0, k + l, 0);
  }

  void descend(const MixedTensor& partial, int first_gen, int remaining, int used) {
    if (remaining == 0) {
      if (partial.k == k && partial.l == l && !partial.is_zero()) emit(partial);
      return;
    }
    if (used >= max_factors) return;
    for (size_t gi = ordered_words ? 0 : first_gen; gi < factor_choices.size(); ++gi) {
      if (factor_degrees[gi] > remaining || factor_degrees[gi] <= 0) continue;
      for (const auto& choice : factor_choices[gi]) {
        if (partial.k + choice.k > k || partial.l + choice.l > l) continue;
        if (choice.is_zero()) continue;
        descend(tensor_product(partial, choice), static_cast<int>(gi),
                remaining - factor_degrees[gi], used + 1);
      }
    }
  }
};

ProductEnumerator make_enumerator(const FftCatalogEntry& entry, int n, int k, int l,
                                  const FftCaps& caps, ScalarMode mode,
                                  bool ordered_words) {
  ProductEnumerator e;
  e.n = n;
  e.k = k;
  e.l = l;
  e.mode = mode;
  e.max_factors = caps.max_factors;
  e.flips = entry.flips_allowed;
  e.ordered_words = ordered_words;
  for (const auto& id : entry.generators) {
    MixedTensor t = generator_tensor(id, n, mode);
    e.factor_degrees.push_back(id.degree(n));
    if (entry.flips_allowed) {
      e.factor_choices.push_back(enumerate_flips(t));
    } else {
      e.factor_choices.push_back({std::move(t)});
    }
  }
  return e;
}

std::vector<std::vector<int>> all_permutations(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> image = identity_permutation(m);
  do {
    out.push_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

}  // namespace

std::vector<MixedTensor> fft_spanning_set(const FftCatalogEntry& entry, int n, int k,
                                          int l, const FftCaps& caps, ScalarMode mode) {
  std::vector<MixedTensor> products;
  ProductEnumerator e =
      make_enumerator(entry, n, k, l, caps, mode, !entry.mutations_allowed);
  e.emit = [&](const MixedTensor& t) { products.push_back(t); };
  e.run();
  if (!entry.mutations_allowed) return products;
  std::vector<MixedTensor> out;
  auto sigmas = all_permutations(k);
  auto taus = all_permutations(l);
  for (const auto& p : products) {
    for (const auto& sigma : sigmas) {
      for (const auto& tau : taus) out.push_back(mutate(p, sigma, tau));
    }
  }
  return out;
}

SubspaceBasis fft_span(const GroupSpec& g, int n, int k, int l, ScalarMode mode,
                       double tol, MutationPolicy policy, bool use_variant) {
  FftCatalogEntry entry;
  if (use_variant) {
    auto variant = fft_catalog_variant(g, k + l);
    if (!variant) throw std::invalid_argument("no variant spanning set for " + g.name());
    entry = *variant;
  } else {
    entry = fft_catalog_entry(g, k + l);
  }
  bool mutations = entry.mutations_allowed;
  if (policy == MutationPolicy::kForceOn) mutations = true;
  if (policy == MutationPolicy::kForceOff) mutations = false;

  SpanBuilder builder(n, k, l, mode, tol);
  std::deque<MixedTensor> queue;
  ProductEnumerator e = make_enumerator(entry, n, k, l, FftCaps{}, mode, !mutations);
  e.emit = [&](const MixedTensor& t) {
    if (builder.add(t)) queue.push_back(t);
  };
  e.run();

  // Adjacent slot transpositions generate every mutation; close the span
  // under them instead of materializing whole mutation orbits.
  if (mutations) {
    while (!queue.empty()) {
      MixedTensor t = std::move(queue.front());
      queue.pop_front();
      for (int i = 1; i < k; ++i) {
        std::vector<int> sigma = identity_permutation(k);
        std::swap(sigma[i - 1], sigma[i]);
        MixedTensor image = mutate(t, sigma, identity_permutation(l));
        if (builder.add(image)) queue.push_back(std::move(image));
      }
      for (int j = 1; j < l; ++j) {
        std::vector<int> tau = identity_permutation(l);
        std::swap(tau[j - 1], tau[j]);
        MixedTensor image = mutate(t, identity_permutation(k), tau);
        if (builder.add(image)) queue.push_back(std::move(image));
      }
    }
  }
  return builder.finalize();
}

}  // namespace mta
