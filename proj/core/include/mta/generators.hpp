#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mta/group.hpp"
#include "mta/subspace.hpp"
#include "mta/tensor.hpp"

namespace mta {

// Named tensor constructors. All of these have integer entries, so the
// default mode is exact; pass kFloat for float copies.

// I = sum_i e_i (x) e_i*, grade (1,1).
MixedTensor identity_tensor(int n, ScalarMode mode = ScalarMode::kExact);
// det = sum_pi sgn(pi) e*_pi(1) (x) ... (x) e*_pi(n), grade (0,n).
MixedTensor det_tensor(int n, ScalarMode mode = ScalarMode::kExact);
// j_k = sum_i (e_i (x) e_i*)^(x k), grade (k,k), canonical layout.
MixedTensor j_tensor(int n, int k, ScalarMode mode = ScalarMode::kExact);
// f = sum_i e_i (x) e_i, grade (2,0).
MixedTensor f_tensor(int n, ScalarMode mode = ScalarMode::kExact);
// h_k = sum_i e_i^(x k), grade (k,0).
MixedTensor h_tensor(int n, int k, ScalarMode mode = ScalarMode::kExact);
// g_k = sum over distinct i_1..i_k of e_{i_1} (x) ... (x) e_{i_k};
// zero when k > n, the empty product (scalar 1) when k = 0.
MixedTensor g_tensor(int n, int k, ScalarMode mode = ScalarMode::kExact);
// s = sum_{i<=m} (e_i (x) e_{m+i} - e_{m+i} (x) e_i), m = n/2; even n only.
MixedTensor s_tensor(int n, ScalarMode mode = ScalarMode::kExact);
// sum_pi sgn(pi) e_pi(1)^(x k_1) (x) ... (x) e_pi(n)^(x k_n); ks has
// exactly n nonnegative entries.
MixedTensor alt_tensor(int n, const std::vector<int>& ks,
                       ScalarMode mode = ScalarMode::kExact);
// sum over distinct i_1..i_k of e_{i_1}^(x 2) (x) ... (x) e_{i_k}^(x 2).
MixedTensor squared_distinct_tensor(int n, int k, ScalarMode mode = ScalarMode::kExact);

enum class GeneratorTag {
  kIdentity,
  kDet,
  kDetStar,
  kJ,
  kF,
  kFStar,
  kH,
  kG,
  kS,
  kSStar,
  kAlt,
  kPairedSquares,  // squared_distinct_tensor(n, param)
  kDetPower,       // det^(x param)
  kDetStarPower,
};

struct GeneratorId {
  GeneratorTag tag = GeneratorTag::kIdentity;
  int param = 0;           // k for kJ/kH/kG/kPairedSquares/kDetPower
  std::vector<int> tuple;  // exponents for kAlt

  std::string name() const;
  // Grade of the built tensor over dimension n.
  std::pair<int, int> grade(int n) const;
  int degree(int n) const;
  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
};

// Accepted names: identity, det, j:k, f, h:k, g:k, s, alt:k1,..,kn.
GeneratorId parse_generator_name(const std::string& text);
MixedTensor generator_tensor(const GeneratorId& id, int n,
                             ScalarMode mode = ScalarMode::kExact);

// One spanning-set recipe: which generators may be multiplied, and whether
// per-factor flips and whole-product mutations are part of the span.
struct FftCatalogEntry {
  GroupTag group = GroupTag::kGL;
  std::vector<GeneratorId> generators;
  bool flips_allowed = false;
  bool mutations_allowed = true;
};

// Spanning-set recipe for the group, with degree-indexed generator
// families (h, j, alt, ...) expanded up to total degree max_total_degree.
FftCatalogEntry fft_catalog_entry(const GroupSpec& g, int max_total_degree);
// Known equivalent recipe, where one exists: the symmetric group via
// distinct-index sums g_1..g_n, the signed symmetric group via paired
// squares.
std::optional<FftCatalogEntry> fft_catalog_variant(const GroupSpec& g,
                                                   int max_total_degree);

struct FftCaps {
  // Upper bound on factors per product; the grade equation already bounds
  // every positive-degree generator, this guards degree-zero ones.
  int max_factors = 64;
};

// Literal enumeration of the recipe at grade (k,l): every multiset of
// generators with matching total degree, every admissible per-factor flip
// assignment, every mutation of each resulting product. May contain
// duplicates; unreachable grades yield an empty list.
std::vector<MixedTensor> fft_spanning_set(const FftCatalogEntry& entry, int n, int k,
                                          int l, const FftCaps& caps = {},
                                          ScalarMode mode = ScalarMode::kExact);

enum class MutationPolicy { kCatalog, kForceOn, kForceOff };

// Span of the recipe at grade (k,l), computed without materializing the
// mutation orbit: products and flips are enumerated, then the span is
// closed under adjacent slot transpositions (which generate all mutations).
SubspaceBasis fft_span(const GroupSpec& g, int n, int k, int l, ScalarMode mode,
                       double tol = kDefaultRankTol,
                       MutationPolicy policy = MutationPolicy::kCatalog,
                       bool use_variant = false);

}  // namespace mta
