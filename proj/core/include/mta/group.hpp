#pragma once

#include <string>
#include <vector>

namespace mta {

// Catalogue of matrix groups with known invariant-tensor spanning sets.
enum class GroupTag {
  kGL,           // all invertible matrices
  kU,            // unitary matrices
  kSL,           // determinant 1
  kSLk,          // determinant a k-th root of unity
  kMonomial,     // one nonzero entry per row and column
  kO,            // U U^T = I
  kSO,           // orthogonal with determinant 1
  kSymmetric,    // permutation matrices
  kSigned,       // permutation pattern with entries +-1
  kAlternating,  // even permutation matrices
  kSignedAlternating,  // signed permutation matrices with determinant 1
  kSp,           // U S U^T = S for the standard skew form S
};

struct GroupSpec {
  GroupTag tag = GroupTag::kGL;
  int n = 1;
  int k_param = 1;  // only meaningful for kSLk

  // Canonical CLI name: gl, u, sl, slk:<k>, monomial, o, so, sn, sn_pm,
  // an, an_pm, sp.
  std::string name() const;
  // Validates parameters (sp needs even n; all need n >= 1).
  void validate() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

GroupSpec parse_group_name(const std::string& text, int n);

// Groups whose elements are all monomial matrices over {0, +-1}; their
// invariant spaces are computed exactly.
bool is_permutation_family(GroupTag tag);
// Groups verified through float-mode oracles by default.
bool is_lie_family(GroupTag tag);

std::vector<GroupTag> all_group_tags();
std::string group_tag_name(GroupTag tag);

}  // namespace mta
