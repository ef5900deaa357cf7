#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mta/subspace.hpp"
#include "mta/tensor.hpp"

namespace mta {

struct ClosureOptions {
  int cap_k = 2;
  int cap_l = 2;
  // The engine works on grades extended by this much per side; agreement of
  // the reported grades across headroom values is the convergence evidence.
  int headroom = 2;
  // Optional extra bound on k+l of reported grades; -1 leaves only the
  // rectangle bound (equivalent to cap_k + cap_l).
  int degree_cap = -1;
  ScalarMode mode = ScalarMode::kExact;
  double tol = kDefaultRankTol;
  // Safety valve; exceeding it aborts with converged = false.
  std::uint64_t max_rounds = 50'000'000;

  int effective_degree_cap() const {
    return degree_cap < 0 ? cap_k + cap_l : degree_cap;
  }
};

// Graded family of subspaces obtained by saturating seed tensors (plus the
// identity element at grade (1, 1)) under tensor products, all single
// contractions, and star, within a working window that exceeds the reported
// grades by `headroom` on every side.
struct GradedBasisTable {
  int n = 1;
  int cap_k = 0;
  int cap_l = 0;
  int headroom = 0;
  int degree_cap = -1;
  ScalarMode mode = ScalarMode::kExact;
  bool converged = true;
  std::uint64_t rounds = 0;  // worklist rows processed
  // Rank of the joint column space of the grade-(1, 1) component viewed as
  // matrices; value n means that component is nondegenerate.
  int identity_component_column_dim = 0;
  std::vector<std::string> notes;
  std::map<std::pair<int, int>, SubspaceBasis> grades;  // whole working window

  int effective_degree_cap() const {
    return degree_cap < 0 ? cap_k + cap_l : degree_cap;
  }
  bool is_reported(int k, int l) const;
  std::vector<std::pair<int, int>> reported_grades() const;
  const SubspaceBasis& at(int k, int l) const;
};

GradedBasisTable closure(const std::vector<MixedTensor>& seeds,
                         const ClosureOptions& options);

// True when every grade reported by `a` carries the same subspace in `b`.
bool tables_agree_on_reported(const GradedBasisTable& a, const GradedBasisTable& b);

// Runs the closure at options.headroom and options.headroom + 1 and compares
// the reported grades.
bool headroom_stable(const std::vector<MixedTensor>& seeds,
                     const ClosureOptions& options);

// Serializes caps, flags, notes, and the reported grades' bases.
std::string closure_table_to_json(const GradedBasisTable& table);

}  // namespace mta
