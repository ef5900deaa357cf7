#pragma once

#include <map>
#include <string>
#include <vector>

#include "mta/matrix.hpp"
#include "mta/multi_index.hpp"
#include "mta/scalar.hpp"

namespace mta {

// Sparse element of V^(tensor k) (x) V*^(tensor l) over V = C^n.
// Entries map multi-indexes to nonzero scalars; all entries share `mode`.
// Stored entries are never exact zeros, and float entries below
// kFloatDropEps are pruned by the mutating helpers.
struct MixedTensor {
  int n = 1;
  int k = 0;
  int l = 0;
  ScalarMode mode = ScalarMode::kExact;
  std::map<MultiIndex, Scalar> entries;

  bool is_zero() const { return entries.empty(); }
  Scalar coefficient(const MultiIndex& mi) const;
  // Adds c at mi, pruning the slot if the sum becomes negligible.
  void accumulate(const MultiIndex& mi, const Scalar& c);

  friend bool operator==(const MixedTensor&, const MixedTensor&) = default;
};

MixedTensor make_zero_tensor(int n, int k, int l, ScalarMode mode);
// Grade-(0,0) tensor holding one scalar.
MixedTensor make_scalar_tensor(int n, const Scalar& value);
// Single unit entry at (up, down); indices are 1-based values in 1..n.
MixedTensor make_basis_tensor(int n, std::vector<int> up, std::vector<int> down,
                              ScalarMode mode = ScalarMode::kExact);

// Entrywise combination sum_i coeff_i * tensor_i. All terms must share
// n, grade, and mode; the list must be nonempty.
MixedTensor linear_combine(const std::vector<std::pair<Scalar, MixedTensor>>& terms);
MixedTensor scale(const Scalar& c, const MixedTensor& x);
MixedTensor add(const MixedTensor& x, const MixedTensor& y);
MixedTensor subtract(const MixedTensor& x, const MixedTensor& y);

// Grade (k_x+k_y, l_x+l_y); contravariant factors of x precede those of y,
// likewise covariant.
MixedTensor tensor_product(const MixedTensor& x, const MixedTensor& y);

// Conjugate-linear involution: grade (l,k); factor order reversed on both
// sides, e_i <-> e_i*, scalars conjugated.
MixedTensor star(const MixedTensor& x);

// Pairs contravariant slot p against covariant slot q (both 1-based),
// summing entries whose indices there agree and deleting both slots.
MixedTensor contract(const MixedTensor& x, int p, int q);

// Permutes slots: the factor at contravariant slot i moves to slot
// sigma[i-1], covariant slot j to tau[j-1] (1-based images). Entry values
// are unchanged.
MixedTensor mutate(const MixedTensor& x, const std::vector<int>& sigma,
                   const std::vector<int>& tau);

// Converts the listed contravariant slots to covariant and vice versa
// (1-based, e_i <-> e_i* keeping index values). Resulting layout: surviving
// contravariant factors first in original order, then raised factors in
// original order; covariant side likewise (surviving first, then lowered).
MixedTensor flip(const MixedTensor& x, const std::vector<int>& lower,
                 const std::vector<int>& raise);

// u on every contravariant slot, inverse-transpose of u on every covariant
// slot.
MixedTensor apply_group_element(const MixedTensor& x, const GroupElement& g);

// Matrix product under V (x) V* ~ End(V); both arguments grade (1,1).
MixedTensor mat_mul(const MixedTensor& y, const MixedTensor& z);

// Hermitian inner product in the standard basis, conjugate-linear in the
// first argument; zero across distinct grades.
Scalar inner_product(const MixedTensor& x, const MixedTensor& y);

MixedTensor to_float(const MixedTensor& x);
double frobenius_norm(const MixedTensor& x);
// Max entrywise deviation between the float views of x and y (same grade).
double max_entry_distance(const MixedTensor& x, const MixedTensor& y);
bool approx_equal(const MixedTensor& x, const MixedTensor& y, double tol);

std::string tensor_to_string(const MixedTensor& x);

// Identity permutation image vector [1..m].
std::vector<int> identity_permutation(int m);
int permutation_sign(const std::vector<int>& image);

}  // namespace mta
