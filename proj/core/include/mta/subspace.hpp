#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mta/scalar.hpp"
#include "mta/tensor.hpp"

namespace mta {

// Exact rows carry Gaussian-rational coefficients; arbitrary-precision
// rationals keep long elimination chains from ever overflowing.
using ExactRow = std::vector<std::pair<std::uint32_t, GaussianRational>>;  // sorted by coord
using FloatRow = std::vector<std::complex<double>>;  // dense, length dim

// Tallies of the exact-reduction hot paths, for performance analysis only.
struct SpanOpCounters {
  std::uint64_t reduce_calls = 0;
  std::uint64_t candidate_terms = 0;   // entries scattered from candidates
  std::uint64_t pivot_hits = 0;        // eliminations performed
  std::uint64_t tail_touches = 0;      // scatter work from pivot tails
  std::uint64_t eliminate_updates = 0; // stored-row rewrites on acceptance
  std::uint64_t eliminate_terms = 0;   // entries rebuilt by those rewrites
};
SpanOpCounters& span_op_counters();

// Immutable basis of a subspace of the n^(k+l)-dimensional coordinate
// space of grade (k,l). Exact rows are in reduced row echelon form with
// strictly increasing pivots; float rows are orthonormal. Coordinates
// flatten row-major with contravariant slots varying slowest.
struct SubspaceBasis {
  int n = 1, k = 0, l = 0;
  ScalarMode mode = ScalarMode::kExact;
  double tol = kDefaultRankTol;
  std::vector<ExactRow> exact_rows;
  std::vector<FloatRow> float_rows;

  int dim() const {
    return static_cast<int>(mode == ScalarMode::kExact ? exact_rows.size()
                                                       : float_rows.size());
  }
  std::uint64_t ambient_dim() const;
  MixedTensor row_tensor(int i) const;
  // Residual of x after projecting onto the span, relative to |x|;
  // exact mode returns 0.0 or 1.0.
  double residual(const MixedTensor& x) const;
};

ExactRow tensor_to_exact_row(const MixedTensor& t);
FloatRow tensor_to_float_row(const MixedTensor& t);
MixedTensor exact_row_to_tensor(const ExactRow& row, int n, int k, int l);
MixedTensor float_row_to_tensor(const FloatRow& row, int n, int k, int l);

// Incremental span construction: add vectors, query membership and rank,
// then finalize to a canonical immutable basis. Exact mode keeps rows in
// row echelon form during building; float mode keeps them orthonormal
// (modified Gram-Schmidt with reorthogonalization).
class SpanBuilder {
 public:
  SpanBuilder(int n, int k, int l, ScalarMode mode, double tol = kDefaultRankTol);
  ~SpanBuilder();
  SpanBuilder(SpanBuilder&&) noexcept;
  SpanBuilder& operator=(SpanBuilder&&) noexcept;

  // True when the vector enlarged the span.
  bool add(const MixedTensor& t);
  bool add_exact_row(ExactRow row);
  bool add_float_row(FloatRow row);

  bool contains(const MixedTensor& t) const;
  bool contains_exact_row(const ExactRow& row) const;
  // Relative residual left after reduction/projection.
  double residual_float_row(const FloatRow& row) const;

  int dim() const;
  int n() const { return n_; }
  int grade_k() const { return k_; }
  int grade_l() const { return l_; }
  ScalarMode mode() const { return mode_; }

  // Stored spanning row i, 0 <= i < dim(), in insertion order: the reduced
  // echelon row (exact mode) or the orthonormalized row (float mode). These
  // stay much sparser than the vectors that produced them, which matters
  // when later work multiplies basis rows together.
  ExactRow stored_exact_row(int i) const;
  FloatRow stored_float_row(int i) const;

  // Entry count of stored row i without copying it.
  std::size_t stored_row_size(int i) const;

  SubspaceBasis finalize() const;

 private:
  int n_, k_, l_;
  ScalarMode mode_;
  double tol_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Basis of the linear span. All tensors must share n, grade, and mode;
// the empty input yields the zero subspace of an unspecified grade.
SubspaceBasis span_basis(const std::vector<MixedTensor>& vectors,
                         double tol = kDefaultRankTol);
// Same, with the ambient grade given explicitly (required when vectors
// may be empty).
SubspaceBasis span_basis_shaped(int n, int k, int l, ScalarMode mode,
                                const std::vector<MixedTensor>& vectors,
                                double tol = kDefaultRankTol);

// Membership: zero residual after projection (exact) or residual below
// the basis tolerance (float).
bool contains(const SubspaceBasis& basis, const MixedTensor& x);
// Every row of b lies in a.
bool contains_space(const SubspaceBasis& a, const SubspaceBasis& b);
bool equal_spaces(const SubspaceBasis& a, const SubspaceBasis& b);

// Serialization: {"n","k","l","mode","tol","rows"} with exact coefficients
// as rational strings and float coefficients as numbers, rows dense.
std::string subspace_to_json(const SubspaceBasis& basis);
SubspaceBasis subspace_from_json(const std::string& text);

}  // namespace mta
