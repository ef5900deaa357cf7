#pragma once

#include <string>
#include <vector>

#include "mta/scalar.hpp"

namespace mta {

// Dense square-or-rectangular complex matrix whose entries share one
// scalar mode. Small (n <= a few dozen); used for group elements and
// Lie-algebra basis matrices, not for bulk linear algebra.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols, ScalarMode mode);

  static CMatrix identity(int n, ScalarMode mode);
  // Permutation matrix P with P e_j = e_{image[j-1]}; image is 1-based.
  static CMatrix permutation(const std::vector<int>& image, ScalarMode mode);
  static CMatrix diagonal(const std::vector<Scalar>& entries);
  // E_ab: single 1 at (row a, col b), both 1-based.
  static CMatrix unit(int n, int a, int b, ScalarMode mode);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  ScalarMode mode() const { return mode_; }

  Scalar& at(int r, int c);
  const Scalar& at(int r, int c) const;

  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix scaled(const Scalar& s) const;
  CMatrix transpose() const;
  CMatrix conjugate() const;
  CMatrix adjoint() const;
  // Gauss-Jordan inverse; throws std::domain_error when singular.
  CMatrix inverse() const;
  Scalar trace() const;
  CMatrix to_float() const;

  bool operator==(const CMatrix& o) const;
  bool is_zero() const;
  // Canonical serialization; doubles as an exact-mode map key.
  std::string str() const;

 private:
  int rows_ = 0, cols_ = 0;
  ScalarMode mode_ = ScalarMode::kExact;
  std::vector<Scalar> data_;  // row-major
};

// Invertible matrix acting on mixed tensors: u acts on every contravariant
// slot, inverse-transpose of u on every covariant slot.
struct GroupElement {
  CMatrix u;
  CMatrix u_inv_t;

  // General invertible matrix; computes the inverse transpose.
  static GroupElement from_matrix(const CMatrix& m);
  // For unitary m the inverse transpose is the entrywise conjugate;
  // avoids an inversion and its rounding.
  static GroupElement from_unitary(const CMatrix& m);
};

}  // namespace mta
