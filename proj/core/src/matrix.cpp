#include "mta/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace mta {

CMatrix::CMatrix(int rows, int cols, ScalarMode mode)
    : rows_(rows), cols_(cols), mode_(mode) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
  data_.assign(static_cast<size_t>(rows) * cols, Scalar::zero(mode));
}

CMatrix CMatrix::identity(int n, ScalarMode mode) {
  CMatrix m(n, n, mode);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(mode);
  return m;
}

CMatrix CMatrix::permutation(const std::vector<int>& image, ScalarMode mode) {
  int n = static_cast<int>(image.size());
  CMatrix m(n, n, mode);
  for (int j = 0; j < n; ++j) {
    int i = image[j];
    if (i < 1 || i > n) throw std::out_of_range("permutation image out of range");
    m.at(i - 1, j) = Scalar::one(mode);
  }
  return m;
}

CMatrix CMatrix::diagonal(const std::vector<Scalar>& entries) {
  int n = static_cast<int>(entries.size());
  if (n == 0) throw std::invalid_argument("empty diagonal");
  CMatrix m(n, n, entries[0].mode());
  for (int i = 0; i < n; ++i) {
    if (entries[i].mode() != m.mode()) throw std::invalid_argument("mixed-mode diagonal");
    m.at(i, i) = entries[i];
  }
  return m;
}

CMatrix CMatrix::unit(int n, int a, int b, ScalarMode mode) {
  if (a < 1 || a > n || b < 1 || b > n) throw std::out_of_range("unit matrix index");
  CMatrix m(n, n, mode);
  m.at(a - 1, b - 1) = Scalar::one(mode);
  return m;
}

Scalar& CMatrix::at(int r, int c) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
  return data_[static_cast<size_t>(r) * cols_ + c];
}

const Scalar& CMatrix::at(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
  return data_[static_cast<size_t>(r) * cols_ + c];
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
  if (mode_ != o.mode_) throw std::invalid_argument("matrix mode mismatch");
  CMatrix out(rows_, o.cols_, mode_);
  for (int i = 0; i < rows_; ++i) {
    for (int t = 0; t < cols_; ++t) {
      const Scalar& a = at(i, t);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        out.at(i, j) += a * o.at(t, j);
      }
    }
  }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  CMatrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  CMatrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
  return out;
}

CMatrix CMatrix::scaled(const Scalar& s) const {
  CMatrix out = *this;
  for (auto& v : out.data_) v = v * s;
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_, mode_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  }
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out = *this;
  for (auto& v : out.data_) v = v.conj();
  return out;
}

CMatrix CMatrix::adjoint() const { return transpose().conjugate(); }

CMatrix CMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  int n = rows_;
  CMatrix a = *this;
  CMatrix inv = identity(n, mode_);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    if (mode_ == ScalarMode::kExact) {
      for (int r = col; r < n && pivot < 0; ++r) {
        if (!a.at(r, col).is_zero()) pivot = r;
      }
    } else {
      double best = 0;
      for (int r = col; r < n; ++r) {
        double m = std::abs(a.at(r, col).float_value());
        if (m > best) {
          best = m;
          pivot = r;
        }
      }
      if (best < 1e-12) pivot = -1;
    }
    if (pivot < 0) throw std::domain_error("singular matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a.at(pivot, j), a.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    Scalar d = a.at(col, col);
    for (int j = 0; j < n; ++j) {
      a.at(col, j) = a.at(col, j) / d;
      inv.at(col, j) = inv.at(col, j) / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Scalar factor = a.at(r, col);
      if (factor.is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        a.at(r, j) -= factor * a.at(col, j);
        inv.at(r, j) -= factor * inv.at(col, j);
      }
    }
  }
  return inv;
}

Scalar CMatrix::trace() const {
  if (rows_ != cols_) throw std::invalid_argument("trace of non-square matrix");
  Scalar t = Scalar::zero(mode_);
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

CMatrix CMatrix::to_float() const {
  CMatrix out(rows_, cols_, ScalarMode::kFloat);
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].to_float();
  return out;
}

bool CMatrix::operator==(const CMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && mode_ == o.mode_ && data_ == o.data_;
}

bool CMatrix::is_zero() const {
  for (const auto& v : data_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

std::string CMatrix::str() const {
  std::ostringstream os;
  os << rows_ << "x" << cols_ << ":";
  for (const auto& v : data_) os << v.str() << ";";
  return os.str();
}

GroupElement GroupElement::from_matrix(const CMatrix& m) {
  return {m, m.transpose().inverse()};
}

GroupElement GroupElement::from_unitary(const CMatrix& m) { return {m, m.conjugate()}; }

}  // namespace mta
