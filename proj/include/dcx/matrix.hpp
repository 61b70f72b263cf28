#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "dcx/ring.hpp"

namespace dcx {

/// Dense exact matrix over a Ring, row-major. Matrices act on column vectors,
/// so the composite g∘f is g * f. 0×n and n×0 matrices are legal zero maps.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix identity(Ring ring, std::size_t n);
  static Matrix from_rows(Ring ring, std::initializer_list<std::initializer_list<long>> rows);
  static Matrix from_rows(Ring ring, const std::vector<std::vector<Scalar>>& rows);
  /// Diagonal matrix with the given entries; rows/cols may exceed the count.
  static Matrix diagonal(Ring ring, std::size_t rows, std::size_t cols, const std::vector<Scalar>& diag);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, const Scalar& value);
  void add_to(std::size_t i, std::size_t j, const Scalar& value);

  bool is_zero() const;
  bool is_identity() const;

  Matrix transpose() const;
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const Matrix& m);
  Matrix scaled(const Scalar& factor) const;
  /// Same entries reinterpreted over another ring (Z→Q, Z→Z/m, ...).
  Matrix over(Ring ring) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(const Matrix& a) { return a.scaled(-1); }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::string str() const;

 private:
  Ring ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix block_diag(const Matrix& a, const Matrix& b);
/// [[a, b], [c, d]] with shapes checked.
Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

}  // namespace dcx
