#include "dcx/matrix.hpp"

#include <sstream>

#include "dcx/error.hpp"

namespace dcx {

namespace {

void require_same_ring(const Matrix& a, const Matrix& b, const char* op) {
  if (a.ring() != b.ring())
    throw ShapeError(std::string(op) + ": ring mismatch " + a.ring().name() + " vs " + b.ring().name());
}

}  // namespace

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::identity(Ring ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_rows(Ring ring, std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Scalar>> v;
  for (const auto& r : rows) {
    std::vector<Scalar> row;
    for (long x : r) row.emplace_back(x);
    v.push_back(std::move(row));
  }
  return from_rows(ring, v);
}

Matrix Matrix::from_rows(Ring ring, const std::vector<std::vector<Scalar>>& rows) {
  const std::size_t ncols = rows.empty() ? 0 : rows.front().size();
  Matrix m(ring, rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols) throw ShapeError("ragged matrix rows");
    for (std::size_t j = 0; j < ncols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::diagonal(Ring ring, std::size_t rows, std::size_t cols, const std::vector<Scalar>& diag) {
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) m.set(i, i, diag[i]);
  return m;
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& value) {
  Scalar& slot = data_[i * cols_ + j];
  slot = value;
  ring_.normalize(slot);
}

void Matrix::add_to(std::size_t i, std::size_t j, const Scalar& value) {
  Scalar& slot = data_[i * cols_ + j];
  slot += value;
  ring_.normalize(slot);
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) throw ShapeError("block out of range");
  Matrix b(ring_, nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) b.data_[i * ncols + j] = (*this)(row0 + i, col0 + j);
  return b;
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& m) {
  if (row0 + m.rows_ > rows_ || col0 + m.cols_ > cols_) throw ShapeError("set_block out of range");
  require_same_ring(*this, m, "set_block");
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) data_[(row0 + i) * cols_ + col0 + j] = m(i, j);
}

Matrix Matrix::scaled(const Scalar& factor) const {
  Matrix m = *this;
  for (auto& x : m.data_) {
    x *= factor;
    ring_.normalize(x);
  }
  return m;
}

Matrix Matrix::over(Ring ring) const {
  Matrix m(ring, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) {
    m.data_[k] = data_[k];
    ring.normalize(m.data_[k]);
  }
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_ring(*this, other, "add");
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("add: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k] += other.data_[k];
    ring_.normalize(data_[k]);
  }
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_ring(*this, other, "subtract");
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("subtract: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k] -= other.data_[k];
    ring_.normalize(data_[k]);
  }
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_ring(a, b, "multiply");
  if (a.cols_ != b.rows_)
    throw ShapeError("multiply: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " * " +
                     std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  Matrix c(a.ring_, a.rows_, b.cols_);
  Scalar tmp;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& bkj = b(k, j);
        if (bkj == 0) continue;
        tmp = aik * bkj;
        c.data_[i * c.cols_ + j] += tmp;
      }
    }
  }
  for (auto& x : c.data_) a.ring_.normalize(x);
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("hstack: row mismatch");
  Matrix m(a.ring(), a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("vstack: column mismatch");
  Matrix m(a.ring(), a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
    throw ShapeError("block2x2: inconsistent block shapes");
  return vstack(hstack(a, b), hstack(c, d));
}

}  // namespace dcx
