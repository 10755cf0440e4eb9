#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratk {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parse "3", "-1/2" or "−1/2" (unicode minus accepted). Throws ParseError.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

/// Dense matrix over Q. A matrix with `rows` x `cols` is a linear map
/// R^cols -> R^rows; the empty 0x0 matrix is the identity on R^0.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<long>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols);
  static Matrix column(const std::vector<Rational>& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const;
  std::optional<Matrix> inverse() const;
  Rational determinant() const;
  std::size_t rank() const;
  bool is_identity() const;
  bool is_zero() const;

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(const Rational& s) const;

  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }
  /// Total order: shape first, then entries row-major.
  friend bool operator<(const Matrix& a, const Matrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Block diagonal a (+) b.
Matrix direct_sum(const Matrix& a, const Matrix& b);
/// Kronecker product a (x) b.
Matrix kronecker(const Matrix& a, const Matrix& b);
/// Reduced row echelon form; pivot columns returned through `pivots`.
Matrix rref(const Matrix& m, std::vector<std::size_t>* pivots = nullptr);
/// Columns form a basis of the kernel of m (cols() x k matrix).
Matrix nullspace(const Matrix& m);
/// Concatenate side by side (equal row counts).
Matrix hconcat(const Matrix& a, const Matrix& b);
/// Exact squared Euclidean norm of column j.
Rational column_norm2(const Matrix& m, std::size_t j);

}  // namespace stratk
