#pragma once

// Dense exact-rational matrices and the elimination kernel (rref, rank,
// nullspace, solve) used by every algebraic module.  All results are exact
// and canonical: rref is the unique reduced row echelon form, and the
// nullspace basis is back-substituted with free variables set to unit
// vectors in increasing column order.

#include <g3f4/rational.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace g3f4 {

using Vec = std::vector<Scalar>;

struct RrefResult;

class QMatrix {
 public:
  QMatrix() : rows_(0), cols_(0) {}
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {}

  static QMatrix identity(std::size_t n);
  // Builds a matrix from explicit rows (all rows must have equal length).
  static QMatrix from_rows(const std::vector<Vec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec col(std::size_t c) const;
  void set_row(std::size_t r, const Vec& v);

  bool is_zero() const;
  QMatrix transpose() const;

  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  QMatrix operator*(const Scalar& s) const;
  Vec apply(const Vec& v) const;  // matrix * column vector
  friend bool operator==(const QMatrix& a, const QMatrix& b);

  RrefResult rref() const;
  std::size_t rank() const;

  // Canonical nullspace basis: one vector per free column, in increasing
  // free-column order; the vector has 1 at its free column, 0 at the other
  // free columns, and the back-substituted values at pivot columns.
  std::vector<Vec> nullspace() const;

  // Particular solution of A x = b with free variables set to zero, or
  // std::nullopt if the system is inconsistent.
  std::optional<Vec> solve(const Vec& b) const;

  std::string str() const;  // for diagnostics

 private:
  std::size_t rows_, cols_;
  std::vector<Scalar> e_;
};

struct RrefResult {
  QMatrix mat;
  std::vector<std::size_t> pivots;  // pivot column per pivot row, increasing
};

// Convenience vector helpers shared across modules.
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Scalar& c, const Vec& a);
bool vec_is_zero(const Vec& a);

}  // namespace g3f4
