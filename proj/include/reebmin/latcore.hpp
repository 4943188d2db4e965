#pragma once

// Exact integer and rational linear algebra on small dense matrices.
//
// Everything here works over GMP integers; no fixed-width arithmetic is used
// on an exact path. Sizes are desk-scale (at most a dozen rows/columns), so the
// algorithms are the straightforward pivoting ones rather than modular ones.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace reebmin {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows,
                             std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  IntVector row(std::size_t i) const;
  IntVector col(std::size_t j) const;
  std::vector<IntVector> row_vectors() const;
  IntMatrix transpose() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& x);
std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

Integer dot(const IntVector& a, const IntVector& b);
Rational dot(const IntVector& a, const RatVector& b);
Integer content(const IntVector& v);  // gcd of entries, 0 for the zero vector
bool is_primitive(const IntVector& v);
IntVector primitive_part(const IntVector& v);
IntVector clear_denominators(const RatVector& v);  // primitive integer multiple
std::string to_string(const IntVector& v);

/// Determinant by fraction-free (Bareiss) elimination.
Integer determinant(const IntMatrix& m);
std::size_t rank(const IntMatrix& m);
std::size_t rank(const std::vector<IntVector>& vectors);

/// U * M * V == D, U and V unimodular, D diagonal with d1 | d2 | ... and
/// all d_i >= 0.
struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  std::vector<Integer> invariant_factors() const;  // nonzero diagonal entries
};

SmithForm smith_normal_form(const IntMatrix& m);

/// Row-style Hermite normal form of the lattice spanned by the rows of m.
/// Zero rows are dropped, so the result has rank(m) rows.
IntMatrix hermite_normal_form(const IntMatrix& m);

/// Saturated Z-basis of {x in Z^cols : m x = 0}, in Hermite normal form.
std::vector<IntVector> integer_kernel(const IntMatrix& m);

/// Rays v_1..v_d in Z^n with sum_a Q_ka v_a = 0 for every charge row k. The
/// kernel basis of Q is put into Hermite normal form and its columns are
/// returned, so the output is deterministic. A charge matrix with zero rows
/// and d columns yields the standard basis of Z^d.
std::vector<IntVector> gale_dual(const IntMatrix& charges);

/// Solve A x = b over Q. Returns false when the system is inconsistent; on
/// success `x` holds one solution (free variables set to zero).
bool solve_rational(const std::vector<RatVector>& a, const RatVector& b,
                    RatVector& x);

/// Inverse of a unimodular matrix (throws RankError if |det| != 1).
IntMatrix unimodular_inverse(const IntMatrix& m);

/// Unimodular matrix whose first row is the primitive vector u.
IntMatrix complete_to_unimodular(const IntVector& u);

}  // namespace reebmin
