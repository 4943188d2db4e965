#include "reebmin/latcore.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <sstream>
#include <utility>

#include "reebmin/error.hpp"

namespace reebmin {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw std::invalid_argument("IntMatrix: ragged initializer");
    }
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows,
                               std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw std::invalid_argument("IntMatrix::from_rows: row length mismatch");
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

IntVector IntMatrix::col(std::size_t j) const {
  IntVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<IntVector> IntMatrix::row_vectors() const {
  std::vector<IntVector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntMatrix: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntVector operator*(const IntMatrix& a, const IntVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("IntMatrix: shape mismatch");
  IntVector y(a.rows(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ", ";
    os << to_string(m.row(i));
  }
  return os << ']';
}

Integer dot(const IntVector& a, const IntVector& b) {
  assert(a.size() == b.size());
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const IntVector& a, const RatVector& b) {
  assert(a.size() == b.size());
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

bool is_primitive(const IntVector& v) { return content(v) == 1; }

IntVector primitive_part(const IntVector& v) {
  Integer g = content(v);
  if (g == 0) return v;
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

IntVector clear_denominators(const RatVector& v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * l;
    out[i] = s.get_num();
  }
  return primitive_part(out);
}

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& m) { return hermite_normal_form(m).rows(); }

std::size_t rank(const std::vector<IntVector>& vectors) {
  if (vectors.empty()) return 0;
  return rank(IntMatrix::from_rows(vectors, vectors.front().size()));
}

std::vector<Integer> SmithForm::invariant_factors() const {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    if (D(i, i) != 0) out.push_back(D(i, i));
  return out;
}

namespace {

// Replace rows (i, j) of every matrix in `ms` by the unimodular combination
//   row_i <- s*row_i + t*row_j,  row_j <- u*row_i + v*row_j.
void combine_rows(IntMatrix& m, std::size_t i, std::size_t j, const Integer& s,
                  const Integer& t, const Integer& u, const Integer& v) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Integer a = m(i, c), b = m(j, c);
    m(i, c) = s * a + t * b;
    m(j, c) = u * a + v * b;
  }
}

void combine_cols(IntMatrix& m, std::size_t i, std::size_t j, const Integer& s,
                  const Integer& t, const Integer& u, const Integer& v) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Integer a = m(r, i), b = m(r, j);
    m(r, i) = s * a + t * b;
    m(r, j) = u * a + v * b;
  }
}

// g = s*a + t*b with g = gcd(a, b) up to sign. When a divides b the result is
// (g, s, t) = (a, 1, 0) so that the combination is a plain elimination.
void bezout(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  if (a != 0 && b % a == 0) {
    g = a;
    s = 1;
    t = 0;
    return;
  }
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    bool found = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (a(i, j) == 0) continue;
        if (!found || abs(a(i, j)) < abs(a(pi, pj))) {
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    a.swap_rows(t, pi);
    u.swap_rows(t, pi);
    a.swap_cols(t, pj);
    v.swap_cols(t, pj);

    for (;;) {
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer g, s, x;
        Integer p = a(t, t), q = a(i, t);
        bezout(p, q, g, s, x);
        Integer pg = p / g, qg = q / g;
        combine_rows(a, t, i, s, x, -qg, pg);
        combine_rows(u, t, i, s, x, -qg, pg);
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer g, s, x;
        Integer p = a(t, t), q = a(t, j);
        bezout(p, q, g, s, x);
        Integer pg = p / g, qg = q / g;
        combine_cols(a, t, j, s, x, -qg, pg);
        combine_cols(v, t, j, s, x, -qg, pg);
      }
      bool column_clear = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a(i, t) != 0) column_clear = false;
      if (!column_clear) continue;

      // Divisibility: fold any offending row into the pivot row and repeat.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      combine_rows(a, t, bad, 1, 1, 0, 1);
      combine_rows(u, t, bad, 1, 1, 0, 1);
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < cols; ++j) a(t, j) = -a(t, j);
      for (std::size_t j = 0; j < rows; ++j) u(t, j) = -u(t, j);
    }
  }
  return {std::move(u), std::move(a), std::move(v)};
}

IntMatrix hermite_normal_form(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a(i, c) == 0) continue;
      Integer g, s, x;
      Integer p = a(r, c), q = a(i, c);
      bezout(p, q, g, s, x);
      combine_rows(a, r, i, s, x, -(q / g), p / g);
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0)
      for (std::size_t j = 0; j < cols; ++j) a(r, j) = -a(r, j);
    for (std::size_t i = 0; i < r; ++i) {
      Integer f;
      mpz_fdiv_q(f.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  IntMatrix out(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
  return out;
}

std::vector<IntVector> integer_kernel(const IntMatrix& m) {
  const std::size_t cols = m.cols();
  SmithForm snf = smith_normal_form(m);
  std::size_t r = snf.invariant_factors().size();
  if (r == cols) return {};
  // The last cols - r columns of V span the kernel and, V being unimodular,
  // span it saturatedly.
  IntMatrix basis(cols - r, cols);
  for (std::size_t k = r; k < cols; ++k)
    for (std::size_t i = 0; i < cols; ++i) basis(k - r, i) = snf.V(i, k);
  return hermite_normal_form(basis).row_vectors();
}

std::vector<IntVector> gale_dual(const IntMatrix& charges) {
  const std::size_t d = charges.cols();
  if (d == 0) throw Error(ErrorCode::RankError, "gale_dual: no columns");
  if (charges.rows() > 0 && rank(charges) != charges.rows()) {
    throw Error(ErrorCode::RankError,
                "gale_dual: charge matrix does not have full row rank");
  }
  std::vector<IntVector> kernel =
      charges.rows() == 0 ? IntMatrix::identity(d).row_vectors()
                          : integer_kernel(charges);
  const std::size_t n = kernel.size();
  std::vector<IntVector> rays(d, IntVector(n));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t i = 0; i < n; ++i) rays[a][i] = kernel[i][a];
  return rays;
}

bool solve_rational(const std::vector<RatVector>& a, const RatVector& b,
                    RatVector& x) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a.front().size() : 0;
  std::vector<RatVector> m(rows, RatVector(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = a[i][j];
    m[i][cols] = b[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& e : m[r]) e *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j <= cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (m[i][cols] != 0) return false;
  x.assign(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = m[i][cols];
  return true;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n || abs(determinant(m)) != 1) {
    throw Error(ErrorCode::RankError, "unimodular_inverse: matrix is not unimodular");
  }
  std::vector<RatVector> a(n, RatVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  IntMatrix inv(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    RatVector e(n, Rational(0)), x;
    e[k] = 1;
    solve_rational(a, e, x);
    for (std::size_t i = 0; i < n; ++i) inv(i, k) = x[i].get_num();
  }
  return inv;
}

IntMatrix complete_to_unimodular(const IntVector& u) {
  const std::size_t n = u.size();
  if (!is_primitive(u)) {
    throw Error(ErrorCode::NonPrimitive, "complete_to_unimodular: vector not primitive");
  }
  bool is_e1 = u[0] == 1;
  for (std::size_t i = 1; i < n; ++i) is_e1 = is_e1 && u[i] == 0;
  if (is_e1) return IntMatrix::identity(n);
  // SNF of the 1 x n row: (+-1) * u^T * V = e_1^T, so u^T = e_1^T W^{-1}
  // with W = (+-1) V, i.e. the first row of W^{-1} is u.
  IntMatrix row(1, n);
  for (std::size_t j = 0; j < n; ++j) row(0, j) = u[j];
  SmithForm snf = smith_normal_form(row);
  IntMatrix w = snf.V;
  if (snf.U(0, 0) < 0)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = -w(i, j);
  return unimodular_inverse(w);
}

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankError: return "RankError";
    case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorCode::RedundantNormal: return "RedundantNormal";
    case ErrorCode::NonPrimitive: return "NonPrimitive";
    case ErrorCode::NotQGorenstein: return "NotQGorenstein";
    case ErrorCode::NotSimplyConnected: return "NotSimplyConnected";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::ReebNotInterior: return "ReebNotInterior";
    case ErrorCode::NotGorenstein: return "NotGorenstein";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::NotHomologySphere: return "NotHomologySphere";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NotFano: return "NotFano";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::DegenerateChartPoint: return "DegenerateChartPoint";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace reebmin
