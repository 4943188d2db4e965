#pragma once

// Shared fixtures and brute-force oracles for the test binaries. Every oracle
// here is deliberately naive and shares no code path with the library
// routine it checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "reebmin/cones.hpp"
#include "reebmin/latcore.hpp"
#include "reebmin/links.hpp"
#include "reebmin/metrics.hpp"
#include "reebmin/reebvol.hpp"

namespace oracle {

using namespace reebmin;

inline IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

/// Canonicalized a/b (GMP compares non-canonical fractions incorrectly).
inline Rational frac(const Integer& a, const Integer& b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

inline RatVector rv(std::initializer_list<Rational> xs) { return RatVector(xs); }

// ---------------------------------------------------------------------------
// Fixture cones

inline std::vector<IntVector> conifold_normals() {
  return {iv({1, 0, 0}), iv({1, 1, 0}), iv({1, 1, 1}), iv({1, 0, 1})};
}

/// Flat C^n in Gorenstein form: e_1 and e_1 + e_k for k = 2..n.
inline std::vector<IntVector> flat_normals(std::size_t n) {
  std::vector<IntVector> out;
  for (std::size_t k = 0; k < n; ++k) {
    IntVector v(n, 0);
    v[0] = 1;
    if (k > 0) v[k] = 1;
    out.push_back(v);
  }
  return out;
}

/// Cone over the hexagon (del Pezzo 3).
inline std::vector<IntVector> hexagon_normals() {
  return {iv({1, 0, 0}), iv({1, 1, 0}), iv({1, 2, 1}),
          iv({1, 2, 2}), iv({1, 1, 2}), iv({1, 0, 1})};
}

/// Y^{p,q} toric diagram: (1,0,0), (1,1,0), (1,p,p), (1,p-q-1,p-q).
inline std::vector<IntVector> ypq_normals(long p, long q) {
  return {iv({1, 0, 0}), iv({1, 1, 0}), iv({1, p, p}), iv({1, p - q - 1, p - q})};
}

// ---------------------------------------------------------------------------
// Integer linear algebra by definition

inline long det_leibniz(const std::vector<std::vector<long>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long total = 0;
  do {
    long term = 1;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    total += (inversions % 2 ? -term : term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline std::vector<std::vector<long>> to_ll(const IntMatrix& m) {
  std::vector<std::vector<long>> out(m.rows(), std::vector<long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_si();
  return out;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out,
                    std::vector<std::size_t>& cur, std::size_t start = 0) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(n, k, out, cur);
  return out;
}

/// Invariant factors as ratios of determinantal divisors (gcd of k x k minors).
inline std::vector<long> invariant_factors_by_minors(const IntMatrix& m) {
  const auto a = to_ll(m);
  std::vector<long> divisors{1};
  const std::size_t kmax = std::min(m.rows(), m.cols());
  for (std::size_t k = 1; k <= kmax; ++k) {
    long g = 0;
    for (const auto& rs : subsets(m.rows(), k))
      for (const auto& cs : subsets(m.cols(), k)) {
        std::vector<std::vector<long>> minor(k, std::vector<long>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor[i][j] = a[rs[i]][cs[j]];
        g = std::gcd(g, std::labs(det_leibniz(minor)));
      }
    if (g == 0) break;
    divisors.push_back(g);
  }
  std::vector<long> out;
  for (std::size_t k = 1; k < divisors.size(); ++k) out.push_back(divisors[k] / divisors[k - 1]);
  return out;
}

/// Rational Gauss-Jordan solve of a square system; nullopt when singular.
inline std::optional<RatVector> solve_square(std::vector<RatVector> a, RatVector b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// ---------------------------------------------------------------------------
// Cones

/// Extreme rays of { y : <y, v_a> >= 0 } from every (n-1)-subset of normals
/// via generalized cross products.
inline std::set<IntVector> brute_force_rays(const std::vector<IntVector>& normals) {
  const std::size_t n = normals.front().size();
  std::set<IntVector> rays;
  for (const auto& s : subsets(normals.size(), n - 1)) {
    IntVector r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<long>> minor;
      for (std::size_t idx : s) {
        std::vector<long> row;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) row.push_back(normals[idx][j].get_si());
        minor.push_back(row);
      }
      r[i] = (i % 2 ? -1 : 1) * det_leibniz(minor);
    }
    if (std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; })) continue;
    for (int sign : {1, -1}) {
      IntVector cand = r;
      for (auto& x : cand) x *= sign;
      bool ok = true;
      for (const auto& v : normals) ok = ok && dot(cand, v) >= 0;
      if (ok) rays.insert(primitive_part(cand));
    }
  }
  return rays;
}

/// Vertices of C* ∩ { <y, xi> <= 1/2 } by solving every n-subset of the
/// constraints as equalities.
inline std::set<RatVector> brute_force_vertices(const std::vector<IntVector>& normals,
                                                const RatVector& xi) {
  const std::size_t n = xi.size();
  std::vector<RatVector> rows;
  RatVector rhs;
  for (const auto& v : normals) {
    rows.emplace_back(v.begin(), v.end());
    rhs.emplace_back(0);
  }
  rows.push_back(xi);
  rhs.emplace_back(1, 2);
  std::set<RatVector> out;
  for (const auto& s : subsets(rows.size(), n)) {
    std::vector<RatVector> a;
    RatVector b;
    for (std::size_t i : s) {
      a.push_back(rows[i]);
      b.push_back(rhs[i]);
    }
    auto y = solve_square(a, b);
    if (!y) continue;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      Rational t = 0;
      for (std::size_t j = 0; j < n; ++j) t += rows[i][j] * (*y)[j];
      ok = ok && t >= 0;
    }
    Rational t = 0;
    for (std::size_t j = 0; j < n; ++j) t += xi[j] * (*y)[j];
    ok = ok && t <= Rational(1, 2);
    if (ok) {
      for (auto& c : *y) c.canonicalize();
      out.insert(*y);
    }
  }
  return out;
}

/// vol(Delta(xi)) for n = 3 as a cone from the origin over the cap polygon:
/// (1/3) * dist(0, H) * area(cap), area by the 3D shoelace formula.
inline double cap_volume_3d(const std::vector<IntVector>& normals, const Eigen::Vector3d& xi) {
  std::vector<Eigen::Vector3d> pts;
  for (const auto& r : brute_force_rays(normals)) {
    Eigen::Vector3d rd(r[0].get_d(), r[1].get_d(), r[2].get_d());
    pts.push_back(rd / (2 * rd.dot(xi)));
  }
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  const Eigen::Vector3d nrm = xi.normalized();
  Eigen::Vector3d u = (pts[0] - c).normalized();
  Eigen::Vector3d w = nrm.cross(u);
  std::sort(pts.begin(), pts.end(), [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return std::atan2((a - c).dot(w), (a - c).dot(u)) < std::atan2((b - c).dot(w), (b - c).dot(u));
  });
  Eigen::Vector3d s = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) s += pts[i].cross(pts[(i + 1) % pts.size()]);
  const double area = 0.5 * std::abs(s.dot(nrm));
  const double h = 0.5 / xi.norm();
  return area * h / 3;
}

/// vol(S)/vol(S^5) for n = 3 from the cap-polygon volume (3! 2^3 vol(Delta)).
inline double cap_normalized_volume_3d(const std::vector<IntVector>& normals,
                                       const Eigen::Vector3d& xi) {
  return 48 * cap_volume_3d(normals, xi);
}

/// Finds T unimodular and a bijection with T a_i = b_pi(i).
inline bool unimodular_equivalent(const std::vector<IntVector>& a, const std::vector<IntVector>& b) {
  if (a.size() != b.size() || a.empty()) return false;
  const std::size_t n = a.front().size();
  std::vector<std::size_t> basis;
  for (std::size_t i = 0; i < a.size() && basis.size() < n; ++i) {
    std::vector<IntVector> trial;
    for (std::size_t j : basis) trial.push_back(a[j]);
    trial.push_back(a[i]);
    if (rank(trial) == trial.size()) basis.push_back(i);
  }
  if (basis.size() != n) return false;
  std::set<IntVector> target(b.begin(), b.end());
  std::vector<std::size_t> idx(b.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::set<std::vector<std::size_t>> tried;
  do {
    std::vector<std::size_t> image(idx.begin(), idx.begin() + static_cast<long>(n));
    if (!tried.insert(image).second) continue;
    // T A = B column-wise, so each row t of T solves A^T t = (row of B).
    std::vector<RatVector> at(n, RatVector(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) at[i][j] = a[basis[i]][j];
    IntMatrix t(n, n);
    bool integral = true;
    for (std::size_t r = 0; r < n && integral; ++r) {
      RatVector rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = b[image[i]][r];
      auto row = solve_square(at, rhs);
      if (!row) {
        integral = false;
        break;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if ((*row)[j].get_den() != 1) integral = false;
        t(r, j) = (*row)[j].get_num();
      }
    }
    if (!integral || abs(determinant(t)) != 1) continue;
    std::set<IntVector> mapped;
    for (const auto& v : a) mapped.insert(t * v);
    if (mapped == target) return true;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return false;
}

// ---------------------------------------------------------------------------
// Reeb minimization by pattern search over the slice xi_1 = n

inline Eigen::VectorXd grid_minimize(const ConeGeometry& geo, Eigen::VectorXd start) {
  const Eigen::Index m = start.size();
  auto f = [&](const Eigen::VectorXd& x) {
    if (!geo.is_interior(x)) return std::numeric_limits<double>::infinity();
    return vol_functional(geo, x).polytope_volume;
  };
  double step = 0.5;
  double best = f(start);
  while (step > 1e-10) {
    bool improved = false;
    for (Eigen::Index i = 1; i < m; ++i)
      for (double s : {-step, step}) {
        Eigen::VectorXd x = start;
        x(i) += s;
        const double v = f(x);
        if (v < best) {
          best = v;
          start = x;
          improved = true;
        }
      }
    if (!improved) step /= 2;
  }
  return start;
}

// ---------------------------------------------------------------------------
// Links

/// Counts of sum_i x_i L/a_i mod (mult * L) over 0 < x_i < a_i, L = lcm(a).
inline std::vector<long> residue_counts(const std::vector<long>& a, long mult) {
  long L = 1;
  for (long x : a) L = std::lcm(L, x);
  const long M = mult * L;
  std::vector<long> c(static_cast<std::size_t>(M), 0);
  c[0] = 1;
  for (long ai : a) {
    std::vector<long> next(static_cast<std::size_t>(M), 0);
    const long step = L / ai;
    for (long r = 0; r < M; ++r) {
      if (!c[static_cast<std::size_t>(r)]) continue;
      for (long x = 1; x < ai; ++x)
        next[static_cast<std::size_t>((r + x * step) % M)] += c[static_cast<std::size_t>(r)];
    }
    c.swap(next);
  }
  return c;
}

inline bool is_prime_power(long e) {
  if (e < 2) return false;
  for (long p = 2; p * p <= e; ++p)
    if (e % p == 0) {
      while (e % p == 0) e /= p;
      return e == 1;
    }
  return true;
}

/// Homology type from the characteristic polynomial of the monodromy:
/// rational sphere iff Delta(1) != 0, integral iff |Delta(1)| = 1, where
/// |Delta(1)| = prod over root orders e of Phi_e(1)^{mult}.
inline HomologyType homology_by_alexander(const std::vector<long>& a) {
  long L = 1;
  for (long x : a) L = std::lcm(L, x);
  const auto c = residue_counts(a, 1);
  if (c[0] != 0) return HomologyType::Other;
  for (long r = 1; r < L; ++r)
    if (c[static_cast<std::size_t>(r)] && is_prime_power(L / std::gcd(r, L)))
      return HomologyType::RationalSphere;
  return HomologyType::IntegralSphere;
}

/// Signature by residue dynamic programming over sum x_i/a_i mod 2.
inline long signature_by_residues(const std::vector<long>& a) {
  long L = 1;
  for (long x : a) L = std::lcm(L, x);
  const auto c = residue_counts(a, 2);
  long tau = 0;
  for (long r = 1; r < L; ++r) tau += c[static_cast<std::size_t>(r)];
  for (long r = L + 1; r < 2 * L; ++r) tau -= c[static_cast<std::size_t>(r)];
  return static_cast<long>(tau);
}

// ---------------------------------------------------------------------------
// Y^{p,q}

/// vol(Y^{p,q}) / vol(S^5) from the closed-form metric volume.
inline double ypq_volume_ratio(long p, long q) {
  const double pd = static_cast<double>(p), qd = static_cast<double>(q);
  const double s = std::sqrt(4 * pd * pd - 3 * qd * qd);
  return qd * qd * (2 * pd + s) / (3 * pd * pd * (3 * qd * qd - 2 * pd * pd + pd * s));
}

}  // namespace oracle
