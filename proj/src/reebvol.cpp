#include "reebmin/reebvol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reebmin/error.hpp"

namespace reebmin {

ConeGeometry::ConeGeometry(const MomentCone& cone)
    : cone_(cone), simplices_(triangulate(cone)) {
  const std::size_t n = cone_.dim();
  for (const auto& s : simplices_) {
    IntMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) m(k, i) = cone_.rays()[s[k]][i];
    abs_det_.push_back(abs(determinant(m)));
  }
  rays_d_.resize(static_cast<Eigen::Index>(cone_.rays().size()), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < cone_.rays().size(); ++j)
    for (std::size_t i = 0; i < n; ++i)
      rays_d_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          cone_.rays()[j][i].get_d();
}

bool ConeGeometry::is_interior(const RatVector& xi) const {
  if (xi.size() != dim()) return false;
  for (const auto& r : cone_.rays())
    if (dot(r, xi) <= 0) return false;
  return true;
}

bool ConeGeometry::is_interior(const Eigen::VectorXd& xi) const {
  return static_cast<std::size_t>(xi.size()) == dim() && interior_margin(xi) > 0;
}

double ConeGeometry::interior_margin(const Eigen::VectorXd& xi) const {
  Eigen::VectorXd h = rays_d_ * xi;
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < h.size(); ++j)
    m = std::min(m, h(j) / rays_d_.row(j).norm());
  return m;
}

double sphere_volume(std::size_t n) {
  double f = 1;
  for (std::size_t k = 2; k < n; ++k) f *= static_cast<double>(k);
  return 2 * std::pow(std::numbers::pi, static_cast<double>(n)) / f;
}

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::QuasiRegular: return "quasi-regular";
    case Regularity::Irregular: return "irregular";
    case Regularity::Undetermined: return "undetermined";
  }
  return "undetermined";
}

namespace {

template <class S>
S from_integer(const Integer& z) {
  if constexpr (std::is_same_v<S, double>) {
    return z.get_d();
  } else {
    return S(z);
  }
}

template <class S>
struct Moments {
  S volume{0};
  std::vector<S> first;
  std::vector<std::vector<S>> second;
};

// Moments of Delta(xi) up to the requested order, accumulated simplex by
// simplex. For a simplex with vertices 0, p_1..p_n:
//   int y_i      = vol * P_i / (n+1)
//   int y_i y_j  = vol * (sum_k p_ki p_kj + P_i P_j) / ((n+1)(n+2)),
// where P = sum_k p_k.
template <class S>
Moments<S> moments(const ConeGeometry& geo, const std::vector<S>& xi, int order) {
  const std::size_t n = geo.dim();
  const auto& rays = geo.cone().rays();
  std::vector<S> height(rays.size());
  for (std::size_t j = 0; j < rays.size(); ++j) {
    S h{0};
    for (std::size_t i = 0; i < n; ++i) h += from_integer<S>(rays[j][i]) * xi[i];
    if (!(h > 0)) {
      throw Error(ErrorCode::ReebNotInterior,
                  "Reeb vector is not in the interior of the dual cone");
    }
    height[j] = h;
  }
  S factorial{1};
  for (std::size_t k = 2; k <= n; ++k) factorial *= S(static_cast<long>(k));

  Moments<S> m;
  m.first.assign(n, S{0});
  m.second.assign(n, std::vector<S>(n, S{0}));
  const S n1 = S(static_cast<long>(n + 1));
  const S n2 = S(static_cast<long>(n + 2));
  for (std::size_t s = 0; s < geo.simplices().size(); ++s) {
    const auto& simplex = geo.simplices()[s];
    S denom = factorial;
    for (auto j : simplex) denom *= 2 * height[j];
    S vol = from_integer<S>(geo.simplex_dets()[s]) / denom;
    m.volume += vol;
    if (order < 1) continue;

    std::vector<std::vector<S>> p;
    std::vector<S> total(n, S{0});
    for (auto j : simplex) {
      std::vector<S> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = from_integer<S>(rays[j][i]) / (2 * height[j]);
        total[i] += v[i];
      }
      p.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < n; ++i) m.first[i] += vol * total[i] / n1;
    if (order < 2) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i; k < n; ++k) {
        S acc = total[i] * total[k];
        for (const auto& v : p) acc += v[i] * v[k];
        m.second[i][k] += vol * acc / (n1 * n2);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) m.second[i][k] = m.second[k][i];
  return m;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void check_dim(const ConeGeometry& geo, std::size_t size) {
  if (size != geo.dim()) {
    throw Error(ErrorCode::WrongDimension, "Reeb vector has the wrong dimension");
  }
}

}  // namespace

ReebPolytope reeb_polytope(const ConeGeometry& geo, const RatVector& xi) {
  check_dim(geo, xi.size());
  if (!geo.is_interior(xi)) {
    throw Error(ErrorCode::ReebNotInterior,
                "Reeb vector is not in the interior of the dual cone");
  }
  const std::size_t n = geo.dim();
  ReebPolytope p;
  p.vertices.emplace_back(n, Rational(0));
  for (const auto& r : geo.cone().rays()) {
    Rational scale = 1 / (2 * dot(r, xi));
    RatVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = scale * r[i];
    p.vertices.push_back(std::move(v));
  }
  for (const auto& s : geo.simplices()) {
    std::vector<std::size_t> shifted;
    for (auto j : s) shifted.push_back(j + 1);
    p.simplices.push_back(std::move(shifted));
  }
  p.facet_normals = geo.cone().normals();
  p.facet_normals.push_back(clear_denominators(xi));
  return p;
}

Rational polytope_volume(const ReebPolytope& p) {
  if (p.vertices.empty()) return 0;
  const std::size_t n = p.vertices.front().size();
  Rational factorial = 1;
  for (std::size_t k = 2; k <= n; ++k) factorial *= static_cast<long>(k);
  Rational total = 0;
  for (const auto& s : p.simplices) {
    // |det| of the rational vertex matrix by exact elimination.
    std::vector<RatVector> m;
    for (auto j : s) m.push_back(p.vertices[j]);
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && m[piv][c] == 0) ++piv;
      if (piv == n) {
        det = 0;
        break;
      }
      if (piv != c) {
        std::swap(m[piv], m[c]);
        det = -det;
      }
      det *= m[c][c];
      for (std::size_t r = c + 1; r < n; ++r) {
        if (m[r][c] == 0) continue;
        Rational f = m[r][c] / m[c][c];
        for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      }
    }
    total += abs(det) / factorial;
  }
  return total;
}

VolumeValues vol_functional(const ConeGeometry& geo, const Eigen::VectorXd& xi) {
  check_dim(geo, static_cast<std::size_t>(xi.size()));
  const double n = static_cast<double>(geo.dim());
  VolumeValues v;
  v.polytope_volume = moments<double>(geo, to_std(xi), 0).volume;
  const double two_pi_n = std::pow(2 * std::numbers::pi, n);
  v.sasakian_volume = 2 * n * two_pi_n * v.polytope_volume;
  v.normalized_volume = v.sasakian_volume / sphere_volume(geo.dim());
  v.einstein_hilbert = 8 * n * (n - 1) * two_pi_n * (xi(0) - (n - 1)) * v.polytope_volume;
  return v;
}

Rational normalized_volume_exact(const ConeGeometry& geo, const RatVector& xi) {
  check_dim(geo, xi.size());
  Rational scale = 1;
  for (std::size_t k = 1; k <= geo.dim(); ++k) scale *= static_cast<long>(2 * k);
  return scale * moments<Rational>(geo, xi, 0).volume;
}

Eigen::VectorXd vol_gradient(const ConeGeometry& geo, const Eigen::VectorXd& xi) {
  check_dim(geo, static_cast<std::size_t>(xi.size()));
  const std::size_t n = geo.dim();
  auto m = moments<double>(geo, to_std(xi), 1);
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    g(static_cast<Eigen::Index>(i)) = -2.0 * static_cast<double>(n + 1) * m.first[i];
  return g;
}

Eigen::MatrixXd vol_hessian(const ConeGeometry& geo, const Eigen::VectorXd& xi) {
  check_dim(geo, static_cast<std::size_t>(xi.size()));
  const std::size_t n = geo.dim();
  auto m = moments<double>(geo, to_std(xi), 2);
  const double c = 4.0 * static_cast<double>((n + 1) * (n + 2));
  Eigen::MatrixXd h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = c * m.second[i][k];
  return h;
}

RatVector vol_gradient_exact(const ConeGeometry& geo, const RatVector& xi) {
  check_dim(geo, xi.size());
  const std::size_t n = geo.dim();
  auto m = moments<Rational>(geo, xi, 1);
  RatVector g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = -2 * static_cast<long>(n + 1) * m.first[i];
  return g;
}

std::vector<RatVector> vol_hessian_exact(const ConeGeometry& geo, const RatVector& xi) {
  check_dim(geo, xi.size());
  const std::size_t n = geo.dim();
  auto m = moments<Rational>(geo, xi, 2);
  const long c = 4 * static_cast<long>((n + 1) * (n + 2));
  for (auto& row : m.second)
    for (auto& e : row) e *= c;
  return m.second;
}

Eigen::VectorXd restricted_gradient(const ConeGeometry& geo, const Eigen::VectorXd& xi) {
  Eigen::VectorXd g = vol_gradient(geo, xi);
  return g.tail(g.size() - 1);
}

Eigen::MatrixXd restricted_hessian(const ConeGeometry& geo, const Eigen::VectorXd& xi) {
  Eigen::MatrixXd h = vol_hessian(geo, xi);
  return h.bottomRightCorner(h.rows() - 1, h.cols() - 1);
}

std::vector<Rational> convergents(double x, long max_den) {
  std::vector<Rational> out;
  if (!std::isfinite(x)) return out;
  long h_prev = 1, h = static_cast<long>(std::floor(x));
  long k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  out.emplace_back(h, k);
  for (int iter = 0; iter < 64 && frac > 1e-300; ++iter) {
    double inv = 1.0 / frac;
    if (inv > 1e15) break;
    long a = static_cast<long>(std::floor(inv));
    frac = inv - static_cast<double>(a);
    long h_next = a * h + h_prev;
    long k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    Rational c(h, k);
    c.canonicalize();
    out.push_back(c);
  }
  return out;
}

std::size_t estimate_rank(const Eigen::VectorXd& xi, double tolerance) {
  const std::size_t n = static_cast<std::size_t>(xi.size());
  if (n == 0) return 0;
  if (xi.isZero()) return 0;
  const long bound = std::max<long>(
      2, static_cast<long>(std::pow(2.0e6, 1.0 / static_cast<double>(n)) / 2));
  const double scale = std::max(1.0, xi.cwiseAbs().maxCoeff());

  std::vector<IntVector> relations;
  std::vector<long> c(n, -bound);
  for (;;) {
    // Canonical sign: first nonzero coefficient positive.
    std::size_t first = 0;
    while (first < n && c[first] == 0) ++first;
    if (first < n && c[first] > 0) {
      double s = 0, l1 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        s += static_cast<double>(c[i]) * xi(static_cast<Eigen::Index>(i));
        l1 += static_cast<double>(std::abs(c[i]));
      }
      if (std::abs(s) <= tolerance * l1 * scale) {
        IntVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = c[i];
        relations.push_back(v);
        if (rank(relations) < relations.size()) relations.pop_back();
        if (relations.size() + 1 == n) break;
      }
    }
    std::size_t pos = 0;
    while (pos < n && c[pos] == bound) c[pos++] = -bound;
    if (pos == n) break;
    ++c[pos];
  }
  return n - relations.size();
}

namespace {

struct SliceProblem {
  const ConeGeometry& geo;
  double n;

  Eigen::VectorXd lift(const Eigen::VectorXd& x) const {
    Eigen::VectorXd xi(x.size() + 1);
    xi(0) = n;
    xi.tail(x.size()) = x;
    return xi;
  }

  // Largest step in (0, 1] keeping every <r_j, xi> above 1% of its current
  // value (fraction-to-boundary).
  double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) const {
    Eigen::VectorXd h = geo.rays_d() * lift(x);
    Eigen::VectorXd dh = geo.rays_d().rightCols(dx.size()) * dx;
    double alpha = 1.0;
    for (Eigen::Index j = 0; j < h.size(); ++j)
      if (dh(j) < 0) alpha = std::min(alpha, -0.99 * h(j) / dh(j));
    return alpha;
  }
};

// Analytic center of the slice polytope, minimizing -sum_j log <r_j, xi>.
Eigen::VectorXd barrier_center(const SliceProblem& sp, Eigen::VectorXd x) {
  const Eigen::MatrixXd r = sp.geo.rays_d().rightCols(x.size());
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::VectorXd h = sp.geo.rays_d() * sp.lift(x);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (Eigen::Index j = 0; j < h.size(); ++j) {
      Eigen::VectorXd rj = r.row(j).transpose();
      g -= rj / h(j);
      hess += rj * rj.transpose() / (h(j) * h(j));
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    if (ldlt.info() != Eigen::Success) break;
    Eigen::VectorXd dx = -ldlt.solve(g);
    double decrement = std::sqrt(std::max(0.0, -g.dot(dx)));
    if (decrement < 1e-6) break;
    double alpha = std::min(sp.max_step(x, dx), 1.0 / (1.0 + decrement));
    x += alpha * dx;
  }
  return x;
}

std::vector<std::vector<Rational>> rational_candidates(const Eigen::VectorXd& x,
                                                        long max_den) {
  std::vector<std::vector<Rational>> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double tol = 1e-9 * std::max(1.0, std::abs(x(i)));
    std::vector<Rational> close;
    for (const auto& c : convergents(x(i), max_den))
      if (std::abs(c.get_d() - x(i)) <= tol) close.push_back(c);
    out.push_back(std::move(close));
  }
  return out;
}

}  // namespace

MinimizationResult minimize_reeb(const GorensteinCone& cone, const MinimizeOptions& opts) {
  if (!cone.gorenstein()) {
    throw Error(ErrorCode::NotGorenstein,
                "cone is l-Gorenstein with l = " + cone.height.get_str() +
                    "; Reeb minimization needs l = 1");
  }
  const ConeGeometry geo(cone.normalized);
  const std::size_t n = geo.dim();
  if (n < 2) throw Error(ErrorCode::WrongDimension, "Reeb minimization needs n >= 2");
  SliceProblem sp{geo, static_cast<double>(n)};

  Eigen::VectorXd x;
  if (opts.seed) {
    if (static_cast<std::size_t>(opts.seed->size()) != n || !geo.is_interior(*opts.seed)) {
      throw Error(ErrorCode::ReebNotInterior, "seed is not an interior Reeb vector");
    }
    x = opts.seed->tail(n - 1);
  } else {
    // (n/d) sum_a v_a lies in the interior of C with first coordinate n.
    Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (const auto& v : cone.normalized.normals())
      for (std::size_t i = 0; i < n; ++i) s(static_cast<Eigen::Index>(i)) += v[i].get_d();
    s *= static_cast<double>(n) / static_cast<double>(cone.normalized.num_normals());
    x = barrier_center(sp, s.tail(n - 1));
  }

  MinimizationResult res;
  std::size_t polish = 0;
  double gnorm = 0;
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    Eigen::VectorXd xi = sp.lift(x);
    Eigen::VectorXd g = restricted_gradient(geo, xi);
    gnorm = g.norm();
    if (gnorm <= opts.gradient_tolerance) {
      // A few extra full Newton steps push the iterate to working precision,
      // which the rational certification relies on.
      if (++polish > 3) break;
    }
    Eigen::MatrixXd h = restricted_hessian(geo, xi);
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    Eigen::VectorXd dx = llt.info() == Eigen::Success ? Eigen::VectorXd(-llt.solve(g))
                                                      : Eigen::VectorXd(-g);
    if (dx.norm() <= 1e-15 * std::max(1.0, x.norm())) break;
    double alpha = sp.max_step(x, dx);
    const double f0 = vol_functional(geo, xi).polytope_volume;
    const double slope = g.dot(dx);
    if (polish == 0) {
      while (alpha > 1e-12) {
        double f1 = vol_functional(geo, sp.lift(x + alpha * dx)).polytope_volume;
        if (f1 <= f0 + 1e-4 * alpha * slope) break;
        alpha *= 0.5;
      }
      if (alpha <= 1e-12) break;
    } else {
      Eigen::VectorXd trial = x + alpha * dx;
      if (restricted_gradient(geo, sp.lift(trial)).norm() >= gnorm) break;
    }
    x += alpha * dx;
  }

  Eigen::VectorXd xi = sp.lift(x);
  res.gradient_norm = restricted_gradient(geo, xi).norm();
  if (res.gradient_norm > opts.gradient_tolerance) {
    throw Error(ErrorCode::ConvergenceFailure,
                "Newton iteration stalled after " + std::to_string(res.iterations) +
                    " iterations with gradient norm " + std::to_string(res.gradient_norm));
  }
  res.xi_star = xi;
  Eigen::MatrixXd b_inv(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  IntMatrix inv = unimodular_inverse(cone.basis_change);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      b_inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = inv(i, k).get_d();
  res.xi_star_input_basis = b_inv * xi;

  VolumeValues v = vol_functional(geo, xi);
  res.volume = v.sasakian_volume;
  res.normalized_volume = v.normalized_volume;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(restricted_hessian(geo, xi));
  res.hessian_min_eigenvalue = eig.eigenvalues().minCoeff();
  res.rank_estimate = estimate_rank(xi);

  if (opts.certify) {
    auto cands = rational_candidates(x, opts.max_denominator);
    bool all_found = std::all_of(cands.begin(), cands.end(),
                                 [](const auto& c) { return !c.empty(); });
    std::size_t combos = 1;
    for (const auto& c : cands) combos *= std::max<std::size_t>(1, c.size());
    if (all_found && combos <= 64) {
      for (std::size_t code = 0; code < combos && !res.xi_exact; ++code) {
        RatVector q(n);
        q[0] = static_cast<long>(n);
        std::size_t rest = code;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          q[i + 1] = cands[i][rest % cands[i].size()];
          rest /= cands[i].size();
        }
        if (!geo.is_interior(q)) continue;
        RatVector g = vol_gradient_exact(geo, q);
        if (std::all_of(g.begin() + 1, g.end(), [](const Rational& e) { return e == 0; })) {
          res.xi_exact = q;
        }
      }
    }
    if (res.xi_exact) {
      res.regularity = Regularity::QuasiRegular;
      res.normalized_volume_exact = normalized_volume_exact(geo, *res.xi_exact);
      res.rank_estimate = 1;
    } else {
      res.regularity = res.rank_estimate > 1 ? Regularity::Irregular : Regularity::Undetermined;
    }
  }
  return res;
}

CanonicalMetric canonical_metric_eval(const MomentCone& cone, const Eigen::VectorXd& xi,
                                      const Eigen::VectorXd& y) {
  const auto n = static_cast<Eigen::Index>(cone.dim());
  if (xi.size() != n || y.size() != n) {
    throw Error(ErrorCode::WrongDimension, "xi and y must have the cone dimension");
  }
  ConeGeometry geo(cone);
  if (!geo.is_interior(xi)) {
    throw Error(ErrorCode::ReebNotInterior, "Reeb vector is not in the interior of C");
  }
  std::vector<Eigen::VectorXd> normals;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  for (const auto& v : cone.normals()) {
    Eigen::VectorXd e(n);
    for (Eigen::Index i = 0; i < n; ++i) e(i) = v[static_cast<std::size_t>(i)].get_d();
    normals.push_back(e);
    sum += e;
  }
  auto hessian_at = [&](const Eigen::VectorXd& pt) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (const auto& v : normals) {
      double l = v.dot(pt);
      if (l <= 1e-12 * pt.norm() * v.norm()) {
        throw Error(ErrorCode::BoundaryPoint,
                    "y lies on (or outside) a facet of the moment cone");
      }
      g += 0.5 * v * v.transpose() / l;
    }
    g += 0.5 * xi * xi.transpose() / xi.dot(pt);
    g -= 0.5 * sum * sum.transpose() / sum.dot(pt);
    return g;
  };

  CanonicalMetric out;
  out.hessian = hessian_at(y);
  Eigen::LLT<Eigen::MatrixXd> llt(out.hessian);
  out.positive_definite = llt.info() == Eigen::Success;
  out.metric = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  out.metric.topLeftCorner(n, n) = out.hessian;
  out.metric.bottomRightCorner(n, n) = out.hessian.inverse();
  out.reeb_reconstruction = 2 * out.hessian * y;
  out.reeb_error = (out.reeb_reconstruction - xi).cwiseAbs().maxCoeff();
  out.cone_norm_error = std::abs(4 * y.dot(out.hessian * y) - 2 * xi.dot(y));
  out.homogeneity_error = (2 * hessian_at(2 * y) - out.hessian).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace reebmin
