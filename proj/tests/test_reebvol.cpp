#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "reebmin/error.hpp"
#include "reebmin/metrics.hpp"
#include "reebmin/reebvol.hpp"
#include "support.hpp"

using namespace reebmin;
using oracle::iv;

namespace {

GorensteinCone gorenstein(const std::vector<IntVector>& normals) {
  return gorenstein_normalize(validate_cone(normals));
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::set<RatVector> vertex_set(const ReebPolytope& p) { return {p.vertices.begin(), p.vertices.end()}; }

// Unimodular integer matrix with first row e_1.
IntMatrix random_fixing_e1(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> e(-2, 2);
  std::uniform_int_distribution<std::size_t> idx(1, n - 1);
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  IntMatrix t = IntMatrix::identity(n);
  for (int step = 0; step < 6; ++step) {
    const std::size_t i = idx(rng), j = any(rng);
    if (i == j) continue;
    const long c = e(rng);
    for (std::size_t k = 0; k < n; ++k) t(i, k) += c * t(j, k);
  }
  return t;
}

}  // namespace

TEST_CASE("reeb polytope of the quadrant") {
  auto g = gorenstein({iv({1, 0}), iv({0, 1})});
  ConeGeometry geo(validate_cone({iv({1, 0}), iv({0, 1})}));
  auto p = reeb_polytope(geo, {2, 2});
  std::set<RatVector> expected{{0, 0}, {Rational(1, 4), 0}, {0, Rational(1, 4)}};
  CHECK(vertex_set(p) == expected);
  CHECK(polytope_volume(p) == Rational(1, 32));
  CHECK(g.height == 1);
}

TEST_CASE("reeb polytope of flat C^3 at (3,1,1)") {
  ConeGeometry geo(validate_cone(oracle::flat_normals(3)));
  RatVector xi{3, 1, 1};
  auto p = reeb_polytope(geo, xi);
  CHECK(p.vertices.size() == 4);
  CHECK(polytope_volume(p) == Rational(1, 48));
  CHECK(normalized_volume_exact(geo, xi) == 1);
  for (const auto& v : oracle::brute_force_vertices(oracle::flat_normals(3), xi))
    CHECK(vertex_set(p).count(v) == 1);
}

TEST_CASE("reeb polytope of the conifold at its minimizer") {
  ConeGeometry geo(validate_cone(oracle::conifold_normals()));
  RatVector xi{3, Rational(3, 2), Rational(3, 2)};
  auto p = reeb_polytope(geo, xi);
  CHECK(p.vertices.size() == 5);
  auto brute = oracle::brute_force_vertices(oracle::conifold_normals(), xi);
  CHECK(vertex_set(p) == brute);
  CHECK(normalized_volume_exact(geo, xi) == Rational(16, 27));
}

TEST_CASE("unit simplex volume") {
  ReebPolytope p;
  p.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  p.simplices = {{1, 2, 3}};
  CHECK(polytope_volume(p) == Rational(1, 6));
}

TEST_CASE("volume agrees with the cap-polygon oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.5, 2.5);
  for (const auto& normals : {oracle::conifold_normals(), oracle::hexagon_normals(),
                              oracle::ypq_normals(2, 1), oracle::ypq_normals(5, 2)}) {
    ConeGeometry geo(gorenstein(normals).normalized);
    int tested = 0;
    while (tested < 10) {
      Eigen::VectorXd xi = vec({3, u(rng), u(rng)});
      if (!geo.is_interior(xi)) continue;
      ++tested;
      const double got = vol_functional(geo, xi).normalized_volume;
      const double want =
          oracle::cap_normalized_volume_3d(geo.cone().normals(), Eigen::Vector3d(xi(0), xi(1), xi(2)));
      CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("normalization constants") {
  for (std::size_t n = 2; n <= 4; ++n) {
    ConeGeometry geo(validate_cone(oracle::flat_normals(n)));
    Eigen::VectorXd xi = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    xi(0) = static_cast<double>(n);
    auto v = vol_functional(geo, xi);
    CHECK(v.normalized_volume == doctest::Approx(1).epsilon(1e-12));
    CHECK(v.sasakian_volume == doctest::Approx(sphere_volume(n)).epsilon(1e-12));
  }
  CHECK(sphere_volume(3) == doctest::Approx(M_PI * M_PI * M_PI));
  CHECK(sphere_volume(2) == doctest::Approx(2 * M_PI * M_PI));
}

TEST_CASE("exact gradient vanishes at the conifold minimizer") {
  ConeGeometry geo(validate_cone(oracle::conifold_normals()));
  auto grad = vol_gradient_exact(geo, {3, Rational(3, 2), Rational(3, 2)});
  CHECK(grad[1] == 0);
  CHECK(grad[2] == 0);
  CHECK(grad[0] != 0);
}

TEST_CASE("exact and float gradients agree") {
  for (const auto& normals : {oracle::conifold_normals(), oracle::hexagon_normals()}) {
    ConeGeometry geo(gorenstein(normals).normalized);
    for (const RatVector& xi : {RatVector{3, Rational(6, 5), Rational(7, 5)},
                                RatVector{3, Rational(3, 2), Rational(4, 3)}}) {
      if (!geo.is_interior(xi)) continue;
      auto exact = vol_gradient_exact(geo, xi);
      Eigen::VectorXd x(3);
      for (int i = 0; i < 3; ++i) x(i) = xi[static_cast<std::size_t>(i)].get_d();
      auto g = vol_gradient(geo, x);
      for (int i = 0; i < 3; ++i) CHECK(std::abs(g(i) - exact[static_cast<std::size_t>(i)].get_d()) <= 1e-9);
      auto h_exact = vol_hessian_exact(geo, xi);
      auto h = vol_hessian(geo, x);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(std::abs(h(i, j) - h_exact[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d()) <=
                1e-9 * (1 + std::abs(h(i, j))));
    }
  }
}

TEST_CASE("hessian matches differences of the gradient") {
  ConeGeometry geo(gorenstein(oracle::hexagon_normals()).normalized);
  Eigen::VectorXd xi = vec({3, 0.1, 0.2});
  REQUIRE(geo.is_interior(xi));
  const double h = 1e-5;
  Eigen::MatrixXd hess = vol_hessian(geo, xi);
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
    e(j) = h;
    Eigen::VectorXd col = (vol_gradient(geo, xi + e) - vol_gradient(geo, xi - e)) / (2 * h);
    CHECK((col - hess.col(j)).norm() <= 1e-6 * hess.norm());
  }
}

TEST_CASE("points outside the cone are rejected") {
  ConeGeometry geo(validate_cone(oracle::conifold_normals()));
  CHECK_FALSE(geo.is_interior(RatVector{3, 4, 1}));
  CHECK_THROWS_AS(reeb_polytope(geo, {3, 4, 1}), Error);
}

TEST_CASE("flat cones minimize at (n,1,...,1)") {
  for (std::size_t n = 2; n <= 4; ++n) {
    auto r = minimize_reeb(gorenstein(oracle::flat_normals(n)));
    RatVector expected(n, 1);
    expected[0] = static_cast<long>(n);
    REQUIRE(r.xi_exact.has_value());
    CHECK(*r.xi_exact == expected);
    CHECK(r.regularity == Regularity::QuasiRegular);
    CHECK(r.normalized_volume == doctest::Approx(1).epsilon(1e-12));
    CHECK(r.normalized_volume_exact == Rational(1));
  }
}

TEST_CASE("flat C^3 minimizer agrees with a pattern search") {
  auto g = gorenstein(oracle::flat_normals(3));
  ConeGeometry geo(g.normalized);
  auto found = oracle::grid_minimize(geo, vec({3, 0.7, 1.6}));
  CHECK(found(1) == doctest::Approx(1).epsilon(1e-6));
  CHECK(found(2) == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("conifold minimizer is certified") {
  auto r = minimize_reeb(gorenstein(oracle::conifold_normals()));
  REQUIRE(r.xi_exact.has_value());
  CHECK(*r.xi_exact == RatVector{3, Rational(3, 2), Rational(3, 2)});
  CHECK(r.normalized_volume_exact == Rational(16, 27));
  CHECK(r.hessian_min_eigenvalue > 0);
  CHECK(r.gradient_norm <= 1e-10);
}

TEST_CASE("hexagon minimizer agrees with a pattern search") {
  auto g = gorenstein(oracle::hexagon_normals());
  ConeGeometry geo(g.normalized);
  auto r = minimize_reeb(g);
  auto found = oracle::grid_minimize(geo, r.xi_star + vec({0, 0.05, -0.04}));
  CHECK((found - r.xi_star).norm() <= 1e-6);
}

TEST_CASE("Y^{2,1} minimizer is irregular") {
  auto r = minimize_reeb(gorenstein(gale_dual(IntMatrix{{2, 2, -1, -3}})));
  CHECK_FALSE(r.xi_exact.has_value());
  CHECK(r.regularity == Regularity::Irregular);
  CHECK(r.rank_estimate == 2);
}

TEST_CASE("both Y^{2,1} charge vectors give the same minimum") {
  auto a = minimize_reeb(labc_cone(ypq_embed(2, 1)));
  auto b = minimize_reeb(gorenstein(gale_dual(IntMatrix{{2, 2, -1, -3}})));
  CHECK(a.normalized_volume == doctest::Approx(b.normalized_volume).epsilon(1e-12));
}

TEST_CASE("Y^{p,q} minimal volumes match the closed form") {
  for (auto [p, q] : {std::pair{2L, 1L}, {3L, 1L}, {3L, 2L}, {4L, 1L}, {4L, 3L}, {5L, 2L}, {7L, 3L}}) {
    auto r = minimize_reeb(gorenstein(oracle::ypq_normals(p, q)));
    CHECK(r.normalized_volume == doctest::Approx(oracle::ypq_volume_ratio(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("minimizer is unique across starting points") {
  for (const auto& normals : {oracle::hexagon_normals(), oracle::ypq_normals(3, 1)}) {
    auto g = gorenstein(normals);
    ConeGeometry geo(g.normalized);
    auto base = minimize_reeb(g);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2, 4);
    int tested = 0;
    while (tested < 10) {
      Eigen::VectorXd s = vec({3, u(rng), u(rng)});
      if (geo.interior_margin(s) < 0.05) continue;
      ++tested;
      MinimizeOptions opts;
      opts.seed = s;
      auto r = minimize_reeb(g, opts);
      CHECK((r.xi_star - base.xi_star).norm() <= 1e-8);
    }
  }
}

TEST_CASE("minimizer transforms with the basis") {
  std::mt19937_64 rng(23);
  for (const auto& normals : {oracle::hexagon_normals(), oracle::ypq_normals(2, 1)}) {
    auto base = minimize_reeb(gorenstein(normals));
    auto g = gorenstein(normals);
    for (int k = 0; k < 5; ++k) {
      IntMatrix b = random_fixing_e1(rng, 3);
      std::vector<IntVector> moved;
      for (const auto& v : g.normalized.normals()) moved.push_back(b * v);
      GorensteinCone h{validate_cone(moved), IntMatrix::identity(3), validate_cone(moved), 1};
      auto r = minimize_reeb(h);
      Eigen::MatrixXd bd(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) bd(i, j) = b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_d();
      CHECK((r.xi_star - bd * base.xi_star).norm() <= 1e-8);
      CHECK(r.normalized_volume == doctest::Approx(base.normalized_volume).epsilon(1e-12));
    }
  }
}

TEST_CASE("orbifold simplex cone has its closed-form minimizer") {
  auto r = minimize_reeb(gorenstein({iv({1, 0}), iv({1, 2})}));
  REQUIRE(r.xi_exact.has_value());
  CHECK((r.xi_star_input_basis - vec({2, 2})).norm() <= 1e-12);
  CHECK(r.normalized_volume_exact == Rational(1, 2));
}

TEST_CASE("non-Gorenstein cones are refused") {
  CHECK_THROWS_AS(minimize_reeb(gorenstein({iv({2, 1}), iv({1, 2})})), Error);
}

TEST_CASE("convergents and rank estimate") {
  auto c = convergents(0.75, 100);
  CHECK(std::find(c.begin(), c.end(), Rational(3, 4)) != c.end());
  auto pi = convergents(M_PI, 1000);
  CHECK(std::find(pi.begin(), pi.end(), Rational(355, 113)) != pi.end());
  CHECK(estimate_rank(vec({3, 1.5, 1.5})) == 1);
  CHECK(estimate_rank(vec({3, 1 + std::sqrt(2.0), 1})) == 2);
}

TEST_CASE("canonical metric on the quadrant") {
  auto c = validate_cone({iv({1, 0}), iv({0, 1})});
  auto m = canonical_metric_eval(c, vec({1, 1}), vec({1, 1}));
  CHECK(m.positive_definite);
  CHECK(m.reeb_error <= 1e-9);
  CHECK(m.cone_norm_error <= 1e-9);
  CHECK(m.homogeneity_error <= 1e-9);
}

TEST_CASE("canonical metric on the conifold") {
  auto c = validate_cone(oracle::conifold_normals());
  Eigen::VectorXd xi = vec({3, 1.5, 1.5});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 1);
  const auto rays = dual_cone(c);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
    for (const auto& r : rays) {
      const double w = u(rng);
      for (int i = 0; i < 3; ++i) y(i) += w * r[static_cast<std::size_t>(i)].get_d();
    }
    auto m = canonical_metric_eval(c, xi, y);
    CHECK(m.positive_definite);
    CHECK(m.reeb_error <= 1e-9);
    CHECK(m.cone_norm_error <= 1e-9);
    CHECK(m.homogeneity_error <= 1e-9);
  }
}

TEST_CASE("canonical metric refuses boundary points") {
  auto c = validate_cone({iv({1, 0}), iv({0, 1})});
  CHECK_THROWS_AS(canonical_metric_eval(c, vec({1, 1}), vec({0, 1})), Error);
}
