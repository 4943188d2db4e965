#include "reebmin/cones.hpp"

#include <algorithm>
#include <set>

#include "reebmin/error.hpp"

namespace reebmin {

namespace {

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Pick the first `n` linearly independent rows, in order.
std::vector<std::size_t> independent_rows(const std::vector<IntVector>& rows,
                                          std::size_t n) {
  std::vector<std::size_t> chosen;
  std::vector<IntVector> basis;
  for (std::size_t i = 0; i < rows.size() && chosen.size() < n; ++i) {
    basis.push_back(rows[i]);
    if (rank(basis) == basis.size()) {
      chosen.push_back(i);
    } else {
      basis.pop_back();
    }
  }
  return chosen;
}

struct DDRay {
  IntVector ray;
  std::vector<bool> tight;  // over constraints processed so far
};

}  // namespace

std::vector<IntVector> double_description(const std::vector<IntVector>& normals) {
  if (normals.empty()) throw Error(ErrorCode::NotStrictlyConvex, "no normals");
  const std::size_t n = normals.front().size();
  std::vector<std::size_t> basis = independent_rows(normals, n);
  if (basis.size() != n) {
    throw Error(ErrorCode::NotStrictlyConvex,
                "normals do not span: the cone contains a line");
  }

  // Order of insertion: the basis rows first, then everything else.
  std::vector<std::size_t> order = basis;
  for (std::size_t i = 0; i < normals.size(); ++i)
    if (std::find(basis.begin(), basis.end(), i) == basis.end()) order.push_back(i);

  // Initial simplicial cone: columns of the inverse of the basis block.
  std::vector<RatVector> block(n, RatVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) block[i][j] = normals[basis[i]][j];
  std::vector<DDRay> rays;
  for (std::size_t k = 0; k < n; ++k) {
    RatVector e(n, Rational(0)), x;
    e[k] = 1;
    solve_rational(block, e, x);
    DDRay r{clear_denominators(x), std::vector<bool>(n, true)};
    r.tight[k] = false;
    rays.push_back(std::move(r));
  }

  for (std::size_t step = n; step < order.size(); ++step) {
    const IntVector& v = normals[order[step]];
    std::vector<Integer> s(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) s[r] = dot(v, rays[r].ray);

    std::vector<DDRay> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (s[r] < 0) continue;
      DDRay kept = rays[r];
      kept.tight.push_back(s[r] == 0);
      next.push_back(std::move(kept));
    }
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (s[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (s[q] >= 0) continue;
        std::vector<bool> common(step);
        std::size_t count = 0;
        for (std::size_t c = 0; c < step; ++c) {
          common[c] = rays[p].tight[c] && rays[q].tight[c];
          count += common[c];
        }
        if (count + 2 < n) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          bool contains = true;
          for (std::size_t c = 0; c < step && contains; ++c)
            if (common[c] && !rays[r].tight[c]) contains = false;
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        IntVector combo(n);
        for (std::size_t i = 0; i < n; ++i)
          combo[i] = s[p] * rays[q].ray[i] - s[q] * rays[p].ray[i];
        common.push_back(true);
        next.push_back({primitive_part(combo), std::move(common)});
      }
    }
    rays = std::move(next);
  }

  std::vector<IntVector> out;
  for (auto& r : rays) out.push_back(std::move(r.ray));
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MomentCone validate_cone(std::vector<IntVector> normals) {
  if (normals.empty()) throw Error(ErrorCode::NotStrictlyConvex, "no normals given");
  const std::size_t n = normals.front().size();
  if (n == 0) throw Error(ErrorCode::WrongDimension, "normals have dimension 0");
  for (std::size_t a = 0; a < normals.size(); ++a) {
    if (normals[a].size() != n) {
      throw Error(ErrorCode::WrongDimension,
                  "normal " + std::to_string(a) + " has the wrong length");
    }
    if (!is_primitive(normals[a])) {
      throw Error(ErrorCode::NonPrimitive,
                  "normal " + std::to_string(a) + " " + to_string(normals[a]) +
                      " is not primitive");
    }
  }
  if (rank(normals) != n) {
    throw Error(ErrorCode::NotStrictlyConvex,
                "normals do not span: the cone contains a line");
  }
  std::vector<IntVector> rays = double_description(normals);
  if (rank(rays) != n) {
    throw Error(ErrorCode::NotStrictlyConvex,
                "the moment cone is not full-dimensional");
  }
  for (std::size_t a = 0; a < normals.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b)
      if (normals[a] == normals[b]) {
        throw Error(ErrorCode::RedundantNormal,
                    "normal " + std::to_string(a) + " duplicates normal " +
                        std::to_string(b));
      }
    std::vector<IntVector> on_facet;
    for (const auto& r : rays)
      if (dot(normals[a], r) == 0) on_facet.push_back(r);
    if (rank(on_facet) + 1 != n) {
      throw Error(ErrorCode::RedundantNormal,
                  "normal " + std::to_string(a) + " " + to_string(normals[a]) +
                      " does not define a facet");
    }
  }
  MomentCone cone;
  cone.dim_ = n;
  cone.normals_ = std::move(normals);
  cone.rays_ = std::move(rays);
  return cone;
}

std::vector<IntVector> dual_cone(const MomentCone& cone) { return cone.rays(); }

GorensteinCone gorenstein_normalize(const MomentCone& cone) {
  const std::size_t n = cone.dim();
  std::vector<RatVector> a;
  for (const auto& v : cone.normals()) a.emplace_back(v.begin(), v.end());
  RatVector ones(cone.num_normals(), Rational(1)), u0;
  if (!solve_rational(a, ones, u0)) {
    throw Error(ErrorCode::NotQGorenstein,
                "no covector takes a common value on all normals");
  }
  Integer height = 1;
  for (const auto& x : u0) height = lcm(height, x.get_den());
  IntVector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = Rational(u0[i] * height).get_num();

  IntMatrix b = complete_to_unimodular(u);
  std::vector<IntVector> transformed;
  for (const auto& v : cone.normals()) transformed.push_back(b * v);
  return {cone, b, validate_cone(std::move(transformed)), height};
}

ToricTopology topology(const MomentCone& cone) {
  IntMatrix m = IntMatrix::from_rows(cone.normals(), cone.dim());
  ToricTopology t;
  for (const auto& f : smith_normal_form(m).invariant_factors())
    if (f > 1) t.pi1_invariants.push_back(f);
  t.pi2_rank = cone.num_normals() - cone.dim();
  return t;
}

SmaleType smale_type(const MomentCone& cone) {
  if (cone.dim() != 3) {
    throw Error(ErrorCode::WrongDimension,
                "Smale classification needs a 3-dimensional cone (5-manifold link)");
  }
  ToricTopology t = topology(cone);
  if (!t.simply_connected()) {
    throw Error(ErrorCode::NotSimplyConnected, "link is not simply connected");
  }
  SmaleType s;
  s.k = t.pi2_rank;
  if (s.k == 0) {
    s.label = "S^5";
  } else if (s.k == 1) {
    s.label = "S^2xS^3";
  } else {
    s.label = "#" + std::to_string(s.k) + "(S^2xS^3)";
  }
  return s;
}

namespace {

using Face = std::vector<std::size_t>;

struct Triangulator {
  const MomentCone& cone;
  std::vector<std::vector<bool>> tight;  // tight[a][j]: <r_j, v_a> == 0

  std::size_t face_rank(const Face& f) const {
    std::vector<IntVector> vs;
    for (auto j : f) vs.push_back(cone.rays()[j]);
    return rank(vs);
  }

  void run(const Face& face, std::size_t k, std::vector<Face>& out) const {
    if (face.size() == k) {
      out.push_back(face);
      return;
    }
    const std::size_t apex = face.front();
    std::set<Face> facets;
    for (std::size_t a = 0; a < tight.size(); ++a) {
      Face g;
      for (auto j : face)
        if (tight[a][j]) g.push_back(j);
      if (g.size() == face.size() || g.size() + 1 < k) continue;
      if (std::find(g.begin(), g.end(), apex) != g.end()) continue;
      if (face_rank(g) + 1 != k) continue;
      facets.insert(std::move(g));
    }
    for (const auto& g : facets) {
      std::vector<Face> sub;
      run(g, k - 1, sub);
      for (auto& s : sub) {
        s.insert(s.begin(), apex);
        out.push_back(std::move(s));
      }
    }
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> triangulate(const MomentCone& cone) {
  Triangulator t{cone, {}};
  for (const auto& v : cone.normals()) {
    std::vector<bool> row;
    for (const auto& r : cone.rays()) row.push_back(dot(v, r) == 0);
    t.tight.push_back(std::move(row));
  }
  Face all(cone.rays().size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  std::vector<Face> out;
  t.run(all, cone.dim(), out);
  return out;
}

}  // namespace reebmin
