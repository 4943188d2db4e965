#pragma once

// Rational polyhedral moment cones C* = { y : <y, v_a> >= 0 } given by their
// primitive inward normals v_a, and the invariants of the associated toric
// Sasakian link.

#include <cstddef>
#include <string>
#include <vector>

#include "reebmin/latcore.hpp"

namespace reebmin {

/// A validated moment cone: normals are primitive, irredundant, span Z^n-rationally,
/// and C* is full-dimensional and contains no line.
class MomentCone {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t num_normals() const { return normals_.size(); }
  const std::vector<IntVector>& normals() const { return normals_; }

  /// Extreme rays of C*, primitive, in deterministic (lexicographic) order.
  const std::vector<IntVector>& rays() const { return rays_; }

  friend MomentCone validate_cone(std::vector<IntVector> normals);

 private:
  std::size_t dim_ = 0;
  std::vector<IntVector> normals_;
  std::vector<IntVector> rays_;
};

MomentCone validate_cone(std::vector<IntVector> normals);

/// Extreme rays of the cone { y : <y, v> >= 0 for all v in normals } by the
/// double-description method. The cone must be pointed (normals of full rank).
std::vector<IntVector> double_description(const std::vector<IntVector>& normals);

/// Generators of the dual of the cone spanned by the normals, i.e. the
/// extreme rays of C*. Applying it to its own output returns the (irredundant)
/// normals back.
std::vector<IntVector> dual_cone(const MomentCone& cone);

struct GorensteinCone {
  MomentCone base;           // the cone as given
  IntMatrix basis_change;    // unimodular B; transformed normal = B * v_a
  MomentCone normalized;     // normals B * v_a, each with first coordinate height
  Integer height;            // common first coordinate l >= 1

  bool gorenstein() const { return height == 1; }
};

GorensteinCone gorenstein_normalize(const MomentCone& cone);

struct ToricTopology {
  std::vector<Integer> pi1_invariants;  // torsion coefficients > 1; empty = trivial
  std::size_t pi2_rank = 0;

  bool simply_connected() const { return pi1_invariants.empty(); }
};

ToricTopology topology(const MomentCone& cone);

struct SmaleType {
  std::size_t k = 0;  // number of S^2 x S^3 summands
  std::string label;
};

/// Diffeomorphism type of a simply connected toric Sasakian 5-manifold.
SmaleType smale_type(const MomentCone& cone);

/// Fan-style triangulation of C* into simplicial cones. Each entry lists n
/// indices into cone.rays(); simplices are generated by pulling the lowest
/// ray index of each face recursively, so the result is deterministic.
std::vector<std::vector<std::size_t>> triangulate(const MomentCone& cone);

}  // namespace reebmin
