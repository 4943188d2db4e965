#pragma once

// The volume functional on Reeb vectors of a toric Gorenstein cone, its exact
// derivatives, and its minimization over the slice <e_1, xi> = n.
//
// Conventions. Delta(xi) = C* ∩ { <y, xi> <= 1/2 }. The Sasakian volume is
// vol(S) = 2n (2 pi)^n vol(Delta(xi)), which makes the flat cone at its
// symmetric Reeb vector reproduce vol(S^{2n-1}) = 2 pi^n / (n-1)!, and the
// Einstein-Hilbert functional is I(xi) = 8n(n-1)(2 pi)^n [xi_1 - (n-1)] vol(Delta).
// On the slice xi_1 = n these satisfy I = 4(n-1) vol(S).

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reebmin/cones.hpp"
#include "reebmin/latcore.hpp"

namespace reebmin {

/// Triangulated moment cone prepared for repeated volume evaluations.
/// Delta(xi) is the union over simplicial cones sigma of the simplices with
/// apex 0 and vertices r_k / (2 <r_k, xi>), k in sigma; the combinatorics do
/// not depend on xi.
class ConeGeometry {
 public:
  explicit ConeGeometry(const MomentCone& cone);

  const MomentCone& cone() const { return cone_; }
  std::size_t dim() const { return cone_.dim(); }
  const std::vector<std::vector<std::size_t>>& simplices() const { return simplices_; }
  const std::vector<Integer>& simplex_dets() const { return abs_det_; }
  const Eigen::MatrixXd& rays_d() const { return rays_d_; }  // one ray per row

  bool is_interior(const RatVector& xi) const;
  bool is_interior(const Eigen::VectorXd& xi) const;
  /// min_j <r_j, xi> / |r_j|; positive iff xi is in the interior of C.
  double interior_margin(const Eigen::VectorXd& xi) const;

 private:
  MomentCone cone_;
  std::vector<std::vector<std::size_t>> simplices_;
  std::vector<Integer> abs_det_;
  Eigen::MatrixXd rays_d_;
};

/// Exact Delta(xi): vertex 0 is the origin, the rest lie on the
/// characteristic hyperplane H(xi) (one per extreme ray of C*). `simplices`
/// index into `vertices` and together with the origin triangulate Delta.
struct ReebPolytope {
  std::vector<RatVector> vertices;
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<IntVector> facet_normals;  // the cone normals, plus xi for H(xi)
};

ReebPolytope reeb_polytope(const ConeGeometry& geo, const RatVector& xi);
Rational polytope_volume(const ReebPolytope& p);

struct VolumeValues {
  double polytope_volume = 0;    // vol(Delta(xi))
  double sasakian_volume = 0;    // vol(S, g)
  double normalized_volume = 0;  // vol(S) / vol(S^{2n-1})
  double einstein_hilbert = 0;   // I(xi)
};

VolumeValues vol_functional(const ConeGeometry& geo, const Eigen::VectorXd& xi);

/// n! 2^n vol(Delta(xi)), i.e. vol(S)/vol(S^{2n-1}), in exact arithmetic.
Rational normalized_volume_exact(const ConeGeometry& geo, const RatVector& xi);
double sphere_volume(std::size_t n);  // vol(S^{2n-1}) = 2 pi^n / (n-1)!

// Derivatives of vol(Delta(xi)) in all n coordinates. They come from the
// first and second moments of Delta(xi), which equal (up to homogeneity
// factors) the facet integrals of y_i and y_i y_j over H(xi):
//   d vol / d xi_i          = -2(n+1)        * int_Delta y_i
//   d2 vol / d xi_i d xi_j  =  4(n+1)(n+2)  * int_Delta y_i y_j
Eigen::VectorXd vol_gradient(const ConeGeometry& geo, const Eigen::VectorXd& xi);
Eigen::MatrixXd vol_hessian(const ConeGeometry& geo, const Eigen::VectorXd& xi);
RatVector vol_gradient_exact(const ConeGeometry& geo, const RatVector& xi);
std::vector<RatVector> vol_hessian_exact(const ConeGeometry& geo, const RatVector& xi);

enum class Regularity { QuasiRegular, Irregular, Undetermined };
std::string to_string(Regularity r);

struct MinimizeOptions {
  double gradient_tolerance = 1e-10;
  std::size_t max_iterations = 200;
  bool certify = true;
  long max_denominator = 1000000;
  std::optional<Eigen::VectorXd> seed;  // starting xi (Gorenstein basis), xi_1 == n
};

struct MinimizationResult {
  Eigen::VectorXd xi_star;              // in the Gorenstein basis
  Eigen::VectorXd xi_star_input_basis;  // B^{-1} xi_star
  std::optional<RatVector> xi_exact;    // certified rational minimizer
  double volume = 0;                    // vol(S, g)
  double normalized_volume = 0;
  std::optional<Rational> normalized_volume_exact;
  Regularity regularity = Regularity::Undetermined;
  std::size_t rank_estimate = 0;        // heuristic, never a certificate
  std::size_t iterations = 0;
  double gradient_norm = 0;             // restricted to xi_1 = n
  double hessian_min_eigenvalue = 0;    // restricted to xi_1 = n
};

MinimizationResult minimize_reeb(const GorensteinCone& cone,
                                 const MinimizeOptions& opts = {});

/// Gradient/Hessian restricted to the slice xi_1 = n (drops coordinate 0).
Eigen::VectorXd restricted_gradient(const ConeGeometry& geo, const Eigen::VectorXd& xi);
Eigen::MatrixXd restricted_hessian(const ConeGeometry& geo, const Eigen::VectorXd& xi);

/// Continued-fraction convergents p/q of x with q <= max_den.
std::vector<Rational> convergents(double x, long max_den);

/// Dimension of the smallest rational subspace containing xi, estimated by
/// searching small integer relations among its coordinates.
std::size_t estimate_rank(const Eigen::VectorXd& xi, double tolerance = 1e-9);

struct CanonicalMetric {
  Eigen::MatrixXd hessian;          // G_ij of G_can + G_xi at y
  Eigen::MatrixXd metric;           // 2n x 2n block diag(G_ij, G^ij) in (y, phi)
  bool positive_definite = false;
  Eigen::VectorXd reeb_reconstruction;  // sum_j 2 G_ij y_j
  double reeb_error = 0;                // |reconstruction - xi|_inf
  double cone_norm_error = 0;           // |g(r d_r, r d_r) - 2<y, xi>|
  double homogeneity_error = 0;         // |2 G_ij(2y) - G_ij(y)|_inf
};

CanonicalMetric canonical_metric_eval(const MomentCone& cone, const Eigen::VectorXd& xi,
                                      const Eigen::VectorXd& y);

}  // namespace reebmin
