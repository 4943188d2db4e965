#pragma once

// Explicit Y^{p,q} Sasaki-Einstein metrics in local coordinates
// (theta, phi, y, psi, alpha), a finite-difference Ricci verifier, and the
// L^{a,b,c} admissibility test with its toric cone.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>

#include "reebmin/cones.hpp"
#include "reebmin/latcore.hpp"

namespace reebmin {

/// r + s * sqrt(radicand), kept exact.
struct QuadraticSurd {
  Rational rational_part;
  Rational coefficient;
  Integer radicand;

  double value() const;
  std::string str() const;
};

/// a_{p,q} = 1/2 - (p^2 - 3q^2) sqrt(4p^2 - 3q^2) / (4p^3).
QuadraticSurd apq_exact(long p, long q);
double apq(long p, long q);

class YpqParams {
 public:
  YpqParams(long p, long q);

  long p() const { return p_; }
  long q() const { return q_; }
  double a() const { return a_; }
  double y1() const { return y1_; }
  double y2() const { return y2_; }
  double y3() const { return y3_; }

  double w(double y) const { return 2 * (a_ - y * y) / (1 - y); }
  double qfun(double y) const { return (a_ - 3 * y * y + 2 * y * y * y) / (a_ - y * y); }
  double f(double y) const { return (a_ - 2 * y + y * y) / (6 * (a_ - y * y)); }

 private:
  long p_, q_;
  double a_;
  double y1_, y2_, y3_;
};

/// Roots of 2y^3 - 3y^2 + a = 0 in ascending order (trigonometric form plus
/// one Newton step each); requires 0 < a < 1.
std::array<double, 3> cubic_roots(double a);

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Coordinate order (theta, phi, y, psi, alpha).
struct ChartPoint {
  double theta = 0, phi = 0, y = 0, psi = 0, alpha = 0;

  Vec5 vec() const { return (Vec5() << theta, phi, y, psi, alpha).finished(); }
  static ChartPoint from(const Vec5& v) { return {v(0), v(1), v(2), v(3), v(4)}; }
};

Mat5 metric_eval(const YpqParams& Y, const ChartPoint& x);

/// The Reeb vector field 3 d_psi - (1/2) d_alpha in chart components.
Vec5 ypq_reeb();

/// Random interior points with theta in [0.2, pi-0.2] and y at least 5% of
/// (y2 - y1) away from either root.
ChartPoint sample_interior(const YpqParams& Y, std::mt19937_64& rng);

template <int N>
using MetricFn = std::function<Eigen::Matrix<double, N, N>(const Eigen::Matrix<double, N, 1>&)>;

/// Ricci tensor of a metric given in closed form, from central differences:
/// Christoffel symbols use differences of g, Ricci uses differences of the
/// Christoffel symbols. `richardson` combines steps h and h/2.
template <int N>
Eigen::Matrix<double, N, N> ricci_fd(const MetricFn<N>& g, const Eigen::Matrix<double, N, 1>& x,
                                     double h, bool richardson = true);

extern template Eigen::Matrix<double, 5, 5> ricci_fd<5>(const MetricFn<5>&, const Vec5&, double,
                                                        bool);
extern template Eigen::Matrix<double, 3, 3> ricci_fd<3>(const MetricFn<3>&,
                                                        const Eigen::Vector3d&, double, bool);

/// Ricci tensor of the Y^{p,q} metric; throws StepTooLarge unless the point
/// keeps a margin of 10h from theta in {0, pi} and y in {y1, y2}.
Mat5 ypq_ricci(const YpqParams& Y, const ChartPoint& x, double h, bool richardson = true);

/// (L_xi g)_ij = xi^k d_k g_ij for the constant-coefficient Reeb field, by
/// central differences.
Mat5 ypq_lie_derivative(const YpqParams& Y, const ChartPoint& x, double h);

struct EinsteinReport {
  std::size_t samples = 0;
  double max_einstein_residual = 0;  // max |Ric - 4g|_inf
  double max_killing_residual = 0;   // max |L_xi g|_inf
  double max_eta_residual = 0;       // max |g(xi, xi) - 1|
  double max_ricci_reeb_residual = 0;  // max |Ric(xi, xi) - 4|
  double min_metric_eigenvalue = 0;
};

EinsteinReport verify_einstein(const YpqParams& Y, std::size_t samples, double h,
                               std::uint64_t seed);

struct QuasiRegular {
  long m;
};
struct Irregular {};
using YpqRegularity = std::variant<QuasiRegular, Irregular>;

/// Quasi-regular iff 4p^2 - 3q^2 is a perfect square m^2.
YpqRegularity quasiregular_check(long p, long q);

struct LabcParams {
  long a = 0, b = 0, c = 0, d = 0;
};

struct LabcVerdict {
  bool valid = false;
  LabcParams params;
  std::string reason;  // empty when valid
};

LabcVerdict labc_admissible(long a, long b, long c);
LabcParams ypq_embed(long p, long q);

/// Gale dual of the charge row (a, b, -c, -d), Gorenstein-normalized.
GorensteinCone labc_cone(const LabcParams& L);

}  // namespace reebmin
