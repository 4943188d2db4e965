#include "reebmin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "reebmin/error.hpp"

namespace reebmin {

double QuadraticSurd::value() const {
  return rational_part.get_d() + coefficient.get_d() * std::sqrt(radicand.get_d());
}

std::string QuadraticSurd::str() const {
  if (coefficient == 0 || radicand == 0) return rational_part.get_str();
  std::ostringstream os;
  os << rational_part.get_str() << (coefficient < 0 ? " - " : " + ");
  Rational c = abs(coefficient);
  if (c != 1) os << c.get_str() << "*";
  os << "sqrt(" << radicand.get_str() << ")";
  return os.str();
}

namespace {

void require_pq(long p, long q) {
  if (!(0 < q && q < p) || std::gcd(p, q) != 1) {
    throw Error(ErrorCode::BadParams, "need coprime integers 0 < q < p, got (" +
                                          std::to_string(p) + "," + std::to_string(q) + ")");
  }
}

bool perfect_square(long v, long& root) {
  if (v < 0) return false;
  root = static_cast<long>(std::llround(std::sqrt(static_cast<double>(v))));
  while (root * root > v) --root;
  while ((root + 1) * (root + 1) <= v) ++root;
  return root * root == v;
}

}  // namespace

QuadraticSurd apq_exact(long p, long q) {
  require_pq(p, q);
  const long disc = 4 * p * p - 3 * q * q;
  QuadraticSurd s;
  s.rational_part = Rational(1, 2);
  s.coefficient = Rational(Integer(-(p * p - 3 * q * q)), Integer(4 * p * p * p));
  s.coefficient.canonicalize();
  long root = 0;
  if (perfect_square(disc, root)) {
    s.rational_part += s.coefficient * root;
    s.coefficient = 0;
    s.radicand = 0;
    return s;
  }
  long rad = disc;
  long outside = 1;
  for (long k = 2; k * k <= rad; ++k)
    while (rad % (k * k) == 0) {
      rad /= k * k;
      outside *= k;
    }
  s.coefficient *= outside;
  s.radicand = rad;
  return s;
}

double apq(long p, long q) {
  require_pq(p, q);
  const double pd = static_cast<double>(p), qd = static_cast<double>(q);
  return 0.5 - (pd * pd - 3 * qd * qd) * std::sqrt(4 * pd * pd - 3 * qd * qd) / (4 * pd * pd * pd);
}

std::array<double, 3> cubic_roots(double a) {
  if (!(a > 0 && a < 1)) throw Error(ErrorCode::BadParams, "cubic roots need 0 < a < 1");
  const double phi = std::acos(1 - 2 * a);
  std::array<double, 3> r{};
  for (int k = 0; k < 3; ++k) {
    double y = 0.5 + std::cos((phi - 2 * std::numbers::pi * k) / 3);
    const double dp = 6 * y * y - 6 * y;
    if (dp != 0) y -= (2 * y * y * y - 3 * y * y + a) / dp;
    r[static_cast<std::size_t>(k)] = y;
  }
  std::sort(r.begin(), r.end());
  return r;
}

YpqParams::YpqParams(long p, long q) : p_(p), q_(q), a_(apq(p, q)) {
  auto r = cubic_roots(a_);
  y1_ = r[0];
  y2_ = r[1];
  y3_ = r[2];
}

Mat5 metric_eval(const YpqParams& Y, const ChartPoint& x) {
  if (!(x.theta > 0 && x.theta < std::numbers::pi && x.y > Y.y1() && x.y < Y.y2())) {
    throw Error(ErrorCode::DegenerateChartPoint,
                "chart point must have 0 < theta < pi and y1 < y < y2");
  }
  const double c = std::cos(x.theta), s = std::sin(x.theta);
  const double A = (1 - x.y) / 6;
  const double W = Y.w(x.y), Q = Y.qfun(x.y), F = Y.f(x.y);
  const double B = 1 / (W * Q), C = Q / 9;

  Mat5 g = Mat5::Zero();
  g(0, 0) = A;
  g(1, 1) = A * s * s + C * c * c + W * c * c * F * F;
  g(2, 2) = B;
  g(3, 3) = C + W * F * F;
  g(4, 4) = W;
  g(1, 3) = g(3, 1) = -C * c - W * F * F * c;
  g(1, 4) = g(4, 1) = -W * c * F;
  g(3, 4) = g(4, 3) = W * F;
  return g;
}

Vec5 ypq_reeb() { return (Vec5() << 0, 0, 0, 3, -0.5).finished(); }

ChartPoint sample_interior(const YpqParams& Y, std::mt19937_64& rng) {
  const double span = Y.y2() - Y.y1();
  std::uniform_real_distribution<double> theta(0.2, std::numbers::pi - 0.2);
  std::uniform_real_distribution<double> y(Y.y1() + 0.05 * span, Y.y2() - 0.05 * span);
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  ChartPoint pt;
  pt.theta = theta(rng);
  pt.phi = angle(rng);
  pt.y = y(rng);
  pt.psi = angle(rng);
  pt.alpha = angle(rng);
  return pt;
}

namespace {

template <int N>
using Christoffel = std::array<Eigen::Matrix<double, N, N>, N>;  // [i](j,k) = Gamma^i_jk

template <int N>
Christoffel<N> christoffel(const MetricFn<N>& g, const Eigen::Matrix<double, N, 1>& x, double h) {
  using Mat = Eigen::Matrix<double, N, N>;
  std::array<Mat, N> dg;
  for (int k = 0; k < N; ++k) {
    Eigen::Matrix<double, N, 1> e = Eigen::Matrix<double, N, 1>::Zero();
    e(k) = h;
    dg[static_cast<std::size_t>(k)] = (g(x + e) - g(x - e)) / (2 * h);
  }
  const Mat ginv = g(x).inverse();
  Christoffel<N> gamma;
  for (int i = 0; i < N; ++i) {
    Mat gi = Mat::Zero();
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double acc = 0;
        for (int l = 0; l < N; ++l)
          acc += ginv(i, l) * (dg[static_cast<std::size_t>(j)](l, k) +
                               dg[static_cast<std::size_t>(k)](l, j) -
                               dg[static_cast<std::size_t>(l)](j, k));
        gi(j, k) = 0.5 * acc;
      }
    gamma[static_cast<std::size_t>(i)] = gi;
  }
  return gamma;
}

template <int N>
Eigen::Matrix<double, N, N> ricci_single(const MetricFn<N>& g,
                                         const Eigen::Matrix<double, N, 1>& x, double h) {
  using Mat = Eigen::Matrix<double, N, N>;
  // dgamma[m][i](j,k) = d_m Gamma^i_jk
  std::array<Christoffel<N>, N> dgamma;
  for (int m = 0; m < N; ++m) {
    Eigen::Matrix<double, N, 1> e = Eigen::Matrix<double, N, 1>::Zero();
    e(m) = h;
    auto plus = christoffel<N>(g, x + e, h);
    auto minus = christoffel<N>(g, x - e, h);
    for (int i = 0; i < N; ++i)
      dgamma[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] =
          (plus[static_cast<std::size_t>(i)] - minus[static_cast<std::size_t>(i)]) / (2 * h);
  }
  const auto gamma = christoffel<N>(g, x, h);
  auto G = [&](int i, int j, int k) { return gamma[static_cast<std::size_t>(i)](j, k); };
  auto dG = [&](int m, int i, int j, int k) {
    return dgamma[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)](j, k);
  };
  Mat ric = Mat::Zero();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double r = 0;
      for (int k = 0; k < N; ++k) {
        r += dG(k, k, i, j) - dG(j, k, i, k);
        for (int l = 0; l < N; ++l) r += G(k, k, l) * G(l, i, j) - G(k, j, l) * G(l, i, k);
      }
      ric(i, j) = r;
    }
  return 0.5 * (ric + ric.transpose());
}

}  // namespace

template <int N>
Eigen::Matrix<double, N, N> ricci_fd(const MetricFn<N>& g, const Eigen::Matrix<double, N, 1>& x,
                                     double h, bool richardson) {
  if (!richardson) return ricci_single<N>(g, x, h);
  return (4 * ricci_single<N>(g, x, h / 2) - ricci_single<N>(g, x, h)) / 3;
}

template Eigen::Matrix<double, 5, 5> ricci_fd<5>(const MetricFn<5>&, const Vec5&, double, bool);
template Eigen::Matrix<double, 3, 3> ricci_fd<3>(const MetricFn<3>&, const Eigen::Vector3d&, double, bool);

namespace {

void require_margin(const YpqParams& Y, const ChartPoint& x, double h) {
  const double m = 10 * h;
  if (!(h > 0) || x.theta - m <= 0 || x.theta + m >= std::numbers::pi || x.y - m <= Y.y1() ||
      x.y + m >= Y.y2()) {
    throw Error(ErrorCode::StepTooLarge,
                "finite-difference step too large for the distance to the chart boundary");
  }
}

MetricFn<5> metric_fn(const YpqParams& Y) {
  return [&Y](const Vec5& v) { return metric_eval(Y, ChartPoint::from(v)); };
}

}  // namespace

Mat5 ypq_ricci(const YpqParams& Y, const ChartPoint& x, double h, bool richardson) {
  require_margin(Y, x, h);
  return ricci_fd<5>(metric_fn(Y), x.vec(), h, richardson);
}

Mat5 ypq_lie_derivative(const YpqParams& Y, const ChartPoint& x, double h) {
  require_margin(Y, x, h);
  const Vec5 xi = ypq_reeb();
  const Vec5 p = x.vec();
  Mat5 lie = Mat5::Zero();
  for (int k = 0; k < 5; ++k) {
    if (xi(k) == 0) continue;
    Vec5 e = Vec5::Zero();
    e(k) = h;
    lie += xi(k) * (metric_eval(Y, ChartPoint::from(p + e)) -
                    metric_eval(Y, ChartPoint::from(p - e))) / (2 * h);
  }
  return lie;
}

EinsteinReport verify_einstein(const YpqParams& Y, std::size_t samples, double h,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EinsteinReport rep;
  rep.samples = samples;
  rep.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
  const Vec5 xi = ypq_reeb();
  for (std::size_t s = 0; s < samples; ++s) {
    ChartPoint x = sample_interior(Y, rng);
    const Mat5 g = metric_eval(Y, x);
    const Mat5 ric = ypq_ricci(Y, x, h);
    rep.max_einstein_residual =
        std::max(rep.max_einstein_residual, (ric - 4 * g).cwiseAbs().maxCoeff());
    rep.max_killing_residual =
        std::max(rep.max_killing_residual, ypq_lie_derivative(Y, x, h).cwiseAbs().maxCoeff());
    rep.max_eta_residual = std::max(rep.max_eta_residual, std::abs(xi.dot(g * xi) - 1));
    rep.max_ricci_reeb_residual =
        std::max(rep.max_ricci_reeb_residual, std::abs(xi.dot(ric * xi) - 4));
    Eigen::SelfAdjointEigenSolver<Mat5> eig(g);
    rep.min_metric_eigenvalue = std::min(rep.min_metric_eigenvalue, eig.eigenvalues().minCoeff());
  }
  return rep;
}

YpqRegularity quasiregular_check(long p, long q) {
  require_pq(p, q);
  long m = 0;
  if (perfect_square(4 * p * p - 3 * q * q, m)) return QuasiRegular{m};
  return Irregular{};
}

LabcVerdict labc_admissible(long a, long b, long c) {
  LabcVerdict v;
  v.params = {a, b, c, a + b - c};
  const long d = v.params.d;
  if (a <= 0 || b <= 0 || c <= 0) {
    v.reason = "a, b, c must be positive";
  } else if (a > b) {
    v.reason = "need a <= b";
  } else if (c > b) {
    v.reason = "need c <= b";
  } else if (std::gcd(std::gcd(a, b), std::gcd(c, d)) != 1) {
    v.reason = "gcd(a,b,c,d) != 1";
  } else {
    for (long x : {a, b})
      for (long y : {c, d})
        if (std::gcd(x, y) != 1 && v.reason.empty()) {
          v.reason = "gcd(" + std::to_string(x) + "," + std::to_string(y) +
                     ") != 1: {a,b} must be coprime to {c,d}";
        }
  }
  v.valid = v.reason.empty();
  return v;
}

LabcParams ypq_embed(long p, long q) {
  require_pq(p, q);
  LabcVerdict v = labc_admissible(p - q, p + q, p);
  if (!v.valid) {
    throw Error(ErrorCode::BadParams, "embedded L^{a,b,c} is not admissible: " + v.reason);
  }
  return v.params;
}

GorensteinCone labc_cone(const LabcParams& L) {
  LabcVerdict v = labc_admissible(L.a, L.b, L.c);
  if (!v.valid) throw Error(ErrorCode::BadParams, "invalid L^{a,b,c}: " + v.reason);
  IntMatrix charges{{L.a, L.b, -L.c, -v.params.d}};
  return gorenstein_normalize(validate_cone(gale_dual(charges)));
}

}  // namespace reebmin
