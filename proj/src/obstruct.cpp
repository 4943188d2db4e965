#include "reebmin/obstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "reebmin/error.hpp"

namespace reebmin {

WeightedHS::WeightedHS(std::vector<Integer> weights, Integer degree)
    : w_(std::move(weights)), d_(std::move(degree)) {
  if (w_.size() < 2) throw Error(ErrorCode::BadWeights, "need at least two weights");
  for (const auto& w : w_)
    if (w <= 0) throw Error(ErrorCode::BadWeights, "weights must be positive");
  if (d_ <= 0) throw Error(ErrorCode::BadWeights, "degree must be positive");
  Integer g = content(w_);
  if (g != 1) {
    if (d_ % g != 0) {
      throw Error(ErrorCode::BadWeights,
                  "gcd of the weights (" + g.get_str() + ") does not divide the degree");
    }
    for (auto& w : w_) w /= g;
    d_ /= g;
    rescaled_ = g;
  }
}

WeightedHS WeightedHS::from_link(const BPExponents& a) {
  return WeightedHS(a.weights(), a.degree());
}

Integer WeightedHS::weight_sum() const {
  Integer s = 0;
  for (const auto& w : w_) s += w;
  return s;
}

Integer WeightedHS::weight_product() const {
  Integer p = 1;
  for (const auto& w : w_) p *= w;
  return p;
}

Integer WeightedHS::min_weight() const { return *std::min_element(w_.begin(), w_.end()); }

namespace {

void require_fano(const WeightedHS& h) {
  if (!h.fano()) {
    throw Error(ErrorCode::NotFano, "degree " + h.degree().get_str() +
                                        " is not below the weight sum " +
                                        h.weight_sum().get_str());
  }
}

Integer ipow(const Integer& base, std::size_t e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace

HsVolume hs_volume(const WeightedHS& h) {
  require_fano(h);
  const std::size_t n = h.n();
  const Integer excess = h.weight_sum() - h.degree();
  HsVolume out;
  out.normalized = Rational(h.degree() * ipow(excess, n),
                            h.weight_product() * ipow(Integer(static_cast<long>(n)), n));
  out.normalized.canonicalize();
  double fact = 1;
  for (std::size_t k = 2; k < n; ++k) fact *= static_cast<double>(k);
  out.volume = 2 * h.degree().get_d() / (h.weight_product().get_d() * fact) *
               std::pow(std::numbers::pi * excess.get_d() / static_cast<double>(n),
                        static_cast<double>(n));
  return out;
}

std::string to_string(Obstruction o) {
  switch (o) {
    case Obstruction::Unobstructed: return "unobstructed";
    case Obstruction::UnobstructedMarginal: return "unobstructed-marginal";
    case Obstruction::Obstructed: return "obstructed";
  }
  return "unobstructed";
}

BishopResult bishop_check(const WeightedHS& h) {
  require_fano(h);
  const std::size_t n = h.n();
  BishopResult r;
  r.lhs = h.degree() * ipow(h.weight_sum() - h.degree(), n);
  r.rhs = h.weight_product() * ipow(Integer(static_cast<long>(n)), n);
  r.verdict = r.lhs > r.rhs ? Obstruction::Obstructed : Obstruction::Unobstructed;
  return r;
}

LichnerowiczResult lichnerowicz_check(const WeightedHS& h) {
  require_fano(h);
  const long n = static_cast<long>(h.n());
  const Integer excess = h.weight_sum() - h.degree();
  LichnerowiczResult r;
  for (std::size_t i = 0; i < h.weights().size(); ++i) {
    Rational c(n * h.weights()[i], excess);
    c.canonicalize();
    r.charges.push_back(c);
    if (c < r.charges[r.witness]) r.witness = i;
  }
  r.lambda = r.charges[r.witness];
  r.nu = r.lambda * (r.lambda + 2 * (n - 1));
  if (r.lambda < 1) {
    r.verdict = Obstruction::Obstructed;
  } else if (r.lambda == 1) {
    // Equality is only reached by flat space; whether the marginal case is
    // ruled out depends on topology we do not check.
    r.verdict = Obstruction::UnobstructedMarginal;
  }
  return r;
}

bool bishop_obstructed_real(const std::vector<double>& w, double d) {
  const double n = static_cast<double>(w.size() - 1);
  double sum = 0, logprod = 0;
  for (double x : w) {
    sum += x;
    logprod += std::log(x);
  }
  return std::log(d) + n * std::log(sum - d) > logprod + n * std::log(n);
}

bool lichnerowicz_obstructed_real(const std::vector<double>& w, double d) {
  const double n = static_cast<double>(w.size() - 1);
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  return sum - d > n * *std::min_element(w.begin(), w.end());
}

BishopLichReport bishop_implies_lich_property(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_n(3, 5);
  // Log-uniform weights over three decades give a good share of samples with
  // one small weight, which is where both obstructions fire.
  std::uniform_real_distribution<double> log_w(std::log(0.01), std::log(10.0));
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  BishopLichReport rep;
  for (std::size_t s = 0; s < samples; ++s) {
    const int n = pick_n(rng);
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    for (auto& x : w) x = std::exp(log_w(rng));
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    const double d = sum * (0.02 + 0.97 * frac(rng));
    ++rep.samples;
    const bool b = bishop_obstructed_real(w, d);
    const bool l = lichnerowicz_obstructed_real(w, d);
    rep.bishop_obstructed += b;
    rep.lichnerowicz_obstructed += l;
    if (b && !l) ++rep.counterexamples;
  }
  return rep;
}

ObstructionFlags obstruction_flags(const BPExponents& a) {
  WeightedHS h = WeightedHS::from_link(a);
  ObstructionFlags f;
  if (!h.fano()) return f;
  f.bishop_obstructed = bishop_check(h).verdict == Obstruction::Obstructed;
  auto l = lichnerowicz_check(h);
  f.lichnerowicz_obstructed = l.verdict == Obstruction::Obstructed;
  f.lichnerowicz_marginal = l.verdict == Obstruction::UnobstructedMarginal;
  return f;
}

JoinResult join_smooth(const JoinFactor& f1, const JoinFactor& f2) {
  if (f1.order < 1 || f2.order < 1 || f1.fano_index < 1 || f2.fano_index < 1 || f1.n < 1 ||
      f2.n < 1) {
    throw Error(ErrorCode::BadParams, "join inputs must be positive integers");
  }
  JoinResult r;
  const long g = std::gcd(f1.fano_index, f2.fano_index);
  r.l1 = f1.fano_index / g;
  r.l2 = f2.fano_index / g;
  r.gcd_value = std::gcd(f1.order * r.l2, f2.order * r.l1);
  r.smooth = r.gcd_value == 1;
  r.dimension = 2 * (f1.n + f2.n) - 3;
  return r;
}

}  // namespace reebmin
