#pragma once

// Necessary conditions for a Sasaki-Einstein metric with the canonical Reeb
// vector field on the link of a weighted homogeneous hypersurface singularity
// (Bishop volume bound, Lichnerowicz eigenvalue bound), and the smoothness
// test for joins of quasi-regular Sasaki-Einstein spaces.
//
// "unobstructed" never means existence; it means the test is silent.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "reebmin/latcore.hpp"
#include "reebmin/links.hpp"

namespace reebmin {

class WeightedHS {
 public:
  /// Weights are divided by their gcd (which must then divide the degree);
  /// `rescaled()` reports whether that happened.
  WeightedHS(std::vector<Integer> weights, Integer degree);

  static WeightedHS from_link(const BPExponents& a);

  const std::vector<Integer>& weights() const { return w_; }
  const Integer& degree() const { return d_; }
  std::size_t n() const { return w_.size() - 1; }
  Integer weight_sum() const;
  Integer weight_product() const;
  Integer min_weight() const;
  bool fano() const { return degree() < weight_sum(); }
  bool rescaled() const { return rescaled_ != 1; }
  const Integer& rescale_factor() const { return rescaled_; }

 private:
  std::vector<Integer> w_;
  Integer d_;
  Integer rescaled_ = 1;
};

struct HsVolume {
  double volume = 0;    // vol(S, g)
  Rational normalized;  // vol(S) / vol(S^{2n-1}) = d(|w|-d)^n / (w n^n)
};

HsVolume hs_volume(const WeightedHS& h);

enum class Obstruction { Unobstructed, UnobstructedMarginal, Obstructed };
std::string to_string(Obstruction o);

struct BishopResult {
  Obstruction verdict = Obstruction::Unobstructed;
  Integer lhs;  // d (|w| - d)^n
  Integer rhs;  // w n^n
};

BishopResult bishop_check(const WeightedHS& h);

struct LichnerowiczResult {
  Obstruction verdict = Obstruction::Unobstructed;
  std::size_t witness = 0;        // coordinate with the smallest Reeb charge
  Rational lambda;                // n w_min / (|w| - d)
  Rational nu;                    // lambda (lambda + 2(n-1))
  std::vector<Rational> charges;  // n w_i / (|w| - d) for every coordinate
};

LichnerowiczResult lichnerowicz_check(const WeightedHS& h);

/// Real-valued forms of the two inequalities (weights and degree may be any
/// positive reals with d < |w|).
bool bishop_obstructed_real(const std::vector<double>& w, double d);
bool lichnerowicz_obstructed_real(const std::vector<double>& w, double d);

struct BishopLichReport {
  std::size_t samples = 0;
  std::size_t bishop_obstructed = 0;
  std::size_t lichnerowicz_obstructed = 0;
  std::size_t counterexamples = 0;  // Bishop obstructed but Lichnerowicz not
};

/// Samples random real weight vectors (n in {3,4,5}) and checks that every
/// Bishop-obstructed sample is also Lichnerowicz-obstructed.
BishopLichReport bishop_implies_lich_property(std::size_t samples, std::uint64_t seed);

/// Flags for the LinkVerdict of a Brieskorn-Pham link (derived weights).
ObstructionFlags obstruction_flags(const BPExponents& a);

struct JoinFactor {
  long order = 1;        // ord(Z)
  long fano_index = 1;   // I(Z)
  long n = 1;            // the factor has dimension 2n - 1
};

struct JoinResult {
  bool smooth = false;
  long dimension = 0;
  long l1 = 0, l2 = 0;  // relative Fano indices
  long gcd_value = 0;   // gcd(ord(Z1) l2, ord(Z2) l1)
};

JoinResult join_smooth(const JoinFactor& f1, const JoinFactor& f2);

}  // namespace reebmin
