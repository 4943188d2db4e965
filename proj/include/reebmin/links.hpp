#pragma once

// Brieskorn-Pham links L(a) = { sum z_i^{a_i} = 0 } ∩ S^{2n+1}: homology type
// via the Brieskorn graph, the Fano condition, the BGK and Ghigi-Kollar
// existence criteria, the Milnor-fibre signature, and family enumeration.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reebmin/latcore.hpp"

namespace reebmin {

/// Exponents a_0..a_n (all >= 2) of a Brieskorn-Pham polynomial.
class BPExponents {
 public:
  explicit BPExponents(std::vector<long> a);

  const std::vector<long>& exponents() const { return a_; }
  std::size_t size() const { return a_.size(); }
  std::size_t n() const { return a_.size() - 1; }  // link has dimension 2n-1

  Integer degree() const;                 // d = lcm(a_i)
  std::vector<Integer> weights() const;   // w_i = d / a_i
  Integer weight_sum() const;             // |w|
  Integer weight_product() const;         // w = prod w_i
  Rational reciprocal_sum() const;        // sum 1/a_i

  std::string str() const;

 private:
  std::vector<long> a_;
};

/// Graph on the exponents with an edge whenever gcd(a_i, a_j) > 1.
struct BrieskornGraph {
  std::vector<long> labels;
  std::vector<std::vector<bool>> adjacent;
  std::vector<std::size_t> c_even;  // component holding the even labels, sorted

  std::size_t isolated_count() const;
};

BrieskornGraph brieskorn_graph(const BPExponents& a);

enum class HomologyType { IntegralSphere, RationalSphere, Other };
std::string to_string(HomologyType t);

HomologyType homology_classify(const BPExponents& a);

/// Integral homology sphere that is simply connected, i.e. a homotopy sphere.
/// Links are (n-2)-connected, so this needs n >= 3.
bool is_homotopy_sphere(const BPExponents& a);

bool fano_check(const BPExponents& a);

struct BgkResult {
  int failed_condition = 0;  // 0 = pass, otherwise the first failing condition 1..3
  Rational reciprocal_sum;
  Rational bound2;           // 1 + n/(n-1) min 1/a_i
  Rational bound3;           // 1 + n/(n-1) min_{i != j} 1/(b_i b_j)
  std::vector<Integer> b;    // b_i = gcd(a_i, lcm of the others)

  bool pass() const { return failed_condition == 0; }
};

BgkResult bgk_check(const BPExponents& a);

enum class GkResult { Pass, Fail, NotApplicable };
std::string to_string(GkResult r);

GkResult gk_check(const BPExponents& a);

/// Floating-point evaluation of the Fano/BGK/GK inequalities with a
/// filter: comparisons whose margin is within rounding fall back to the
/// exact rational path, so the answers always agree with the exact ones.
struct FastVerdict {
  bool fano = false;
  int bgk_failed_condition = 0;
  GkResult gk = GkResult::NotApplicable;
  std::size_t exact_fallbacks = 0;
};

FastVerdict fast_check(const BPExponents& a);

struct ObstructionFlags {
  bool bishop_obstructed = false;
  bool lichnerowicz_obstructed = false;
  bool lichnerowicz_marginal = false;
};

struct LinkVerdict {
  bool fano = false;
  HomologyType homology = HomologyType::Other;
  bool homotopy_sphere = false;
  BgkResult bgk;
  GkResult gk = GkResult::NotApplicable;
  std::optional<ObstructionFlags> obstruction;  // filled in by the obstruct module
};

LinkVerdict check_link(const BPExponents& a);

/// Milnor-fibre signature of a 7-dimensional link (five exponents):
///   tau = #{x : 0 < x_i < a_i, sum x_i/a_i mod 2 in (0,1)} - #{... in (1,2)}.
long milnor_signature(const BPExponents& a);

/// Class of the homotopy sphere in bP_8 = Z/28: (|tau|/8) mod 28.
long bp8_class(const BPExponents& a);

/// Exponent template with exactly one free slot (std::nullopt).
struct FamilyTemplate {
  std::vector<std::optional<long>> slots;

  static FamilyTemplate parse(const std::string& text);  // e.g. "2,3,7,_"
  BPExponents instantiate(long k) const;
  std::vector<long> fixed() const;
  std::string str() const;
};

using LinkPredicate = std::function<bool(const BPExponents&, const LinkVerdict&, long k)>;

/// Predicate grammar: terms joined by '&', each optionally negated with '!':
///   fano, bgk, gk, integral, rational, homotopy, coprime>=M
/// where coprime>=M holds when the free entry k is coprime to at least M of
/// the template's fixed entries.
LinkPredicate parse_predicate(const std::string& text, const FamilyTemplate& tmpl);

struct FamilyMember {
  long k = 0;
  BPExponents exponents;
  LinkVerdict verdict;
};

/// Every k in [lo, hi] (ascending) whose link satisfies the predicate.
/// Evaluation may run on several threads; output order is always ascending.
std::vector<FamilyMember> enumerate_family(const FamilyTemplate& tmpl, long lo, long hi,
                                           const LinkPredicate& predicate,
                                           unsigned threads = 1);

}  // namespace reebmin
