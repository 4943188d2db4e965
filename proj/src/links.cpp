#include "reebmin/links.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "reebmin/error.hpp"

namespace reebmin {

BPExponents::BPExponents(std::vector<long> a) : a_(std::move(a)) {
  if (a_.size() < 2) {
    throw Error(ErrorCode::BadParams, "a Brieskorn-Pham polynomial needs at least 2 exponents");
  }
  for (long x : a_)
    if (x < 2) throw Error(ErrorCode::BadParams, "exponents must all be >= 2");
}

Integer BPExponents::degree() const {
  Integer d = 1;
  for (long x : a_) d = lcm(d, Integer(x));
  return d;
}

std::vector<Integer> BPExponents::weights() const {
  Integer d = degree();
  std::vector<Integer> w;
  for (long x : a_) w.push_back(d / x);
  return w;
}

Integer BPExponents::weight_sum() const {
  Integer s = 0;
  for (const auto& w : weights()) s += w;
  return s;
}

Integer BPExponents::weight_product() const {
  Integer p = 1;
  for (const auto& w : weights()) p *= w;
  return p;
}

Rational BPExponents::reciprocal_sum() const {
  Rational s = 0;
  for (long x : a_) s += Rational(1, static_cast<unsigned long>(x));
  return s;
}

std::string BPExponents::str() const {
  std::ostringstream os;
  os << "L(";
  for (std::size_t i = 0; i < a_.size(); ++i) os << (i ? "," : "") << a_[i];
  os << ')';
  return os.str();
}

std::size_t BrieskornGraph::isolated_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (std::none_of(adjacent[i].begin(), adjacent[i].end(), [](bool b) { return b; }))
      ++count;
  return count;
}

BrieskornGraph brieskorn_graph(const BPExponents& a) {
  BrieskornGraph g;
  g.labels = a.exponents();
  const std::size_t m = g.labels.size();
  g.adjacent.assign(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && std::gcd(g.labels[i], g.labels[j]) > 1) g.adjacent[i][j] = true;

  std::vector<bool> seen(m, false);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < m; ++i)
    if (g.labels[i] % 2 == 0) {
      stack.push_back(i);
      seen[i] = true;
      break;
    }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    g.c_even.push_back(v);
    for (std::size_t u = 0; u < m; ++u)
      if (g.adjacent[v][u] && !seen[u]) {
        seen[u] = true;
        stack.push_back(u);
      }
  }
  std::sort(g.c_even.begin(), g.c_even.end());
  return g;
}

std::string to_string(HomologyType t) {
  switch (t) {
    case HomologyType::IntegralSphere: return "integral_sphere";
    case HomologyType::RationalSphere: return "rational_sphere";
    case HomologyType::Other: return "other";
  }
  return "other";
}

HomologyType homology_classify(const BPExponents& a) {
  BrieskornGraph g = brieskorn_graph(a);
  const std::size_t isolated = g.isolated_count();
  bool even_ok = g.c_even.size() % 2 == 1;
  for (std::size_t x = 0; x < g.c_even.size() && even_ok; ++x)
    for (std::size_t y = x + 1; y < g.c_even.size(); ++y)
      if (std::gcd(g.labels[g.c_even[x]], g.labels[g.c_even[y]]) != 2) {
        even_ok = false;
        break;
      }
  // A lone isolated vertex must lie outside C_even: L(2,3,9) has Delta(1) = 4.
  bool lone_outside_even = false;
  if (isolated == 1)
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
      bool lonely = true;
      for (std::size_t j = 0; j < g.labels.size(); ++j) lonely = lonely && !g.adjacent[i][j];
      if (lonely)
        lone_outside_even = std::find(g.c_even.begin(), g.c_even.end(), i) == g.c_even.end();
    }
  if (isolated >= 2 || (lone_outside_even && even_ok)) return HomologyType::IntegralSphere;
  if (isolated >= 1 || even_ok) return HomologyType::RationalSphere;
  return HomologyType::Other;
}

bool is_homotopy_sphere(const BPExponents& a) {
  return a.n() >= 3 && homology_classify(a) == HomologyType::IntegralSphere;
}

bool fano_check(const BPExponents& a) { return a.reciprocal_sum() > 1; }

namespace {

// b_i = gcd(a_i, lcm_{j != i} a_j) = lcm_{j != i} gcd(a_i, a_j); the second
// form never leaves the size of a_i.
std::vector<long> b_values(const std::vector<long>& a) {
  std::vector<long> b(a.size(), 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) b[i] = std::lcm(b[i], std::gcd(a[i], a[j]));
  return b;
}

long max_pair_product(const std::vector<long>& b) {
  // min_{i != j} 1/(b_i b_j) = 1 / (product of the two largest b's)
  std::vector<long> s = b;
  std::sort(s.rbegin(), s.rend());
  return s[0] * s[1];
}

bool pairwise_coprime(const std::vector<long>& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (std::gcd(a[i], a[j]) != 1) return false;
  return true;
}

}  // namespace

BgkResult bgk_check(const BPExponents& a) {
  BgkResult r;
  const auto& e = a.exponents();
  const long n = static_cast<long>(a.n());
  r.reciprocal_sum = a.reciprocal_sum();
  const long amax = *std::max_element(e.begin(), e.end());
  std::vector<long> b = b_values(e);
  for (long x : b) r.b.emplace_back(x);
  if (n >= 2) {
    Rational ratio(Integer(n), Integer(n - 1));
    r.bound2 = 1 + ratio / Integer(amax);
    r.bound3 = 1 + ratio / Integer(max_pair_product(b));
  }
  if (!(r.reciprocal_sum > 1)) {
    r.failed_condition = 1;
  } else if (n < 2 || !(r.reciprocal_sum < r.bound2)) {
    r.failed_condition = 2;
  } else if (!(r.reciprocal_sum < r.bound3)) {
    r.failed_condition = 3;
  }
  return r;
}

std::string to_string(GkResult r) {
  switch (r) {
    case GkResult::Pass: return "pass";
    case GkResult::Fail: return "fail";
    case GkResult::NotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

GkResult gk_check(const BPExponents& a) {
  const auto& e = a.exponents();
  if (!pairwise_coprime(e)) return GkResult::NotApplicable;
  const long amax = *std::max_element(e.begin(), e.end());
  Rational s = a.reciprocal_sum();
  Rational upper = 1 + Rational(Integer(static_cast<long>(a.n())), Integer(amax));
  return (1 < s && s < upper) ? GkResult::Pass : GkResult::Fail;
}

FastVerdict fast_check(const BPExponents& a) {
  const auto& e = a.exponents();
  const double n = static_cast<double>(a.n());
  FastVerdict v;
  double s = 0;
  for (long x : e) s += 1.0 / static_cast<double>(x);
  const double eps = 1e-12;
  const long amax = *std::max_element(e.begin(), e.end());

  // Sign of lhs - rhs, or nullopt when too close to call in floating point.
  auto compare = [&](double lhs, double rhs) -> std::optional<bool> {
    if (std::abs(lhs - rhs) <= eps * std::max(1.0, std::abs(rhs))) return std::nullopt;
    return lhs < rhs;
  };
  std::optional<BgkResult> exact;
  auto exact_bgk = [&]() -> const BgkResult& {
    if (!exact) {
      exact = bgk_check(a);
      ++v.exact_fallbacks;
    }
    return *exact;
  };

  auto gt1 = compare(1.0, s);  // 1 < s
  v.fano = gt1 ? *gt1 : (++v.exact_fallbacks, fano_check(a));

  if (!v.fano) {
    v.bgk_failed_condition = 1;
  } else if (a.n() < 2) {
    v.bgk_failed_condition = 2;
  } else {
    const double ratio = n / (n - 1);
    auto c2 = compare(s, 1 + ratio / static_cast<double>(amax));
    if (!c2) {
      v.bgk_failed_condition = exact_bgk().failed_condition;
    } else if (!*c2) {
      v.bgk_failed_condition = 2;
    } else {
      const double p = static_cast<double>(max_pair_product(b_values(e)));
      auto c3 = compare(s, 1 + ratio / p);
      if (!c3) {
        v.bgk_failed_condition = exact_bgk().failed_condition;
      } else {
        v.bgk_failed_condition = *c3 ? 0 : 3;
      }
    }
  }

  if (pairwise_coprime(e)) {
    auto upper = compare(s, 1 + n / static_cast<double>(amax));
    if (!upper) {
      ++v.exact_fallbacks;
      v.gk = gk_check(a);
    } else {
      v.gk = (v.fano && *upper) ? GkResult::Pass : GkResult::Fail;
    }
  }
  return v;
}

LinkVerdict check_link(const BPExponents& a) {
  LinkVerdict v;
  v.fano = fano_check(a);
  v.homology = homology_classify(a);
  v.homotopy_sphere = is_homotopy_sphere(a);
  v.bgk = bgk_check(a);
  v.gk = gk_check(a);
  return v;
}

long milnor_signature(const BPExponents& a) {
  if (a.size() != 5) {
    throw Error(ErrorCode::UnsupportedDimension,
                "signature is implemented for 7-dimensional links (5 exponents)");
  }
  if (homology_classify(a) != HomologyType::IntegralSphere) {
    throw Error(ErrorCode::NotHomologySphere, a.str() + " is not an integral homology sphere");
  }
  const auto& e = a.exponents();
  // Work with S = L * sum x_i / a_i, L = lcm(a): the fractional window (0,1)
  // mod 2 becomes (0, L) mod 2L.
  long l = 1;
  for (long x : e) l = std::lcm(l, x);
  std::vector<long> unit(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) unit[i] = l / e[i];

  long positive = 0, negative = 0;
  std::vector<long> x(e.size(), 1);
  long s = 0;
  for (std::size_t i = 0; i < e.size(); ++i) s += unit[i];
  for (;;) {
    long r = s % (2 * l);
    if (r > 0 && r < l) ++positive;
    if (r > l) ++negative;
    std::size_t pos = 0;
    while (pos < e.size() && x[pos] == e[pos] - 1) {
      s -= (x[pos] - 1) * unit[pos];
      x[pos] = 1;
      ++pos;
    }
    if (pos == e.size()) break;
    ++x[pos];
    s += unit[pos];
  }
  return positive - negative;
}

long bp8_class(const BPExponents& a) {
  long tau = milnor_signature(a);
  if (tau % 8 != 0) {
    throw Error(ErrorCode::NotHomologySphere, "signature of " + a.str() +
                                                  " is not divisible by 8");
  }
  return (std::abs(tau) / 8) % 28;
}

FamilyTemplate FamilyTemplate::parse(const std::string& text) {
  FamilyTemplate t;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item == "_" || item == "k") {
      t.slots.emplace_back(std::nullopt);
    } else {
      try {
        std::size_t used = 0;
        long v = std::stol(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        t.slots.emplace_back(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::SchemaError, "bad template entry '" + item + "'");
      }
    }
  }
  if (std::count(t.slots.begin(), t.slots.end(), std::nullopt) != 1) {
    throw Error(ErrorCode::SchemaError, "template needs exactly one free slot '_'");
  }
  return t;
}

BPExponents FamilyTemplate::instantiate(long k) const {
  std::vector<long> a;
  for (const auto& s : slots) a.push_back(s ? *s : k);
  return BPExponents(std::move(a));
}

std::vector<long> FamilyTemplate::fixed() const {
  std::vector<long> f;
  for (const auto& s : slots)
    if (s) f.push_back(*s);
  return f;
}

std::string FamilyTemplate::str() const {
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ',';
    out += slots[i] ? std::to_string(*slots[i]) : "_";
  }
  return out;
}

LinkPredicate parse_predicate(const std::string& text, const FamilyTemplate& tmpl) {
  std::vector<LinkPredicate> terms;
  const std::vector<long> fixed = tmpl.fixed();
  std::vector<std::string> pieces(1);
  for (char c : text) {
    if (c == '&') pieces.emplace_back();
    else pieces.back() += c;
  }
  for (std::string term : pieces) {
    term.erase(std::remove_if(term.begin(), term.end(), ::isspace), term.end());
    bool negate = !term.empty() && term.front() == '!';
    if (negate) term.erase(term.begin());
    LinkPredicate p;
    if (term == "fano") {
      p = [](const BPExponents&, const LinkVerdict& v, long) { return v.fano; };
    } else if (term == "bgk") {
      p = [](const BPExponents&, const LinkVerdict& v, long) { return v.bgk.pass(); };
    } else if (term == "gk") {
      p = [](const BPExponents&, const LinkVerdict& v, long) { return v.gk == GkResult::Pass; };
    } else if (term == "integral") {
      p = [](const BPExponents&, const LinkVerdict& v, long) {
        return v.homology == HomologyType::IntegralSphere;
      };
    } else if (term == "rational") {
      p = [](const BPExponents&, const LinkVerdict& v, long) {
        return v.homology != HomologyType::Other;
      };
    } else if (term == "homotopy") {
      p = [](const BPExponents&, const LinkVerdict& v, long) { return v.homotopy_sphere; };
    } else if (term.rfind("coprime>=", 0) == 0) {
      long m = 0;
      try {
        m = std::stol(term.substr(9));
      } catch (const std::exception&) {
        throw Error(ErrorCode::SchemaError, "bad predicate term '" + term + "'");
      }
      p = [fixed, m](const BPExponents&, const LinkVerdict&, long k) {
        long count = 0;
        for (long f : fixed) count += std::gcd(f, k) == 1;
        return count >= m;
      };
    } else {
      throw Error(ErrorCode::SchemaError, "unknown predicate term '" + term + "'");
    }
    if (negate) {
      p = [p](const BPExponents& a, const LinkVerdict& v, long k) { return !p(a, v, k); };
    }
    terms.push_back(std::move(p));
  }
  if (terms.empty()) throw Error(ErrorCode::SchemaError, "empty predicate");
  return [terms](const BPExponents& a, const LinkVerdict& v, long k) {
    return std::all_of(terms.begin(), terms.end(), [&](const auto& t) { return t(a, v, k); });
  };
}

std::vector<FamilyMember> enumerate_family(const FamilyTemplate& tmpl, long lo, long hi,
                                           const LinkPredicate& predicate,
                                           unsigned threads) {
  if (hi < lo) return {};
  const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::optional<FamilyMember>> slots(count);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < count; i += stride) {
      long k = lo + static_cast<long>(i);
      BPExponents a = tmpl.instantiate(k);
      LinkVerdict v = check_link(a);
      if (predicate(a, v, k)) slots[i] = FamilyMember{k, a, v};
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  std::vector<FamilyMember> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

}  // namespace reebmin
