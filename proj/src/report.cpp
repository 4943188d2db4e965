#include "reebmin/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "reebmin/cones.hpp"
#include "reebmin/error.hpp"
#include "reebmin/latcore.hpp"
#include "reebmin/links.hpp"
#include "reebmin/metrics.hpp"
#include "reebmin/obstruct.hpp"
#include "reebmin/reebvol.hpp"

namespace reebmin {

namespace {

const std::vector<std::pair<Command, const char*>>& command_names() {
  static const std::vector<std::pair<Command, const char*>> names = {
      {Command::ConeMinimize, "cone-minimize"}, {Command::ConeTopology, "cone-topology"},
      {Command::LinkCheck, "link-check"},       {Command::LinkEnumerate, "link-enumerate"},
      {Command::ObstructHs, "obstruct-hs"},     {Command::Join, "join"},
      {Command::Ypq, "ypq"},                    {Command::Labc, "labc"},
      {Command::GaleDual, "gale-dual"},
  };
  return names;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : command_names())
    if (cmd == c) return name;
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& [cmd, n] : command_names())
    if (name == n) return cmd;
  return std::nullopt;
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> cmds = [] {
    std::vector<Command> v;
    for (const auto& [cmd, name] : command_names()) v.push_back(cmd);
    return v;
  }();
  return cmds;
}

std::optional<Format> parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  return std::nullopt;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
    case Outcome::Error: return "error";
  }
  return "error";
}

Json JobSpec::to_json() const {
  Json j;
  j["command"] = to_string(command);
  j["payload"] = payload;
  return j;
}

// ---------------------------------------------------------------------------
// Payload validation

namespace {

[[noreturn]] void schema_fail(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

struct Field {
  enum Kind { Int, Number, Bool, String, IntList, IntMatrix, Object };
  Kind kind;
  bool required = false;
};

using Schema = std::map<std::string, Field>;

const Schema& schema_for(Command c) {
  using F = Field;
  static const std::map<Command, Schema> schemas = {
      {Command::ConeMinimize,
       {{"n", {F::Int}},
        {"normals", {F::IntMatrix, true}},
        {"exact_certify", {F::Bool}},
        {"max_denominator", {F::Int}}}},
      {Command::ConeTopology, {{"n", {F::Int}}, {"normals", {F::IntMatrix, true}}}},
      {Command::LinkCheck,
       {{"exponents", {F::IntList, true}}, {"predicate", {F::String}}, {"signature", {F::Bool}}}},
      {Command::LinkEnumerate,
       {{"template", {F::String, true}},
        {"range", {F::IntList, true}},
        {"predicate", {F::String}}}},
      {Command::ObstructHs, {{"weights", {F::IntList, true}}, {"degree", {F::Int, true}}}},
      {Command::Join,
       {{"ord", {F::IntList, true}}, {"index", {F::IntList, true}}, {"n", {F::IntList, true}}}},
      {Command::Ypq,
       {{"p", {F::Int, true}},
        {"q", {F::Int, true}},
        {"check_einstein", {F::Bool}},
        {"samples", {F::Int}},
        {"step", {F::Number}},
        {"seed", {F::Int}}}},
      {Command::Labc,
       {{"a", {F::Int, true}},
        {"b", {F::Int, true}},
        {"c", {F::Int, true}},
        {"to_cone", {F::Bool}},
        {"minimize", {F::Bool}}}},
      {Command::GaleDual, {{"charges", {F::IntMatrix, true}}, {"d", {F::Int}}}},
  };
  return schemas.at(c);
}

bool is_int(const Json& j) { return j.is_number_integer(); }

void check_kind(const std::string& key, const Json& v, Field::Kind kind) {
  switch (kind) {
    case Field::Int:
      if (!is_int(v)) schema_fail("'" + key + "' must be an integer");
      return;
    case Field::Number:
      if (!v.is_number()) schema_fail("'" + key + "' must be a number");
      return;
    case Field::Bool:
      if (!v.is_boolean()) schema_fail("'" + key + "' must be a boolean");
      return;
    case Field::String:
      if (!v.is_string()) schema_fail("'" + key + "' must be a string");
      return;
    case Field::IntList:
      if (!v.is_array() || !std::all_of(v.begin(), v.end(), is_int))
        schema_fail("'" + key + "' must be an array of integers");
      return;
    case Field::IntMatrix:
      if (!v.is_array()) schema_fail("'" + key + "' must be an array of integer arrays");
      for (const auto& row : v)
        if (!row.is_array() || !std::all_of(row.begin(), row.end(), is_int))
          schema_fail("'" + key + "' must be an array of integer arrays");
      return;
    case Field::Object:
      if (!v.is_object()) schema_fail("'" + key + "' must be an object");
      return;
  }
}

void check_ranges(Command c, const Json& p) {
  auto positive = [&](const char* key) {
    if (p.contains(key) && p[key].get<long long>() < 1) schema_fail(std::string("'") + key + "' must be >= 1");
  };
  switch (c) {
    case Command::ConeMinimize:
    case Command::ConeTopology: {
      const auto& rows = p["normals"];
      if (rows.empty()) schema_fail("'normals' must be non-empty");
      const std::size_t n = rows[0].size();
      if (n == 0) schema_fail("normals must have at least one coordinate");
      for (const auto& r : rows)
        if (r.size() != n) schema_fail("all normals must have the same length");
      if (p.contains("n") && p["n"].get<long long>() != static_cast<long long>(n))
        schema_fail("'n' does not match the length of the normals");
      positive("max_denominator");
      return;
    }
    case Command::LinkCheck:
      if (p["exponents"].size() < 2) schema_fail("'exponents' needs at least two entries");
      return;
    case Command::LinkEnumerate:
      if (p["range"].size() != 2) schema_fail("'range' must be [lo, hi]");
      return;
    case Command::ObstructHs:
      if (p["weights"].size() < 2) schema_fail("'weights' needs at least two entries");
      return;
    case Command::Join:
      if (p["ord"].size() != 2 || p["index"].size() != 2 || p["n"].size() != 2)
        schema_fail("'ord', 'index' and 'n' must each have two entries");
      return;
    case Command::Ypq:
      positive("samples");
      if (p.contains("step") && !(p["step"].get<double>() > 0)) schema_fail("'step' must be > 0");
      if (p.contains("seed") && p["seed"].get<long long>() < 0) schema_fail("'seed' must be >= 0");
      return;
    case Command::Labc:
      return;
    case Command::GaleDual: {
      const auto& rows = p["charges"];
      if (p.contains("d") && p["d"].get<long long>() < 1) schema_fail("'d' must be >= 1");
      if (rows.empty()) {
        if (!p.contains("d")) schema_fail("an empty charge matrix needs 'd'");
        return;
      }
      const std::size_t d = rows[0].size();
      for (const auto& r : rows)
        if (r.size() != d || d == 0) schema_fail("all charge rows must have the same positive length");
      if (p.contains("d") && p["d"].get<std::size_t>() != d) schema_fail("'d' does not match the charge rows");
      return;
    }
  }
}

}  // namespace

void validate_payload(Command c, const Json& payload) {
  if (!payload.is_object()) schema_fail("payload must be an object");
  const Schema& s = schema_for(c);
  for (const auto& [key, value] : payload.items()) {
    auto it = s.find(key);
    if (it == s.end()) schema_fail("unknown field '" + key + "' for " + to_string(c));
    check_kind(key, value, it->second.kind);
  }
  for (const auto& [key, field] : s)
    if (field.required && !payload.contains(key)) schema_fail("missing required field '" + key + "'");
  check_ranges(c, payload);
}

JobSpec parse_job(const Json& doc) {
  if (!doc.is_object()) schema_fail("job must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "command" && key != "payload") schema_fail("unknown job field '" + key + "'");
  if (!doc.contains("command") || !doc["command"].is_string())
    schema_fail("job needs a string 'command'");
  auto cmd = parse_command(doc["command"].get<std::string>());
  if (!cmd) schema_fail("unknown command '" + doc["command"].get<std::string>() + "'");
  JobSpec spec;
  spec.command = *cmd;
  spec.payload = doc.contains("payload") ? doc["payload"] : Json::object();
  validate_payload(spec.command, spec.payload);
  return spec;
}

// ---------------------------------------------------------------------------
// Conversions

namespace {

IntVector int_vector(const Json& j) {
  IntVector v;
  for (const auto& x : j) v.emplace_back(static_cast<long>(x.get<long long>()));
  return v;
}

std::vector<long> long_vector(const Json& j) {
  std::vector<long> v;
  for (const auto& x : j) v.push_back(static_cast<long>(x.get<long long>()));
  return v;
}

std::vector<IntVector> int_rows(const Json& j) {
  std::vector<IntVector> rows;
  for (const auto& r : j) rows.push_back(int_vector(r));
  return rows;
}

// Integers that fit in 64 bits are emitted as numbers, larger ones as strings.
Json to_json(const Integer& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

Json to_json(const std::vector<IntVector>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(to_json(r));
  return a;
}

Json to_json(const IntMatrix& m) { return to_json(m.row_vectors()); }

Json to_json(const Rational& r) { return Json(r.get_str()); }

Json to_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

MomentCone cone_from_payload(const Json& p) { return validate_cone(int_rows(p["normals"])); }

// ---------------------------------------------------------------------------
// Commands. Each returns the result object and sets the outcome.

Json cmd_cone_minimize(const Json& p, const RunOptions& o, Outcome& out) {
  MomentCone cone = cone_from_payload(p);
  GorensteinCone g = gorenstein_normalize(cone);
  MinimizeOptions mo;
  mo.certify = o.exact_certify || p.value("exact_certify", false);
  if (p.contains("max_denominator")) mo.max_denominator = p["max_denominator"].get<long>();
  MinimizationResult r = minimize_reeb(g, mo);

  Json res;
  res["n"] = cone.dim();
  res["d"] = cone.normals().size();
  res["gorenstein_height"] = to_json(g.height);
  res["basis_change"] = to_json(g.basis_change);
  res["xi_star"] = to_json(r.xi_star);
  res["xi_star_input_basis"] = to_json(r.xi_star_input_basis);
  res["xi_exact"] = r.xi_exact ? to_json(*r.xi_exact) : Json(nullptr);
  res["volume"] = r.volume;
  res["normalized_volume"] = r.normalized_volume;
  res["normalized_volume_exact"] =
      r.normalized_volume_exact ? to_json(*r.normalized_volume_exact) : Json(nullptr);
  res["regularity"] = to_string(r.regularity);
  res["rank_estimate"] = r.rank_estimate;
  res["iterations"] = r.iterations;
  res["gradient_norm"] = r.gradient_norm;
  res["hessian_min_eigenvalue"] = r.hessian_min_eigenvalue;
  res["certified"] = r.xi_exact.has_value();
  res["verdict"] = "exists";
  res["tolerances"] = {{"gradient_norm", mo.gradient_tolerance},
                       {"max_denominator", mo.max_denominator}};
  out = Outcome::Pass;
  return res;
}

Json cmd_cone_topology(const Json& p, const RunOptions&, Outcome& out) {
  MomentCone cone = cone_from_payload(p);
  ToricTopology t = topology(cone);
  Json res;
  res["n"] = cone.dim();
  res["d"] = cone.normals().size();
  res["pi1_invariants"] = to_json(t.pi1_invariants);
  res["pi2_rank"] = t.pi2_rank;
  res["simply_connected"] = t.simply_connected();
  res["dual_rays"] = to_json(dual_cone(cone));
  try {
    res["gorenstein_height"] = to_json(gorenstein_normalize(cone).height);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotQGorenstein) throw;
    res["gorenstein_height"] = nullptr;
  }
  if (cone.dim() == 3 && t.simply_connected()) {
    SmaleType s = smale_type(cone);
    res["smale_k"] = s.k;
    res["diffeomorphism_type"] = s.label;
  } else {
    res["smale_k"] = nullptr;
    res["diffeomorphism_type"] = nullptr;
  }
  out = Outcome::Pass;
  return res;
}

struct LinkSummary {
  std::string verdict;
  std::string reason;
};

LinkSummary summarize(const LinkVerdict& v) {
  if (!v.fano) return {"obstructed", "not-fano"};
  if (v.bgk.pass()) return {"exists", "bgk"};
  if (v.gk == GkResult::Pass) return {"exists", "gk"};
  if (v.obstruction) {
    if (v.obstruction->lichnerowicz_obstructed) return {"obstructed", "lichnerowicz"};
    if (v.obstruction->bishop_obstructed) return {"obstructed", "bishop"};
  }
  return {"inconclusive", ""};
}

Json link_json(const BPExponents& a, const LinkVerdict& v) {
  LinkSummary s = summarize(v);
  Json j;
  j["link"] = a.str();
  j["exponents"] = a.exponents();
  j["degree"] = to_json(a.degree());
  j["weights"] = to_json(a.weights());
  j["fano"] = v.fano;
  j["homology"] = to_string(v.homology);
  j["homotopy_sphere"] = v.homotopy_sphere;
  j["bgk"] = v.bgk.pass() ? "pass" : "fail";
  j["bgk_failed_condition"] = v.bgk.failed_condition;
  j["gk"] = to_string(v.gk);
  if (v.obstruction) {
    j["bishop"] = v.obstruction->bishop_obstructed ? "obstructed" : "unobstructed";
    j["lichnerowicz"] = v.obstruction->lichnerowicz_obstructed
                            ? "obstructed"
                            : (v.obstruction->lichnerowicz_marginal ? "unobstructed-marginal"
                                                                    : "unobstructed");
  } else {
    j["bishop"] = nullptr;
    j["lichnerowicz"] = nullptr;
  }
  j["verdict"] = s.verdict;
  j["reason"] = s.reason.empty() ? Json(nullptr) : Json(s.reason);
  return j;
}

LinkVerdict full_verdict(const BPExponents& a) {
  LinkVerdict v = check_link(a);
  if (v.fano) v.obstruction = obstruction_flags(a);
  return v;
}

Outcome outcome_of(const std::string& verdict) {
  if (verdict == "exists") return Outcome::Pass;
  if (verdict == "obstructed") return Outcome::Fail;
  return Outcome::Inconclusive;
}

Json cmd_link_check(const Json& p, const RunOptions&, Outcome& out) {
  BPExponents a(long_vector(p["exponents"]));
  LinkVerdict v = full_verdict(a);
  Json res = link_json(a, v);
  if (p.value("signature", false)) {
    const long tau = milnor_signature(a);
    res["milnor_signature"] = tau;
    res["bp8_class"] = bp8_class(a);
  }
  out = outcome_of(res["verdict"].get<std::string>());
  if (p.contains("predicate")) {
    // The last exponent plays the role of the free entry k.
    const auto& e = a.exponents();
    FamilyTemplate tmpl;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) tmpl.slots.emplace_back(e[i]);
    tmpl.slots.emplace_back(std::nullopt);
    const std::string text = p["predicate"].get<std::string>();
    const bool holds = parse_predicate(text, tmpl)(a, v, e.back());
    res["predicate"] = text;
    res["predicate_holds"] = holds;
    out = holds ? Outcome::Pass : Outcome::Fail;
  }
  return res;
}

Json cmd_link_enumerate(const Json& p, const RunOptions& o, Outcome& out) {
  FamilyTemplate tmpl = FamilyTemplate::parse(p["template"].get<std::string>());
  const long lo = p["range"][0].get<long>(), hi = p["range"][1].get<long>();
  if (lo > hi) schema_fail("'range' must satisfy lo <= hi");
  const std::string pred_text = p.value("predicate", std::string());
  LinkPredicate pred = pred_text.empty()
                           ? LinkPredicate([](const BPExponents&, const LinkVerdict&, long) { return true; })
                           : parse_predicate(pred_text, tmpl);
  auto members = enumerate_family(tmpl, lo, hi, pred, std::max(1u, o.threads));
  Json res;
  res["template"] = tmpl.str();
  res["range"] = {lo, hi};
  res["predicate"] = pred_text;
  res["count"] = members.size();
  Json ks = Json::array();
  Json rows = Json::array();
  for (const auto& m : members) {
    ks.push_back(m.k);
    Json row;
    row["k"] = m.k;
    LinkVerdict v = m.verdict;
    if (v.fano && !v.obstruction) v.obstruction = obstruction_flags(m.exponents);
    Json lj = link_json(m.exponents, v);
    for (auto& [key, value] : lj.items()) row[key] = value;
    rows.push_back(row);
  }
  res["values"] = ks;
  res["members"] = rows;
  out = Outcome::Pass;
  return res;
}

Json cmd_obstruct_hs(const Json& p, const RunOptions&, Outcome& out) {
  std::vector<Integer> w;
  for (const auto& x : p["weights"]) w.emplace_back(static_cast<long>(x.get<long long>()));
  WeightedHS h(w, Integer(static_cast<long>(p["degree"].get<long long>())));
  HsVolume vol = hs_volume(h);
  BishopResult b = bishop_check(h);
  LichnerowiczResult l = lichnerowicz_check(h);
  Json res;
  res["weights"] = to_json(h.weights());
  res["degree"] = to_json(h.degree());
  res["rescaled_by"] = to_json(h.rescale_factor());
  res["n"] = h.n();
  res["volume"] = vol.volume;
  res["normalized_volume"] = to_json(vol.normalized);
  res["bishop"] = {{"verdict", to_string(b.verdict)}, {"lhs", to_json(b.lhs)}, {"rhs", to_json(b.rhs)}};
  Json charges = Json::array();
  for (const auto& c : l.charges) charges.push_back(to_json(c));
  res["lichnerowicz"] = {{"verdict", to_string(l.verdict)},
                         {"witness", l.witness},
                         {"lambda", to_json(l.lambda)},
                         {"nu", to_json(l.nu)},
                         {"charges", charges}};
  const bool obstructed =
      b.verdict == Obstruction::Obstructed || l.verdict == Obstruction::Obstructed;
  res["verdict"] = obstructed ? "obstructed" : "inconclusive";
  out = obstructed ? Outcome::Fail : Outcome::Inconclusive;
  return res;
}

Json cmd_join(const Json& p, const RunOptions&, Outcome& out) {
  auto ord = long_vector(p["ord"]), idx = long_vector(p["index"]), n = long_vector(p["n"]);
  JoinResult r = join_smooth({ord[0], idx[0], n[0]}, {ord[1], idx[1], n[1]});
  Json res;
  res["smooth"] = r.smooth;
  res["dimension"] = r.dimension;
  res["l1"] = r.l1;
  res["l2"] = r.l2;
  res["gcd"] = r.gcd_value;
  out = r.smooth ? Outcome::Pass : Outcome::Fail;
  return res;
}

constexpr double kEinsteinTol = 1e-4;
constexpr double kKillingTol = 1e-6;
constexpr double kEtaTol = 1e-6;

Json cmd_ypq(const Json& p, const RunOptions& o, Outcome& out) {
  const long pp = p["p"].get<long>(), qq = p["q"].get<long>();
  YpqParams Y(pp, qq);
  QuadraticSurd a = apq_exact(pp, qq);
  Json res;
  res["p"] = pp;
  res["q"] = qq;
  res["a"] = Y.a();
  res["a_exact"] = a.str();
  res["roots"] = {Y.y1(), Y.y2(), Y.y3()};
  YpqRegularity reg = quasiregular_check(pp, qq);
  if (auto* qr = std::get_if<QuasiRegular>(&reg)) {
    res["regularity"] = "quasi-regular";
    res["discriminant_root"] = qr->m;
  } else {
    res["regularity"] = "irregular";
    res["discriminant_root"] = nullptr;
  }
  out = Outcome::Pass;
  if (p.value("check_einstein", false)) {
    const std::size_t samples = p.value("samples", 20);
    const double step = p.value("step", 1e-3);
    const std::uint64_t seed = o.seed ? *o.seed : p.value("seed", std::uint64_t{1});
    EinsteinReport e = verify_einstein(Y, samples, step, seed);
    const bool ok = e.max_einstein_residual <= kEinsteinTol &&
                    e.max_killing_residual <= kKillingTol && e.max_eta_residual <= kEtaTol &&
                    e.min_metric_eigenvalue > 0;
    res["einstein"] = {{"samples", e.samples},
                       {"step", step},
                       {"seed", seed},
                       {"max_einstein_residual", e.max_einstein_residual},
                       {"max_killing_residual", e.max_killing_residual},
                       {"max_eta_residual", e.max_eta_residual},
                       {"max_ricci_reeb_residual", e.max_ricci_reeb_residual},
                       {"min_metric_eigenvalue", e.min_metric_eigenvalue},
                       {"tolerances",
                        {{"einstein", kEinsteinTol}, {"killing", kKillingTol}, {"eta", kEtaTol}}},
                       {"pass", ok}};
    out = ok ? Outcome::Pass : Outcome::Fail;
  }
  return res;
}

Json cmd_labc(const Json& p, const RunOptions& o, Outcome& out) {
  LabcVerdict v = labc_admissible(p["a"].get<long>(), p["b"].get<long>(), p["c"].get<long>());
  Json res;
  res["a"] = v.params.a;
  res["b"] = v.params.b;
  res["c"] = v.params.c;
  res["d"] = v.params.d;
  res["valid"] = v.valid;
  res["reason"] = v.valid ? Json(nullptr) : Json(v.reason);
  out = v.valid ? Outcome::Pass : Outcome::Fail;
  if (v.valid && (p.value("to_cone", false) || p.value("minimize", false))) {
    GorensteinCone g = labc_cone(v.params);
    res["normals"] = to_json(g.base.normals());
    res["gorenstein_normals"] = to_json(g.normalized.normals());
    res["gorenstein_height"] = to_json(g.height);
    if (p.value("minimize", false)) {
      MinimizeOptions mo;
      mo.certify = true;
      (void)o;
      MinimizationResult r = minimize_reeb(g, mo);
      res["xi_star"] = to_json(r.xi_star);
      res["normalized_volume"] = r.normalized_volume;
      res["regularity"] = to_string(r.regularity);
      res["rank_estimate"] = r.rank_estimate;
    }
  }
  return res;
}

Json cmd_gale_dual(const Json& p, const RunOptions&, Outcome& out) {
  const auto rows = int_rows(p["charges"]);
  std::size_t d = rows.empty() ? 0 : rows[0].size();
  if (p.contains("d")) d = p["d"].get<std::size_t>();
  IntMatrix q = IntMatrix::from_rows(rows, d);
  auto rays = gale_dual(q);
  Json res;
  res["rays"] = to_json(rays);
  out = Outcome::Pass;
  return res;
}

using Handler = std::function<Json(const Json&, const RunOptions&, Outcome&)>;

Handler handler_for(Command c) {
  switch (c) {
    case Command::ConeMinimize: return cmd_cone_minimize;
    case Command::ConeTopology: return cmd_cone_topology;
    case Command::LinkCheck: return cmd_link_check;
    case Command::LinkEnumerate: return cmd_link_enumerate;
    case Command::ObstructHs: return cmd_obstruct_hs;
    case Command::Join: return cmd_join;
    case Command::Ypq: return cmd_ypq;
    case Command::Labc: return cmd_labc;
    case Command::GaleDual: return cmd_gale_dual;
  }
  return cmd_link_check;
}

Json header(const std::string& command) {
  Json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

Report error_report(Json doc, ErrorCode code, const std::string& msg) {
  doc["status"] = "error";
  doc["outcome"] = to_string(Outcome::Error);
  doc["result"] = nullptr;
  doc["error"] = {{"code", static_cast<int>(code)},
                  {"name", std::string(error_name(code))},
                  {"message", msg}};
  return {std::move(doc), Outcome::Error};
}

}  // namespace

Report run(const JobSpec& spec, const RunOptions& opts) {
  Json doc = header(to_string(spec.command));
  doc["input"] = spec.to_json();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    validate_payload(spec.command, spec.payload);
    Outcome out = Outcome::Error;
    Json result = handler_for(spec.command)(spec.payload, opts, out);
    doc["status"] = "ok";
    doc["outcome"] = to_string(out);
    doc["result"] = std::move(result);
    doc["error"] = nullptr;
    if (opts.timing) {
      doc["timing_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return {std::move(doc), out};
  } catch (const Error& e) {
    return error_report(std::move(doc), e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_report(std::move(doc), ErrorCode::SchemaError, e.what());
  }
}

Report run_line(const std::string& line, const RunOptions& opts) {
  Json doc;
  try {
    doc = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    Json h = header("unknown");
    h["input"] = line;
    return error_report(std::move(h), ErrorCode::SchemaError,
                        std::string("malformed JSON: ") + e.what());
  }
  try {
    return run(parse_job(doc), opts);
  } catch (const Error& e) {
    std::string cmd = "unknown";
    if (doc.is_object() && doc.contains("command") && doc["command"].is_string())
      cmd = doc["command"].get<std::string>();
    Json h = header(cmd);
    h["input"] = doc;
    return error_report(std::move(h), e.code(), e.what());
  }
}

std::vector<Report> run_batch(const std::vector<std::string>& lines, const RunOptions& opts) {
  std::vector<std::string> jobs;
  for (const auto& l : lines)
    if (l.find_first_not_of(" \t\r\n") != std::string::npos) jobs.push_back(l);
  std::vector<Report> out(jobs.size());
  RunOptions inner = opts;
  inner.threads = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) out[i] = run_line(jobs[i], inner);
  };
  const unsigned nthreads =
      std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

int exit_code(const Report& r, bool strict) {
  if (r.outcome == Outcome::Error) return 1;
  if (strict && r.outcome == Outcome::Fail) return 2;
  return 0;
}

int exit_code(const std::vector<Report>& rs, bool strict) {
  int code = 0;
  for (const auto& r : rs) {
    const int c = exit_code(r, strict);
    if (c == 1) return 1;
    code = std::max(code, c);
  }
  return code;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        dump_rec(value, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool scalars = std::none_of(j.begin(), j.end(), [](const Json& e) {
        return e.is_structured();
      });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += pretty && scalars ? ", " : ",";
        first = false;
        if (!scalars) newline(depth + 1);
        dump_rec(e, indent, depth + 1, out);
      }
      if (!scalars) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return format_double(j.get<double>());
  if (j.is_null()) return "";
  if (j.is_array() && std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); })) {
    std::string s;
    for (const auto& e : j) {
      if (!s.empty()) s += ' ';
      s += scalar_text(e);
    }
    return s;
  }
  return dump_json(j, -1);
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    return;
  }
  if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& e) { return e.is_object(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    return;
  }
  out.emplace_back(prefix, scalar_text(j));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::pair<std::string, std::string>> summary_rows(const Report& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("command", r.doc.value("command", std::string()));
  rows.emplace_back("outcome", to_string(r.outcome));
  if (r.outcome == Outcome::Error) {
    flatten(r.doc["error"], "error", rows);
  } else {
    // Member lists are shown as rows in CSV and omitted from the key/value view.
    Json result = r.doc["result"];
    if (result.is_object()) result.erase("members");
    flatten(result, "", rows);
  }
  if (r.doc.contains("timing_seconds")) rows.emplace_back("timing_seconds", scalar_text(r.doc["timing_seconds"]));
  return rows;
}

void write_table(std::ostream& os, const Report& r) {
  auto rows = summary_rows(r);
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

void write_member_csv(std::ostream& os, const Json& members) {
  std::vector<std::string> cols;
  for (const auto& [key, value] : members[0].items()) cols.push_back(key);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_field(cols[i]);
  os << '\n';
  for (const auto& m : members) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      os << (i ? "," : "") << csv_field(scalar_text(m[cols[i]]));
    os << '\n';
  }
}

void write_csv(std::ostream& os, const Report& r) {
  if (r.outcome != Outcome::Error && r.doc["result"].is_object() && r.doc["result"].contains("members") &&
      !r.doc["result"]["members"].empty()) {
    write_member_csv(os, r.doc["result"]["members"]);
    return;
  }
  os << "key,value\n";
  for (const auto& [k, v] : summary_rows(r)) os << csv_field(k) << ',' << csv_field(v) << '\n';
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

void write_report(std::ostream& os, const Report& r, Format f) {
  switch (f) {
    case Format::Json: os << dump_json(r.doc) << '\n'; return;
    case Format::Table: write_table(os, r); return;
    case Format::Csv: write_csv(os, r); return;
  }
}

void write_batch(std::ostream& os, const std::vector<Report>& rs, Format f) {
  switch (f) {
    case Format::Json:
      for (const auto& r : rs) os << dump_json(r.doc, -1) << '\n';
      return;
    case Format::Table:
      for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i) os << '\n';
        write_table(os, rs[i]);
      }
      return;
    case Format::Csv:
      os << "line,command,outcome,verdict,error\n";
      for (std::size_t i = 0; i < rs.size(); ++i) {
        const Json& d = rs[i].doc;
        std::string verdict;
        if (d["result"].is_object() && d["result"].contains("verdict"))
          verdict = scalar_text(d["result"]["verdict"]);
        std::string err = d["error"].is_object() ? d["error"]["name"].get<std::string>() : "";
        os << i + 1 << ',' << csv_field(d.value("command", std::string())) << ','
           << to_string(rs[i].outcome) << ',' << csv_field(verdict) << ',' << csv_field(err) << '\n';
      }
      return;
  }
}

}  // namespace reebmin
