#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "reebmin/error.hpp"
#include "reebmin/report.hpp"

using namespace reebmin;

namespace {

[[noreturn]] void bad_input(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

long parse_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    bad_input("not an integer: '" + s + "'");
  }
  if (used != s.size()) bad_input("not an integer: '" + s + "'");
  return v;
}

Json long_list(const std::string& text, char sep = ',') {
  Json a = Json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) a.push_back(parse_long(item));
  if (a.empty()) bad_input("empty list");
  return a;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad_input("malformed JSON in '" + path + "': " + e.what());
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::string line;
  if (path == "-") {
    while (std::getline(std::cin, line)) lines.push_back(line);
    return lines;
  }
  std::ifstream in(path);
  if (!in) bad_input("cannot open '" + path + "'");
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

struct Globals {
  std::string format = "json";
  bool json = false, table = false, strict = false, exact_certify = false, timing = false;
  std::int64_t seed = -1;
  unsigned threads = 0;

  Format fmt() const {
    if (table) return Format::Table;
    if (json) return Format::Json;
    return *parse_format(format);
  }

  RunOptions options() const {
    RunOptions o;
    o.exact_certify = exact_certify;
    o.timing = timing;
    if (seed >= 0) o.seed = static_cast<std::uint64_t>(seed);
    o.threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    return o;
  }
};

int emit(const Report& r, const Globals& g) {
  write_report(std::cout, r, g.fmt());
  return exit_code(r, g.strict);
}

int emit_error(const std::string& command, const Error& e, const Globals& g) {
  Report r;
  r.outcome = Outcome::Error;
  r.doc["tool"] = kToolName;
  r.doc["version"] = kToolVersion;
  r.doc["schema_version"] = kSchemaVersion;
  r.doc["command"] = command;
  r.doc["input"] = nullptr;
  r.doc["status"] = "error";
  r.doc["outcome"] = "error";
  r.doc["result"] = nullptr;
  r.doc["error"] = {{"code", static_cast<int>(e.code())},
                    {"name", std::string(error_name(e.code()))},
                    {"message", e.what()}};
  return emit(r, g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sasaki-Einstein existence, certification and obstruction toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "table", "csv"}));
  app.add_flag("--json", g.json, "Same as --format json");
  app.add_flag("--table", g.table, "Same as --format table");
  app.add_flag("--strict", g.strict, "Exit with status 2 when a verdict is obstructed or fails");
  app.add_flag("--exact-certify", g.exact_certify, "Certify the Reeb minimizer in exact arithmetic");
  app.add_flag("--timing", g.timing, "Include wall-clock timing in reports");
  app.add_option("--seed", g.seed, "Seed for randomized verification sampling")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--threads", g.threads, "Worker threads for batch and enumeration (0 = all cores)");

  std::string command;
  Json payload = Json::object();
  std::function<void()> build;

  // cone minimize | topology
  auto* cone = app.add_subcommand("cone", "Toric moment cones");
  cone->require_subcommand(1);
  cone->fallthrough();
  std::string cone_input;
  for (const auto& [name, cmd] : {std::pair{"minimize", "cone-minimize"}, std::pair{"topology", "cone-topology"}}) {
    auto* sub = cone->add_subcommand(name, name == std::string("minimize")
                                               ? "Minimize the volume functional over Reeb vectors"
                                               : "pi_1, pi_2 and diffeomorphism type of the link");
    sub->fallthrough();
    sub->add_option("--input", cone_input, "Cone JSON file {\"n\": int, \"normals\": [[int]]}")->required();
    sub->callback([&, c = std::string(cmd)] {
      command = c;
      build = [&] { payload = read_json_file(cone_input); };
    });
  }

  // link check | enumerate
  auto* link = app.add_subcommand("link", "Brieskorn-Pham links");
  link->require_subcommand(1);
  link->fallthrough();
  std::string exponents, predicate, tmpl, range;
  bool signature = false;
  auto* check = link->add_subcommand("check", "Existence and obstruction tests for one link");
  check->fallthrough();
  check->add_option("exponents", exponents, "Comma-separated exponents, e.g. 2,3,7,5")->required();
  check->add_option("--predicate", predicate, "Outcome predicate, e.g. homotopy&bgk");
  check->add_flag("--signature", signature, "Milnor-fibre signature (five exponents)");
  check->callback([&] {
    command = "link-check";
    build = [&] {
      payload["exponents"] = long_list(exponents);
      if (!predicate.empty()) payload["predicate"] = predicate;
      if (signature) payload["signature"] = true;
    };
  });
  auto* enumerate = link->add_subcommand("enumerate", "Scan a one-parameter family");
  enumerate->fallthrough();
  enumerate->add_option("--template", tmpl, "Exponent template with one free slot, e.g. 2,3,7,_")
      ->required();
  enumerate->add_option("--range", range, "Inclusive range lo..hi")->required();
  enumerate->add_option("--predicate", predicate, "Filter, e.g. coprime>=2&bgk");
  enumerate->callback([&] {
    command = "link-enumerate";
    build = [&] {
      const auto dots = range.find("..");
      if (dots == std::string::npos) bad_input("--range must look like lo..hi");
      payload["template"] = tmpl;
      payload["range"] = {parse_long(range.substr(0, dots)), parse_long(range.substr(dots + 2))};
      if (!predicate.empty()) payload["predicate"] = predicate;
    };
  });

  // obstruct hs
  auto* obstruct = app.add_subcommand("obstruct", "Volume obstructions");
  obstruct->require_subcommand(1);
  obstruct->fallthrough();
  std::string weights;
  long degree = 0;
  auto* hs = obstruct->add_subcommand("hs", "Bishop and Lichnerowicz tests for a weighted hypersurface");
  hs->fallthrough();
  hs->add_option("--weights", weights, "Comma-separated weights")->required();
  hs->add_option("--degree", degree, "Degree")->required();
  hs->callback([&] {
    command = "obstruct-hs";
    build = [&] {
      payload["weights"] = long_list(weights);
      payload["degree"] = degree;
    };
  });

  // join
  auto* join = app.add_subcommand("join", "Smoothness of a join of two quasi-regular spaces");
  join->fallthrough();
  std::string ord, index, ns;
  join->add_option("--ord", ord, "ord(Z1),ord(Z2)")->required();
  join->add_option("--index", index, "I(Z1),I(Z2)")->required();
  join->add_option("--n", ns, "n1,n2")->required();
  join->callback([&] {
    command = "join";
    build = [&] {
      payload["ord"] = long_list(ord);
      payload["index"] = long_list(index);
      payload["n"] = long_list(ns);
    };
  });

  // ypq
  auto* ypq = app.add_subcommand("ypq", "Explicit Y^{p,q} metrics");
  ypq->fallthrough();
  long p = 0, q = 0;
  bool check_einstein = false;
  std::size_t samples = 20;
  double step = 1e-3;
  ypq->add_option("--p", p, "p")->required();
  ypq->add_option("--q", q, "q")->required();
  ypq->add_flag("--check-einstein", check_einstein, "Verify Ric = 4g at random chart points");
  ypq->add_option("--samples", samples, "Number of sample points")->capture_default_str();
  ypq->add_option("--step", step, "Finite-difference step")->capture_default_str();
  ypq->callback([&] {
    command = "ypq";
    build = [&] {
      payload["p"] = p;
      payload["q"] = q;
      if (check_einstein) {
        payload["check_einstein"] = true;
        payload["samples"] = samples;
        payload["step"] = step;
      }
      if (g.seed >= 0) payload["seed"] = g.seed;
    };
  });

  // labc
  auto* labc = app.add_subcommand("labc", "L^{a,b,c} admissibility and toric data");
  labc->fallthrough();
  long a = 0, b = 0, c = 0;
  bool to_cone = false, minimize = false;
  labc->add_option("--a", a, "a")->required();
  labc->add_option("--b", b, "b")->required();
  labc->add_option("--c", c, "c")->required();
  labc->add_flag("--to-cone", to_cone, "Emit the moment cone normals");
  labc->add_flag("--minimize", minimize, "Also minimize the volume over Reeb vectors");
  labc->callback([&] {
    command = "labc";
    build = [&] {
      payload["a"] = a;
      payload["b"] = b;
      payload["c"] = c;
      if (to_cone) payload["to_cone"] = true;
      if (minimize) payload["minimize"] = true;
    };
  });

  // gale-dual
  auto* gale = app.add_subcommand("gale-dual", "Fan rays from a charge matrix");
  gale->fallthrough();
  std::string charges;
  gale->add_option("--charges", charges, "Rows separated by ';', entries by ',', e.g. 2,2,-1,-3")
      ->required();
  gale->callback([&] {
    command = "gale-dual";
    build = [&] {
      Json rows = Json::array();
      std::stringstream ss(charges);
      std::string row;
      while (std::getline(ss, row, ';'))
        if (!row.empty()) rows.push_back(long_list(row));
      payload["charges"] = rows;
    };
  });

  // run: one job file {"command": ..., "payload": ...}
  auto* run_cmd = app.add_subcommand("run", "Run one job spec from a JSON file");
  run_cmd->fallthrough();
  std::string job_input;
  run_cmd->add_option("--input", job_input, "Job spec JSON file")->required();
  run_cmd->callback([&] { command = "run"; });

  // batch
  auto* batch = app.add_subcommand("batch", "Run newline-delimited job specs");
  batch->fallthrough();
  std::string batch_input;
  batch->add_option("--input", batch_input, "NDJSON file, '-' for stdin")->required();
  batch->callback([&] { command = "batch"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const RunOptions opts = g.options();
  try {
    if (command == "batch") {
      auto reports = run_batch(read_lines(batch_input), opts);
      write_batch(std::cout, reports, g.fmt());
      return exit_code(reports, g.strict);
    }
    if (command == "run") return emit(run(parse_job(read_json_file(job_input)), opts), g);
    build();
    JobSpec spec;
    spec.command = *parse_command(command);
    spec.payload = payload;
    return emit(run(spec, opts), g);
  } catch (const Error& e) {
    return emit_error(command, e, g);
  }
}
