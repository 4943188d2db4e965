#pragma once

// Job specifications, dispatch to the library modules, and the report
// format shared by the CLI and the batch runner.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace reebmin {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "reebmin";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Command {
  ConeMinimize,
  ConeTopology,
  LinkCheck,
  LinkEnumerate,
  ObstructHs,
  Join,
  Ypq,
  Labc,
  GaleDual,
};

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);
const std::vector<Command>& all_commands();

enum class Format { Json, Table, Csv };
std::optional<Format> parse_format(const std::string& name);

/// A command plus its payload. The payload is checked against the command's
/// schema by `parse_job`, which throws SchemaError.
struct JobSpec {
  Command command = Command::LinkCheck;
  Json payload = Json::object();

  Json to_json() const;
};

JobSpec parse_job(const Json& doc);
void validate_payload(Command c, const Json& payload);

enum class Outcome { Pass, Fail, Inconclusive, Error };
std::string to_string(Outcome o);

struct RunOptions {
  bool exact_certify = false;
  bool timing = false;
  std::optional<std::uint64_t> seed;  // overrides payload seeds when set
  unsigned threads = 1;
};

struct Report {
  Json doc;
  Outcome outcome = Outcome::Error;
};

/// Runs one job. Never throws: failures become error reports.
Report run(const JobSpec& spec, const RunOptions& opts = {});

/// Parses and runs one line of newline-delimited JSON.
Report run_line(const std::string& line, const RunOptions& opts = {});

/// Runs every non-blank line; results are in input order.
std::vector<Report> run_batch(const std::vector<std::string>& lines, const RunOptions& opts = {});

/// 0 on success, 1 on error, 2 on a failing outcome when strict.
int exit_code(const Report& r, bool strict);
int exit_code(const std::vector<Report>& rs, bool strict);

/// JSON text with every float printed as %.17g; indent < 0 gives one line.
std::string dump_json(const Json& j, int indent = 2);

void write_report(std::ostream& os, const Report& r, Format f);
void write_batch(std::ostream& os, const std::vector<Report>& rs, Format f);

}  // namespace reebmin
