#pragma once

// Command-line front end: spec input, report serialisation, the result cache
// and the `verify`, `info` and `table` subcommands.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ggs/verifier.hpp"

namespace ggs::cli {

extern const char* const kToolVersion;

/// Malformed user input; `field` names the offending key or flag.
class InputError : public std::invalid_argument {
 public:
  InputError(std::string field, const std::string& what)
      : std::invalid_argument(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct SpecSource {
  int p = 0;
  std::vector<std::vector<long long>> vectors;
  std::string label;
};

/// "1,2;2,1" -> {{1,2},{2,1}}. Whitespace is ignored.
std::vector<std::vector<long long>> parse_vector_list(std::string_view text);

/// Entries outside [0, p), one message per entry.
std::vector<std::string> reduction_warnings(const SpecSource& source);

/// Key-value spec file:
///
///   ggs-spec 1
///   p = 3
///   vectors = 1,2
///   label = Gupta-Sidki
///
/// Blank lines and lines starting with '#' are ignored.
SpecSource parse_spec_file(std::string_view text);
std::string format_spec_file(const SpecSource& source);

/// A Report together with what the JSON file adds around it.
struct ReportFile {
  Report report;
  std::string label;
  std::string version;
  std::string fingerprint;
};

nlohmann::json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

/// Includes the fingerprint, computed over everything except wall times.
nlohmann::json report_to_json(const Report& report, const std::string& label);
ReportFile report_from_json(const nlohmann::json& j);
/// FNV-1a 64 of the report with "wall_ms" and "fingerprint" removed, as hex.
std::string report_fingerprint(const nlohmann::json& j);

std::string render_text(const Report& report, const std::string& label);
std::string render_csv(const Report& report);

std::string fnv1a_hex(std::string_view data);

/// Per-check verdicts keyed by (p, vectors, depth, tool version). Entries
/// carry a checksum; anything unreadable or mismatching is discarded.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// $GGS_CACHE_DIR, else $XDG_CACHE_HOME/ggs, else $HOME/.cache/ggs.
  static std::filesystem::path default_directory();

  std::map<std::string, Verdict> load(const GGSSpec& spec, int depth, std::ostream& warn) const;
  void store(const GGSSpec& spec, int depth, const std::map<std::string, Verdict>& verdicts) const;
  std::filesystem::path entry_path(const GGSSpec& spec, int depth) const;

 private:
  std::filesystem::path dir_;
};

/// Depths that need --allow-slow: p = 3 with depth >= 6, or p >= 5 with depth > r + 3.
bool is_slow(const GGSSpec& spec, int depth);

/// Entry point of the `ggs` binary. Returns the process exit code:
/// 0 pass, 1 a verdict failed, 2 usage or validation error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ggs::cli
