#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ggs/cli.hpp"

namespace ggs::cli {

using nlohmann::json;

namespace {

json cache_key(const GGSSpec& spec, int depth) {
  return {{"p", spec.prime()}, {"vectors", spec.vectors()}, {"depth", depth}, {"version", kToolVersion}};
}

json entry_body(const json& key, const json& verdicts) { return {{"key", key}, {"verdicts", verdicts}}; }

}  // namespace

std::filesystem::path ResultCache::default_directory() {
  if (const char* dir = std::getenv("GGS_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "ggs";
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "ggs";
  return std::filesystem::temp_directory_path() / "ggs-cache";
}

std::filesystem::path ResultCache::entry_path(const GGSSpec& spec, int depth) const {
  return dir_ / (fnv1a_hex(cache_key(spec, depth).dump()) + ".json");
}

std::map<std::string, Verdict> ResultCache::load(const GGSSpec& spec, int depth, std::ostream& warn) const {
  const auto path = entry_path(spec, depth);
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::stringstream buffer;
  buffer << in.rdbuf();

  auto discard = [&](const std::string& why) {
    warn << "warning: discarding cache entry " << path.string() << ": " << why << "; recomputing\n";
    return std::map<std::string, Verdict>{};
  };
  json entry = json::parse(buffer.str(), nullptr, false);
  if (entry.is_discarded() || !entry.is_object()) return discard("not valid JSON");
  if (!entry.contains("key") || !entry.contains("verdicts") || !entry.contains("checksum"))
    return discard("missing fields");
  if (!entry["checksum"].is_string() ||
      entry["checksum"].get<std::string>() != fnv1a_hex(entry_body(entry["key"], entry["verdicts"]).dump()))
    return discard("checksum mismatch");
  if (entry["key"] != cache_key(spec, depth)) return discard("key mismatch");

  std::map<std::string, Verdict> verdicts;
  try {
    for (const auto& [id, vj] : entry["verdicts"].items()) {
      Verdict v = verdict_from_json(vj);
      if (v.claim_id != id) return discard("verdict id mismatch");
      verdicts.emplace(id, std::move(v));
    }
  } catch (const std::exception& e) {
    return discard(e.what());
  }
  return verdicts;
}

void ResultCache::store(const GGSSpec& spec, int depth, const std::map<std::string, Verdict>& verdicts) const {
  json vj = json::object();
  for (const auto& [id, v] : verdicts) vj[id] = verdict_to_json(v);
  const json key = cache_key(spec, depth);
  json entry = entry_body(key, vj);
  entry["checksum"] = fnv1a_hex(entry_body(key, vj).dump());

  std::filesystem::create_directories(dir_);
  const auto path = entry_path(spec, depth);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << entry.dump(1) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ggs::cli
