#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <iomanip>
#include <sstream>

#include "ggs/cli.hpp"

namespace ggs::cli {

using nlohmann::json;

const char* const kToolVersion = GGS_VERSION;

namespace {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return parts;
}

long long parse_integer(const std::string& text, const std::string& field) {
  long long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw InputError(field, field + ": '" + text + "' is not an integer");
  return value;
}

Status status_from_string(const std::string& s) {
  for (Status st : {Status::Holds, Status::Fails, Status::Skipped, Status::Vacuous})
    if (s == to_string(st)) return st;
  throw InputError("status", "unknown status '" + s + "'");
}

Classification classification_from_string(const std::string& s) {
  for (Classification c : {Classification::HasCSP, Classification::ConstantVectorException})
    if (s == to_string(c)) return c;
  throw InputError("classification", "unknown classification '" + s + "'");
}

std::string vectors_string(const GGSSpec& spec) {
  std::string out;
  for (const auto& row : spec.vectors()) {
    if (!out.empty()) out += ' ';
    out += '(';
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + std::to_string(row[j]);
    out += ')';
  }
  return out;
}

std::string details_string(const std::map<std::string, std::int64_t>& details, char sep) {
  std::string out;
  for (const auto& [k, v] : details) {
    if (!out.empty()) out += sep;
    out += k + "=" + std::to_string(v);
  }
  return out;
}

std::string fixed_ms(double ms) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << ms;
  return s.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

struct Tally {
  int holds = 0, fails = 0, skipped = 0, vacuous = 0;
};

Tally tally(const Report& report) {
  Tally t;
  for (const auto& v : report.verdicts) {
    switch (v.status) {
      case Status::Holds: ++t.holds; break;
      case Status::Fails: ++t.fails; break;
      case Status::Skipped: ++t.skipped; break;
      case Status::Vacuous: ++t.vacuous; break;
    }
  }
  return t;
}

}  // namespace

std::vector<std::vector<long long>> parse_vector_list(std::string_view text) {
  std::vector<std::vector<long long>> rows;
  if (trim(text).empty()) throw InputError("vectors", "vectors: no defining vectors given");
  for (const auto& row_text : split(text, ';')) {
    if (row_text.empty()) throw InputError("vectors", "vectors: empty row in '" + std::string(text) + "'");
    std::vector<long long> row;
    for (const auto& entry : split(row_text, ',')) row.push_back(parse_integer(entry, "vectors"));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> reduction_warnings(const SpecSource& source) {
  std::vector<std::string> out;
  if (source.p <= 0) return out;
  for (std::size_t i = 0; i < source.vectors.size(); ++i)
    for (std::size_t j = 0; j < source.vectors[i].size(); ++j) {
      const long long x = source.vectors[i][j];
      if (x >= 0 && x < source.p) continue;
      const long long r = ((x % source.p) + source.p) % source.p;
      out.push_back("entry " + std::to_string(j + 1) + " of vector " + std::to_string(i + 1) + " (" +
                    std::to_string(x) + ") reduced mod " + std::to_string(source.p) + " to " + std::to_string(r));
    }
  return out;
}

SpecSource parse_spec_file(std::string_view text) {
  SpecSource source;
  bool header = false, have_p = false, have_vectors = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header) {
      const auto words = split(t, ' ');
      if (words.size() != 2 || words[0] != "ggs-spec")
        throw InputError("header", "line " + std::to_string(line_no) + ": expected 'ggs-spec 1'");
      if (words[1] != "1")
        throw InputError("header", "unsupported spec file version '" + words[1] + "'");
      header = true;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError("line " + std::to_string(line_no), "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key == "p") {
      const long long p = parse_integer(value, "p");
      if (p <= 0 || p > 1000000) throw InputError("p", "p: " + value + " out of range");
      source.p = static_cast<int>(p);
      have_p = true;
    } else if (key == "vectors") {
      source.vectors = parse_vector_list(value);
      have_vectors = true;
    } else if (key == "label") {
      source.label = value;
    } else {
      throw InputError(key, "unknown key '" + key + "' on line " + std::to_string(line_no));
    }
  }
  if (!header) throw InputError("header", "missing 'ggs-spec 1' header");
  if (!have_p) throw InputError("p", "missing key 'p'");
  if (!have_vectors) throw InputError("vectors", "missing key 'vectors'");
  return source;
}

std::string format_spec_file(const SpecSource& source) {
  std::string out = "ggs-spec 1\np = " + std::to_string(source.p) + "\nvectors = ";
  for (std::size_t i = 0; i < source.vectors.size(); ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < source.vectors[i].size(); ++j)
      out += (j ? "," : "") + std::to_string(source.vectors[i][j]);
  }
  out += "\n";
  if (!source.label.empty()) out += "label = " + source.label + "\n";
  return out;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["id"] = v.claim_id;
  j["status"] = to_string(v.status);
  j["level"] = v.level;
  j["details"] = v.details;
  j["note"] = v.note;
  j["wall_ms"] = v.wall_ms;
  if (v.witness) {
    const auto& w = *v.witness;
    json wj;
    wj["kind"] = w.kind;
    wj["description"] = w.description;
    wj["level"] = w.level;
    wj["data"] = w.data;
    wj["element"] = w.element ? json(std::vector<Point>(w.element->images().begin(), w.element->images().end())) : json(nullptr);
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.claim_id = j.at("id").get<std::string>();
  v.status = status_from_string(j.at("status").get<std::string>());
  v.level = j.at("level").get<int>();
  v.details = j.at("details").get<std::map<std::string, std::int64_t>>();
  v.note = j.at("note").get<std::string>();
  v.wall_ms = j.at("wall_ms").get<double>();
  if (const auto& wj = j.at("witness"); !wj.is_null()) {
    Witness w;
    w.kind = wj.at("kind").get<std::string>();
    w.description = wj.at("description").get<std::string>();
    w.level = wj.at("level").get<int>();
    w.data = wj.at("data").get<std::map<std::string, std::int64_t>>();
    if (!wj.at("element").is_null()) w.element = Permutation(wj.at("element").get<std::vector<Point>>());
    v.witness = std::move(w);
  }
  return v;
}

std::string report_fingerprint(const json& j) {
  json copy = j;
  copy.erase("fingerprint");
  if (copy.contains("checks"))
    for (auto& c : copy["checks"]) c.erase("wall_ms");
  return fnv1a_hex(copy.dump());
}

json report_to_json(const Report& report, const std::string& label) {
  const Tally t = tally(report);
  json j;
  j["format"] = "ggs-report";
  j["schema"] = 1;
  j["tool_version"] = kToolVersion;
  j["spec"] = {{"p", report.spec.prime()}, {"vectors", report.spec.vectors()}, {"label", label}};
  j["depth"] = report.depth;
  j["degree"] = ipow(static_cast<std::size_t>(report.spec.prime()), report.depth);
  j["classification"] = to_string(report.classification);
  j["classification_note"] = report.classification_note;
  j["checks"] = json::array();
  for (const auto& v : report.verdicts) j["checks"].push_back(verdict_to_json(v));
  j["summary"] = {{"holds", t.holds}, {"fails", t.fails}, {"skipped", t.skipped}, {"vacuous", t.vacuous}};
  j["passed"] = !report.any_failed();
  j["fingerprint"] = report_fingerprint(j);
  return j;
}

ReportFile report_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "ggs-report") throw InputError("format", "not a ggs report");
    if (j.at("schema").get<int>() != 1) throw InputError("schema", "unsupported report schema");
    const auto& sj = j.at("spec");
    std::vector<std::vector<long long>> vectors = sj.at("vectors").get<std::vector<std::vector<long long>>>();
    ReportFile file{Report{GGSSpec::validate(sj.at("p").get<int>(), vectors), j.at("depth").get<int>(), {},
                           classification_from_string(j.at("classification").get<std::string>()),
                           j.at("classification_note").get<std::string>()},
                    sj.at("label").get<std::string>(), j.at("tool_version").get<std::string>(),
                    j.at("fingerprint").get<std::string>()};
    for (const auto& c : j.at("checks")) file.report.verdicts.push_back(verdict_from_json(c));
    return file;
  } catch (const json::exception& e) {
    throw InputError("report", std::string("malformed report: ") + e.what());
  }
}

std::string render_text(const Report& report, const std::string& label) {
  const Tally t = tally(report);
  std::ostringstream out;
  out << "spec: p=" << report.spec.prime() << " vectors=" << vectors_string(report.spec);
  if (!label.empty()) out << " label=" << label;
  out << "\n";
  out << "depth: " << report.depth << " (degree " << ipow(static_cast<std::size_t>(report.spec.prime()), report.depth)
      << ")\n";
  out << "classification: " << to_string(report.classification) << "\n";
  out << "note: " << report.classification_note << "\n\n";
  for (const auto& v : report.verdicts) {
    out << std::left << std::setw(30) << v.claim_id << std::setw(9) << to_string(v.status) << "N=" << v.level
        << "  " << fixed_ms(v.wall_ms) << " ms";
    if (!v.details.empty()) out << "  " << details_string(v.details, ' ');
    out << "\n";
    if (!v.note.empty()) out << "    " << v.note << "\n";
    if (v.witness) {
      out << "    witness: " << v.witness->kind << " at level " << v.witness->level << ": "
          << v.witness->description;
      if (!v.witness->data.empty()) out << " (" << details_string(v.witness->data, ' ') << ")";
      out << "\n";
    }
  }
  out << "\nresult: " << (report.any_failed() ? "FAIL" : "PASS") << " (" << t.holds << " holds, " << t.fails
      << " fails, " << t.skipped << " skipped, " << t.vacuous << " vacuous; verified at level " << report.depth
      << " only)\n";
  return out.str();
}

std::string render_csv(const Report& report) {
  std::ostringstream out;
  out << "check,status,level,wall_ms,details,note\n";
  for (const auto& v : report.verdicts)
    out << v.claim_id << ',' << to_string(v.status) << ',' << v.level << ',' << fixed_ms(v.wall_ms) << ','
        << csv_field(details_string(v.details, ';')) << ',' << csv_field(v.note) << "\n";
  return out.str();
}

}  // namespace ggs::cli
