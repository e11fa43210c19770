#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "ggs/cli.hpp"

namespace ggs::cli {

using nlohmann::json;

namespace {

struct SpecOptions {
  int p = 0;
  std::string vectors;
  std::string file;
};

void add_spec_options(CLI::App* cmd, SpecOptions& o) {
  cmd->add_option("--p", o.p, "Odd prime p");
  cmd->add_option("--vectors", o.vectors, "Defining vectors, rows separated by ';', entries by ','");
  cmd->add_option("--spec", o.file, "Spec file (ggs-spec 1 key = value format)");
}

std::string read_file(const std::string& path, const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(field, "cannot read '" + path + "'");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct LoadedSpec {
  GGSSpec spec;
  std::string label;
};

LoadedSpec load_spec(const SpecOptions& o, std::ostream& err) {
  SpecSource source;
  if (!o.file.empty()) {
    if (o.p != 0 || !o.vectors.empty()) throw InputError("spec", "--spec cannot be combined with --p/--vectors");
    source = parse_spec_file(read_file(o.file, "spec"));
  } else {
    if (o.p == 0) throw InputError("p", "--p is required (or use --spec)");
    if (o.vectors.empty()) throw InputError("vectors", "--vectors is required (or use --spec)");
    source.p = o.p;
    source.vectors = parse_vector_list(o.vectors);
  }
  for (const auto& w : reduction_warnings(source)) err << "warning: " << w << "\n";
  return {GGSSpec::validate(source.p, source.vectors), source.label};
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("out", "cannot write '" + path + "'");
  file << text;
}

std::string row_string(std::span<const int> row) {
  std::string s = "(";
  for (std::size_t j = 0; j < row.size(); ++j) s += (j ? "," : "") + std::to_string(row[j]);
  return s + ")";
}

// Explicit depths are checked against the caps; the default falls back to
// the deepest level that needs no override.
int resolve_depth(const GGSSpec& spec, int requested, bool allow_slow, bool allow_large, std::ostream& err) {
  const int cap = depth_cap(spec.prime());
  if (requested != 0) {
    if (requested < 1) throw InputError("depth", "--depth must be at least 1");
    if (requested > cap && !allow_large)
      throw DepthCapExceeded("depth " + std::to_string(requested) + " exceeds the cap " + std::to_string(cap) +
                             " for p = " + std::to_string(spec.prime()) + " (degree limit " +
                             std::to_string(kDefaultDegreeCap) + "); pass --allow-large to override");
    if (is_slow(spec, requested) && !allow_slow)
      throw InputError("depth", "depth " + std::to_string(requested) + " is long-running for this spec; pass --allow-slow");
    return requested;
  }
  const int preferred = default_depth(spec);
  int depth = preferred;
  while (depth > 1 && is_slow(spec, depth) && !allow_slow) --depth;
  if (depth != preferred)
    err << "note: using depth " << depth << "; depth " << preferred << " needs --allow-slow\n";
  return depth;
}

std::vector<std::string> parse_check_list(const std::string& text) {
  std::vector<std::string> ids;
  std::stringstream s(text);
  std::string id;
  while (std::getline(s, id, ',')) {
    if (id.empty()) continue;
    const auto& all = check::all_ids();
    if (std::find(all.begin(), all.end(), id) == all.end()) {
      std::string known;
      for (const auto& k : all) known += (known.empty() ? "" : ", ") + k;
      throw InputError("checks", "unknown check '" + id + "' (known: " + known + ")");
    }
    ids.push_back(id);
  }
  if (ids.empty()) throw InputError("checks", "--checks names no check");
  return ids;
}

struct VerifyOptions {
  SpecOptions spec;
  int depth = 0;
  std::string checks;
  std::string out;
  std::string format = "text";
  bool allow_slow = false;
  bool allow_large = false;
  bool no_cache = false;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const auto [spec, label] = load_spec(o.spec, err);
  const int depth = resolve_depth(spec, o.depth, o.allow_slow, o.allow_large, err);

  std::vector<std::string> wanted = o.checks.empty() ? check::all_ids() : parse_check_list(o.checks);
  std::map<std::string, Verdict> known;
  std::optional<ResultCache> cache;
  if (!o.no_cache) {
    cache.emplace(ResultCache::default_directory());
    known = cache->load(spec, depth, err);
  }

  bool computed = false;
  std::optional<QuotientTower> tower;
  for (const auto& id : check::all_ids()) {
    if (std::find(wanted.begin(), wanted.end(), id) == wanted.end() || known.count(id)) continue;
    if (!tower) tower.emplace(GroupSession::build(spec, depth, BuildOptions{o.allow_large}));
    known[id] = run_check(*tower, id);
    computed = true;
  }
  if (cache && computed) {
    try {
      cache->store(spec, depth, known);
    } catch (const std::exception& e) {
      err << "warning: cache not written: " << e.what() << "\n";
    }
  }

  Report report{spec, depth, {}, classify_csp(spec), kClassificationNote};
  for (const auto& id : check::all_ids())
    if (std::find(wanted.begin(), wanted.end(), id) != wanted.end()) report.verdicts.push_back(known.at(id));

  std::string text;
  if (o.format == "json")
    text = report_to_json(report, label).dump(2) + "\n";
  else if (o.format == "csv")
    text = render_csv(report);
  else
    text = render_text(report, label);
  write_output(text, o.out, out);
  return report.any_failed() ? 1 : 0;
}

struct InfoOptions {
  SpecOptions spec;
  std::string format = "text";
};

int cmd_info(const InfoOptions& o, std::ostream& out, std::ostream& err) {
  const auto [spec, label] = load_spec(o.spec, err);
  const bool constant = is_constant(spec);
  const bool all_symmetric = std::all_of(spec.vectors().begin(), spec.vectors().end(),
                                         [](const auto& row) { return is_symmetric(row); });
  const Classification cls = classify_csp(spec);

  std::optional<Normalization> norm;
  std::string norm_error;
  try {
    norm = normalize(spec);
  } catch (const NormalizationImpossible& e) {
    norm_error = e.what();
  }
  const bool unchanged = norm && norm->spec == spec;

  if (o.format == "json") {
    json j;
    j["spec"] = {{"p", spec.prime()}, {"vectors", spec.vectors()}, {"label", label}};
    j["r"] = spec.rank();
    j["constant"] = constant;
    json sym = json::array();
    for (const auto& row : spec.vectors()) sym.push_back(is_symmetric(row));
    j["symmetric_rows"] = sym;
    j["classification"] = to_string(cls);
    if (norm) {
      j["normal_form"] = {{"case", norm->which == Normalization::Case::Symmetric ? "symmetric" : "non-symmetric"},
                          {"vectors", norm->spec.vectors()},
                          {"transform", norm->transform},
                          {"steps", norm->steps},
                          {"already_normalized", unchanged}};
    } else {
      j["normal_form"] = {{"error", norm_error}};
    }
    out << j.dump(2) << "\n";
    return 0;
  }

  out << "p = " << spec.prime() << ", r = " << spec.rank();
  if (!label.empty()) out << ", label = " << label;
  out << "\n";
  for (int i = 0; i < spec.rank(); ++i)
    out << "vector " << (i + 1) << ": " << row_string(spec.vector(i))
        << (is_symmetric(spec.vector(i)) ? " symmetric" : " non-symmetric") << "\n";
  if (constant)
    out << "constant; classification: ConstantVectorException (no congruence subgroup property)\n";
  else
    out << (all_symmetric ? "all rows symmetric" : "non-symmetric")
        << "; classification: HasCSP (congruence subgroup property)\n";
  if (!norm) {
    out << "normal form: unavailable (" << norm_error << ")\n";
    return 0;
  }
  out << "normal form (" << (norm->which == Normalization::Case::Symmetric ? "symmetric" : "non-symmetric")
      << " case):";
  for (int i = 0; i < norm->spec.rank(); ++i) out << " " << row_string(norm->spec.vector(i));
  out << "\n";
  if (unchanged) {
    out << "already normalized (first entry e_1,1 = 1)\n";
    return 0;
  }
  for (int i = 0; i < norm->spec.rank(); ++i)
    out << "normalized row " << (i + 1) << ": " << row_string(norm->spec.vector(i)) << "\n";
  out << "transform (new rows = T * old rows):\n";
  for (const auto& row : norm->transform) out << "  " << row_string(row) << "\n";
  out << "steps:\n";
  for (const auto& step : norm->steps) out << "  " << step << "\n";
  return 0;
}

struct TableOptions {
  SpecOptions spec;
  int depth = 0;
  std::string format = "text";
  bool allow_slow = false;
  bool allow_large = false;
};

struct TableRow {
  int n;
  std::size_t degree;
  int order_exponent;
  int derived_index_exponent;
  int rank;
  std::vector<int> stab_index_exponents;
};

int cmd_table(const TableOptions& o, std::ostream& out, std::ostream& err) {
  const auto [spec, label] = load_spec(o.spec, err);
  const int depth = resolve_depth(spec, o.depth, o.allow_slow, o.allow_large, err);
  QuotientTower tower(GroupSession::build(spec, depth, BuildOptions{o.allow_large}));

  std::vector<TableRow> rows;
  for (int n = 1; n <= depth; ++n) {
    const auto& g = tower.group(n);
    TableRow row{n, g.degree(), g.order_exponent(), g.order_exponent() - tower.derived(n).order_exponent(),
                 rank(g), {}};
    for (int m = 1; m <= n; ++m)
      row.stab_index_exponents.push_back(g.order_exponent() - level_stabilizer(g, m).order_exponent());
    rows.push_back(std::move(row));
  }

  auto joined = [](const std::vector<int>& xs, char sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(xs[i]);
    return s;
  };

  if (o.format == "json") {
    json j;
    j["spec"] = {{"p", spec.prime()}, {"vectors", spec.vectors()}, {"label", label}};
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"n", r.n},
                           {"degree", r.degree},
                           {"order_exponent", r.order_exponent},
                           {"derived_index_exponent", r.derived_index_exponent},
                           {"rank", r.rank},
                           {"stab_index_exponents", r.stab_index_exponents}});
    out << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "n,degree,order_exponent,derived_index_exponent,rank,stab_index_exponents\n";
    for (const auto& r : rows)
      out << r.n << ',' << r.degree << ',' << r.order_exponent << ',' << r.derived_index_exponent << ',' << r.rank
          << ',' << joined(r.stab_index_exponents, ';') << "\n";
  } else {
    out << "exponents are base p = " << spec.prime() << " logarithms\n";
    out << std::right << std::setw(3) << "n" << std::setw(9) << "degree" << std::setw(8) << "|G_n|" << std::setw(10)
        << "|G_n:G'|" << std::setw(6) << "rank" << "  |G_n:st(m)|, m = 1..n\n";
    for (const auto& r : rows)
      out << std::setw(3) << r.n << std::setw(9) << r.degree << std::setw(8) << r.order_exponent << std::setw(10)
          << r.derived_index_exponent << std::setw(6) << r.rank << "  " << joined(r.stab_index_exponents, ' ')
          << "\n";
  }
  return 0;
}

}  // namespace

bool is_slow(const GGSSpec& spec, int depth) {
  if (spec.prime() == 3) return depth >= 6;
  return depth > spec.rank() + 3;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-level verification of structural properties of multi-GGS groups", "ggs"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the checks in the level-N quotient and report verdicts");
  add_spec_options(verify_cmd, verify.spec);
  verify_cmd->add_option("--depth", verify.depth, "Quotient level N (default min(r+4, cap))");
  verify_cmd->add_option("--checks", verify.checks, "Comma-separated check ids (default all)");
  verify_cmd->add_option("--out", verify.out, "Write the report to a file instead of stdout");
  verify_cmd->add_option("--format", verify.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  verify_cmd->add_flag("--allow-slow", verify.allow_slow, "Permit long-running depths");
  verify_cmd->add_flag("--allow-large", verify.allow_large, "Lift the degree cap");
  verify_cmd->add_flag("--no-cache", verify.no_cache, "Neither read nor write the result cache");

  InfoOptions info;
  auto* info_cmd = app.add_subcommand("info", "Classify the defining vectors and show their normal form");
  add_spec_options(info_cmd, info.spec);
  info_cmd->add_option("--format", info.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "Order, abelianization, rank and stabilizer indices per level");
  add_spec_options(table_cmd, table.spec);
  table_cmd->add_option("--depth", table.depth, "Largest level (default as for verify)");
  table_cmd->add_option("--format", table.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  table_cmd->add_flag("--allow-slow", table.allow_slow, "Permit long-running depths");
  table_cmd->add_flag("--allow-large", table.allow_large, "Lift the degree cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(verify, out, err);
    if (info_cmd->parsed()) return cmd_info(info, out, err);
    return cmd_table(table, out, err);
  } catch (const SpecError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
  } catch (const InputError& e) {
    err << "error: " << e.field() << ": " << e.what() << "\n";
  } catch (const DepthCapExceeded& e) {
    err << "error: DepthCapExceeded: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace ggs::cli
