#include "aoa/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aoa/design.hpp"
#include "aoa/discrepancy.hpp"
#include "aoa/metrics.hpp"

namespace aoa::io {

namespace {

struct Tok {
  std::string text;
  int col;
};

std::vector<Tok> tokens(const std::string& line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

int to_int(const Tok& t, int line) {
  if (t.text.empty() || t.text.size() > 9 ||
      !std::all_of(t.text.begin(), t.text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw FormatError("expected a non-negative integer, got '" + t.text + "'", line, t.col);
  return std::stoi(t.text);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l)) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    lines.push_back(l);
  }
  return lines;
}

bool blank(const std::string& l) { return l.find_first_not_of(" \t") == std::string::npos; }

std::vector<int> parse_row(const std::string& line, int line_no, int k, int s) {
  const auto tk = tokens(line);
  if (static_cast<int>(tk.size()) != k)
    throw FormatError("expected " + std::to_string(k) + " levels, found " + std::to_string(tk.size()), line_no,
                      tk.empty() ? 1 : tk.back().col);
  std::vector<int> row;
  for (const auto& t : tk) {
    const int v = to_int(t, line_no);
    if (v < 1 || v > s) throw FormatError("level " + t.text + " outside 1.." + std::to_string(s), line_no, t.col);
    row.push_back(v);
  }
  return row;
}

}  // namespace

ArrayFile parse_array(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw FormatError("empty file", 1, 1);
  const auto head = tokens(lines[0]);
  if (head.size() != 3) throw FormatError("header must be 'N k s'", 1, head.empty() ? 1 : head.front().col);
  const int n = to_int(head[0], 1), k = to_int(head[1], 1), s = to_int(head[2], 1);
  if (n < 1) throw FormatError("N must be positive", 1, head[0].col);
  if (k < 1) throw FormatError("k must be positive", 1, head[1].col);
  if (s < 1) throw FormatError("s must be positive", 1, head[2].col);
  if (static_cast<int>(lines.size()) < n + 1)
    throw FormatError("expected " + std::to_string(n) + " rows, file ends early", static_cast<int>(lines.size()) + 1, 1);
  ArrayFile f;
  f.array = Array(n, k, s);
  for (int i = 0; i < n; ++i) {
    const auto row = parse_row(lines[i + 1], i + 2, k, s);
    for (int j = 0; j < k; ++j) f.array.set(i, j, row[j]);
  }
  for (std::size_t li = n + 1; li < lines.size(); ++li) {
    const auto& l = lines[li];
    const int no = static_cast<int>(li) + 1;
    if (blank(l)) continue;
    if (l.rfind("# ", 0) != 0) throw FormatError("unexpected text after the array body", no, 1);
    const auto colon = l.find(": ", 2);
    if (colon == std::string::npos) throw FormatError("metadata must read '# key: value'", no, 3);
    f.meta.emplace_back(l.substr(2, colon - 2), l.substr(colon + 2));
  }
  return f;
}

std::string serialize_array(const Array& a, const Metadata& meta) {
  std::string out = std::to_string(a.runs()) + " " + std::to_string(a.factors()) + " " + std::to_string(a.levels()) + "\n";
  for (int i = 0; i < a.runs(); ++i) {
    for (int j = 0; j < a.factors(); ++j) {
      if (j) out += ' ';
      out += std::to_string(a(i, j));
    }
    out += '\n';
  }
  for (const auto& [key, value] : meta) out += "# " + key + ": " + value + "\n";
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ArrayFile read_array_file(const std::filesystem::path& path) { return parse_array(read_text_file(path)); }

sym::SymmetricEncoding parse_encoding(const std::string& text) {
  auto lines = split_lines(text);
  while (!lines.empty() && blank(lines.back())) lines.pop_back();
  if (lines.size() < 2) throw FormatError("encoding needs a header and a generator line", 1, 1);
  const auto head = tokens(lines[0]);
  if (head.size() < 3 || head.size() > 4) throw FormatError("header must be 'kind s k [param]'", 1, 1);
  sym::EncodingKind kind;
  try {
    kind = sym::parse_kind(head[0].text);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what(), 1, head[0].col);
  }
  const int s = to_int(head[1], 1), k = to_int(head[2], 1);
  const int param = head.size() == 4 ? to_int(head[3], 1) : 0;
  if ((kind == sym::EncodingKind::bicyclic || kind == sym::EncodingKind::semicyclic) && head.size() != 4)
    throw FormatError("this kind needs a parameter", 1, head.back().col);

  sym::SymmetricEncoding e;
  try {
    e = sym::make_encoding(kind, s, k, param);
  } catch (const std::invalid_argument& ex) {
    throw FormatError(ex.what(), 1, 1);
  }
  std::vector<sym::GroupElement> gens;
  {
    std::stringstream ss(lines[1]);
    std::string item;
    while (std::getline(ss, item, ';')) {
      if (blank(item)) continue;
      try {
        gens.push_back(sym::GroupElement::parse(item, s, k));
      } catch (const std::exception& ex) {
        throw FormatError(std::string("bad generator: ") + ex.what(), 2, 1);
      }
    }
  }
  if (gens.empty()) throw FormatError("no generator given", 2, 1);
  if (kind == sym::EncodingKind::composite)
    e.generators = gens;
  else if (gens != e.generators)
    throw FormatError("generator does not match '" + head[0].text + "' (expected " + e.generators[0].str() + ")", 2, 1);

  bool fixed = false;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const int no = static_cast<int>(li) + 1;
    if (lines[li] == "fixed:") {
      if (fixed) throw FormatError("second 'fixed:' marker", no, 1);
      fixed = true;
      continue;
    }
    (fixed ? e.fixed_rows : e.core).push_back(parse_row(lines[li], no, k, s));
  }
  try {
    sym::validate(e);
  } catch (const std::invalid_argument& ex) {
    throw FormatError(ex.what(), static_cast<int>(lines.size()), 1);
  }
  return e;
}

std::string serialize_encoding(const sym::SymmetricEncoding& e) {
  std::string out = std::string(sym::kind_name(e.kind)) + " " + std::to_string(e.levels) + " " + std::to_string(e.factors);
  if (e.kind == sym::EncodingKind::bicyclic || e.kind == sym::EncodingKind::semicyclic)
    out += " " + std::to_string(e.param);
  out += "\n";
  for (std::size_t g = 0; g < e.generators.size(); ++g) out += (g ? ";" : "") + e.generators[g].str();
  out += "\n";
  auto row = [&](const std::vector<int>& r) {
    for (std::size_t j = 0; j < r.size(); ++j) out += (j ? " " : "") + std::to_string(r[j]);
    out += "\n";
  };
  for (const auto& r : e.core) row(r);
  if (!e.fixed_rows.empty()) {
    out += "fixed:\n";
    for (const auto& r : e.fixed_rows) row(r);
  }
  return out;
}

MetricsSnapshot snapshot(const Array& a) {
  if (a.factors() < 2) throw std::invalid_argument("catalog arrays need at least two columns");
  MetricsSnapshot m;
  m.tol = tolerance(a, 2).str();
  m.unb1 = unbalance(a, 2, 1).str();
  m.unb2 = unbalance(a, 2, 2).str();
  m.d1 = design::d1(a).str();
  m.d2 = design::d2(a).str();
  try {
    m.df = design::d_value(a, design::default_contrast(a.levels()));
  } catch (const design::SingularColumnError&) {
    m.df.reset();
  }
  m.cd = disc::cd_squared(a);
  m.wd = disc::wd_squared(a);
  m.md = disc::md_squared(a);
  return m;
}

nlohmann::json to_json(const MetricsSnapshot& m) {
  nlohmann::json j;
  j["tol"] = m.tol;
  j["unb1"] = m.unb1;
  j["unb2"] = m.unb2;
  j["d1"] = m.d1;
  j["d2"] = m.d2;
  j["df"] = m.df ? nlohmann::json(*m.df) : nlohmann::json(nullptr);
  j["cd2"] = m.cd;
  j["wd2"] = m.wd;
  j["md2"] = m.md;
  return j;
}

MetricsSnapshot snapshot_from_json(const nlohmann::json& j) {
  MetricsSnapshot m;
  m.tol = j.at("tol").get<std::string>();
  m.unb1 = j.at("unb1").get<std::string>();
  m.unb2 = j.at("unb2").get<std::string>();
  m.d1 = j.at("d1").get<std::string>();
  m.d2 = j.at("d2").get<std::string>();
  if (!j.at("df").is_null()) m.df = j.at("df").get<double>();
  m.cd = j.at("cd2").get<double>();
  m.wd = j.at("wd2").get<double>();
  m.md = j.at("md2").get<double>();
  return m;
}

std::optional<std::string> compare_snapshots(const MetricsSnapshot& a, const MetricsSnapshot& b) {
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)); };
  if (a.tol != b.tol) return "tol";
  if (a.unb1 != b.unb1) return "unb1";
  if (a.unb2 != b.unb2) return "unb2";
  if (a.d1 != b.d1) return "d1";
  if (a.d2 != b.d2) return "d2";
  if (a.df.has_value() != b.df.has_value() || (a.df && !close(*a.df, *b.df))) return "df";
  if (!close(a.cd, b.cd)) return "cd2";
  if (!close(a.wd, b.wd)) return "wd2";
  if (!close(a.md, b.md)) return "md2";
  return std::nullopt;
}

namespace {

CatalogEntry entry_from_json(const nlohmann::json& j) {
  CatalogEntry e;
  e.id = j.at("id").get<std::string>();
  e.runs = j.at("N").get<int>();
  e.factors = j.at("k").get<int>();
  e.levels = j.at("s").get<int>();
  e.lambda = j.at("lambda").get<int>();
  e.provenance = j.at("provenance").get<std::string>();
  e.config = j.value("config", nlohmann::json::object());
  e.metrics = snapshot_from_json(j.at("metrics"));
  return e;
}

std::vector<std::filesystem::path> sidecars(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& de : std::filesystem::directory_iterator(dir))
    if (de.is_regular_file() && de.path().extension() == ".json") out.push_back(de.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string catalog_add(const std::filesystem::path& dir, const Array& a, const std::string& provenance,
                        const nlohmann::json& config) {
  static const std::vector<std::string> kinds{"construction", "search", "ip", "imported"};
  if (std::find(kinds.begin(), kinds.end(), provenance) == kinds.end())
    throw std::invalid_argument("unknown provenance '" + provenance + "'");
  std::filesystem::create_directories(dir);
  const std::string stem =
      "N" + std::to_string(a.runs()) + "_k" + std::to_string(a.factors()) + "_s" + std::to_string(a.levels()) + "_" + provenance;
  std::string id;
  for (int n = 1;; ++n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "_%03d", n);
    id = stem + buf;
    if (!std::filesystem::exists(dir / (id + ".json")) && !std::filesystem::exists(dir / (id + ".txt"))) break;
  }
  const std::int64_t ss = static_cast<std::int64_t>(a.levels()) * a.levels();
  nlohmann::json j;
  j["id"] = id;
  j["N"] = a.runs();
  j["k"] = a.factors();
  j["s"] = a.levels();
  j["lambda"] = a.runs() % ss == 0 ? a.runs() / ss : 0;
  j["provenance"] = provenance;
  j["config"] = config;
  j["metrics"] = to_json(snapshot(a));
  write_text_file(dir / (id + ".txt"), serialize_array(a));
  write_text_file(dir / (id + ".json"), j.dump(2) + "\n");
  return id;
}

CatalogListing catalog_list(const std::filesystem::path& dir, const CatalogFilter& filter) {
  CatalogListing out;
  for (const auto& p : sidecars(dir)) {
    CatalogEntry e;
    try {
      e = entry_from_json(nlohmann::json::parse(read_text_file(p)));
    } catch (const std::exception& ex) {
      out.problems.push_back({p.stem().string(), std::string("corrupt entry: ") + ex.what()});
      continue;
    }
    if (filter.runs && e.runs != *filter.runs) continue;
    if (filter.factors && e.factors != *filter.factors) continue;
    if (filter.levels && e.levels != *filter.levels) continue;
    if (filter.provenance && e.provenance != *filter.provenance) continue;
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::vector<CatalogProblem> catalog_recheck(const std::filesystem::path& dir) {
  auto listing = catalog_list(dir);
  auto problems = listing.problems;
  for (const auto& e : listing.entries) {
    try {
      const auto f = read_array_file(dir / (e.id + ".txt"));
      const Array& a = f.array;
      if (a.runs() != e.runs || a.factors() != e.factors || a.levels() != e.levels) {
        problems.push_back({e.id, "array dimensions differ from the sidecar"});
        continue;
      }
      if (auto key = compare_snapshots(e.metrics, snapshot(a)))
        problems.push_back({e.id, "metric mismatch: " + *key});
    } catch (const std::exception& ex) {
      problems.push_back({e.id, std::string("corrupt entry: ") + ex.what()});
    }
  }
  return problems;
}

}  // namespace aoa::io
