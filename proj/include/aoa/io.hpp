#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "aoa/array.hpp"
#include "aoa/symmetry.hpp"

namespace aoa::io {

struct FormatError : std::runtime_error {
  int line;
  int column;
  FormatError(const std::string& msg, int line_no, int col)
      : std::runtime_error("line " + std::to_string(line_no) + ", column " + std::to_string(col) + ": " + msg),
        line(line_no),
        column(col) {}
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct ArrayFile {
  Array array;
  Metadata meta;
};

// "N k s", N rows of k levels, then optional "# key: value" lines.
ArrayFile parse_array(const std::string& text);
std::string serialize_array(const Array& a, const Metadata& meta = {});
ArrayFile read_array_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Line 1: "kind s k [param]"; line 2: generators "g|sigma" separated by ';';
// then core rows; then an optional "fixed:" line followed by fixed rows.
sym::SymmetricEncoding parse_encoding(const std::string& text);
std::string serialize_encoding(const sym::SymmetricEncoding& e);

struct MetricsSnapshot {
  std::string tol;   // exact rationals as text
  std::string unb1;
  std::string unb2;
  std::string d1;
  std::string d2;
  std::optional<double> df;  // empty when a column is constant
  double cd = 0;             // squared discrepancies
  double wd = 0;
  double md = 0;
};
MetricsSnapshot snapshot(const Array& a);
nlohmann::json to_json(const MetricsSnapshot& m);
MetricsSnapshot snapshot_from_json(const nlohmann::json& j);
// Exact on rationals, 1e-9 relative on reals. Returns the first differing key.
std::optional<std::string> compare_snapshots(const MetricsSnapshot& stored, const MetricsSnapshot& fresh);

struct CatalogEntry {
  std::string id;
  int runs = 0;
  int factors = 0;
  int levels = 0;
  int lambda = 0;  // 0 when s^2 does not divide N
  std::string provenance;  // construction, search, ip or imported
  nlohmann::json config;
  MetricsSnapshot metrics;
};

// Writes <id>.txt and <id>.json into dir. Returns the new id.
std::string catalog_add(const std::filesystem::path& dir, const Array& a, const std::string& provenance,
                        const nlohmann::json& config = nlohmann::json::object());

struct CatalogFilter {
  std::optional<int> runs, factors, levels;
  std::optional<std::string> provenance;
};

struct CatalogProblem {
  std::string id;
  std::string message;
};

struct CatalogListing {
  std::vector<CatalogEntry> entries;
  std::vector<CatalogProblem> problems;  // unreadable entries
};
CatalogListing catalog_list(const std::filesystem::path& dir, const CatalogFilter& filter = {});
// Recomputes every snapshot. Mismatches and corrupt entries land in problems.
std::vector<CatalogProblem> catalog_recheck(const std::filesystem::path& dir);

}  // namespace aoa::io
