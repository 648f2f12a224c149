#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aoa/array.hpp"
#include "aoa/rational.hpp"

namespace aoa::search {

struct Objective {
  Rational unbalance;  // Unb_{p,2}
  Rational tolerance;  // Tol_2
  friend bool operator==(const Objective&, const Objective&) = default;
};

// Componentwise a <= b.
inline bool covers(const Objective& a, const Objective& b) {
  return a.unbalance <= b.unbalance && a.tolerance <= b.tolerance;
}

enum class Encoding { plain, bicyclic, quasicyclic };
const char* encoding_name(Encoding e);
Encoding parse_encoding(const std::string& name);

struct SearchConfig {
  int p = 2;
  int radius = 2;
  std::uint64_t seed = 0;
  Encoding encoding = Encoding::plain;
  int bicyclic_r = 0;          // 0: largest divisor of s not above k
  long max_passes = 0;         // 0: unlimited
  double time_budget_s = 0;    // 0: unlimited
  std::optional<Rational> tol_cap;  // HMUP: lexicographic (Tol <= cap, then Unb)
  int restarts = 1;            // seeds seed, seed+1, ...
  bool verify_incremental = false;
  std::ostream* log = nullptr;
};

// Maps a genome (core cells in row-major order) to the expanded N x k array.
class SearchSpace {
 public:
  SearchSpace(int n, int k, int s, Encoding enc, int bicyclic_r = 0);
  int runs() const { return n_; }
  int factors() const { return k_; }
  int levels() const { return s_; }
  Encoding encoding() const { return enc_; }
  int genome_size() const { return static_cast<int>(images_.size()); }
  int core_rows() const { return core_rows_; }
  int fixed_rows() const { return fixed_; }

  struct Image {
    int cell;   // expanded cell index
    int power;  // level map exponent
  };
  const std::vector<Image>& images(int pos) const { return images_[pos]; }
  int map_level(int v, int power) const;
  bool valid(const std::vector<int>& genome) const;
  Array expand(const std::vector<int>& genome) const;
  std::vector<int> random_genome(std::uint64_t seed) const;

 private:
  int n_, k_, s_;
  Encoding enc_;
  int core_rows_ = 0;
  int fixed_ = 0;
  int cycle_start_ = 1;  // levels cycle_start..s rotate
  std::vector<std::vector<Image>> images_;
};

// Pair counts of an expanded array with O(k) single-cell updates.
class PairState {
 public:
  PairState(const Array& a, int p);
  void set_cell(int cell, int level);
  int cell(int idx) const { return cells_[idx]; }
  Objective objective() const;

 private:
  void bump(std::size_t slot, int delta);
  int n_, k_, s_, p_;
  std::vector<int> cells_;
  std::vector<int> pair_index_;  // k x k -> pair number
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> hist_;   // histogram of |count s^2 - N|
  std::vector<__int128> powers_;
  __int128 sum_ = 0;
  std::int64_t maxdev_ = 0;
};

struct Member {
  std::vector<int> genome;
  Objective objective;
};

struct ParetoFront {
  std::vector<Member> members;
  bool complete = true;
  // Lexicographic (Tol excess over cap, Unb) order instead of componentwise.
  std::optional<Rational> tol_cap;

  bool dominated_or_equal(const Objective& o) const;
  bool front_insert(const Member& m);
  bool is_antichain() const;
};

struct Change {
  int pos;
  int level;
};

// Visits every genome within Hamming distance 1..radius of each member, in
// scan order. The visitor returns true to stop. Returns the number visited.
std::size_t neighborhood_scan(const std::vector<std::vector<int>>& genomes, int s, int radius,
                              const std::function<bool(std::size_t member, const std::vector<Change>&)>& visit);

struct SearchResult {
  ParetoFront front;
  SearchSpace space;
  long passes = 0;
  std::uint64_t evaluations = 0;
  std::vector<Array> arrays() const;
};

SearchResult local_pareto_search(int n, int k, int s, const SearchConfig& cfg);

struct BruteForceResult {
  Rational min_unbalance;
  Rational min_tolerance;
  bool feasible = false;  // some array meets the tolerance cap
  std::vector<Array> witnesses;
  std::uint64_t states = 0;
};

// fix_prefix pins the first two columns to lambda stacked copies of the s x s
// factorial. The other columns are enumerated as a nondecreasing sequence of
// column vectors either way.
BruteForceResult brute_force_optimum(int n, int k, int s, int p, std::optional<Rational> tol_cap = std::nullopt,
                                     bool fix_prefix = true, std::size_t max_witnesses = 16);

}  // namespace aoa::search
