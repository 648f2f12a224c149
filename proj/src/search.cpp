#include "aoa/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "aoa/metrics.hpp"
#include "aoa/symmetry.hpp"

namespace aoa::search {

const char* encoding_name(Encoding e) {
  switch (e) {
    case Encoding::plain: return "plain";
    case Encoding::bicyclic: return "bicyclic";
    case Encoding::quasicyclic: return "quasicyclic";
  }
  return "?";
}

Encoding parse_encoding(const std::string& name) {
  if (name == "plain") return Encoding::plain;
  if (name == "bicyclic") return Encoding::bicyclic;
  if (name == "quasicyclic") return Encoding::quasicyclic;
  throw std::invalid_argument("unknown encoding '" + name + "'");
}

SearchSpace::SearchSpace(int n, int k, int s, Encoding enc, int bicyclic_r) : n_(n), k_(k), s_(s), enc_(enc) {
  if (n < 1 || k < 2 || s < 2) throw std::invalid_argument("search needs N >= 1, k >= 2, s >= 2");
  switch (enc) {
    case Encoding::plain:
      core_rows_ = n;
      for (int c = 0; c < n * k; ++c) images_.push_back({{c, 0}});
      break;
    case Encoding::bicyclic: {
      if (n % s != 0) throw std::invalid_argument("bicyclic encoding needs s | N");
      const int r = bicyclic_r > 0 ? bicyclic_r : sym::default_bicyclic_r(s, k);
      if (s % r != 0 || r > k) throw std::invalid_argument("bicyclic r must divide s and not exceed k");
      core_rows_ = n / s;
      for (int c = 0; c < core_rows_; ++c)
        for (int j = 0; j < k; ++j) {
          std::vector<Image> im;
          for (int q = 0; q < s; ++q) {
            const int col = j < r ? (j + q) % r : j;
            im.push_back({(c * s + q) * k + col, q});
          }
          images_.push_back(std::move(im));
        }
      break;
    }
    case Encoding::quasicyclic: {
      cycle_start_ = 2;
      const int orbit = s - 1;
      fixed_ = sym::semicyclic_fixed_count(n, s, 2);
      core_rows_ = (n - fixed_) / orbit;
      for (int c = 0; c < core_rows_; ++c)
        for (int j = 0; j < k; ++j) {
          std::vector<Image> im;
          for (int q = 0; q < orbit; ++q) im.push_back({(fixed_ + c * orbit + q) * k + j, q});
          images_.push_back(std::move(im));
        }
      break;
    }
  }
}

int SearchSpace::map_level(int v, int power) const {
  if (power == 0 || v < cycle_start_) return v;
  const int len = s_ - cycle_start_ + 1;
  return cycle_start_ + (v - cycle_start_ + power) % len;
}

bool SearchSpace::valid(const std::vector<int>& genome) const {
  if (static_cast<int>(genome.size()) != genome_size()) return false;
  for (int v : genome)
    if (v < 1 || v > s_) return false;
  if (enc_ == Encoding::quasicyclic)
    for (int c = 0; c < core_rows_; ++c) {
      bool all_fixed = true;
      for (int j = 0; j < k_ && all_fixed; ++j) all_fixed = genome[c * k_ + j] < cycle_start_;
      if (all_fixed) return false;
    }
  return true;
}

Array SearchSpace::expand(const std::vector<int>& genome) const {
  if (static_cast<int>(genome.size()) != genome_size()) throw std::invalid_argument("genome length mismatch");
  Array a(n_, k_, s_);
  for (int pos = 0; pos < genome_size(); ++pos)
    for (const auto& im : images_[pos]) a.set(im.cell / k_, im.cell % k_, map_level(genome[pos], im.power));
  return a;
}

std::vector<int> SearchSpace::random_genome(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<int> g(genome_size());
  for (auto& v : g) v = static_cast<int>(rng() % static_cast<std::uint64_t>(s_)) + 1;
  if (enc_ == Encoding::quasicyclic)
    for (int c = 0; c < core_rows_; ++c) {
      auto row_fixed = [&] {
        for (int j = 0; j < k_; ++j)
          if (g[c * k_ + j] >= cycle_start_) return false;
        return true;
      };
      while (row_fixed())
        for (int j = 0; j < k_; ++j) g[c * k_ + j] = static_cast<int>(rng() % static_cast<std::uint64_t>(s_)) + 1;
    }
  return g;
}

PairState::PairState(const Array& a, int p)
    : n_(a.runs()), k_(a.factors()), s_(a.levels()), p_(p), cells_(a.cells()) {
  if (p < 1 || p > 3) throw std::invalid_argument("search exponent must be 1, 2 or 3");
  pair_index_.assign(static_cast<std::size_t>(k_) * k_, -1);
  int np = 0;
  for (int i = 0; i < k_; ++i)
    for (int j = i + 1; j < k_; ++j) pair_index_[i * k_ + j] = np++;
  const std::int64_t ss = static_cast<std::int64_t>(s_) * s_;
  counts_.assign(static_cast<std::size_t>(np) * ss, 0);
  const std::int64_t maxdev = std::max<std::int64_t>(n_, n_ * ss - n_);
  hist_.assign(maxdev + 1, 0);
  powers_.resize(maxdev + 1);
  for (std::int64_t d = 0; d <= maxdev; ++d) {
    __int128 v = 1;
    for (int e = 0; e < p; ++e) v *= d;
    powers_[d] = v;
  }
  for (int r = 0; r < n_; ++r)
    for (int i = 0; i < k_; ++i)
      for (int j = i + 1; j < k_; ++j) {
        const auto slot = static_cast<std::size_t>(pair_index_[i * k_ + j]) * ss +
                          (cells_[r * k_ + i] - 1) * s_ + (cells_[r * k_ + j] - 1);
        ++counts_[slot];
      }
  for (auto c : counts_) {
    const auto d = std::abs(c * ss - n_);
    ++hist_[d];
    sum_ += powers_[d];
    maxdev_ = std::max(maxdev_, d);
  }
}

void PairState::bump(std::size_t slot, int delta) {
  const std::int64_t ss = static_cast<std::int64_t>(s_) * s_;
  const auto old_d = std::abs(counts_[slot] * ss - n_);
  counts_[slot] += delta;
  const auto new_d = std::abs(counts_[slot] * ss - n_);
  --hist_[old_d];
  ++hist_[new_d];
  sum_ += powers_[new_d] - powers_[old_d];
  if (new_d > maxdev_) maxdev_ = new_d;
  while (maxdev_ > 0 && hist_[maxdev_] == 0) --maxdev_;
}

void PairState::set_cell(int cell, int level) {
  const int old = cells_[cell];
  if (old == level) return;
  const int r = cell / k_, j = cell % k_;
  const std::size_t ss = static_cast<std::size_t>(s_) * s_;
  for (int o = 0; o < k_; ++o) {
    if (o == j) continue;
    const int other = cells_[r * k_ + o];
    const int lo = std::min(j, o), hi = std::max(j, o);
    const std::size_t base = static_cast<std::size_t>(pair_index_[lo * k_ + hi]) * ss;
    auto slot = [&](int v) { return base + (j < o ? (v - 1) * s_ + (other - 1) : (other - 1) * s_ + (v - 1)); };
    bump(slot(old), -1);
    bump(slot(level), +1);
  }
  cells_[cell] = level;
}

Objective PairState::objective() const {
  const std::int64_t ss = static_cast<std::int64_t>(s_) * s_;
  __int128 den = 1;
  for (int e = 0; e < p_; ++e) den *= ss;
  return {Rational::from_wide(sum_, den), Rational(maxdev_, ss)};
}

namespace {

// Lexicographic key for capped mode.
bool key_leq(const Objective& a, const Objective& b, const Rational& cap) {
  const Rational ea = std::max(Rational(0), a.tolerance - cap);
  const Rational eb = std::max(Rational(0), b.tolerance - cap);
  if (ea != eb) return ea < eb;
  return a.unbalance <= b.unbalance;
}

}  // namespace

bool ParetoFront::dominated_or_equal(const Objective& o) const {
  for (const auto& m : members)
    if (tol_cap ? key_leq(m.objective, o, *tol_cap) : covers(m.objective, o)) return true;
  return false;
}

bool ParetoFront::front_insert(const Member& m) {
  if (dominated_or_equal(m.objective)) return false;
  std::erase_if(members, [&](const Member& x) {
    return tol_cap ? key_leq(m.objective, x.objective, *tol_cap) : covers(m.objective, x.objective);
  });
  members.push_back(m);
  return true;
}

bool ParetoFront::is_antichain() const {
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = 0; j < members.size(); ++j)
      if (i != j && covers(members[i].objective, members[j].objective)) return false;
  return true;
}

std::size_t neighborhood_scan(const std::vector<std::vector<int>>& genomes, int s, int radius,
                              const std::function<bool(std::size_t, const std::vector<Change>&)>& visit) {
  if (radius < 1) throw std::invalid_argument("radius must be at least 1");
  if (radius > 2) throw std::invalid_argument("radius above 2 is not supported");
  std::size_t count = 0;
  std::vector<Change> ch;
  for (int stage = 1; stage <= radius; ++stage)
    for (std::size_t m = 0; m < genomes.size(); ++m) {
      const auto& g = genomes[m];
      const int len = static_cast<int>(g.size());
      if (stage == 1) {
        for (int c = 0; c < len; ++c)
          for (int v = 1; v <= s; ++v) {
            if (v == g[c]) continue;
            ch = {{c, v}};
            ++count;
            if (visit(m, ch)) return count;
          }
      } else {
        for (int c1 = 0; c1 < len; ++c1)
          for (int c2 = c1 + 1; c2 < len; ++c2)
            for (int v1 = 1; v1 <= s; ++v1) {
              if (v1 == g[c1]) continue;
              for (int v2 = 1; v2 <= s; ++v2) {
                if (v2 == g[c2]) continue;
                ch = {{c1, v1}, {c2, v2}};
                ++count;
                if (visit(m, ch)) return count;
              }
            }
      }
    }
  return count;
}

std::vector<Array> SearchResult::arrays() const {
  std::vector<Array> out;
  for (const auto& m : front.members) out.push_back(space.expand(m.genome));
  return out;
}

namespace {

Objective full_objective(const Array& a, int p) { return {unbalance(a, 2, p), tolerance(a, 2)}; }

struct Runner {
  const SearchSpace& space;
  const SearchConfig& cfg;
  ParetoFront front;
  std::vector<PairState> states;
  long passes = 0;
  std::uint64_t evaluations = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void apply(PairState& st, int pos, int level) {
    for (const auto& im : space.images(pos)) st.set_cell(im.cell, space.map_level(level, im.power));
  }

  bool out_of_time() const {
    if (cfg.time_budget_s <= 0) return false;
    const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
    return el.count() > cfg.time_budget_s;
  }

  void rebuild_states() {
    states.clear();
    for (const auto& m : front.members) states.emplace_back(space.expand(m.genome), cfg.p);
  }

  bool row_ok(const std::vector<int>& g, int pos) const {
    if (space.encoding() != Encoding::quasicyclic) return true;
    const int k = space.factors(), c = pos / k;
    for (int j = 0; j < k; ++j)
      if (g[c * k + j] >= 2) return true;
    return false;
  }

  void run(std::vector<int> init) {
    front.tol_cap = cfg.tol_cap;
    Member first{std::move(init), {}};
    first.objective = full_objective(space.expand(first.genome), cfg.p);
    front.members.push_back(first);
    rebuild_states();
    while (true) {
      if (cfg.max_passes > 0 && passes >= cfg.max_passes) {
        front.complete = false;
        break;
      }
      ++passes;
      std::vector<std::vector<int>> genomes;
      for (const auto& m : front.members) genomes.push_back(m.genome);
      bool changed = false, timed_out = false;
      neighborhood_scan(genomes, space.levels(), cfg.radius, [&](std::size_t mi, const std::vector<Change>& ch) {
        if ((evaluations & 1023) == 0 && out_of_time()) {
          timed_out = true;
          return true;
        }
        auto g = genomes[mi];
        for (const auto& c : ch) g[c.pos] = c.level;
        for (const auto& c : ch)
          if (!row_ok(g, c.pos)) return false;
        ++evaluations;
        auto& st = states[mi];
        for (const auto& c : ch) apply(st, c.pos, c.level);
        const Objective obj = st.objective();
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) apply(st, it->pos, genomes[mi][it->pos]);
        if (cfg.verify_incremental && !(full_objective(space.expand(g), cfg.p) == obj))
          throw std::logic_error("incremental evaluation disagrees with full recomputation");
        if (front.dominated_or_equal(obj)) return false;
        front.front_insert({std::move(g), obj});
        changed = true;
        return true;
      });
      if (timed_out) {
        front.complete = false;
        break;
      }
      if (changed) rebuild_states();
      if (cfg.log) {
        Objective best = front.members.front().objective;
        for (const auto& m : front.members)
          if (m.objective.unbalance < best.unbalance) best = m.objective;
        *cfg.log << "pass " << passes << " front " << front.members.size() << " best (" << best.unbalance << ", "
                 << best.tolerance << ")\n";
      }
      if (!changed) break;
    }
    for (auto& m : front.members) {
      const Objective o = full_objective(space.expand(m.genome), cfg.p);
      if (!(o == m.objective)) throw std::logic_error("front member objective failed recomputation");
    }
  }
};

}  // namespace

SearchResult local_pareto_search(int n, int k, int s, const SearchConfig& cfg) {
  if (cfg.p < 1 || cfg.p > 2) throw std::invalid_argument("search exponent must be 1 or 2");
  if (cfg.radius < 1 || cfg.radius > 2) throw std::invalid_argument("radius must be 1 or 2");
  if (n % (s * s) != 0) throw std::invalid_argument("s^2 must divide N");
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be positive");
  SearchSpace space(n, k, s, cfg.encoding, cfg.bicyclic_r);
  SearchResult result{ParetoFront{}, space, 0, 0};
  result.front.tol_cap = cfg.tol_cap;
  for (int i = 0; i < cfg.restarts; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    Runner r{space, cfg, {}, {}};
    r.run(space.random_genome(seed));
    result.passes += r.passes;
    result.evaluations += r.evaluations;
    if (!r.front.complete) result.front.complete = false;
    for (const auto& m : r.front.members) result.front.front_insert(m);
  }
  return result;
}

namespace {

std::uint64_t capped_pow(std::uint64_t b, int e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > cap / b) return cap + 1;
    r *= b;
  }
  return r;
}

// C(n + m - 1, m), saturating above cap.
std::uint64_t multiset_count(std::uint64_t n, int m, std::uint64_t cap) {
  long double r = 1;
  for (int i = 1; i <= m; ++i) {
    r = r * static_cast<long double>(n + static_cast<std::uint64_t>(i) - 1) / i;
    if (r > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(r)));
}

}  // namespace

BruteForceResult brute_force_optimum(int n, int k, int s, int p, std::optional<Rational> tol_cap, bool fix_prefix,
                                     std::size_t max_witnesses) {
  if (k < 2 || s < 2 || n < 1) throw std::invalid_argument("brute force needs k >= 2, s >= 2");
  if (p < 1 || p > 3) throw std::invalid_argument("exponent must be 1, 2 or 3");
  if (fix_prefix && n % (s * s) != 0) throw std::invalid_argument("fixed prefix needs s^2 | N");
  constexpr std::uint64_t kLimit = 100'000'000;
  const std::uint64_t codes = capped_pow(s, n, kLimit);
  const int free_cols = fix_prefix ? k - 2 : k;
  if (codes > kLimit || multiset_count(codes, free_cols, kLimit) > kLimit)
    throw std::length_error("search space exceeds 1e8 states");

  const std::int64_t ss = static_cast<std::int64_t>(s) * s;
  __int128 pden = 1;
  for (int e = 0; e < p; ++e) pden *= ss;
  auto dpow = [&](std::int64_t d) {
    __int128 v = 1;
    for (int e = 0; e < p; ++e) v *= d;
    return v;
  };

  std::vector<std::vector<int>> cols(k, std::vector<int>(n));
  if (fix_prefix) {
    // lambda stacked copies of the s x s factorial
    for (int i = 0; i < n; ++i) {
      const int idx = i % static_cast<int>(ss);
      cols[0][i] = idx / s + 1;
      cols[1][i] = idx % s + 1;
    }
  }
  auto decode = [&](std::uint64_t code, std::vector<int>& out) {
    for (int i = n - 1; i >= 0; --i) {
      out[i] = static_cast<int>(code % s) + 1;
      code /= s;
    }
  };
  std::vector<std::int64_t> cnt(ss);
  auto pair_stats = [&](int a, int b, __int128& sum, std::int64_t& mx) {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (int i = 0; i < n; ++i) ++cnt[(cols[a][i] - 1) * s + (cols[b][i] - 1)];
    for (auto c : cnt) {
      const auto d = std::abs(c * ss - n);
      sum += dpow(d);
      mx = std::max(mx, d);
    }
  };

  BruteForceResult res;
  bool have_unb = false, have_tol = false;
  __int128 best_sum = 0;
  std::int64_t best_tol = 0;
  const std::int64_t cap_dev =
      tol_cap ? floor(*tol_cap * Rational(ss)) : std::numeric_limits<std::int64_t>::max();

  const int first_free = fix_prefix ? 2 : 0;
  std::vector<std::uint64_t> code(k, 0);
  std::vector<__int128> psum(k + 1, 0);
  std::vector<std::int64_t> pmax(k + 1, 0);
  if (fix_prefix) {
    __int128 s0 = 0;
    std::int64_t m0 = 0;
    pair_stats(0, 1, s0, m0);
    psum[2] = s0;
    pmax[2] = m0;
  }

  std::function<void(int, std::uint64_t)> dfs = [&](int col, std::uint64_t lo) {
    if (col == k) {
      ++res.states;
      const __int128 sum = psum[k];
      const std::int64_t mx = pmax[k];
      if (!have_tol || mx < best_tol) best_tol = mx, have_tol = true;
      if (mx > cap_dev) return;
      if (!have_unb || sum < best_sum) {
        best_sum = sum;
        have_unb = true;
        res.witnesses.clear();
      }
      if (sum == best_sum && res.witnesses.size() < max_witnesses) {
        Array a(n, k, s);
        for (int j = 0; j < k; ++j)
          for (int i = 0; i < n; ++i) a.set(i, j, cols[j][i]);
        res.witnesses.push_back(std::move(a));
      }
      return;
    }
    for (std::uint64_t c = lo; c < codes; ++c) {
      code[col] = c;
      decode(c, cols[col]);
      __int128 sum = psum[col];
      std::int64_t mx = pmax[col];
      for (int o = 0; o < col; ++o) pair_stats(o, col, sum, mx);
      psum[col + 1] = sum;
      pmax[col + 1] = mx;
      // both partial objectives only grow with more columns
      const bool unb_dead = mx > cap_dev || (have_unb && sum > best_sum);
      const bool tol_dead = have_tol && mx >= best_tol;
      if (unb_dead && tol_dead) continue;
      dfs(col + 1, c);
    }
  };
  dfs(first_free, 0);

  res.feasible = have_unb;
  res.min_unbalance = have_unb ? Rational::from_wide(best_sum, pden) : Rational(0);
  res.min_tolerance = Rational(best_tol, ss);
  return res;
}

}  // namespace aoa::search
