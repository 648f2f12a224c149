// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "aoa/constructions.hpp"
#include "aoa/design.hpp"
#include "aoa/discrepancy.hpp"
#include "aoa/ip_model.hpp"
#include "aoa/metrics.hpp"
#include "aoa/search.hpp"
#include "aoa/symmetry.hpp"

using namespace aoa;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "first failure: " << what;
      pass = false;
    }
  }
};

int failures = 0;

void run(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.note << " (over the " << limit_s << " s limit)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s [%.2fs] %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.note.str().c_str());
  std::fflush(stdout);
}

Array random_array(std::mt19937_64& rng, int n, int k, int s) {
  Array a(n, k, s);
  std::uniform_int_distribution<int> lv(1, s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) a.set(i, j, lv(rng));
  return a;
}

sym::Permutation random_perm(std::mt19937_64& rng, int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  std::shuffle(v.begin(), v.end(), rng);
  return sym::Permutation(v);
}

std::string str(const Rational& r) { return r.str(); }

construct::Variant ext_variant(int s) { return s % 2 ? construct::Variant::odd_ext : construct::Variant::even_ext; }

}  // namespace

int main() {
  run(1, "trivial construction closed forms", 5, [](Outcome& o) {
    int cases = 0;
    for (int s = 2; s <= 10; ++s)
      for (int lambda : {1, 2}) {
        Array t = trivial_construct(latin_square_oa(s, lambda));
        for (int p : {1, 2}) {
          Rational u = unbalance(t, 2, p);
          o.require(u == trivial_unbalance(lambda, s, p),
                    "s=" + std::to_string(s) + " lambda=" + std::to_string(lambda) + " p=" + std::to_string(p) + " Unb=" + str(u));
          ++cases;
        }
        o.require(tolerance(t, 2) <= Rational(lambda * (s - 1)), "tolerance bound s=" + std::to_string(s));
      }
    o.note << cases << " cases";
  });

  run(2, "construction 1 golden values", 10, [](Outcome& o) {
    for (auto [s, k, u, tol] : {std::tuple{3, 5, 18, 1}, {4, 6, 48, 1}, {5, 7, 100, 1}, {7, 9, 294, 1}, {8, 10, 448, 1}, {9, 11, 648, 1}}) {
      Array a = construct::ak_half({s, 2, 1, construct::Variant::half});
      const std::string tag = "(" + std::to_string(s) + "," + std::to_string(k) + ")";
      o.require(a.factors() == k, tag + " factors");
      o.require(unbalance(a, 2, 2) == Rational(u), tag + " Unb2=" + str(unbalance(a, 2, 2)));
      o.require(unbalance(a, 2, 1) == Rational(u), tag + " Unb1=" + str(unbalance(a, 2, 1)));
      o.require(tolerance(a, 2) == Rational(tol), tag + " Tol");
    }
    if (o.pass) o.note << "6 rows exact";
  });

  run(3, "construction 2/3 golden values", 30, [](Outcome& o) {
    for (auto [s, k, u1, u2, tol] : {std::tuple{3, 8, 12, 18, 2}, {4, 10, 32, 64, 2}, {5, 12, 60, 150, 3}, {7, 16, 140, 490, 5},
                                     {8, 18, 192, 768, 6}, {9, 20, 252, 1134, 7}}) {
      Array a = construct::build({s, 2, 1, ext_variant(s)});
      const std::string tag = "(" + std::to_string(s) + "," + std::to_string(k) + ")";
      o.require(a.factors() == k, tag + " factors");
      o.require(unbalance(a, 2, 1) == Rational(u1), tag + " Unb1=" + str(unbalance(a, 2, 1)));
      o.require(unbalance(a, 2, 2) == Rational(u2), tag + " Unb2=" + str(unbalance(a, 2, 2)));
      o.require(tolerance(a, 2) == Rational(tol), tag + " Tol=" + str(tolerance(a, 2)));
    }
    if (o.pass) o.note << "6 rows exact";
  });

  run(4, "sub-OA structure of the golden constructions", 0, [](Outcome& o) {
    int checked = 0;
    auto verify = [&](const construct::ConstructionSpec& sp) {
      auto rep = construct::verify_construction(construct::build(sp), sp);
      for (const auto& item : rep.items) {
        const bool wanted = item.name.rfind("(0)", 0) == 0 || item.name.rfind("(1a)", 0) == 0 || item.name.rfind("(1b)", 0) == 0;
        if (!wanted) continue;
        ++checked;
        o.require(item.pass, std::string(construct::variant_name(sp.variant)) + " s=" + std::to_string(sp.s) + " " + item.name +
                                 ": " + item.detail);
      }
    };
    for (int s : {3, 4, 5, 7, 8, 9}) verify({s, 2, 1, construct::Variant::half});
    for (int s : {3, 4, 5, 7, 8, 9}) verify({s, 2, 1, ext_variant(s)});
    o.require(checked >= 36, "expected at least three items per construction, saw " + std::to_string(checked));
    if (o.pass) o.note << checked << " items";
  });

  run(5, "optimality certificates for l=2, p=2", 0, [](Outcome& o) {
    for (int s : {2, 3, 4, 5, 7, 8, 9}) {
      Array a = construct::ak_half({s, 2, 1, construct::Variant::half});
      o.require(unbalance(a, 2, 2) == lower_bound_unb22(a.runs(), a.factors(), s), "half s=" + std::to_string(s));
    }
    for (int s : {3, 4, 5, 7, 8, 9}) {
      Array a = construct::build({s, 2, 1, ext_variant(s)});
      o.require(unbalance(a, 2, 2) == lower_bound_unb22_lambda_two(s, 1), "ext s=" + std::to_string(s));
    }
  });

  run(6, "Hamming identity on 1000 random arrays", 30, [](Outcome& o) {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> nd(1, 20), kd(1, 8), sd(2, 5);
    int comparisons = 0;
    for (int rep = 0; rep < 1000; ++rep) {
      Array a = random_array(rng, nd(rng), kd(rng), sd(rng));
      for (int t = 1; t <= std::min(3, a.factors()); ++t) {
        o.require(unbalance2_via_hamming(a, t) == unbalance(a, t, 2), "array " + std::to_string(rep) + " t=" + std::to_string(t));
        ++comparisons;
      }
    }
    o.note << comparisons << " comparisons";
  });

  run(7, "brute-force optimum for (4,4,2)", 60, [](Outcome& o) {
    for (int p : {1, 2}) {
      auto r = search::brute_force_optimum(4, 4, 2, p);
      o.require(r.min_unbalance == Rational(4), "p=" + std::to_string(p) + " min Unb " + str(r.min_unbalance));
      o.require(r.min_tolerance == Rational(1), "min Tol " + str(r.min_tolerance));
    }
    // the prefix reduction agrees with the unrestricted space
    Rational best1(1000), best2(1000), best_tol(1000);
    for (int code = 0; code < (1 << 16); ++code) {
      Array a(4, 4, 2);
      for (int c = 0; c < 16; ++c) a.set(c / 4, c % 4, ((code >> c) & 1) + 1);
      best1 = std::min(best1, unbalance(a, 2, 1));
      best2 = std::min(best2, unbalance(a, 2, 2));
      best_tol = std::min(best_tol, tolerance(a, 2));
    }
    o.require(best1 == Rational(4) && best2 == Rational(4) && best_tol == Rational(1), "unrestricted enumeration");
    if (o.pass) o.note << "u=4 for p=1,2, e=1; 65536 unrestricted arrays agree";
  });

  run(8, "heuristic reproduction", 300, [](Outcome& o) {
    auto reach = [&](int n, int k, int s, search::SearchConfig cfg, int u, int tol) {
      for (int seed = 0; seed < 10; ++seed) {
        cfg.seed = static_cast<std::uint64_t>(seed);
        auto r = search::local_pareto_search(n, k, s, cfg);
        for (const auto& m : r.front.members)
          if (m.objective.unbalance == Rational(u) && m.objective.tolerance == Rational(tol)) return seed;
      }
      return -1;
    };
    search::SearchConfig plain;
    plain.p = 1;
    int a = reach(4, 4, 2, plain, 4, 1);
    search::SearchConfig bc;
    bc.p = 2;
    bc.encoding = search::Encoding::bicyclic;
    bc.bicyclic_r = 3;
    int b = reach(9, 5, 3, bc, 18, 1);
    o.require(a >= 0, "(4,4,2) plain did not reach (4,1)");
    o.require(b >= 0, "(9,5,3) bicyclic did not reach (18,1)");
    if (o.pass) o.note << "(4,1) at seed " << a << ", (18,1) at seed " << b;
  });

  run(9, "IP model soundness", 120, [](Outcome& o) {
    for (auto [s, lambda] : {std::pair{2, 1}, {3, 1}, {4, 1}, {2, 2}, {3, 2}}) {
      Array oa = *ip::align_prefix(latin_square_oa(s, lambda));
      for (int p : {1, 2}) {
        ip::IpInstance in;
        in.s = s;
        in.k = 3;
        in.lambda = lambda;
        in.p = p;
        auto m = ip::build_model(in);
        auto chk = ip::evaluate(m, ip::canonical_assignment(in, oa));
        o.require(chk.feasible() && chk.objective == 0.0, "OA assignment s=" + std::to_string(s));
      }
    }
    ip::IpInstance in;
    in.s = 2;
    in.k = 4;
    in.lambda = 1;
    in.p = 1;
    in.epsilon = 1;
    auto model = ip::build_model(in);
    auto r = ip::enumerate_optimum(in, model);
    o.require(r.optimum && *r.optimum == 4, "enumerated optimum");
    for (int p : {1, 2}) {
      ip::IpInstance big;
      big.s = 3;
      big.k = 5;
      big.lambda = 2;
      big.p = p;
      big.symmetry = ip::SymmetryKind::both;
      big.mbar = 2;
      auto bm = ip::build_model(big);
      ip::add_symmetry(bm, big);
      const std::string lp = ip::emit_lp(bm);
      o.require(ip::emit_lp(ip::parse_lp(lp)) == lp, "LP round-trip p=" + std::to_string(p));
    }
    const std::string lp = ip::emit_lp(model);
    o.require(ip::emit_lp(ip::parse_lp(lp)) == lp, "LP round-trip (2,4,1)");
    if (o.pass) o.note << "optimum 4 over " << r.feasible << " feasible of " << r.visited;
  });

  run(10, "D1/D2 values", 0, [](Outcome& o) {
    Array a = construct::ak_half({3, 2, 1, construct::Variant::half});
    o.require(design::d1(a) == Rational(9, 5), "D1=" + str(design::d1(a)));
    o.require(design::d2(a) == Rational(9, 5), "D2=" + str(design::d2(a)));
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> nd(2, 20), kd(2, 7), sd(2, 5);
    for (int rep = 0; rep < 200; ++rep) {
      Array r = random_array(rng, nd(rng), kd(rng), sd(rng));
      Rational pairs(binomial(r.factors(), 2));
      o.require(design::d1(r) == unbalance(r, 2, 1) / pairs && design::d2(r) == unbalance(r, 2, 2) / pairs,
                "random array " + std::to_string(rep));
    }
  });

  run(11, "discrepancy identities", 0, [](Outcome& o) {
    using disc::Kernel;
    for (Kernel k : {Kernel::centered, Kernel::wrap_around, Kernel::mixture}) {
      double err = disc::kernel_integral_error(k);
      o.require(err < 1e-10, std::string("kernel integrals ") + disc::kernel_name(k));
    }
    if (!o.pass) return;
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> nd(2, 20), kd(2, 6), sd(2, 5);
    std::uniform_real_distribution<double> bd(0.2, 1.5), gap(0.05, 1.0);
    int equalities = 0;
    for (int rep = 0; rep < 200; ++rep) {
      Array a = random_array(rng, nd(rng), kd(rng), sd(rng));
      const double b = bd(rng);
      auto v = disc::dd_squared(a, disc::DdParams(b + gap(rng), b));
      o.require(std::abs(v.hamming_form - v.unbalance_form) <= 1e-9 * std::max(1.0, std::abs(v.hamming_form)),
                "DD forms on array " + std::to_string(rep));
    }
    for (int rep = 0; rep < 200; ++rep) {
      Array a = random_array(rng, nd(rng), kd(rng), sd(rng));
      for (const auto& c : disc::check_discrepancy_bounds(a)) {
        o.require(c.holds, c.name + " bound on array " + std::to_string(rep));
        if (c.equality_expected) {
          ++equalities;
          o.require(c.equality_holds, c.name + " equality on array " + std::to_string(rep));
        }
      }
    }
    const double wd2 = disc::wd_squared(construct::ak_half({3, 2, 1, construct::Variant::half}));
    o.require(std::abs(wd2 - 0.3386) <= 5e-4, "WD^2 of (3,5) = " + std::to_string(wd2));
    if (o.pass) o.note << equalities << " equality cases, WD^2(3,5)=" << wd2;
  });

  run(12, "symmetry invariance and encodings", 0, [](Outcome& o) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> nd(1, 16), kd(2, 6), sd(2, 5);
    for (int rep = 0; rep < 500; ++rep) {
      Array a = random_array(rng, nd(rng), kd(rng), sd(rng));
      sym::GroupElement g{random_perm(rng, a.levels()), random_perm(rng, a.factors())};
      Array b = sym::act(g, a);
      bool same = true;
      for (int t = 1; t <= 2; ++t) {
        same = same && tolerance(a, t) == tolerance(b, t);
        for (int p = 1; p <= 2; ++p) same = same && unbalance(a, t, p) == unbalance(b, t, p);
      }
      o.require(same, "action " + std::to_string(rep));
    }
    Array bc(3, {{1, 1, 2, 3, 2}, {3, 2, 2, 1, 3}, {3, 1, 3, 2, 1}, {1, 3, 2, 1, 1}, {3, 2, 1, 2, 2}, {2, 1, 3, 3, 3}});
    auto e1 = sym::compress(bc, sym::EncodingKind::bicyclic, 3);
    o.require(e1.core.size() == 2 && sym::equivalent(sym::expand(e1), bc), "bicyclic example");
    Array qc(3, {{1, 1, 1, 1, 1}, {1, 1, 2, 3, 2}, {1, 1, 3, 2, 3}, {1, 3, 2, 1, 1}, {1, 2, 3, 1, 1}});
    auto e2 = sym::compress(qc, sym::EncodingKind::semicyclic, 2);
    o.require(e2.core.size() == 2 && e2.fixed_rows.size() == 1 && sym::equivalent(sym::expand(e2), qc), "quasicyclic example");
  });

  return failures == 0 ? 0 : 1;
}
