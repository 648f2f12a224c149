#include <functional>
#include <map>
#include <numeric>

#include "doctest.h"

#include "aoa/constructions.hpp"
#include "aoa/ip_model.hpp"
#include "aoa/metrics.hpp"
#include "aoa/symmetry.hpp"

using namespace aoa;
using namespace aoa::ip;

namespace {

IpInstance inst(int s, int k, int lambda, int p, int eps = 1) {
  IpInstance i;
  i.s = s;
  i.k = k;
  i.lambda = lambda;
  i.p = p;
  i.epsilon = eps;
  return i;
}

// Every array with the stacked factorial prefix, visited in order.
void for_each_array(int n, int k, int s, const std::function<void(const Array&)>& fn) {
  Array a(n, k, s);
  for (int i = 0; i < n; ++i) {
    a.set(i, 0, (i % (s * s)) / s + 1);
    a.set(i, 1, (i % (s * s)) % s + 1);
  }
  const int cells = n * (k - 2);
  std::vector<int> d(cells, 1);
  while (true) {
    for (int c = 0; c < cells; ++c) a.set(c / (k - 2), 2 + c % (k - 2), d[c]);
    fn(a);
    int c = cells - 1;
    while (c >= 0 && d[c] == s) d[c--] = 1;
    if (c < 0) break;
    ++d[c];
  }
}

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS(validate(inst(1, 4, 1, 1)));
  CHECK_THROWS(validate(inst(2, 2, 1, 1)));
  CHECK_THROWS(validate(inst(2, 4, 1, 3)));
  IpInstance k3 = inst(2, 3, 1, 1);
  k3.symmetry = SymmetryKind::klein;
  CHECK_THROWS(validate(k3));
  IpInstance sc = inst(3, 4, 1, 1);
  sc.symmetry = SymmetryKind::semicyclic;
  sc.mbar = 0;
  CHECK_THROWS(validate(sc));
}

TEST_CASE("variable counts for (2,4,1)") {
  IpModel m = build_model(inst(2, 4, 1, 1));
  CHECK(m.count_prefix("x_") == 16);
  CHECK(m.count_prefix("z_") == 16);
  CHECK(m.count_prefix("d0_") == 4);
  CHECK(m.count_prefix("d1_") == 2);
  CHECK(m.count_prefix("d2_") == 8);
  CHECK(m.count_prefix("d3_") == 8);
  const auto& d0 = m.vars[m.var("d0_1_1")];
  CHECK(d0.lo == -1);
  CHECK(d0.hi == 1);
  const auto& d1 = m.vars[m.var("d1_1")];
  CHECK(d1.lo == -2);
  CHECK(d1.hi == 2);
  CHECK_THROWS(m.var("nope"));
}

TEST_CASE("OA assignments are feasible with objective 0") {
  for (auto [s, lambda] : {std::pair{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
    Array oa = *align_prefix(latin_square_oa(s, lambda));
    for (int p : {1, 2}) {
      IpInstance in = inst(s, 3, lambda, p);
      IpModel m = build_model(in);
      auto chk = evaluate(m, canonical_assignment(in, oa));
      CHECK(chk.feasible());
      CHECK(chk.objective == 0.0);
      auto rep = verify_solution(in, m, canonical_assignment(in, oa));
      CHECK(rep.ok());
      CHECK(is_oa(rep.array, 2));
    }
  }
}

TEST_CASE("canonical assignments satisfy the model and the objective identity") {
  for (int s : {3, 4, 5}) {
    Array a = *align_prefix(construct::ak_half({s, 2, 1, construct::Variant::half}));
    for (int p : {1, 2}) {
      IpInstance in = inst(s, a.factors(), 1, p);
      IpModel m = build_model(in);
      auto asg = canonical_assignment(in, a);
      auto chk = evaluate(m, asg);
      CHECK(chk.feasible());
      auto rep = verify_solution(in, m, asg);
      CHECK(rep.ok());
      CHECK(rep.d1_term == 0.0);
      CHECK(chk.objective == doctest::Approx(unbalance(a, 2, p).to_double()));
    }
  }
}

TEST_CASE("exhaustive optimum for (2,4,1)") {
  for (int p : {1, 2}) {
    IpInstance in = inst(2, 4, 1, p);
    auto r = enumerate_optimum(in, build_model(in));
    REQUIRE(r.optimum);
    CHECK(*r.optimum == 4);
    CHECK(r.visited == 256);
    REQUIRE(!r.witnesses.empty());
    CHECK(unbalance(r.witnesses[0], 2, 1) == Rational(4));
    CHECK(tolerance(r.witnesses[0], 2) == Rational(1));
  }
  IpInstance big = inst(3, 6, 2, 1);
  CHECK_THROWS(enumerate_optimum(big, build_model(big)));
}

TEST_CASE("semicyclic row map") {
  IpInstance in = inst(3, 5, 1, 1);
  in.symmetry = SymmetryKind::semicyclic;
  in.mbar = 2;
  // prefix (2,3) is row 6, prefix (3,2) is row 8
  CHECK(semicyclic_row_map(in, 6) == 8);
  CHECK(semicyclic_row_map(in, 1) == 1);
  IpInstance kl = inst(3, 5, 2, 1);
  CHECK(klein_row_map(kl, 2) == 4);
  CHECK(klein_row_map(kl, 9 + 2) == 9 + 4);
}

TEST_CASE("symmetry constraint counts") {
  IpInstance in = inst(3, 5, 1, 1);
  in.symmetry = SymmetryKind::semicyclic;
  in.mbar = 3;
  IpModel m = build_model(in);
  std::size_t before = m.constraints.size();
  add_symmetry(m, in);
  CHECK(m.constraints.size() == before);

  in.mbar = 1;
  IpModel full = build_model(in);
  add_symmetry(full, in);
  // union the tied x variables; every class should have s members
  std::vector<int> parent(full.vars.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (const auto& c : full.constraints)
    if (c.name.rfind("sim_", 0) == 0) parent[find(c.terms[0].var)] = find(c.terms[1].var);
  std::map<int, int> sizes;
  for (std::size_t v = 0; v < full.vars.size(); ++v)
    if (full.vars[v].name.rfind("x_", 0) == 0) ++sizes[find(static_cast<int>(v))];
  for (const auto& [root, size] : sizes) CHECK(size == 3);
}

TEST_CASE("symmetric feasible points have the declared automorphism") {
  struct Case {
    int s, k;
    SymmetryKind kind;
    int mbar;
    std::string gen;
  };
  for (const Case& c : {Case{2, 4, SymmetryKind::semicyclic, 1, "(1,2)|id"}, Case{2, 4, SymmetryKind::klein, 0, "id|(1,2)(3,4)"},
                        Case{3, 3, SymmetryKind::semicyclic, 2, "(2,3)|id"}, Case{3, 3, SymmetryKind::semicyclic, 1, "(1,2,3)|id"}}) {
    IpInstance in = inst(c.s, c.k, 1, 1, c.s);
    in.symmetry = c.kind;
    in.mbar = c.mbar;
    IpModel m = build_model(in);
    add_symmetry(m, in);
    auto g = sym::GroupElement::parse(c.gen, c.s, c.k);
    int feasible = 0;
    for_each_array(in.runs(), c.k, c.s, [&](const Array& a) {
      if (!evaluate(m, canonical_assignment(in, a)).feasible()) return;
      ++feasible;
      CHECK(sym::is_automorphism(g, a));
    });
    CHECK(feasible > 0);
  }
}

TEST_CASE("LP emission round-trips") {
  for (int p : {1, 2}) {
    IpInstance in = inst(3, 5, 1, p);
    in.symmetry = SymmetryKind::both;
    in.mbar = 2;
    IpModel m = build_model(in);
    add_symmetry(m, in);
    std::string lp = emit_lp(m);
    CHECK(lp.rfind("\\", 0) == 0);
    CHECK(lp.find("Subject To") != std::string::npos);
    CHECK(lp.find("Binaries") != std::string::npos);
    CHECK(lp.substr(lp.size() - 4) == "End\n");
    std::size_t start = 0;
    while (start < lp.size()) {
      std::size_t end = lp.find('\n', start);
      CHECK(end - start <= 255);
      start = end + 1;
    }
    IpModel back = parse_lp(lp);
    CHECK(back.vars.size() == m.vars.size());
    CHECK(back.constraints.size() == m.constraints.size());
    CHECK(emit_lp(back) == lp);
  }
}

TEST_CASE("p=2 objective is diagonal") {
  IpModel m = build_model(inst(2, 4, 1, 2));
  CHECK(m.objective.empty());
  CHECK(!m.quadratic_objective.empty());
  std::string lp = emit_lp(m);
  auto open = lp.find('[');
  auto close = lp.find(']');
  REQUIRE(open != std::string::npos);
  std::string quad = lp.substr(open, close - open);
  CHECK(quad.find(" * ") == std::string::npos);
  CHECK(lp.find("] / 2") != std::string::npos);
}

TEST_CASE("LP parse errors carry line numbers") {
  std::string lp = emit_lp(build_model(inst(2, 3, 1, 1)));
  std::string broken = lp;
  broken.replace(broken.find("Subject To"), 10, "Subject Tx");
  CHECK_THROWS_AS(parse_lp(broken), ParseError);
  try {
    parse_lp("\\ t\nMinimize\n obj: x +\nEnd\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line >= 3);
  }
}

TEST_CASE("MPS emission") {
  std::string mps = emit_mps(build_model(inst(2, 3, 1, 1)));
  CHECK(mps.rfind("NAME", 0) == 0);
  CHECK(mps.find("ROWS") != std::string::npos);
  CHECK(mps.find("COLUMNS") != std::string::npos);
  CHECK(mps.find("BOUNDS") != std::string::npos);
  CHECK(mps.find("ENDATA") != std::string::npos);
}

TEST_CASE("solution files") {
  Assignment a = parse_solution("# comment\nx_1_3_1 1\nd0_1_1   -1\n\n");
  CHECK(a.size() == 2);
  CHECK(a["d0_1_1"] == -1.0);
  CHECK_THROWS(parse_solution("x_1_3_1\n"));
  CHECK_THROWS(parse_solution("x_1_3_1 one\n"));
  IpInstance in = inst(2, 3, 1, 1);
  IpModel m = build_model(in);
  Array oa = *align_prefix(latin_square_oa(2, 1));
  Assignment c = canonical_assignment(in, oa);
  CHECK(parse_solution(format_solution(m, c)) == c);
}

TEST_CASE("verify_solution rejects bad assignments") {
  IpInstance in = inst(2, 4, 1, 1);
  IpModel m = build_model(in);
  Array base = *align_prefix(latin_square_oa(2, 1));
  std::vector<int> first{0};
  Array a = base.hconcat(base.select_columns(first));
  Assignment c = canonical_assignment(in, a);
  CHECK(verify_solution(in, m, c).ok());
  Assignment bad = c;
  bad["d0_1_1"] = 5;
  CHECK_THROWS_AS(verify_solution(in, m, bad), VerificationError);
  Assignment missing = c;
  missing.erase("x_1_3_1");
  CHECK_THROWS_AS(verify_solution(in, m, missing), VerificationError);
  Assignment two = c;
  two["x_1_3_1"] = 1;
  two["x_1_3_2"] = 1;
  CHECK_THROWS_AS(verify_solution(in, m, two), VerificationError);
  Assignment wrong_z = c;
  wrong_z["z_1_1_1"] = 1 - wrong_z["z_1_1_1"];
  auto rep = verify_solution(in, m, wrong_z);
  CHECK_FALSE(rep.z_ok);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("align_prefix") {
  CHECK_FALSE(align_prefix(Array(2, {{1, 1}, {1, 1}, {2, 2}, {2, 2}})).has_value());
  Array a(2, {{2, 2, 1}, {1, 1, 1}, {2, 1, 2}, {1, 2, 2}});
  auto b = align_prefix(a);
  REQUIRE(b);
  CHECK(b->column(0) == std::vector<int>{1, 1, 2, 2});
  CHECK(b->column(1) == std::vector<int>{1, 2, 1, 2});
  CHECK(b->column(2) == std::vector<int>{1, 2, 2, 1});
}
