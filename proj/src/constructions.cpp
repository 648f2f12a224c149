#include "aoa/constructions.hpp"

#include <algorithm>
#include <stdexcept>

#include "aoa/metrics.hpp"

namespace aoa::construct {

using gf::Element;
using gf::Field;

namespace {

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int linear_columns(int s, int ell) { return (ipow(s, ell) - 1) / (s - 1); }

// Row (x, y) for row index idx: x major, y lexicographic.
struct Point {
  Element x;
  std::vector<Element> y;
};

std::vector<Point> points(const Field& f, int ell) {
  const int s = f.order();
  std::vector<Point> out;
  out.reserve(ipow(s, ell));
  for (int idx = 0; idx < ipow(s, ell); ++idx) {
    Point pt;
    int rest = idx;
    std::vector<int> d(ell);
    for (int i = ell - 1; i >= 0; --i) {
      d[i] = rest % s;
      rest /= s;
    }
    pt.x = {d[0]};
    for (int i = 1; i < ell; ++i) pt.y.push_back({d[i]});
    out.push_back(std::move(pt));
  }
  return out;
}

Element dot(const Field& f, const std::vector<Element>& g, const std::vector<Element>& y) {
  Element r = f.zero();
  for (std::size_t i = 0; i < g.size(); ++i) r = f.add(r, f.mul(g[i], y[i]));
  return r;
}

struct Column {
  Element a;
  const std::vector<Element>* gamma;
};

std::vector<Column> pair_columns(const Field& f, const GammaSet& gamma) {
  std::vector<Column> out;
  for (int a = 0; a < f.order(); ++a)
    for (const auto& g : gamma) out.push_back({{a}, &g});
  return out;
}

void put(Array& out, int row, int col, const Field& f, Element e) { out.set(row, col, f.to_level(e)); }

}  // namespace

GammaSet gamma_set(const Field& f, int ell) {
  if (ell < 2) throw std::invalid_argument("ell must be at least 2");
  const int s = f.order(), d = ell - 1;
  GammaSet out;
  for (int idx = 1; idx < ipow(s, d); ++idx) {
    std::vector<Element> v(d);
    int rest = idx;
    for (int i = d - 1; i >= 0; --i) {
      v[i] = {rest % s};
      rest /= s;
    }
    auto first = std::find_if(v.begin(), v.end(), [](Element e) { return e.value != 0; });
    if (*first == f.one()) out.push_back(std::move(v));
  }
  return out;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::half: return "half";
    case Variant::odd_ext: return "odd-ext";
    case Variant::even_ext: return "even-ext";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  if (name == "half") return Variant::half;
  if (name == "odd-ext" || name == "odd_ext") return Variant::odd_ext;
  if (name == "even-ext" || name == "even_ext") return Variant::even_ext;
  throw std::invalid_argument("unknown construction variant '" + name + "'");
}

void validate(const ConstructionSpec& spec) {
  auto [p, m] = gf::prime_power(spec.s);
  if (p == 0) throw std::invalid_argument(std::to_string(spec.s) + " is not a prime power");
  if (spec.ell < 2) throw std::invalid_argument("ell must be at least 2");
  if (spec.kappa < 1) throw std::invalid_argument("kappa must be positive");
  const int s = spec.s;
  switch (spec.variant) {
    case Variant::half:
      if (spec.kappa > s * ((ipow(s, spec.ell - 1) - 1) / (s - 1)))
        throw std::invalid_argument("kappa exceeds s(s^(ell-1)-1)/(s-1)");
      break;
    case Variant::odd_ext:
      if (p == 2) throw std::invalid_argument("odd extension needs odd s");
      if (spec.kappa > s - 1) throw std::invalid_argument("kappa exceeds s-1");
      break;
    case Variant::even_ext:
      if (p != 2) throw std::invalid_argument("even extension needs even s");
      if (s == 2) throw std::invalid_argument("even extension needs s > 2");
      if (spec.kappa > s - 1) throw std::invalid_argument("kappa exceeds s-1");
      break;
  }
}

int expected_runs(const ConstructionSpec& spec) {
  const int n = ipow(spec.s, spec.ell);
  return spec.variant == Variant::half ? n : 2 * n;
}

int expected_factors(const ConstructionSpec& spec) {
  const int nl = linear_columns(spec.s, spec.ell);
  return spec.variant == Variant::half ? nl + spec.kappa : 2 * nl - 1 + spec.kappa;
}

Rational expected_tolerance(const ConstructionSpec& spec) {
  const int scale = ipow(spec.s, spec.ell - 2);
  if (spec.variant == Variant::half) return Rational(scale);
  return Rational(std::max(2, spec.s - 2) * scale);
}

Rational expected_unbalance(const ConstructionSpec& spec, int p) {
  const Rational s(spec.s);
  const Rational scale = pow(pow(s, spec.ell - 2), p);
  if (spec.variant == Variant::half) return Rational(spec.kappa) * s * s * (s - 1) * scale;
  const Rational pairs(binomial(spec.kappa + 1, 2));
  return pairs * Rational(2) * s * (s - 2) * (pow(s - 2, p - 1) + pow(Rational(2), p - 1)) * scale;
}

Array linear_block(const Field& f, int ell) {
  const auto gamma = gamma_set(f, ell);
  const auto cols = pair_columns(f, gamma);
  const auto pts = points(f, ell);
  Array out(static_cast<int>(pts.size()), 1 + static_cast<int>(cols.size()), f.order());
  for (std::size_t r = 0; r < pts.size(); ++r) {
    const auto& pt = pts[r];
    const int i = static_cast<int>(r);
    put(out, i, 0, f, pt.x);
    for (std::size_t c = 0; c < cols.size(); ++c)
      put(out, i, 1 + static_cast<int>(c), f, f.add(f.mul(cols[c].a, pt.x), dot(f, *cols[c].gamma, pt.y)));
  }
  return out;
}

Array ak_half(const ConstructionSpec& spec) {
  if (spec.variant != Variant::half) throw std::invalid_argument("ak_half needs the half variant");
  validate(spec);
  const Field f(spec.s);
  const auto gamma = gamma_set(f, spec.ell);
  const auto cols = pair_columns(f, gamma);
  const auto pts = points(f, spec.ell);
  Array lin = linear_block(f, spec.ell);
  Array quad(static_cast<int>(pts.size()), spec.kappa, spec.s);
  for (std::size_t r = 0; r < pts.size(); ++r) {
    const auto& pt = pts[r];
    const Element x2 = f.mul(pt.x, pt.x);
    for (int c = 0; c < spec.kappa; ++c) {
      const auto& col = cols[c];  // (beta, gamma)
      put(quad, static_cast<int>(r), c, f, f.add(f.add(x2, f.mul(col.a, pt.x)), dot(f, *col.gamma, pt.y)));
    }
  }
  return lin.hconcat(quad);
}

Array ak_ext_odd(const ConstructionSpec& spec) {
  if (spec.variant != Variant::odd_ext) throw std::invalid_argument("ak_ext_odd needs the odd-ext variant");
  validate(spec);
  const Field f(spec.s);
  const auto gamma = gamma_set(f, spec.ell);
  const auto cols = pair_columns(f, gamma);
  const auto pts = points(f, spec.ell);
  const Element omega = gf::find_nonsquare(f);
  // (1 - 1/omega) / 4
  const Element shift = f.div(f.sub(f.one(), f.inv(omega)), f.from_int(4));
  const Element beta0 = f.zero();
  const int n = static_cast<int>(pts.size());
  const int width = 1 + 2 * static_cast<int>(cols.size()) + spec.kappa;
  Array top(n, width, spec.s), bottom(n, width, spec.s);
  for (int r = 0; r < n; ++r) {
    const auto& pt = pts[r];
    put(top, r, 0, f, pt.x);
    put(bottom, r, 0, f, pt.x);
    int c = 1;
    for (const auto& col : cols) {
      const Element lin = f.add(f.mul(col.a, pt.x), dot(f, *col.gamma, pt.y));
      put(top, r, c, f, lin);
      put(bottom, r, c, f, f.add(lin, f.mul(shift, f.mul(col.a, col.a))));
      ++c;
    }
    for (const auto& col : cols) {
      const Element d = f.sub(pt.x, col.a);
      const Element d2 = f.mul(d, d);
      const Element gy = dot(f, *col.gamma, pt.y);
      put(top, r, c, f, f.add(d2, gy));
      put(bottom, r, c, f, f.add(f.mul(omega, d2), gy));
      ++c;
    }
    for (int e = 0; e < spec.kappa; ++e) {
      const Element a{e + 1};
      const Element d = f.sub(pt.x, beta0);
      const Element d2 = f.mul(d, d);
      const Element ax = f.mul(a, pt.x);
      put(top, r, c, f, f.sub(d2, ax));
      put(bottom, r, c, f, f.sub(f.sub(f.mul(omega, d2), ax), f.mul(shift, f.mul(a, a))));
      ++c;
    }
  }
  return top.vconcat(bottom);
}

Array ak_ext_even(const ConstructionSpec& spec) {
  if (spec.variant != Variant::even_ext) throw std::invalid_argument("ak_ext_even needs the even-ext variant");
  validate(spec);
  const Field f(spec.s);
  const auto gamma = gamma_set(f, spec.ell);
  const auto cols = pair_columns(f, gamma);
  const auto pts = points(f, spec.ell);
  const Element zeta = gf::find_zeta(f);
  const int n = static_cast<int>(pts.size());
  const int width = 1 + 2 * static_cast<int>(cols.size()) + spec.kappa;
  Array top(n, width, spec.s), bottom(n, width, spec.s);
  for (int r = 0; r < n; ++r) {
    const auto& pt = pts[r];
    const Element x2 = f.mul(pt.x, pt.x);
    put(top, r, 0, f, pt.x);
    put(bottom, r, 0, f, pt.x);
    int c = 1;
    for (const auto& col : cols) {
      const Element lin = f.add(f.mul(col.a, pt.x), dot(f, *col.gamma, pt.y));
      put(top, r, c, f, lin);
      put(bottom, r, c, f, f.add(lin, f.mul(f.mul(col.a, col.a), zeta)));
      ++c;
    }
    for (const auto& col : cols) {
      const Element q = f.add(f.add(x2, f.mul(col.a, pt.x)), dot(f, *col.gamma, pt.y));
      put(top, r, c, f, q);
      put(bottom, r, c, f, f.add(q, f.mul(f.mul(col.a, col.a), zeta)));
      ++c;
    }
    for (int e = 0; e < spec.kappa; ++e) {
      const Element delta{e + 1};
      const Element q = f.add(x2, f.mul(delta, pt.x));
      put(top, r, c, f, q);
      put(bottom, r, c, f, f.add(q, f.mul(f.mul(delta, delta), zeta)));
      ++c;
    }
  }
  return top.vconcat(bottom);
}

Array build(const ConstructionSpec& spec) {
  switch (spec.variant) {
    case Variant::half: return ak_half(spec);
    case Variant::odd_ext: return ak_ext_odd(spec);
    case Variant::even_ext: return ak_ext_even(spec);
  }
  throw std::invalid_argument("unknown variant");
}

bool VerifyReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
}

const CheckItem* VerifyReport::find(const std::string& name) const {
  for (const auto& c : items)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

// Strength 2, or strength 1 for a single column.
bool block_is_oa(const Array& a) { return is_oa(a, std::min(2, a.factors())); }

std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int j = lo; j < hi; ++j) v.push_back(j);
  return v;
}

}  // namespace

VerifyReport verify_construction(const Array& a, const ConstructionSpec& spec) {
  VerifyReport rep;
  const bool shape_ok = a.runs() == expected_runs(spec) && a.factors() == expected_factors(spec) && a.levels() == spec.s;
  rep.items.push_back({"shape", shape_ok,
                       std::to_string(a.runs()) + "x" + std::to_string(a.factors()) + " (expected " +
                           std::to_string(expected_runs(spec)) + "x" + std::to_string(expected_factors(spec)) + ")"});
  if (!shape_ok) return rep;
  rep.items.push_back({"(0)", is_oa(a, 1), "strength-1 OA"});
  const int nl = linear_columns(spec.s, spec.ell);
  const int k = a.factors();
  if (spec.variant == Variant::half) {
    rep.items.push_back({"(1a)", block_is_oa(a.select_columns(range(0, nl))), "first " + std::to_string(nl) + " columns"});
    rep.items.push_back({"(1b)", block_is_oa(a.select_columns(range(nl, k))), "last " + std::to_string(spec.kappa) + " columns"});
  } else {
    const int lq = 2 * nl - 1;
    rep.items.push_back({"(1a)", block_is_oa(a.select_columns(range(0, lq))), "first " + std::to_string(lq) + " columns"});
    for (int keep = lq; keep < k; ++keep) {
      std::vector<int> drop{0};
      for (int e = lq; e < k; ++e)
        if (e != keep) drop.push_back(e);
      rep.items.push_back({"(1b)[" + std::to_string(keep - lq + 1) + "]", block_is_oa(a.drop_columns(drop)),
                           "without column 1 and E columns other than " + std::to_string(keep + 1)});
    }
  }
  const Rational tol = tolerance(a, 2);
  rep.items.push_back({"(2)", tol == expected_tolerance(spec),
                       "Tol2 = " + tol.str() + " (expected " + expected_tolerance(spec).str() + ")"});
  for (int p = 1; p <= 3; ++p) {
    const Rational u = unbalance(a, 2, p);
    rep.items.push_back({"(3)p=" + std::to_string(p), u == expected_unbalance(spec, p),
                         "Unb = " + u.str() + " (expected " + expected_unbalance(spec, p).str() + ")"});
  }
  return rep;
}

}  // namespace aoa::construct
