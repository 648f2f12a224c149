#include "aoa/symmetry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace aoa::sym {

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size() + 1, false);
  for (int v : img_) {
    if (v < 1 || v > size() || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  return Permutation(std::move(v));
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  std::vector<bool> used(n + 1, false);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int from = c[i], to = c[(i + 1) % c.size()];
      if (from < 1 || from > n) throw std::out_of_range("cycle entry out of range");
      if (used[from]) throw std::invalid_argument("cycles are not disjoint");
      used[from] = true;
      v[from - 1] = to;
    }
  }
  return Permutation(std::move(v));
}

Permutation Permutation::parse(const std::string& text, int n) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t == "id" || t == "()" || t.empty()) return identity(n);
  std::vector<std::vector<int>> cycles;
  std::size_t i = 0;
  while (i < t.size()) {
    if (t[i] != '(') throw std::invalid_argument("bad cycle notation '" + text + "'");
    const std::size_t close = t.find(')', i);
    if (close == std::string::npos) throw std::invalid_argument("unclosed cycle in '" + text + "'");
    std::vector<int> cyc;
    std::stringstream ss(t.substr(i + 1, close - i - 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw std::invalid_argument("empty cycle entry in '" + text + "'");
      cyc.push_back(std::stoi(item));
    }
    if (!cyc.empty()) cycles.push_back(cyc);
    i = close + 1;
  }
  return from_cycles(n, cycles);
}

Permutation Permutation::inverse() const {
  std::vector<int> v(img_.size());
  for (int i = 0; i < size(); ++i) v[img_[i] - 1] = i + 1;
  return Permutation(std::move(v));
}

Permutation Permutation::operator*(const Permutation& o) const {
  if (o.size() != size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> v(img_.size());
  for (int i = 0; i < size(); ++i) v[i] = img_[o.img_[i] - 1];
  return Permutation(std::move(v));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (img_[i] != i + 1) return false;
  return true;
}

std::string Permutation::str() const {
  std::string out;
  std::vector<bool> seen(img_.size() + 1, false);
  for (int start = 1; start <= size(); ++start) {
    if (seen[start] || img_[start - 1] == start) continue;
    out += "(";
    int x = start;
    bool first = true;
    while (!seen[x]) {
      seen[x] = true;
      if (!first) out += ",";
      out += std::to_string(x);
      first = false;
      x = img_[x - 1];
    }
    out += ")";
  }
  return out.empty() ? "id" : out;
}

GroupElement GroupElement::parse(const std::string& text, int s, int k) {
  const auto bar = text.find('|');
  if (bar == std::string::npos) throw std::invalid_argument("group element needs 'levels|columns'");
  return {Permutation::parse(text.substr(0, bar), s), Permutation::parse(text.substr(bar + 1), k)};
}

std::vector<int> act_row(const GroupElement& e, std::span<const int> row) {
  const int k = static_cast<int>(row.size());
  std::vector<int> out(k);
  // column j of the result takes column sigma^-1(j), i.e. column c lands at sigma(c)
  for (int c = 0; c < k; ++c) out[e.sigma(c + 1) - 1] = e.g(row[c]);
  return out;
}

Array act(const GroupElement& e, const Array& a) {
  if (e.g.size() != a.levels() || e.sigma.size() != a.factors())
    throw std::invalid_argument("group element does not match array dimensions");
  std::vector<std::vector<int>> rows;
  rows.reserve(a.runs());
  for (int i = 0; i < a.runs(); ++i) rows.push_back(act_row(e, a.row(i)));
  Array out(a.runs(), a.factors(), a.levels());
  for (int i = 0; i < a.runs(); ++i)
    for (int j = 0; j < a.factors(); ++j) out.set(i, j, rows[i][j]);
  return out;
}

bool equivalent(const Array& a, const Array& b) {
  if (a.runs() != b.runs() || a.factors() != b.factors()) throw std::invalid_argument("dimension mismatch");
  auto ra = a.rows(), rb = b.rows();
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  return ra == rb;
}

bool is_automorphism(const GroupElement& e, const Array& a) { return equivalent(act(e, a), a); }

const char* kind_name(EncodingKind k) {
  switch (k) {
    case EncodingKind::bicyclic: return "bicyclic";
    case EncodingKind::semicyclic: return "semicyclic";
    case EncodingKind::klein: return "klein";
    case EncodingKind::composite: return "composite";
  }
  return "?";
}

EncodingKind parse_kind(const std::string& name) {
  if (name == "bicyclic") return EncodingKind::bicyclic;
  if (name == "semicyclic" || name == "quasicyclic") return EncodingKind::semicyclic;
  if (name == "klein") return EncodingKind::klein;
  if (name == "composite") return EncodingKind::composite;
  throw std::invalid_argument("unknown encoding kind '" + name + "'");
}

int default_bicyclic_r(int s, int k) {
  int best = 1;
  for (int r = 1; r <= std::min(s, k); ++r)
    if (s % r == 0) best = r;
  return best;
}

namespace {

std::vector<int> iota_from(int lo, int hi) {
  std::vector<int> v;
  for (int x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

}  // namespace

GroupElement bicyclic_generator(int s, int k, int r) {
  if (r < 1 || s % r != 0 || r > k) throw std::invalid_argument("bicyclic r must divide s and not exceed k");
  return {Permutation::from_cycles(s, {iota_from(1, s)}), Permutation::from_cycles(k, {iota_from(1, r)})};
}

GroupElement semicyclic_generator(int s, int k, int a) {
  if (a < 1 || a >= s) throw std::invalid_argument("semicyclic a must lie in 1..s-1");
  return {Permutation::from_cycles(s, {iota_from(a, s)}), Permutation::identity(k)};
}

GroupElement klein_generator(int s, int k) {
  if (k < 4) throw std::invalid_argument("Klein symmetry needs k >= 4");
  return {Permutation::identity(s), Permutation::from_cycles(k, {{1, 2}, {3, 4}})};
}

SymmetricEncoding make_encoding(EncodingKind kind, int s, int k, int param) {
  SymmetricEncoding e;
  e.kind = kind;
  e.levels = s;
  e.factors = k;
  switch (kind) {
    case EncodingKind::bicyclic:
      e.param = param > 0 ? param : default_bicyclic_r(s, k);
      e.generators = {bicyclic_generator(s, k, e.param)};
      break;
    case EncodingKind::semicyclic:
      e.param = param;
      e.generators = {semicyclic_generator(s, k, param)};
      break;
    case EncodingKind::klein:
      e.generators = {klein_generator(s, k)};
      break;
    case EncodingKind::composite:
      break;
  }
  return e;
}

std::vector<std::vector<int>> row_orbit(const SymmetricEncoding& e, const std::vector<int>& row) {
  std::vector<std::vector<int>> orbit{row};
  std::set<std::vector<int>> seen{row};
  for (std::size_t i = 0; i < orbit.size(); ++i)
    for (const auto& g : e.generators) {
      auto img = act_row(g, orbit[i]);
      if (seen.insert(img).second) orbit.push_back(std::move(img));
    }
  return orbit;
}

void validate(const SymmetricEncoding& e) {
  if (e.generators.empty()) throw std::invalid_argument("encoding has no generator");
  for (const auto& g : e.generators)
    if (g.g.size() != e.levels || g.sigma.size() != e.factors)
      throw std::invalid_argument("generator does not match encoding dimensions");
  auto check_row = [&](const std::vector<int>& r) {
    if (static_cast<int>(r.size()) != e.factors) throw std::invalid_argument("row length differs from k");
    for (int v : r)
      if (v < 1 || v > e.levels) throw std::invalid_argument("level out of range in encoding");
  };
  for (const auto& r : e.core) check_row(r);
  for (const auto& r : e.fixed_rows) check_row(r);
  switch (e.kind) {
    case EncodingKind::bicyclic:
      if (e.param < 1 || e.levels % e.param != 0 || e.param > e.factors)
        throw std::invalid_argument("bicyclic r must divide s and not exceed k");
      if (!e.fixed_rows.empty()) throw std::invalid_argument("bicyclic encodings have no fixed rows");
      for (const auto& r : e.core)
        if (static_cast<int>(row_orbit(e, r).size()) != e.levels)
          throw std::invalid_argument("bicyclic orbit is not of size s");
      break;
    case EncodingKind::semicyclic:
      for (const auto& r : e.fixed_rows)
        for (int v : r)
          if (v >= e.param) throw std::invalid_argument("fixed row entries must lie in 1..a-1");
      for (const auto& r : e.core)
        if (std::all_of(r.begin(), r.end(), [&](int v) { return v < e.param; }))
          throw std::invalid_argument("core row lies entirely in 1..a-1");
      break;
    case EncodingKind::klein:
      if (e.factors < 4) throw std::invalid_argument("Klein encoding needs k >= 4");
      break;
    case EncodingKind::composite:
      break;
  }
}

Array expand(const SymmetricEncoding& e) {
  validate(e);
  std::vector<std::vector<int>> rows(e.fixed_rows.begin(), e.fixed_rows.end());
  for (const auto& r : e.core) {
    auto orb = row_orbit(e, r);
    rows.insert(rows.end(), orb.begin(), orb.end());
  }
  if (rows.empty()) return Array(0, e.factors, e.levels);
  return Array(e.levels, rows);
}

int semicyclic_fixed_count(int n_runs, int s, int a) {
  const int orbit = s - a + 1;
  int fixed = (n_runs % (s * s) == 0) ? (n_runs / (s * s)) * ((s * s) % orbit) : n_runs % orbit;
  if ((n_runs - fixed) % orbit != 0) throw std::invalid_argument("runs cannot be split into fixed rows and orbits");
  return fixed;
}

SymmetricEncoding compress(const Array& a, EncodingKind kind, int param) {
  if (kind == EncodingKind::composite) throw std::invalid_argument("compress does not take composite encodings");
  SymmetricEncoding e = make_encoding(kind, a.levels(), a.factors(), param);
  for (const auto& g : e.generators)
    if (!is_automorphism(g, a)) throw std::invalid_argument("generator " + g.str() + " is not an automorphism");
  std::map<std::vector<int>, int> remaining;
  for (const auto& r : a.rows()) ++remaining[r];
  for (const auto& r : a.rows()) {
    if (remaining[r] == 0) continue;
    auto orb = row_orbit(e, r);
    for (const auto& o : orb) {
      if (remaining[o] == 0) throw std::invalid_argument("row orbit not contained in the array");
      --remaining[o];
    }
    const bool fixed = orb.size() == 1 && kind == EncodingKind::semicyclic;
    if (kind == EncodingKind::bicyclic && static_cast<int>(orb.size()) != a.levels())
      throw std::invalid_argument("bicyclic orbit is not of size s");
    (fixed ? e.fixed_rows : e.core).push_back(r);
  }
  validate(e);
  return e;
}

}  // namespace aoa::sym
