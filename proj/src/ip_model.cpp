#include "aoa/ip_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aoa/metrics.hpp"

namespace aoa::ip {

namespace {

std::string join_name(const std::string& base, std::initializer_list<int> idx) {
  std::string out = base;
  for (int v : idx) out += "_" + std::to_string(v);
  return out;
}

// "d2_1_2_3" -> "d2p_1_2_3"
std::string split_name(const std::string& delta, char part) {
  const auto us = delta.find('_');
  std::string out = delta.substr(0, us);
  out += part;
  if (us != std::string::npos) out += delta.substr(us);
  return out;
}

std::vector<std::pair<int, int>> column_pairs(const IpInstance& inst) {
  std::vector<std::pair<int, int>> c;
  for (int j1 = 3; j1 <= inst.k; ++j1)
    for (int j2 = j1 + 1; j2 <= inst.k; ++j2) c.emplace_back(j1, j2);
  return c;
}

// 1-based row of prefix (u, v) in block b (0-based).
int row_of(const IpInstance& inst, int b, int u, int v) { return b * inst.s * inst.s + (u - 1) * inst.s + v; }

}  // namespace

void validate(const IpInstance& inst) {
  if (inst.s < 2) throw std::invalid_argument("s must be at least 2");
  if (inst.lambda < 1) throw std::invalid_argument("lambda must be at least 1");
  if (inst.k < 3) throw std::invalid_argument("k must be at least 3");
  if (inst.p != 1 && inst.p != 2) throw std::invalid_argument("p must be 1 or 2");
  if (inst.epsilon < 1) throw std::invalid_argument("epsilon must be at least 1");
  const bool semi = inst.symmetry == SymmetryKind::semicyclic || inst.symmetry == SymmetryKind::both;
  const bool klein = inst.symmetry == SymmetryKind::klein || inst.symmetry == SymmetryKind::both;
  if (semi && (inst.mbar < 1 || inst.mbar > inst.s)) throw std::invalid_argument("mbar must lie in 1..s");
  if (klein && inst.k < 4) throw std::invalid_argument("Klein symmetry needs k >= 4");
}

int IpModel::add_var(std::string name, VarType type, std::int64_t lo, std::int64_t hi) {
  if (index_.count(name)) throw std::invalid_argument("duplicate variable " + name);
  const int id = static_cast<int>(vars.size());
  index_.emplace(name, id);
  vars.push_back({std::move(name), type, lo, hi});
  return id;
}

int IpModel::var(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("unknown variable " + name);
  return it->second;
}

void IpModel::add_constraint(Constraint c) {
  for (const auto& t : c.terms)
    if (t.var < 0 || t.var >= static_cast<int>(vars.size())) throw std::out_of_range("constraint term out of range");
  constraints.push_back(std::move(c));
}

std::size_t IpModel::count_prefix(const std::string& prefix) const {
  std::size_t n = 0;
  for (const auto& v : vars)
    if (v.name.compare(0, prefix.size(), prefix) == 0) ++n;
  return n;
}

IpModel build_model(const IpInstance& inst) {
  validate(inst);
  const int s = inst.s, k = inst.k, lam = inst.lambda, n = inst.runs(), ss = s * s;
  const int last = k;
  const auto pairs = column_pairs(inst);
  const std::int64_t dlo = std::max(-lam, -inst.epsilon), dhi = inst.epsilon;

  IpModel m;
  m.title = "MUP s=" + std::to_string(s) + " k=" + std::to_string(k) + " lambda=" + std::to_string(lam) +
            " p=" + std::to_string(inst.p) + " eps=" + std::to_string(inst.epsilon);
  auto x = [&](int i, int j, int lv) { return join_name("x", {i, j, lv}); };

  for (int i = 1; i <= n; ++i)
    for (int j = 3; j <= k; ++j)
      for (int lv = 1; lv <= s; ++lv) m.add_var(x(i, j, lv), VarType::binary, 0, 1);
  for (int i = 1; i <= n; ++i)
    for (std::size_t c = 1; c <= pairs.size(); ++c)
      for (int l = 1; l <= ss; ++l) m.add_var(join_name("z", {i, static_cast<int>(c), l}), VarType::binary, 0, 1);

  std::vector<int> deltas;
  for (std::size_t c = 1; c <= pairs.size(); ++c)
    for (int l = 1; l <= ss; ++l)
      deltas.push_back(m.add_var(join_name("d0", {static_cast<int>(c), l}), VarType::integer, dlo, dhi));
  for (int lv = 1; lv <= s; ++lv)
    deltas.push_back(m.add_var(join_name("d1", {lv}), VarType::integer, -lam * s, lam * ss - lam * s));
  for (const char* base : {"d2", "d3"})
    for (int j = 3; j <= k; ++j)
      for (int lv = 1; lv <= s; ++lv)
        for (int mp = 1; mp <= s; ++mp) deltas.push_back(m.add_var(join_name(base, {lv, mp, j}), VarType::integer, dlo, dhi));

  std::vector<std::pair<int, int>> parts;  // p=1 split variables per delta
  if (inst.p == 1)
    for (int d : deltas) {
      const auto& v = m.vars[d];
      const std::string name = v.name;
      const std::int64_t up = std::max<std::int64_t>(v.hi, 0), dn = std::max<std::int64_t>(-v.lo, 0);
      const int pp = m.add_var(split_name(name, 'p'), VarType::continuous, 0, up);
      const int pm = m.add_var(split_name(name, 'm'), VarType::continuous, 0, dn);
      parts.emplace_back(pp, pm);
    }

  for (int j = 3; j < last; ++j)
    for (int lv = 1; lv <= s; ++lv) {
      Constraint c{join_name("aoa1", {j, lv}), {}, Relation::eq, lam * s};
      for (int i = 1; i <= n; ++i) c.terms.push_back({m.var(x(i, j, lv)), 1});
      m.add_constraint(std::move(c));
    }
  for (int lv = 1; lv <= s; ++lv) {
    Constraint c{join_name("aoa1k", {lv}), {}, Relation::eq, lam * s};
    for (int i = 1; i <= n; ++i) c.terms.push_back({m.var(x(i, last, lv)), 1});
    c.terms.push_back({m.var(join_name("d1", {lv})), -1});
    m.add_constraint(std::move(c));
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 3; j <= k; ++j) {
      Constraint c{join_name("aoa2", {i, j}), {}, Relation::eq, 1};
      for (int lv = 1; lv <= s; ++lv) c.terms.push_back({m.var(x(i, j, lv)), 1});
      m.add_constraint(std::move(c));
    }
  // first column equals mp on rows b s^2 + (mp-1) s + 1 .. b s^2 + mp s
  for (int j = 3; j <= k; ++j)
    for (int lv = 1; lv <= s; ++lv)
      for (int mp = 1; mp <= s; ++mp) {
        Constraint c{join_name("aoa31", {j, lv, mp}), {}, Relation::eq, lam};
        for (int b = 0; b < lam; ++b)
          for (int v = 1; v <= s; ++v) c.terms.push_back({m.var(x(row_of(inst, b, mp, v), j, lv)), 1});
        c.terms.push_back({m.var(join_name("d2", {lv, mp, j})), -1});
        m.add_constraint(std::move(c));
      }
  // second column equals mp: rows of block b congruent to mp mod s
  for (int j = 3; j <= k; ++j)
    for (int lv = 1; lv <= s; ++lv)
      for (int mp = 1; mp <= s; ++mp) {
        Constraint c{join_name("aoa32", {j, lv, mp}), {}, Relation::eq, lam};
        for (int b = 0; b < lam; ++b)
          for (int u = 1; u <= s; ++u) c.terms.push_back({m.var(x(row_of(inst, b, u, mp), j, lv)), 1});
        c.terms.push_back({m.var(join_name("d3", {lv, mp, j})), -1});
        m.add_constraint(std::move(c));
      }
  for (int i = 1; i <= n; ++i)
    for (std::size_t ci = 0; ci < pairs.size(); ++ci) {
      const int cn = static_cast<int>(ci) + 1;
      Constraint c{join_name("aoaz1", {i, cn}), {}, Relation::eq, -s};
      for (int l = 1; l <= ss; ++l) c.terms.push_back({m.var(join_name("z", {i, cn, l})), l});
      for (int lv = 1; lv <= s; ++lv) c.terms.push_back({m.var(x(i, pairs[ci].first, lv)), -s * lv});
      for (int lv = 1; lv <= s; ++lv) c.terms.push_back({m.var(x(i, pairs[ci].second, lv)), -lv});
      m.add_constraint(std::move(c));
    }
  for (int i = 1; i <= n; ++i)
    for (std::size_t ci = 1; ci <= pairs.size(); ++ci) {
      const int cn = static_cast<int>(ci);
      Constraint c{join_name("aoaz2", {i, cn}), {}, Relation::eq, 1};
      for (int l = 1; l <= ss; ++l) c.terms.push_back({m.var(join_name("z", {i, cn, l})), 1});
      m.add_constraint(std::move(c));
    }
  for (std::size_t ci = 1; ci <= pairs.size(); ++ci)
    for (int l = 1; l <= ss; ++l) {
      const int cn = static_cast<int>(ci);
      Constraint c{join_name("aoaz3", {cn, l}), {}, Relation::eq, lam};
      for (int i = 1; i <= n; ++i) c.terms.push_back({m.var(join_name("z", {i, cn, l})), 1});
      c.terms.push_back({m.var(join_name("d0", {cn, l})), -1});
      m.add_constraint(std::move(c));
    }

  if (inst.p == 1) {
    for (std::size_t q = 0; q < deltas.size(); ++q) {
      const int d = deltas[q];
      m.add_constraint({"lnk_" + m.vars[d].name, {{d, 1}, {parts[q].first, -1}, {parts[q].second, 1}}, Relation::eq, 0});
      m.objective.push_back({parts[q].first, 1});
      m.objective.push_back({parts[q].second, 1});
    }
  } else {
    for (int d : deltas) m.quadratic_objective.push_back({d, 1});
  }
  if (inst.symmetry != SymmetryKind::none) add_symmetry(m, inst);
  return m;
}

int semicyclic_row_map(const IpInstance& inst, int row) {
  const int s = inst.s, ss = s * s;
  const int b = (row - 1) / ss, r = (row - 1) % ss;
  const int u = r / s + 1, v = r % s + 1;
  auto g = [&](int lv) {
    if (lv < inst.mbar) return lv;
    return lv == s ? inst.mbar : lv + 1;
  };
  return row_of(inst, b, g(u), g(v));
}

int klein_row_map(const IpInstance& inst, int row) {
  const int s = inst.s, ss = s * s;
  const int b = (row - 1) / ss, r = (row - 1) % ss;
  return row_of(inst, b, r % s + 1, r / s + 1);
}

void add_symmetry(IpModel& model, const IpInstance& inst) {
  validate(inst);
  const int s = inst.s, n = inst.runs();
  auto x = [&](int i, int j, int lv) { return model.var(join_name("x", {i, j, lv})); };
  auto tie = [&](const std::string& name, int a, int b) {
    if (a != b) model.add_constraint({name, {{a, 1}, {b, -1}}, Relation::eq, 0});
  };
  const bool semi = inst.symmetry == SymmetryKind::semicyclic || inst.symmetry == SymmetryKind::both;
  const bool klein = inst.symmetry == SymmetryKind::klein || inst.symmetry == SymmetryKind::both;
  if (semi && inst.mbar < s) {
    for (int i = 1; i <= n; ++i) {
      const int si = semicyclic_row_map(inst, i);
      for (int j = 3; j <= inst.k; ++j)
        for (int lv = 1; lv <= s; ++lv) {
          const int g = lv < inst.mbar ? lv : (lv == s ? inst.mbar : lv + 1);
          tie(join_name("sim", {i, j, lv}), x(i, j, lv), x(si, j, g));
        }
    }
  }
  if (klein) {
    for (int i = 1; i <= n; ++i) {
      const int si = klein_row_map(inst, i);
      for (int lv = 1; lv <= s; ++lv) {
        tie(join_name("sim0", {i, 3, lv}), x(i, 3, lv), x(si, 4, lv));
        tie(join_name("sim0", {i, 4, lv}), x(i, 4, lv), x(si, 3, lv));
        for (int j = 5; j <= inst.k; ++j) tie(join_name("sim0", {i, j, lv}), x(i, j, lv), x(si, j, lv));
      }
    }
  }
}

namespace {

constexpr std::size_t kMaxLine = 255;

class LineWriter {
 public:
  explicit LineWriter(std::string& out) : out_(out) {}
  void start(const std::string& head) {
    flush();
    line_ = head;
  }
  void add(const std::string& piece) {
    if (line_.size() + piece.size() > kMaxLine) {
      out_ += line_ + "\n";
      line_ = " ";
      line_ += piece.front() == ' ' ? piece.substr(1) : piece;
      return;
    }
    line_ += piece;
  }
  void flush() {
    if (!line_.empty()) out_ += line_ + "\n";
    line_.clear();
  }

 private:
  std::string& out_;
  std::string line_;
};

std::string term_text(std::int64_t coef, const std::string& name, bool first, const char* suffix = "") {
  std::string t;
  if (coef < 0)
    t += " -";
  else if (!first)
    t += " +";
  const std::int64_t a = coef < 0 ? -coef : coef;
  if (a != 1 || *suffix) t += " " + std::to_string(a);
  return t + " " + name + suffix;
}

const char* rel_text(Relation r) {
  switch (r) {
    case Relation::eq: return "=";
    case Relation::le: return "<=";
    case Relation::ge: return ">=";
  }
  return "=";
}

void write_names(std::string& out, const IpModel& m, VarType type) {
  LineWriter w(out);
  bool any = false;
  for (const auto& v : m.vars) {
    if (v.type != type) continue;
    if (!any) w.start("");
    any = true;
    w.add(" " + v.name);
  }
  w.flush();
}

}  // namespace

std::string emit_lp(const IpModel& m) {
  std::string out;
  if (!m.title.empty()) out += "\\ " + m.title + "\n";
  out += "Minimize\n";
  {
    LineWriter w(out);
    w.start(" obj:");
    bool first = true;
    for (const auto& t : m.objective) {
      w.add(term_text(t.coef, m.vars[t.var].name, first));
      first = false;
    }
    if (!m.quadratic_objective.empty()) {
      w.add(first ? " [" : " + [");
      bool qfirst = true;
      for (const auto& t : m.quadratic_objective) {
        w.add(term_text(2 * t.coef, m.vars[t.var].name, qfirst, " ^2"));
        qfirst = false;
      }
      w.add(" ] / 2");
      first = false;
    }
    if (first) w.add(" 0");
    w.flush();
  }
  out += "Subject To\n";
  {
    LineWriter w(out);
    for (const auto& c : m.constraints) {
      w.start(" " + c.name + ":");
      bool first = true;
      for (const auto& t : c.terms) {
        w.add(term_text(t.coef, m.vars[t.var].name, first));
        first = false;
      }
      w.add(std::string(" ") + rel_text(c.rel) + " " + std::to_string(c.rhs));
    }
    w.flush();
  }
  out += "Bounds\n";
  for (const auto& v : m.vars) out += " " + std::to_string(v.lo) + " <= " + v.name + " <= " + std::to_string(v.hi) + "\n";
  out += "Generals\n";
  write_names(out, m, VarType::integer);
  out += "Binaries\n";
  write_names(out, m, VarType::binary);
  out += "End\n";
  return out;
}

namespace {

struct Token {
  std::string text;
  int line;
};

bool is_number(const std::string& t) {
  if (t.empty()) return false;
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  return true;
}

std::int64_t to_int(const Token& t) {
  if (!is_number(t.text)) throw ParseError("expected an integer, got '" + t.text + "'", t.line);
  try {
    return std::stoll(t.text);
  } catch (const std::exception&) {
    throw ParseError("integer out of range '" + t.text + "'", t.line);
  }
}

// Reads "[+|-] [coef] name [^2]" sequences. Stops before a relation, ']' or a
// label. Returns (var name, signed coef, squared).
struct RawTerm {
  std::string name;
  std::int64_t coef;
  bool squared;
  int line;
};

bool is_relation(const std::string& t) { return t == "=" || t == "<=" || t == ">=" || t == "=<" || t == "=>"; }

std::vector<RawTerm> read_terms(const std::vector<Token>& tk, std::size_t& pos) {
  std::vector<RawTerm> out;
  while (pos < tk.size()) {
    const auto& t = tk[pos].text;
    if (is_relation(t) || t == "]" || t == "[" || t.back() == ':') break;
    std::int64_t sign = 1;
    if (t == "+" || t == "-") {
      sign = t == "-" ? -1 : 1;
      ++pos;
      if (pos >= tk.size()) throw ParseError("dangling sign", tk[pos - 1].line);
    }
    if (tk[pos].text == "[") {  // sign before a quadratic block
      --pos;
      break;
    }
    std::int64_t coef = 1;
    if (is_number(tk[pos].text)) {
      coef = to_int(tk[pos]);
      ++pos;
      if (pos >= tk.size()) throw ParseError("coefficient without variable", tk[pos - 1].line);
    }
    const Token& name = tk[pos++];
    if (is_relation(name.text) || name.text == "]")
      throw ParseError("expected a variable name, got '" + name.text + "'", name.line);
    bool sq = false;
    if (pos < tk.size() && tk[pos].text == "^2") {
      sq = true;
      ++pos;
    }
    out.push_back({name.text, sign * coef, sq, name.line});
  }
  return out;
}

}  // namespace

IpModel parse_lp(const std::string& text) {
  enum Section { none, objective, constraints, bounds, generals, binaries, end };
  std::map<Section, std::vector<Token>> sec;
  std::string title;
  Section cur = none;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() > kMaxLine) throw ParseError("line longer than 255 characters", no);
    if (!line.empty() && line[0] == '\\') {
      if (title.empty() && line.size() > 2) title = line.substr(2);
      continue;
    }
    if (line == "Minimize") { cur = objective; continue; }
    if (line == "Subject To") { cur = constraints; continue; }
    if (line == "Bounds") { cur = bounds; continue; }
    if (line == "Generals") { cur = generals; continue; }
    if (line == "Binaries") { cur = binaries; continue; }
    if (line == "End") { cur = end; continue; }
    std::istringstream ls(line);
    std::string w;
    while (ls >> w) {
      if (cur == none || cur == end) throw ParseError("text outside any section: '" + w + "'", no);
      sec[cur].push_back({w, no});
    }
  }
  if (cur != end) throw ParseError("missing End", no);

  IpModel m;
  m.title = title;
  {
    const auto& tk = sec[bounds];
    if (tk.size() % 5 != 0) throw ParseError("malformed Bounds section", tk.empty() ? no : tk.back().line);
    for (std::size_t i = 0; i < tk.size(); i += 5) {
      if (tk[i + 1].text != "<=" || tk[i + 3].text != "<=")
        throw ParseError("bounds must read 'lo <= name <= hi'", tk[i].line);
      if (m.has_var(tk[i + 2].text)) throw ParseError("variable bounded twice: " + tk[i + 2].text, tk[i].line);
      m.add_var(tk[i + 2].text, VarType::continuous, to_int(tk[i]), to_int(tk[i + 4]));
    }
  }
  auto lookup = [&](const std::string& name, int ln) {
    if (!m.has_var(name)) throw ParseError("undeclared variable " + name, ln);
    return m.var(name);
  };
  for (const auto& t : sec[generals]) m.vars[lookup(t.text, t.line)].type = VarType::integer;
  for (const auto& t : sec[binaries]) m.vars[lookup(t.text, t.line)].type = VarType::binary;

  {
    const auto& tk = sec[objective];
    std::size_t pos = 0;
    if (tk.empty() || tk[0].text.back() != ':') throw ParseError("objective needs a label", tk.empty() ? no : tk[0].line);
    ++pos;
    if (pos < tk.size() && tk[pos].text == "0" && pos + 1 == tk.size()) ++pos;
    for (const auto& r : read_terms(tk, pos)) {
      if (r.squared) throw ParseError("square term outside [ ]", r.line);
      m.objective.push_back({lookup(r.name, r.line), r.coef});
    }
    if (pos < tk.size() && (tk[pos].text == "+" || tk[pos].text == "-")) ++pos;
    if (pos < tk.size() && tk[pos].text == "[") {
      ++pos;
      for (const auto& r : read_terms(tk, pos)) {
        if (!r.squared) throw ParseError("only square terms are supported in [ ]", r.line);
        if (r.coef % 2 != 0) throw ParseError("odd quadratic coefficient", r.line);
        m.quadratic_objective.push_back({lookup(r.name, r.line), r.coef / 2});
      }
      if (pos + 2 >= tk.size()) throw ParseError("unterminated quadratic block", tk.back().line);
      if (tk[pos].text != "]" || tk[pos + 1].text != "/" || tk[pos + 2].text != "2")
        throw ParseError("quadratic block must end with '] / 2'", tk[pos].line);
      pos += 3;
    }
    if (pos != tk.size()) throw ParseError("unexpected token '" + tk[pos].text + "' in objective", tk[pos].line);
  }
  {
    const auto& tk = sec[constraints];
    std::size_t pos = 0;
    while (pos < tk.size()) {
      const Token& label = tk[pos];
      if (label.text.back() != ':') throw ParseError("constraint needs a label, got '" + label.text + "'", label.line);
      ++pos;
      Constraint c;
      c.name = label.text.substr(0, label.text.size() - 1);
      for (const auto& r : read_terms(tk, pos)) {
        if (r.squared) throw ParseError("quadratic constraints are not supported", r.line);
        c.terms.push_back({lookup(r.name, r.line), r.coef});
      }
      if (pos + 1 >= tk.size() || !is_relation(tk[pos].text))
        throw ParseError("constraint " + c.name + " lacks a relation", label.line);
      const auto& rel = tk[pos].text;
      c.rel = rel == "=" ? Relation::eq : (rel == "<=" || rel == "=<") ? Relation::le : Relation::ge;
      c.rhs = to_int(tk[pos + 1]);
      pos += 2;
      m.add_constraint(std::move(c));
    }
  }
  return m;
}

std::string emit_mps(const IpModel& m) {
  std::ostringstream o;
  o << "NAME aoa\n";
  o << "ROWS\n N obj\n";
  for (const auto& c : m.constraints)
    o << " " << (c.rel == Relation::eq ? "E" : c.rel == Relation::le ? "L" : "G") << " " << c.name << "\n";
  std::vector<std::vector<std::pair<std::string, std::int64_t>>> col(m.vars.size());
  for (const auto& t : m.objective) col[t.var].emplace_back("obj", t.coef);
  for (const auto& c : m.constraints)
    for (const auto& t : c.terms) col[t.var].emplace_back(c.name, t.coef);
  o << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t v = 0; v < m.vars.size(); ++v) {
    const bool integral = m.vars[v].type != VarType::continuous;
    if (integral != in_int) {
      o << " M" << marker++ << " 'MARKER' " << (integral ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = integral;
    }
    if (col[v].empty()) o << " " << m.vars[v].name << " obj 0\n";
    for (const auto& [row, coef] : col[v]) o << " " << m.vars[v].name << " " << row << " " << coef << "\n";
  }
  if (in_int) o << " M" << marker << " 'MARKER' 'INTEND'\n";
  o << "RHS\n";
  for (const auto& c : m.constraints)
    if (c.rhs != 0) o << " RHS " << c.name << " " << c.rhs << "\n";
  o << "BOUNDS\n";
  for (const auto& v : m.vars) {
    if (v.type == VarType::binary && v.lo == 0 && v.hi == 1) {
      o << " BV BND " << v.name << "\n";
      continue;
    }
    o << " LO BND " << v.name << " " << v.lo << "\n";
    o << " UP BND " << v.name << " " << v.hi << "\n";
  }
  if (!m.quadratic_objective.empty()) {
    o << "QUADOBJ\n";
    for (const auto& t : m.quadratic_objective)
      o << " " << m.vars[t.var].name << " " << m.vars[t.var].name << " " << 2 * t.coef << "\n";
  }
  o << "ENDATA\n";
  return o.str();
}

Assignment parse_solution(const std::string& text) {
  Assignment a;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string name, value, extra;
    if (!(ls >> name)) continue;
    if (!(ls >> value)) throw ParseError("missing value for " + name, no);
    if (ls >> extra) throw ParseError("trailing text after value of " + name, no);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) throw ParseError("bad number '" + value + "'", no);
    if (!a.emplace(name, v).second) throw ParseError("duplicate variable " + name, no);
  }
  return a;
}

std::string format_solution(const IpModel& model, const Assignment& a) {
  std::ostringstream o;
  for (const auto& v : model.vars) {
    auto it = a.find(v.name);
    if (it == a.end()) continue;
    o << v.name << " " << it->second << "\n";
  }
  return o.str();
}

std::optional<Array> align_prefix(const Array& a) {
  const int s = a.levels(), ss = s * s;
  if (a.factors() < 2 || a.runs() % ss != 0) return std::nullopt;
  const int lam = a.runs() / ss;
  std::vector<std::vector<int>> by_pair(ss);
  for (int i = 0; i < a.runs(); ++i) by_pair[(a(i, 0) - 1) * s + (a(i, 1) - 1)].push_back(i);
  for (const auto& v : by_pair)
    if (static_cast<int>(v.size()) != lam) return std::nullopt;
  std::vector<int> order;
  for (int b = 0; b < lam; ++b)
    for (int c = 0; c < ss; ++c) order.push_back(by_pair[c][b]);
  return a.select_rows(order);
}

Assignment canonical_assignment(const IpInstance& inst, const Array& a) {
  validate(inst);
  const int s = inst.s, ss = s * s, k = inst.k, n = inst.runs(), lam = inst.lambda;
  if (a.runs() != n || a.factors() != k || a.levels() != s) throw std::invalid_argument("array does not match instance");
  for (int i = 0; i < n; ++i) {
    const int r = i % ss;
    if (a(i, 0) != r / s + 1 || a(i, 1) != r % s + 1)
      throw std::invalid_argument("first two columns are not the stacked factorial");
  }
  const auto pairs = column_pairs(inst);
  Assignment x;
  for (int i = 1; i <= n; ++i)
    for (int j = 3; j <= k; ++j)
      for (int lv = 1; lv <= s; ++lv) x[join_name("x", {i, j, lv})] = a(i - 1, j - 1) == lv ? 1 : 0;
  std::vector<std::int64_t> d0(pairs.size() * ss, -lam);
  for (int i = 1; i <= n; ++i)
    for (std::size_t ci = 0; ci < pairs.size(); ++ci) {
      const int l = s * (a(i - 1, pairs[ci].first - 1) - 1) + a(i - 1, pairs[ci].second - 1);
      for (int q = 1; q <= ss; ++q) x[join_name("z", {i, static_cast<int>(ci) + 1, q})] = q == l ? 1 : 0;
      ++d0[ci * ss + (l - 1)];
    }
  std::vector<std::pair<std::string, std::int64_t>> deltas;
  for (std::size_t ci = 0; ci < pairs.size(); ++ci)
    for (int l = 1; l <= ss; ++l) deltas.emplace_back(join_name("d0", {static_cast<int>(ci) + 1, l}), d0[ci * ss + l - 1]);
  for (int lv = 1; lv <= s; ++lv) {
    std::int64_t cnt = 0;
    for (int i = 0; i < n; ++i) cnt += a(i, k - 1) == lv;
    deltas.emplace_back(join_name("d1", {lv}), cnt - lam * s);
  }
  for (int which = 0; which < 2; ++which)
    for (int j = 3; j <= k; ++j)
      for (int lv = 1; lv <= s; ++lv)
        for (int mp = 1; mp <= s; ++mp) {
          std::int64_t cnt = 0;
          for (int i = 0; i < n; ++i) cnt += a(i, which) == mp && a(i, j - 1) == lv;
          deltas.emplace_back(join_name(which == 0 ? "d2" : "d3", {lv, mp, j}), cnt - lam);
        }
  for (const auto& [name, v] : deltas) {
    x[name] = static_cast<double>(v);
    if (inst.p == 1) {
      x[split_name(name, 'p')] = static_cast<double>(std::max<std::int64_t>(v, 0));
      x[split_name(name, 'm')] = static_cast<double>(std::max<std::int64_t>(-v, 0));
    }
  }
  return x;
}

ModelCheck evaluate(const IpModel& model, const Assignment& a, double tol) {
  ModelCheck r;
  std::vector<double> val(model.vars.size(), 0.0);
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    const auto& v = model.vars[i];
    if (auto it = a.find(v.name); it != a.end()) val[i] = it->second;
    if (val[i] < v.lo - tol || val[i] > v.hi + tol) r.violations.push_back("bound " + v.name);
    if (v.type != VarType::continuous && std::abs(val[i] - std::round(val[i])) > tol)
      r.violations.push_back("integrality " + v.name);
  }
  for (const auto& t : model.objective) r.objective += static_cast<double>(t.coef) * val[t.var];
  for (const auto& t : model.quadratic_objective) r.objective += static_cast<double>(t.coef) * val[t.var] * val[t.var];
  for (const auto& c : model.constraints) {
    double lhs = 0;
    for (const auto& t : c.terms) lhs += static_cast<double>(t.coef) * val[t.var];
    const double rhs = static_cast<double>(c.rhs);
    const bool ok = c.rel == Relation::eq ? std::abs(lhs - rhs) <= tol
                    : c.rel == Relation::le ? lhs <= rhs + tol
                                            : lhs >= rhs - tol;
    if (!ok) r.violations.push_back("constraint " + c.name);
  }
  return r;
}

SolutionReport verify_solution(const IpInstance& inst, const IpModel& model, const Assignment& a) {
  validate(inst);
  const int s = inst.s, ss = s * s, k = inst.k, n = inst.runs();
  const double tol = 1e-6;
  Array arr(n, k, s);
  for (int i = 0; i < n; ++i) {
    const int r = i % ss;
    arr.set(i, 0, r / s + 1);
    arr.set(i, 1, r % s + 1);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 3; j <= k; ++j) {
      double sum = 0;
      int level = 0;
      for (int lv = 1; lv <= s; ++lv) {
        const auto name = join_name("x", {i, j, lv});
        auto it = a.find(name);
        if (it == a.end()) throw VerificationError("incomplete assignment: no value for " + name);
        if (std::abs(it->second) > tol && std::abs(it->second - 1) > tol)
          throw VerificationError("bound violation: " + name + " is not 0/1");
        sum += it->second;
        if (std::abs(it->second - 1) <= tol) level = lv;
      }
      if (std::abs(sum - 1) > tol || level == 0)
        throw VerificationError("cell (" + std::to_string(i) + "," + std::to_string(j) + ") needs exactly one level");
      arr.set(i - 1, j - 1, level);
    }
  for (const auto& v : model.vars) {
    auto it = a.find(v.name);
    if (it == a.end()) continue;
    if (it->second < v.lo - tol || it->second > v.hi + tol)
      throw VerificationError("bound violation: " + v.name + " = " + std::to_string(it->second) + " outside [" +
                              std::to_string(v.lo) + "," + std::to_string(v.hi) + "]");
  }

  SolutionReport rep;
  rep.array = arr;
  rep.unbalance = unbalance(arr, 2, inst.p);
  rep.tolerance = tolerance(arr, 2);
  const auto check = evaluate(model, a, tol);
  rep.objective = check.objective;
  rep.constraints_ok = check.feasible();
  for (const auto& v : check.violations) rep.problems.push_back(v);
  for (int lv = 1; lv <= s; ++lv) {
    auto it = a.find(join_name("d1", {lv}));
    const double d = it == a.end() ? 0.0 : it->second;
    rep.d1_term += inst.p == 1 ? std::abs(d) : d * d;
  }
  rep.objective_ok = std::abs(rep.objective - rep.d1_term - rep.unbalance.to_double()) <= 1e-6;
  if (!rep.objective_ok) rep.problems.push_back("objective minus d1 term differs from the array's unbalance");
  rep.z_ok = true;
  const auto pairs = column_pairs(inst);
  for (int i = 1; i <= n && rep.z_ok; ++i)
    for (std::size_t ci = 0; ci < pairs.size() && rep.z_ok; ++ci) {
      const int l = s * (arr(i - 1, pairs[ci].first - 1) - 1) + arr(i - 1, pairs[ci].second - 1);
      for (int q = 1; q <= ss; ++q) {
        auto it = a.find(join_name("z", {i, static_cast<int>(ci) + 1, q}));
        const double z = it == a.end() ? 0.0 : it->second;
        if (std::abs(z - (q == l ? 1.0 : 0.0)) > tol) {
          rep.z_ok = false;
          rep.problems.push_back("z variables of row " + std::to_string(i) + " disagree with the linking equation");
          break;
        }
      }
    }
  return rep;
}

EnumerationResult enumerate_optimum(const IpInstance& inst, const IpModel& model, std::uint64_t limit) {
  validate(inst);
  const int s = inst.s, ss = s * s, k = inst.k, n = inst.runs();
  const int cells = n * (k - 2);
  std::uint64_t total = 1;
  for (int c = 0; c < cells; ++c) {
    if (total > limit / static_cast<std::uint64_t>(s)) throw std::length_error("enumeration exceeds the state limit");
    total *= static_cast<std::uint64_t>(s);
  }
  EnumerationResult res;
  Array arr(n, k, s);
  for (int i = 0; i < n; ++i) {
    arr.set(i, 0, (i % ss) / s + 1);
    arr.set(i, 1, (i % ss) % s + 1);
  }
  std::vector<int> digit(cells, 1);
  for (std::uint64_t st = 0; st < total; ++st) {
    for (int c = 0; c < cells; ++c) arr.set(c / (k - 2), 2 + c % (k - 2), digit[c]);
    ++res.visited;
    const auto check = evaluate(model, canonical_assignment(inst, arr));
    if (check.feasible()) {
      ++res.feasible;
      const auto obj = static_cast<std::int64_t>(std::llround(check.objective));
      if (!res.optimum || obj < *res.optimum) {
        res.optimum = obj;
        res.witnesses.clear();
      }
      if (obj == *res.optimum && res.witnesses.size() < 16) res.witnesses.push_back(arr);
    }
    for (int c = cells - 1; c >= 0; --c) {
      if (digit[c] < s) {
        ++digit[c];
        break;
      }
      digit[c] = 1;
    }
  }
  return res;
}

}  // namespace aoa::ip
