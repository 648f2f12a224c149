#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "aoa/array.hpp"
#include "aoa/rational.hpp"

namespace aoa::ip {

enum class SymmetryKind { none, semicyclic, klein, both };

struct IpInstance {
  int s = 2;
  int k = 3;
  int lambda = 1;
  int p = 1;
  int epsilon = 1;
  SymmetryKind symmetry = SymmetryKind::none;
  int mbar = 0;  // semicyclic: levels mbar..s rotate

  int runs() const { return lambda * s * s; }
};

// Throws std::invalid_argument.
void validate(const IpInstance& inst);

enum class VarType { binary, integer, continuous };

struct Variable {
  std::string name;
  VarType type = VarType::binary;
  std::int64_t lo = 0;
  std::int64_t hi = 1;
};

struct Term {
  int var;
  std::int64_t coef;
};

enum class Relation { eq, le, ge };

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation rel = Relation::eq;
  std::int64_t rhs = 0;
};

struct IpModel {
  std::string title;
  std::vector<Variable> vars;
  std::vector<Term> objective;            // linear part
  std::vector<Term> quadratic_objective;  // coef * var^2
  std::vector<Constraint> constraints;

  int add_var(std::string name, VarType type, std::int64_t lo, std::int64_t hi);
  int var(const std::string& name) const;  // throws std::out_of_range
  bool has_var(const std::string& name) const { return index_.count(name) != 0; }
  void add_constraint(Constraint c);
  std::size_t count_prefix(const std::string& prefix) const;

 private:
  std::unordered_map<std::string, int> index_;
};

// Rows are lambda stacked copies of the s x s factorial in the first two
// columns; row (b, u, v) has 1-based index b s^2 + (u-1) s + v.
IpModel build_model(const IpInstance& inst);
// Appends the tying equalities for inst.symmetry.
void add_symmetry(IpModel& model, const IpInstance& inst);
// Row maps on 1-based row indices.
int semicyclic_row_map(const IpInstance& inst, int row);
int klein_row_map(const IpInstance& inst, int row);

std::string emit_lp(const IpModel& model);
// Parses the LP subset written by emit_lp. Throws ParseError.
IpModel parse_lp(const std::string& text);
std::string emit_mps(const IpModel& model);

struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& msg, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

using Assignment = std::map<std::string, double>;

// Solution file: "name value" per line, '#' starts a comment.
Assignment parse_solution(const std::string& text);
std::string format_solution(const IpModel& model, const Assignment& a);

// Reorders rows so the first two columns are the stacked factorial.
// Empty if the first two columns are not an orthogonal pair.
std::optional<Array> align_prefix(const Array& a);
// Variable values induced by an array whose prefix is already aligned.
Assignment canonical_assignment(const IpInstance& inst, const Array& a);

struct ModelCheck {
  double objective = 0;
  std::vector<std::string> violations;  // bounds, integrality, constraints
  bool feasible() const { return violations.empty(); }
};
// Missing variables count as 0.
ModelCheck evaluate(const IpModel& model, const Assignment& a, double tol = 1e-6);

struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolutionReport {
  Array array;
  Rational unbalance;      // Unb_{p,2} of the rebuilt array
  Rational tolerance;      // Tol_2
  double objective = 0;
  double d1_term = 0;      // sum |d1_m|^p
  bool objective_ok = false;  // objective - d1_term == unbalance
  bool z_ok = false;
  bool constraints_ok = false;
  std::vector<std::string> problems;
  bool ok() const { return objective_ok && z_ok && constraints_ok; }
};
// Throws VerificationError on a missing x value, a violated one-level-per-cell
// row, or a variable outside its bounds.
SolutionReport verify_solution(const IpInstance& inst, const IpModel& model, const Assignment& a);

struct EnumerationResult {
  std::optional<std::int64_t> optimum;
  std::vector<Array> witnesses;
  std::uint64_t feasible = 0;
  std::uint64_t visited = 0;
};
// Walks every x assignment (one level per cell), derives the remaining
// variables canonically and keeps the best feasible objective.
EnumerationResult enumerate_optimum(const IpInstance& inst, const IpModel& model, std::uint64_t limit = 10'000'000);

}  // namespace aoa::ip
