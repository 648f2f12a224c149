#pragma once

#include <string>
#include <vector>

#include "aoa/array.hpp"

namespace aoa::sym {

// Permutation of {1..n}.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);  // images[i-1] = pi(i)
  static Permutation identity(int n);
  // Cycles in 1-based notation, e.g. {{1,2,3}} for (1,2,3).
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles);
  // "(1,2,3)(4,5)", "id" or "()".
  static Permutation parse(const std::string& text, int n);

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int x) const { return img_[x - 1]; }
  Permutation inverse() const;
  // (this * o)(x) = this(o(x))
  Permutation operator*(const Permutation& o) const;
  bool is_identity() const;
  std::string str() const;
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> img_;
};

struct GroupElement {
  Permutation g;      // levels
  Permutation sigma;  // columns
  GroupElement operator*(const GroupElement& o) const { return {g * o.g, sigma * o.sigma}; }
  std::string str() const { return g.str() + "|" + sigma.str(); }
  static GroupElement parse(const std::string& text, int s, int k);
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

// result[i][j] = g(a[i][sigma^-1(j)])
Array act(const GroupElement& e, const Array& a);
std::vector<int> act_row(const GroupElement& e, std::span<const int> row);
bool equivalent(const Array& a, const Array& b);
bool is_automorphism(const GroupElement& e, const Array& a);

enum class EncodingKind { bicyclic, semicyclic, klein, composite };
const char* kind_name(EncodingKind k);
EncodingKind parse_kind(const std::string& name);

int default_bicyclic_r(int s, int k);
GroupElement bicyclic_generator(int s, int k, int r);
GroupElement semicyclic_generator(int s, int k, int a);
GroupElement klein_generator(int s, int k);

struct SymmetricEncoding {
  EncodingKind kind = EncodingKind::bicyclic;
  int param = 0;  // r (bicyclic) or a (semicyclic), unused otherwise
  int levels = 0;
  int factors = 0;
  std::vector<GroupElement> generators;  // one, except for composite
  std::vector<std::vector<int>> core;
  std::vector<std::vector<int>> fixed_rows;
};

SymmetricEncoding make_encoding(EncodingKind kind, int s, int k, int param);
// Checks the kind-specific invariants; throws std::invalid_argument.
void validate(const SymmetricEncoding& e);
// Orbit of a row under the group generated by the encoding's generators.
std::vector<std::vector<int>> row_orbit(const SymmetricEncoding& e, const std::vector<int>& row);
Array expand(const SymmetricEncoding& e);
SymmetricEncoding compress(const Array& a, EncodingKind kind, int param);
// Fixed-row count for a semicyclic encoding with N runs.
int semicyclic_fixed_count(int n_runs, int s, int a);

}  // namespace aoa::sym
