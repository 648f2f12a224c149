#pragma once

#include <string>
#include <vector>

#include "aoa/array.hpp"
#include "aoa/galois.hpp"
#include "aoa/rational.hpp"

namespace aoa::construct {

using GammaSet = std::vector<std::vector<gf::Element>>;

// Projective representatives of F_s^(ell-1): first nonzero coordinate is 1,
// in lexicographic order.
GammaSet gamma_set(const gf::Field& f, int ell);

enum class Variant { half, odd_ext, even_ext };

struct ConstructionSpec {
  int s = 0;
  int ell = 2;
  int kappa = 1;
  Variant variant = Variant::half;
};

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);  // "half", "odd-ext", "even-ext"

// Throws std::invalid_argument describing the first violated condition.
void validate(const ConstructionSpec& spec);

int expected_runs(const ConstructionSpec& spec);
int expected_factors(const ConstructionSpec& spec);
Rational expected_tolerance(const ConstructionSpec& spec);
Rational expected_unbalance(const ConstructionSpec& spec, int p);

// The L block on its own: an OA(s^ell, (s^ell-1)/(s-1), s, 2).
Array linear_block(const gf::Field& f, int ell);

Array ak_half(const ConstructionSpec& spec);
Array ak_ext_odd(const ConstructionSpec& spec);
Array ak_ext_even(const ConstructionSpec& spec);
// Dispatches on spec.variant.
Array build(const ConstructionSpec& spec);

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckItem> items;
  bool all_pass() const;
  const CheckItem* find(const std::string& name) const;
};

VerifyReport verify_construction(const Array& a, const ConstructionSpec& spec);

}  // namespace aoa::construct
