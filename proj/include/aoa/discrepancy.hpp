#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aoa/array.hpp"
#include "aoa/rational.hpp"

namespace aoa::disc {

using BigRational = boost::multiprecision::cpp_rational;

// N points in [0,1]^k, row-major.
struct PointSet {
  int n = 0;
  int k = 0;
  std::vector<double> coords;
  double operator()(int i, int j) const { return coords[static_cast<std::size_t>(i) * k + j]; }
  std::span<const double> point(int i) const {
    return {coords.data() + static_cast<std::size_t>(i) * k, static_cast<std::size_t>(k)};
  }
};

// Run i -> ((2 a_ij - 1) / (2s))_j.
PointSet points_of(const Array& a);

enum class Kernel { centered, wrap_around, mixture };
const char* kernel_name(Kernel k);

double kernel_1d(Kernel kind, double x, double y);
double kernel(Kernel kind, std::span<const double> x, std::span<const double> y);
// Closed forms of the integral over y of K(x,y), and over x and y.
double integral1_1d(Kernel kind, double x);
double integral2_1d(Kernel kind);

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol);
// Largest deviation between the closed-form 1-D integrals and quadrature,
// over a grid of x values.
double kernel_integral_error(Kernel kind);

double discrepancy_squared(const PointSet& pts, Kernel kind);
double cd_squared(const Array& a);
double wd_squared(const Array& a);
double md_squared(const Array& a);
double cd(const Array& a);
double wd(const Array& a);
double md(const Array& a);

struct DdParams {
  double a = 0;
  double b = 0;
  DdParams(double a_, double b_);
};

struct DdValue {
  double hamming_form = 0;     // DD^2 from run-pair agreement counts
  double unbalance_form = 0;   // DD^2 from Unb_{2,t}, t = 1..k
};
DdValue dd_squared(const Array& a, const DdParams& params);
BigRational dd_squared_exact(const Array& a, const BigRational& pa, const BigRational& pb);

double dd_lower_bound(int n_runs, int n_factors, int n_levels, const DdParams& params);

struct BoundCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
  bool equality_expected = false;
  bool equality_holds = false;
};
std::vector<BoundCheck> check_discrepancy_bounds(const Array& a);

}  // namespace aoa::disc
