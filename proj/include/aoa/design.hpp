#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "aoa/array.hpp"
#include "aoa/rational.hpp"

namespace aoa::design {

struct SingularColumnError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// f: level -> real with zero sum and at least two distinct values.
class LevelContrast {
 public:
  explicit LevelContrast(std::vector<double> values);
  int levels() const { return static_cast<int>(values_.size()); }
  double operator()(int level) const { return values_.at(level - 1); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

LevelContrast default_contrast(int s);

Eigen::MatrixXd design_matrix(const Array& a, const LevelContrast& f);
double d_value(const Array& a, const LevelContrast& f);

struct Deviations {
  double sigma1 = 0;
  double sigma2 = 0;
  double ratio_squared() const { return (sigma1 / sigma2) * (sigma1 / sigma2); }
};
Deviations deviations(const LevelContrast& f);

double d_phi_theta(const Array& a, double alpha, double beta);
Rational d1(const Array& a);
Rational d2(const Array& a);

double j2(const Array& a, const LevelContrast& f);

struct DcriterionReport {
  double frobenius_lhs = 0;   // ||X'X - I||_F
  double frobenius_rhs = 0;   // sqrt(2 Unb_{2,2}) / (lambda s)
  double max_lhs = 0;         // ||X'X - I||_max
  double max_rhs_sigma = 0;   // (sigma1/sigma2)^2 Tol2 / lambda
  double max_rhs_plain = 0;   // Tol2 / lambda
  bool frobenius_ok = false;
  bool max_ok = false;
  bool det_bound_applicable = false;
  int det_bound_r = 0;
  double det_bound_lhs = 0;   // D-value
  double det_bound_rhs = 0;
  bool det_bound_ok = true;
  bool all_ok() const { return frobenius_ok && max_ok && det_bound_ok; }
};
DcriterionReport check_dcriterion_bounds(const Array& a, const LevelContrast& f);

}  // namespace aoa::design
