#include "aoa/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aoa/metrics.hpp"

namespace aoa::design {

LevelContrast::LevelContrast(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("contrast needs at least two levels");
  double sum = 0, scale = 1;
  for (double v : values_) {
    sum += v;
    scale = std::max(scale, std::abs(v));
  }
  if (std::abs(sum) > 1e-12 * scale) throw std::invalid_argument("contrast values must sum to zero");
  if (std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_[0]; }))
    throw std::invalid_argument("contrast must not be constant");
}

LevelContrast default_contrast(int s) {
  if (s < 2) throw std::invalid_argument("default contrast needs s >= 2");
  std::vector<double> v(s);
  for (int a = 1; a <= s; ++a) v[a - 1] = a - (s + 1) / 2.0;
  return LevelContrast(std::move(v));
}

Eigen::MatrixXd design_matrix(const Array& a, const LevelContrast& f) {
  if (f.levels() != a.levels()) throw std::invalid_argument("contrast and array disagree on s");
  const int n = a.runs(), k = a.factors();
  Eigen::MatrixXd x(n, k);
  for (int j = 0; j < k; ++j) {
    double norm2 = 0;
    bool constant = true;
    for (int i = 0; i < n; ++i) {
      x(i, j) = f(a(i, j));
      norm2 += x(i, j) * x(i, j);
      constant = constant && x(i, j) == x(0, j);
    }
    if (norm2 == 0 || constant) throw SingularColumnError("column " + std::to_string(j + 1) + " is constant under f");
    x.col(j) /= std::sqrt(norm2);
  }
  return x;
}

double d_value(const Array& a, const LevelContrast& f) {
  const Eigen::MatrixXd x = design_matrix(a, f);
  const Eigen::MatrixXd g = x.transpose() * x;
  double det = Eigen::FullPivLU<Eigen::MatrixXd>(g).determinant();
  if (det < 0) det = 0;
  return std::pow(det, 1.0 / a.factors());
}

Deviations deviations(const LevelContrast& f) {
  std::vector<double> v = f.values();
  std::sort(v.begin(), v.end());
  const std::size_t s = v.size();
  const double median = s % 2 ? v[s / 2] : 0.5 * (v[s / 2 - 1] + v[s / 2]);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / s;
  Deviations d;
  for (double x : v) {
    d.sigma1 += std::abs(x - median);
    d.sigma2 += (x - mean) * (x - mean);
  }
  d.sigma1 /= s;
  d.sigma2 = std::sqrt(d.sigma2 / s);
  return d;
}

double d_phi_theta(const Array& a, double alpha, double beta) {
  if (alpha < 1 || beta < 1) throw std::invalid_argument("alpha and beta must be >= 1");
  const double lambda = static_cast<double>(a.runs()) / (static_cast<double>(a.levels()) * a.levels());
  double total = 0;
  for (const auto& j : column_subsets(a.factors(), 2)) {
    double inner = 0;
    for (auto n : tuple_counts(a, ColumnTuple(j, a.factors())))
      inner += std::pow(std::abs(static_cast<double>(n) - lambda), alpha);
    total += std::pow(inner, beta);
  }
  return total;
}

Rational d1(const Array& a) { return unbalance(a, 2, 1) / Rational(binomial(a.factors(), 2)); }
Rational d2(const Array& a) { return unbalance(a, 2, 2) / Rational(binomial(a.factors(), 2)); }

double j2(const Array& a, const LevelContrast& f) {
  if (!is_oa(a, 1)) throw std::invalid_argument("J2 is defined on strength-1 OAs");
  const Eigen::MatrixXd x = design_matrix(a, f);
  const Eigen::MatrixXd g = x.transpose() * x - Eigen::MatrixXd::Identity(a.factors(), a.factors());
  const double n = a.runs(), k = a.factors(), s = a.levels();
  return n * n / 2 * g.squaredNorm() + n / 2 * (n * k * (k - 1) + n * k * s - k * k * s * s);
}

DcriterionReport check_dcriterion_bounds(const Array& a, const LevelContrast& f) {
  if (!is_oa(a, 1)) throw std::invalid_argument("bounds need a strength-1 OA");
  DcriterionReport r;
  const int k = a.factors(), s = a.levels();
  const double lambda = static_cast<double>(a.runs()) / (static_cast<double>(s) * s);
  const Eigen::MatrixXd x = design_matrix(a, f);
  const Eigen::MatrixXd g = x.transpose() * x - Eigen::MatrixXd::Identity(k, k);
  const double tol = k >= 2 ? tolerance(a, 2).to_double() : 0.0;
  const double unb2 = k >= 2 ? unbalance(a, 2, 2).to_double() : 0.0;
  const Deviations dev = deviations(f);
  constexpr double eps = 1e-9;
  r.frobenius_lhs = g.norm();
  r.frobenius_rhs = std::sqrt(2 * unb2) / (lambda * s);
  r.max_lhs = g.cwiseAbs().maxCoeff();
  r.max_rhs_sigma = dev.ratio_squared() * tol / lambda;
  r.max_rhs_plain = tol / lambda;
  r.frobenius_ok = r.frobenius_lhs <= r.frobenius_rhs + eps;
  r.max_ok = r.max_lhs <= r.max_rhs_sigma + eps && r.max_rhs_sigma <= r.max_rhs_plain + eps;

  if (k >= 3) {
    std::vector<int> head(k - 1);
    std::iota(head.begin(), head.end(), 0);
    if (is_oa(a.select_columns(head), 2)) {
      int bad = 0;
      for (int j = 0; j < k - 1; ++j)
        if (!is_oa(a.select_columns(std::vector<int>{j, k - 1}), 2)) ++bad;
      r.det_bound_r = bad;
      const double ratio2 = dev.ratio_squared();
      if (std::sqrt(static_cast<double>(bad)) / lambda * ratio2 * tol < 1) {
        r.det_bound_applicable = true;
        r.det_bound_lhs = d_value(a, f);
        r.det_bound_rhs = std::pow(1 - bad / (lambda * lambda) * ratio2 * ratio2 * tol * tol, 1.0 / k);
        r.det_bound_ok = r.det_bound_lhs >= r.det_bound_rhs - eps;
      }
    }
  }
  return r;
}

}  // namespace aoa::design
