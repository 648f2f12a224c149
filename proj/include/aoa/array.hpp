#pragma once

#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace aoa {

// N x k array with levels in 1..s, stored row-major. Row and column indices
// are 0-based; level values are 1-based as in printed tables.
class Array {
 public:
  Array() = default;
  Array(int runs, int factors, int levels);
  Array(int levels, const std::vector<std::vector<int>>& rows);
  Array(int levels, std::initializer_list<std::initializer_list<int>> rows);

  int runs() const { return n_; }
  int factors() const { return k_; }
  int levels() const { return s_; }

  int operator()(int i, int j) const { return cells_[static_cast<std::size_t>(i) * k_ + j]; }
  int at(int i, int j) const;
  void set(int i, int j, int v);

  std::span<const int> row(int i) const {
    return {cells_.data() + static_cast<std::size_t>(i) * k_, static_cast<std::size_t>(k_)};
  }
  std::vector<int> column(int j) const;
  const std::vector<int>& cells() const { return cells_; }
  std::vector<std::vector<int>> rows() const;

  Array select_columns(std::span<const int> cols) const;
  Array drop_columns(std::span<const int> cols) const;
  Array select_rows(std::span<const int> rows) const;
  // Columns of *this followed by columns of other.
  Array hconcat(const Array& other) const;
  // Rows of *this followed by rows of other.
  Array vconcat(const Array& other) const;

  friend bool operator==(const Array&, const Array&) = default;

 private:
  int n_ = 0;
  int k_ = 0;
  int s_ = 1;
  std::vector<int> cells_;
};

// Strictly increasing 0-based column indices.
class ColumnTuple {
 public:
  ColumnTuple(std::vector<int> idx, int k);
  int size() const { return static_cast<int>(idx_.size()); }
  int operator[](int r) const { return idx_[r]; }
  const std::vector<int>& indices() const { return idx_; }

 private:
  std::vector<int> idx_;
};

// All t-subsets of {0..k-1} in lexicographic order.
std::vector<std::vector<int>> column_subsets(int k, int t);

// Full factorial s^k in lexicographic order (last column fastest).
Array full_factorial(int s, int k);
// OA(lambda*s^2, 3, s, 2): columns x, y, x+y mod s, repeated lambda times.
Array latin_square_oa(int s, int lambda);

}  // namespace aoa
