#include "aoa/array.hpp"

#include <algorithm>
#include <string>

namespace aoa {

Array::Array(int runs, int factors, int levels) : n_(runs), k_(factors), s_(levels) {
  if (runs < 0 || factors < 0 || levels < 1) throw std::invalid_argument("bad array dimensions");
  cells_.assign(static_cast<std::size_t>(runs) * factors, 1);
}

Array::Array(int levels, const std::vector<std::vector<int>>& rows) : s_(levels) {
  if (levels < 1) throw std::invalid_argument("levels must be positive");
  n_ = static_cast<int>(rows.size());
  k_ = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  cells_.reserve(static_cast<std::size_t>(n_) * k_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != k_) throw std::invalid_argument("ragged rows");
    for (int v : r) {
      if (v < 1 || v > s_) throw std::out_of_range("level " + std::to_string(v) + " outside 1.." + std::to_string(s_));
      cells_.push_back(v);
    }
  }
}

Array::Array(int levels, std::initializer_list<std::initializer_list<int>> rows)
    : Array(levels, [&] {
        std::vector<std::vector<int>> v;
        for (auto r : rows) v.emplace_back(r);
        return v;
      }()) {}

int Array::at(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= k_) throw std::out_of_range("cell index out of range");
  return (*this)(i, j);
}

void Array::set(int i, int j, int v) {
  if (i < 0 || i >= n_ || j < 0 || j >= k_) throw std::out_of_range("cell index out of range");
  if (v < 1 || v > s_) throw std::out_of_range("level out of range");
  cells_[static_cast<std::size_t>(i) * k_ + j] = v;
}

std::vector<int> Array::column(int j) const {
  std::vector<int> c(n_);
  for (int i = 0; i < n_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<std::vector<int>> Array::rows() const {
  std::vector<std::vector<int>> out;
  out.reserve(n_);
  for (int i = 0; i < n_; ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

Array Array::select_columns(std::span<const int> cols) const {
  Array out(n_, static_cast<int>(cols.size()), s_);
  for (int i = 0; i < n_; ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] < 0 || cols[c] >= k_) throw std::out_of_range("column index out of range");
      out.cells_[static_cast<std::size_t>(i) * out.k_ + c] = (*this)(i, cols[c]);
    }
  return out;
}

Array Array::drop_columns(std::span<const int> cols) const {
  std::vector<int> keep;
  for (int j = 0; j < k_; ++j)
    if (std::find(cols.begin(), cols.end(), j) == cols.end()) keep.push_back(j);
  return select_columns(keep);
}

Array Array::select_rows(std::span<const int> rws) const {
  Array out(static_cast<int>(rws.size()), k_, s_);
  for (std::size_t r = 0; r < rws.size(); ++r) {
    if (rws[r] < 0 || rws[r] >= n_) throw std::out_of_range("row index out of range");
    std::copy(row(rws[r]).begin(), row(rws[r]).end(), out.cells_.begin() + r * k_);
  }
  return out;
}

Array Array::hconcat(const Array& o) const {
  if (o.n_ != n_ || o.s_ != s_) throw std::invalid_argument("hconcat: shape mismatch");
  Array out(n_, k_ + o.k_, s_);
  for (int i = 0; i < n_; ++i) {
    auto dst = out.cells_.begin() + static_cast<std::ptrdiff_t>(i) * out.k_;
    std::copy(row(i).begin(), row(i).end(), dst);
    std::copy(o.row(i).begin(), o.row(i).end(), dst + k_);
  }
  return out;
}

Array Array::vconcat(const Array& o) const {
  if (o.k_ != k_ || o.s_ != s_) throw std::invalid_argument("vconcat: shape mismatch");
  Array out = *this;
  out.n_ += o.n_;
  out.cells_.insert(out.cells_.end(), o.cells_.begin(), o.cells_.end());
  return out;
}

ColumnTuple::ColumnTuple(std::vector<int> idx, int k) : idx_(std::move(idx)) {
  if (idx_.empty()) throw std::invalid_argument("empty column tuple");
  for (std::size_t r = 0; r < idx_.size(); ++r) {
    if (idx_[r] < 0 || idx_[r] >= k) throw std::out_of_range("column index out of range");
    if (r > 0 && idx_[r] <= idx_[r - 1]) throw std::invalid_argument("column tuple not strictly increasing");
  }
}

std::vector<std::vector<int>> column_subsets(int k, int t) {
  std::vector<std::vector<int>> out;
  if (t < 1 || t > k) return out;
  std::vector<int> c(t);
  for (int i = 0; i < t; ++i) c[i] = i;
  while (true) {
    out.push_back(c);
    int i = t - 1;
    while (i >= 0 && c[i] == k - t + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int r = i + 1; r < t; ++r) c[r] = c[r - 1] + 1;
  }
  return out;
}

Array full_factorial(int s, int k) {
  std::size_t n = 1;
  for (int j = 0; j < k; ++j) n *= static_cast<std::size_t>(s);
  Array out(static_cast<int>(n), k, s);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t v = i;
    for (int j = k - 1; j >= 0; --j) {
      out.set(static_cast<int>(i), j, static_cast<int>(v % s) + 1);
      v /= s;
    }
  }
  return out;
}

Array latin_square_oa(int s, int lambda) {
  Array out(lambda * s * s, 3, s);
  for (int b = 0; b < lambda; ++b)
    for (int x = 0; x < s; ++x)
      for (int y = 0; y < s; ++y) {
        int i = b * s * s + x * s + y;
        out.set(i, 0, x + 1);
        out.set(i, 1, y + 1);
        out.set(i, 2, (x + y) % s + 1);
      }
  return out;
}

}  // namespace aoa
