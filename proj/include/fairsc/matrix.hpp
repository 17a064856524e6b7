#pragma once

#include "fairsc/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace fairsc {

using Index = std::size_t;
using Vector = std::vector<double>;

// Column-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  static DenseMatrix identity(Index n) {
    DenseMatrix m(n, n);
    for (Index i = 0; i < n; ++i)
      m(i, i) = 1.0;
    return m;
  }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double &operator()(Index i, Index j) { return values_[j * rows_ + i]; }
  double operator()(Index i, Index j) const { return values_[j * rows_ + i]; }

  std::span<double> col(Index j) { return {values_.data() + j * rows_, rows_}; }
  std::span<const double> col(Index j) const {
    return {values_.data() + j * rows_, rows_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (Index j = 0; j < cols_; ++j)
      for (Index i = 0; i < rows_; ++i)
        t(j, i) = (*this)(i, j);
    return t;
  }

  // First `count` columns starting at `first`.
  DenseMatrix columns(Index first, Index count) const {
    require(first + count <= cols_, ErrorKind::DimensionMismatch,
            "column range out of bounds");
    DenseMatrix out(rows_, count);
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(first * rows_),
                count * rows_, out.values_.begin());
    return out;
  }

private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> values_;
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Immutable once built; columns within each
/// row are strictly increasing and no explicit zeros are stored.
class CsrMatrix {
public:
  CsrMatrix() : row_offsets_{0} {}

  CsrMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
            std::vector<Index> col_indices, std::vector<double> values)
      : rows_(rows), cols_(cols), row_offsets_(std::move(row_offsets)),
        col_indices_(std::move(col_indices)), values_(std::move(values)) {
    validate();
  }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index nnz() const noexcept { return values_.size(); }

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  // Entry lookup by binary search within the row; zero if not stored.
  double at(Index i, Index j) const {
    auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j)
      return 0.0;
    return values_[static_cast<Index>(it - col_indices_.begin())];
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (Index i = 0; i < rows_; ++i)
      for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
        d(i, col_indices_[p]) = values_[p];
    return d;
  }

private:
  void validate() const {
    require(row_offsets_.size() == rows_ + 1, ErrorKind::InvalidArgument,
            "row_offsets must have n_rows + 1 entries");
    require(row_offsets_.front() == 0 && row_offsets_.back() == values_.size() &&
                col_indices_.size() == values_.size(),
            ErrorKind::InvalidArgument, "inconsistent CSR array lengths");
    for (Index i = 0; i < rows_; ++i) {
      require(row_offsets_[i] <= row_offsets_[i + 1], ErrorKind::InvalidArgument,
              "row_offsets must be nondecreasing");
      for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
        require(col_indices_[p] < cols_, ErrorKind::InvalidArgument,
                "column index out of range");
        require(p == row_offsets_[i] || col_indices_[p - 1] < col_indices_[p],
                ErrorKind::InvalidArgument,
                "column indices must be strictly increasing within a row");
        require(values_[p] != 0.0, ErrorKind::InvalidArgument,
                "explicit zero stored");
      }
    }
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_;
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

/// Builds a CSR matrix from coordinate triplets. Duplicates are summed and
/// entries that end up exactly zero are dropped.
inline CsrMatrix csr_from_coo(std::span<const Triplet> triplets, Index rows,
                              Index cols) {
  std::vector<Index> counts(rows + 1, 0);
  for (const auto &t : triplets) {
    if (t.row >= rows || t.col >= cols)
      throw Error(ErrorKind::InvalidArgument,
                  "triplet (" + std::to_string(t.row) + ", " +
                      std::to_string(t.col) + ") outside " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    ++counts[t.row + 1];
  }
  for (Index i = 0; i < rows; ++i)
    counts[i + 1] += counts[i];

  // Bucket by row, then sort each row by column and merge duplicates.
  std::vector<std::pair<Index, double>> bucket(triplets.size());
  std::vector<Index> cursor(counts.begin(), counts.end() - 1);
  for (const auto &t : triplets)
    bucket[cursor[t.row]++] = {t.col, t.value};

  std::vector<Index> offsets(rows + 1, 0);
  std::vector<Index> cols_out;
  std::vector<double> vals_out;
  cols_out.reserve(triplets.size());
  vals_out.reserve(triplets.size());
  for (Index i = 0; i < rows; ++i) {
    auto first = bucket.begin() + static_cast<std::ptrdiff_t>(counts[i]);
    auto last = bucket.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]);
    std::stable_sort(first, last, [](const auto &a, const auto &b) {
      return a.first < b.first;
    });
    for (auto it = first; it != last;) {
      Index c = it->first;
      double sum = 0.0;
      for (; it != last && it->first == c; ++it)
        sum += it->second;
      if (sum != 0.0) {
        cols_out.push_back(c);
        vals_out.push_back(sum);
      }
    }
    offsets[i + 1] = cols_out.size();
  }
  return CsrMatrix(rows, cols, std::move(offsets), std::move(cols_out),
                   std::move(vals_out));
}

inline CsrMatrix csr_from_coo(const std::vector<Triplet> &triplets, Index rows,
                              Index cols) {
  return csr_from_coo(std::span<const Triplet>(triplets), rows, cols);
}

/// y = A x, accumulated in stored order within each row.
inline void spmv(const CsrMatrix &a, std::span<const double> x,
                 std::span<double> y) {
  require(x.size() == a.cols() && y.size() == a.rows(),
          ErrorKind::DimensionMismatch, "spmv dimension mismatch");
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p)
      sum += vals[p] * x[cols[p]];
    y[i] = sum;
  }
}

inline Vector spmv(const CsrMatrix &a, std::span<const double> x) {
  Vector y(a.rows());
  spmv(a, x, y);
  return y;
}

/// Induced 1-norm: maximum absolute column sum.
inline double one_norm(const CsrMatrix &a) {
  std::vector<double> colsum(a.cols(), 0.0);
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index p = 0; p < a.nnz(); ++p)
    colsum[cols[p]] += std::abs(vals[p]);
  double best = 0.0;
  for (double s : colsum)
    best = std::max(best, s);
  return best;
}

// Small vector kernels shared by the solvers.

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i)
    s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (Index i = 0; i < x.size(); ++i)
    y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (double &v : x)
    v *= alpha;
}

inline double frobenius_norm(const DenseMatrix &a) {
  return norm2(a.values());
}

// Dense products. Loops are ordered for column-major access.

inline DenseMatrix multiply(const DenseMatrix &a, const DenseMatrix &b) {
  require(a.cols() == b.rows(), ErrorKind::DimensionMismatch,
          "matrix product dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (Index p = 0; p < a.cols(); ++p) {
      double bpj = b(p, j);
      if (bpj != 0.0)
        axpy(bpj, a.col(p), cj);
    }
  }
  return c;
}

// a^T b
inline DenseMatrix multiply_transposed(const DenseMatrix &a,
                                       const DenseMatrix &b) {
  require(a.rows() == b.rows(), ErrorKind::DimensionMismatch,
          "transposed product dimension mismatch");
  DenseMatrix c(a.cols(), b.cols());
  for (Index j = 0; j < b.cols(); ++j)
    for (Index i = 0; i < a.cols(); ++i)
      c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

inline Vector multiply(const DenseMatrix &a, std::span<const double> x) {
  require(a.cols() == x.size(), ErrorKind::DimensionMismatch,
          "matrix-vector dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (Index j = 0; j < a.cols(); ++j)
    axpy(x[j], a.col(j), y);
  return y;
}

// a^T x
inline Vector multiply_transposed(const DenseMatrix &a,
                                  std::span<const double> x) {
  require(a.rows() == x.size(), ErrorKind::DimensionMismatch,
          "transposed matrix-vector dimension mismatch");
  Vector y(a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    y[j] = dot(a.col(j), x);
  return y;
}

// A * B with A sparse, B dense.
inline DenseMatrix multiply(const CsrMatrix &a, const DenseMatrix &b) {
  require(a.cols() == b.rows(), ErrorKind::DimensionMismatch,
          "sparse-dense product dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j)
    spmv(a, b.col(j), c.col(j));
  return c;
}

} // namespace fairsc
