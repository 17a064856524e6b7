#pragma once

#include "fairsc/error.hpp"
#include "fairsc/matrix.hpp"

#include <string>
#include <vector>

namespace fairsc {

/// Hard assignment of vertices to labels in [0, count). Shared by group
/// partitions and clusterings.
class Labeling {
public:
  Labeling() = default;
  Labeling(std::vector<int> labels, int count)
      : labels_(std::move(labels)), count_(count) {
    require(count_ >= 1, ErrorKind::InvalidArgument, "label count must be >= 1");
    for (Index i = 0; i < labels_.size(); ++i)
      require(labels_[i] >= 0 && labels_[i] < count_, ErrorKind::InvalidArgument,
              "label of vertex " + std::to_string(i) + " outside [0, " +
                  std::to_string(count_) + ")");
  }

  Index size() const noexcept { return labels_.size(); }
  int count() const noexcept { return count_; }
  int operator[](Index i) const { return labels_[i]; }
  const std::vector<int> &labels() const noexcept { return labels_; }

  std::vector<Index> sizes() const {
    std::vector<Index> s(static_cast<Index>(count_), 0);
    for (int l : labels_)
      ++s[static_cast<Index>(l)];
    return s;
  }

  /// 0/1 indicator matrix, one column per label.
  DenseMatrix indicator() const {
    DenseMatrix m(labels_.size(), static_cast<Index>(count_));
    for (Index i = 0; i < labels_.size(); ++i)
      m(i, static_cast<Index>(labels_[i])) = 1.0;
    return m;
  }

  friend bool operator==(const Labeling &, const Labeling &) = default;

private:
  std::vector<int> labels_;
  int count_ = 0;
};

/// Non-overlapping group membership V = V_1 u ... u V_h. Every group is
/// nonempty.
class GroupPartition : public Labeling {
public:
  GroupPartition() = default;
  GroupPartition(std::vector<int> membership, int groups)
      : Labeling(std::move(membership), groups) {
    const auto s = sizes();
    for (Index g = 0; g < s.size(); ++g)
      require(s[g] > 0, ErrorKind::EmptyGroup,
              "group " + std::to_string(g) + " has no vertices");
  }

  int groups() const noexcept { return count(); }
};

/// Cluster assignment C_1 u ... u C_k. Clusters may be empty (k-means edge
/// cases); metrics flag them.
class Clustering : public Labeling {
public:
  Clustering() = default;
  Clustering(std::vector<int> assignment, int k)
      : Labeling(std::move(assignment), k) {}

  int k() const noexcept { return count(); }

  /// H D_hat^{-1}: indicator columns scaled by 1/sqrt(vol(C_l)). Columns of
  /// zero-volume clusters stay zero.
  DenseMatrix scaled_indicator(std::span<const double> degrees) const {
    require(degrees.size() == size(), ErrorKind::DimensionMismatch,
            "degree vector length differs from clustering size");
    std::vector<double> vol(static_cast<Index>(k()), 0.0);
    for (Index i = 0; i < size(); ++i)
      vol[static_cast<Index>((*this)[i])] += degrees[i];
    DenseMatrix h(size(), static_cast<Index>(k()));
    for (Index i = 0; i < size(); ++i) {
      const auto c = static_cast<Index>((*this)[i]);
      if (vol[c] > 0.0)
        h(i, c) = 1.0 / std::sqrt(vol[c]);
    }
    return h;
  }
};

} // namespace fairsc
