#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcpr/error.hpp"

namespace bcpr {

using Index = Eigen::Index;
using IndexList = std::vector<Index>;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Labels = Eigen::VectorXi;

// Class assigned to a decision value. Exactly zero goes to +1.
template <typename Scalar>
constexpr int predicted_class(Scalar score) noexcept {
  return score >= Scalar(0) ? 1 : -1;
}

inline void validate_labels(const Labels& labels) {
  for (Index i = 0; i < labels.size(); ++i) {
    require(labels[i] == 1 || labels[i] == -1, ErrorCode::InvalidArgument,
            "label at index " + std::to_string(i) + " is " + std::to_string(labels[i]) +
                ", expected -1 or +1");
  }
}

/// Dense labelled sample matrix: n rows of p finite features, labels in {-1, +1}.
template <typename Scalar>
class BasicDataset {
 public:
  using Matrix = RowMatrix<Scalar>;

  BasicDataset(Matrix samples, Labels labels, std::vector<std::string> feature_names = {})
      : samples_(std::move(samples)), labels_(std::move(labels)), names_(std::move(feature_names)) {
    require(samples_.rows() >= 1 && samples_.cols() >= 1, ErrorCode::InvalidArgument,
            "dataset needs at least one row and one column");
    require(labels_.size() == samples_.rows(), ErrorCode::LengthMismatch,
            "labels length " + std::to_string(labels_.size()) + " != rows " +
                std::to_string(samples_.rows()));
    require(names_.empty() || static_cast<Index>(names_.size()) == samples_.cols(),
            ErrorCode::LengthMismatch, "feature_names length does not match column count");
    require(samples_.allFinite(), ErrorCode::InvalidArgument, "samples contain NaN or Inf");
    validate_labels(labels_);
  }

  Index rows() const noexcept { return samples_.rows(); }
  Index cols() const noexcept { return samples_.cols(); }
  const Matrix& samples() const noexcept { return samples_; }
  const Labels& labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }

  // Rows in the order given by `indices`.
  BasicDataset subset(std::span<const Index> indices) const {
    Matrix rows(static_cast<Index>(indices.size()), cols());
    Labels lab(static_cast<Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const Index i = indices[k];
      require(i >= 0 && i < this->rows(), ErrorCode::InvalidArgument, "subset index out of range");
      rows.row(static_cast<Index>(k)) = samples_.row(i);
      lab[static_cast<Index>(k)] = labels_[i];
    }
    return BasicDataset(std::move(rows), std::move(lab), names_);
  }

  BasicDataset with_samples(Matrix samples, std::vector<std::string> names = {}) const {
    return BasicDataset(std::move(samples), labels_, std::move(names));
  }

 private:
  Matrix samples_;
  Labels labels_;
  std::vector<std::string> names_;
};

using Dataset = BasicDataset<double>;

struct ClassPartition {
  IndexList positive;  // I1, ascending
  IndexList negative;  // I0, ascending

  Index n_positive() const noexcept { return static_cast<Index>(positive.size()); }
  Index n_negative() const noexcept { return static_cast<Index>(negative.size()); }
};

ClassPartition class_partition(const Labels& labels);

/// Affine decision surface w.x + theta.
template <typename Scalar>
struct BasicHyperplane {
  Vector<Scalar> w;
  Scalar theta = Scalar(0);

  Index dim() const noexcept { return w.size(); }
  bool degenerate() const noexcept { return w.size() == 0 || w.squaredNorm() == Scalar(0); }
  bool finite() const noexcept { return w.allFinite() && std::isfinite(theta); }
};

using Hyperplane = BasicHyperplane<double>;

template <typename Scalar>
void require_usable(const BasicHyperplane<Scalar>& h, ErrorCode code = ErrorCode::DegenerateHyperplane) {
  require(h.finite(), code, "hyperplane has non-finite entries");
  require(!h.degenerate(), code, "hyperplane normal vector is zero");
}

template <typename Scalar, typename Derived>
Scalar decision_value(const BasicHyperplane<Scalar>& h, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != h.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "point has " + std::to_string(x.size()) + " features, hyperplane expects " + std::to_string(h.dim()));
  }
  return h.w.dot(x.derived().reshaped().template cast<Scalar>()) + h.theta;
}

/// Scores for every row of X.
template <typename Scalar, typename Derived>
Vector<Scalar> decision_values(const BasicHyperplane<Scalar>& h, const Eigen::MatrixBase<Derived>& X) {
  require(X.cols() == h.dim(), ErrorCode::DimensionMismatch,
          "data has " + std::to_string(X.cols()) + " features, hyperplane expects " +
              std::to_string(h.dim()));
  Vector<Scalar> scores = X * h.w;
  scores.array() += h.theta;
  return scores;
}

struct Split {
  IndexList train;
  IndexList test;
  std::uint64_t seed = 0;
};

/// Seeded shuffle, then the first round(test_fraction * n) shuffled positions become the
/// test side. Both sides must contain both classes.
Split split_dataset(const Dataset& d, double test_fraction, std::uint64_t seed);

}  // namespace bcpr
