#pragma once

// Training-set reduction: keep the instances nearest to a separating hyperplane.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "bcpr/dataset.hpp"
#include "bcpr/error.hpp"

namespace bcpr {

struct ReductionPolicy {
  double keep_fraction = 0.2;
  Index min_per_class = 10;
  std::optional<double> band_width;  // when set, replaces keep_fraction

  void validate() const {
    if (band_width) {
      require(*band_width > 0.0 && std::isfinite(*band_width), ErrorCode::InvalidArgument,
              "band_width must be positive");
    } else {
      require(keep_fraction > 0.0 && keep_fraction <= 1.0, ErrorCode::InvalidArgument,
              "keep_fraction must lie in (0, 1]");
    }
    require(min_per_class >= 0, ErrorCode::InvalidArgument, "min_per_class must be >= 0");
  }
};

struct SubsetSelection {
  IndexList indices;               // ascending
  Index n_positive = 0;
  Index n_negative = 0;
  std::vector<double> distances;   // aligned with indices

  Index size() const noexcept { return static_cast<Index>(indices.size()); }
};

/// |w.x_i + theta| / ||w|| for every row.
template <typename Scalar, typename Derived>
Vector<Scalar> hyperplane_distance(const BasicHyperplane<Scalar>& h, const Eigen::MatrixBase<Derived>& X) {
  require_usable(h);
  const Scalar norm = h.w.norm();
  return decision_values(h, X).array().abs() / norm;
}

/// Number of rows kept by fraction mode: ceil(f * n), guarded against f * n
/// landing a rounding step above an integer.
inline Index fraction_count(double keep_fraction, Index n) {
  const double raw = keep_fraction * static_cast<double>(n);
  const double rounded = std::round(raw);
  const double target = std::abs(raw - rounded) <= 1e-9 * std::max(1.0, raw) ? rounded : std::ceil(raw);
  return std::clamp<Index>(static_cast<Index>(target), 0, n);
}

template <typename Scalar>
SubsetSelection extract_subset(const BasicDataset<Scalar>& d, const BasicHyperplane<Scalar>& h,
                               const ReductionPolicy& policy) {
  policy.validate();
  const Vector<Scalar> dist = hyperplane_distance(h, d.samples());
  const Index n = d.rows();
  const Labels& y = d.labels();

  // Every row sorted by (distance, index).
  IndexList order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto closer = [&](Index a, Index b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };

  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  auto unsorted_from = order.begin();
  if (policy.band_width) {
    for (Index i = 0; i < n; ++i) chosen[i] = dist[i] <= Scalar(*policy.band_width);
  } else {
    const Index k = fraction_count(policy.keep_fraction, n);
    require(k >= 2, ErrorCode::InvalidArgument, "keep_fraction selects fewer than two rows");
    // The comparator is a strict total order, so the first k entries are exactly
    // the k nearest rows.
    if (k < n) std::nth_element(order.begin(), order.begin() + k, order.end(), closer);
    for (Index r = 0; r < k; ++r) chosen[order[r]] = 1;
    unsorted_from = order.begin() + k;
  }

  // Per-class top-up with the nearest unselected members.
  if (policy.min_per_class > 0) {
    Index have_pos = 0;
    Index have_neg = 0;
    for (Index i = 0; i < n; ++i) {
      if (chosen[i]) (y[i] == 1 ? have_pos : have_neg) += 1;
    }
    if (have_pos < policy.min_per_class || have_neg < policy.min_per_class) {
      std::sort(unsorted_from, order.end(), closer);
      for (auto it = unsorted_from; it != order.end(); ++it) {
        if (have_pos >= policy.min_per_class && have_neg >= policy.min_per_class) break;
        const Index i = *it;
        if (chosen[i]) continue;
        Index& have = y[i] == 1 ? have_pos : have_neg;
        if (have < policy.min_per_class) {
          chosen[i] = 1;
          ++have;
        }
      }
    }
  }

  SubsetSelection sel;
  for (Index i = 0; i < n; ++i) {
    if (!chosen[i]) continue;
    sel.indices.push_back(i);
    sel.distances.push_back(static_cast<double>(dist[i]));
    (y[i] == 1 ? sel.n_positive : sel.n_negative) += 1;
  }
  require(!sel.indices.empty(), ErrorCode::EmptySelection, "no instance lies inside the band");
  return sel;
}

}  // namespace bcpr
