#pragma once

// Barycentric correction procedure.
//
// The hyperplane normal is the difference of two weighted class barycenters;
// the offset sits halfway between the most extreme projections of the two
// classes. Misclassified instances get their weighting coefficient raised,
// which drags their class barycenter towards them on the next round. The best
// hyperplane seen (fewest training errors) is kept in a pocket.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bcpr/dataset.hpp"
#include "bcpr/error.hpp"

namespace bcpr {

template <typename Scalar>
struct BasicBcpWeights {
  Vector<Scalar> alpha;  // one per positive instance, in ClassPartition order
  Vector<Scalar> mu;     // one per negative instance

  static BasicBcpWeights uniform(const ClassPartition& part) {
    return {Vector<Scalar>::Ones(part.n_positive()), Vector<Scalar>::Ones(part.n_negative())};
  }
};

using BcpWeights = BasicBcpWeights<double>;

struct IncrementPair {
  double beta = 1.0;    // added to alpha of each misclassified positive
  double lambda = 1.0;  // added to mu of each misclassified negative
};

enum class IncrementMode {
  Literal,  // min{1, max[30, r]}, which is always 1
  Clamped,  // min(high, max(low, r))
};

struct BcpConfig {
  int max_iters = 1000;
  IncrementMode increment_mode = IncrementMode::Clamped;
  double clamp_low = 1.0;
  double clamp_high = 30.0;
  Index target_errors = 0;

  void validate() const {
    require(max_iters >= 1, ErrorCode::InvalidArgument, "bcp max_iters must be >= 1");
    require(clamp_low <= clamp_high, ErrorCode::InvalidArgument, "bcp clamp_low > clamp_high");
    require(clamp_low > 0.0, ErrorCode::InvalidArgument, "bcp clamp_low must be positive");
    require(target_errors >= 0, ErrorCode::InvalidArgument, "bcp target_errors must be >= 0");
  }
};

template <typename Scalar>
struct BasicBcpResult {
  BasicHyperplane<Scalar> best_hyperplane;
  Index best_error_count = 0;
  int iterations_run = 0;
  bool converged = false;
  std::vector<Index> error_history;     // one entry per non-degenerate iteration
  std::vector<int> degenerate_iterations;  // 1-based iterations where b1 == b0
};

using BcpResult = BasicBcpResult<double>;

/// Snapshot handed to an observer after the errors of an iteration are counted
/// and before the coefficients are corrected.
template <typename Scalar>
struct BasicBcpStep {
  int iteration;
  const BasicHyperplane<Scalar>& hyperplane;
  const IndexList& misclassified;
  const BasicBcpWeights<Scalar>& weights;
};

template <typename Scalar>
using BcpObserver = std::function<void(const BasicBcpStep<Scalar>&)>;

using BcpStep = BasicBcpStep<double>;

namespace detail {

template <typename Scalar, typename Derived>
Vector<Scalar> weighted_barycenter(const Eigen::MatrixBase<Derived>& X, const IndexList& members,
                                   const Vector<Scalar>& coeff, const char* which) {
  require(static_cast<Index>(members.size()) == coeff.size(), ErrorCode::LengthMismatch,
          std::string(which) + " coefficient count does not match class size");
  Vector<Scalar> acc = Vector<Scalar>::Zero(X.cols());
  Scalar mass(0);
  // Sequential in index order so the sum is reproducible.
  for (std::size_t k = 0; k < members.size(); ++k) {
    const Scalar c = coeff[static_cast<Index>(k)];
    if (!(c > Scalar(0) && std::isfinite(c))) {
      fail(ErrorCode::InvalidArgument, std::string(which) + " coefficients must be positive and finite");
    }
    acc.noalias() += c * X.row(members[k]).transpose().template cast<Scalar>();
    mass += c;
  }
  require(mass > Scalar(0), ErrorCode::ZeroMass, std::string(which) + " coefficient sum is not positive");
  return acc / mass;
}

// theta from the projections s_i = w.x_i; gamma(x) = -w.x.
template <typename Scalar>
Scalar theta_from_projections(const Vector<Scalar>& proj, const ClassPartition& part) {
  Scalar max_pos = -std::numeric_limits<Scalar>::infinity();
  Scalar min_neg = std::numeric_limits<Scalar>::infinity();
  for (Index i : part.positive) max_pos = std::max(max_pos, -proj[i]);
  for (Index i : part.negative) min_neg = std::min(min_neg, -proj[i]);
  return (max_pos + min_neg) / Scalar(2);
}

inline IndexList misclassified_from_scores(const auto& scores, const Labels& labels) {
  IndexList out;
  for (Index i = 0; i < scores.size(); ++i) {
    if (predicted_class(scores[i]) != labels[i]) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Weighted class barycenters (b1, b0).
template <typename Scalar, typename Derived>
std::pair<Vector<Scalar>, Vector<Scalar>> compute_barycenters(const Eigen::MatrixBase<Derived>& X,
                                                              const ClassPartition& part,
                                                              const BasicBcpWeights<Scalar>& wts) {
  return {detail::weighted_barycenter<Scalar>(X, part.positive, wts.alpha, "alpha"),
          detail::weighted_barycenter<Scalar>(X, part.negative, wts.mu, "mu")};
}

/// Offset halfway between the largest positive-class gamma and the smallest
/// negative-class gamma, gamma(x) = -w.x.
template <typename DerivedW, typename Derived>
typename DerivedW::Scalar compute_theta(const Eigen::MatrixBase<DerivedW>& w, const Eigen::MatrixBase<Derived>& X,
                                        const ClassPartition& part) {
  using Scalar = typename DerivedW::Scalar;
  require(w.size() == X.cols(), ErrorCode::DimensionMismatch, "w and X column count differ");
  const Vector<Scalar> proj = X.template cast<Scalar>() * w.derived().reshaped();
  return detail::theta_from_projections(proj, part);
}

inline IncrementPair compute_increments(Index n_positive, Index n_negative, IncrementMode mode,
                                        double clamp_low = 1.0, double clamp_high = 30.0) {
  require(n_positive >= 1 && n_negative >= 1, ErrorCode::InvalidArgument, "class sizes must be >= 1");
  const double ratio_pos = static_cast<double>(n_positive) / static_cast<double>(n_negative);
  const double ratio_neg = static_cast<double>(n_negative) / static_cast<double>(n_positive);
  if (mode == IncrementMode::Literal) {
    return {std::min(1.0, std::max(30.0, ratio_pos)), std::min(1.0, std::max(30.0, ratio_neg))};
  }
  return {std::min(clamp_high, std::max(clamp_low, ratio_pos)),
          std::min(clamp_high, std::max(clamp_low, ratio_neg))};
}

/// Ascending indices whose predicted class disagrees with the label.
template <typename Scalar, typename Derived>
IndexList misclassified(const Eigen::MatrixBase<Derived>& X, const Labels& labels,
                        const BasicHyperplane<Scalar>& h) {
  require_usable(h);
  require(labels.size() == X.rows(), ErrorCode::LengthMismatch, "labels and rows differ");
  return detail::misclassified_from_scores(decision_values(h, X), labels);
}

template <typename Scalar>
BasicBcpResult<Scalar> bcp_train(const BasicDataset<Scalar>& d, const BcpConfig& cfg = {},
                                 const BcpObserver<Scalar>& observer = {}) {
  cfg.validate();
  const auto& X = d.samples();
  const Labels& y = d.labels();
  const ClassPartition part = class_partition(y);
  const IncrementPair inc = compute_increments(part.n_positive(), part.n_negative(), cfg.increment_mode,
                                               cfg.clamp_low, cfg.clamp_high);

  // Position of each row inside its class list, for coefficient updates.
  std::vector<Index> slot(static_cast<std::size_t>(d.rows()));
  for (std::size_t k = 0; k < part.positive.size(); ++k) slot[part.positive[k]] = static_cast<Index>(k);
  for (std::size_t k = 0; k < part.negative.size(); ++k) slot[part.negative[k]] = static_cast<Index>(k);

  auto weights = BasicBcpWeights<Scalar>::uniform(part);
  BasicBcpResult<Scalar> result;
  bool have_best = false;
  int consecutive_degenerate = 0;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    result.iterations_run = it;
    auto [b1, b0] = compute_barycenters(X, part, weights);
    BasicHyperplane<Scalar> h{b1 - b0, Scalar(0)};

    if (h.degenerate()) {
      result.degenerate_iterations.push_back(it);
      if (++consecutive_degenerate >= 3) {
        fail(ErrorCode::Degenerate, "class barycenters coincided on three consecutive iterations");
      }
      // No scores exist when w = 0; bump the member of each class farthest
      // from the shared barycenter (lowest index on ties).
      const auto bump_farthest = [&](const IndexList& members, Vector<Scalar>& coeff) {
        Index pick = 0;
        Scalar far = -1;
        for (std::size_t k = 0; k < members.size(); ++k) {
          const Scalar dist = (X.row(members[k]).transpose() - b1).squaredNorm();
          if (dist > far) {
            far = dist;
            pick = static_cast<Index>(k);
          }
        }
        coeff[pick] += Scalar(1);
      };
      bump_farthest(part.positive, weights.alpha);
      bump_farthest(part.negative, weights.mu);
      continue;
    }
    consecutive_degenerate = 0;

    const Vector<Scalar> proj = X * h.w;
    h.theta = detail::theta_from_projections(proj, part);
    const Vector<Scalar> scores = (proj.array() + h.theta).matrix();
    const IndexList mis = detail::misclassified_from_scores(scores, y);
    const auto errors = static_cast<Index>(mis.size());
    result.error_history.push_back(errors);
    if (!have_best || errors < result.best_error_count) {
      result.best_hyperplane = h;
      result.best_error_count = errors;
      have_best = true;
    }
    if (observer) observer(BasicBcpStep<Scalar>{it, h, mis, weights});
    if (errors <= cfg.target_errors) {
      result.converged = true;
      break;
    }
    if (it == cfg.max_iters) break;
    for (Index i : mis) {
      if (y[i] == 1) {
        weights.alpha[slot[i]] += Scalar(inc.beta);
      } else {
        weights.mu[slot[i]] += Scalar(inc.lambda);
      }
    }
  }

  if (!have_best) fail(ErrorCode::Degenerate, "no non-degenerate iteration within the budget");
  return result;
}

}  // namespace bcpr
