#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>

#include "bcpr/dataset.hpp"
#include "bcpr/trainers.hpp"

namespace bcpr {

struct EvalReport {
  double accuracy = 0.0;
  std::optional<double> auc;  // absent when the labels hold a single class
  Index tp = 0;
  Index fp = 0;
  Index tn = 0;
  Index fn = 0;
  double wall_time_seconds = 0.0;

  Index total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const EvalReport&) const = default;
};

double accuracy(const Labels& labels, const Labels& predictions);

/// Mann-Whitney AUC: P(score of a random positive > score of a random negative),
/// ties counting one half. Uses average ranks, O(n log n).
double roc_auc(const Labels& labels, const Eigen::VectorXd& scores);

/// Confusion counts, accuracy and AUC of `model` on `d`. wall_time_seconds is left at zero.
EvalReport evaluate(const Model& model, const Dataset& d);

template <typename T>
struct Timed {
  T value;
  double seconds;
};

template <>
struct Timed<void> {
  double seconds;
};

/// Runs `op` and measures it on the steady clock.
template <typename Op>
auto time_block(Op&& op) {
  using Clock = std::chrono::steady_clock;
  using Result = std::invoke_result_t<Op>;
  const auto start = Clock::now();
  if constexpr (std::is_void_v<Result>) {
    std::forward<Op>(op)();
    return Timed<void>{std::chrono::duration<double>(Clock::now() - start).count()};
  } else {
    Result value = std::forward<Op>(op)();
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return Timed<Result>{std::move(value), seconds};
  }
}

}  // namespace bcpr
