#include "bcpr/dataset.hpp"

#include <cmath>
#include <numeric>

#include "bcpr/rng.hpp"

namespace bcpr {

ClassPartition class_partition(const Labels& labels) {
  require(labels.size() > 0, ErrorCode::InvalidArgument, "empty label vector");
  validate_labels(labels);
  ClassPartition part;
  for (Index i = 0; i < labels.size(); ++i) {
    (labels[i] == 1 ? part.positive : part.negative).push_back(i);
  }
  require(!part.positive.empty(), ErrorCode::SingleClass, "no positive instances");
  require(!part.negative.empty(), ErrorCode::SingleClass, "no negative instances");
  return part;
}

namespace {

bool has_both_classes(const Labels& labels, const IndexList& idx) {
  bool pos = false;
  bool neg = false;
  for (Index i : idx) {
    (labels[i] == 1 ? pos : neg) = true;
  }
  return pos && neg;
}

}  // namespace

Split split_dataset(const Dataset& d, double test_fraction, std::uint64_t seed) {
  require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::InvalidArgument,
          "test_fraction must lie in (0, 1)");
  const Index n = d.rows();
  require(n >= 2, ErrorCode::DegenerateSplit, "need at least two rows to split");

  IndexList order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(std::span<Index>(order));

  const auto n_test = static_cast<Index>(std::llround(test_fraction * static_cast<double>(n)));
  require(n_test >= 1 && n_test <= n - 1, ErrorCode::DegenerateSplit,
          "test_fraction leaves one side empty");

  Split split;
  split.seed = seed;
  split.test.assign(order.begin(), order.begin() + n_test);
  split.train.assign(order.begin() + n_test, order.end());
  require(has_both_classes(d.labels(), split.train), ErrorCode::DegenerateSplit,
          "training side holds a single class");
  require(has_both_classes(d.labels(), split.test), ErrorCode::DegenerateSplit,
          "test side holds a single class");
  return split;
}

}  // namespace bcpr
