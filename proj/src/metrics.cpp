#include "bcpr/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "bcpr/error.hpp"

namespace bcpr {

double accuracy(const Labels& labels, const Labels& predictions) {
  require(labels.size() == predictions.size(), ErrorCode::LengthMismatch, "labels and predictions differ in length");
  require(labels.size() >= 1, ErrorCode::LengthMismatch, "accuracy of an empty vector");
  Index hits = 0;
  for (Index i = 0; i < labels.size(); ++i) hits += labels[i] == predictions[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double roc_auc(const Labels& labels, const Eigen::VectorXd& scores) {
  require(labels.size() == scores.size(), ErrorCode::LengthMismatch, "labels and scores differ in length");
  validate_labels(labels);
  require(scores.allFinite(), ErrorCode::InvalidArgument, "AUC scores must be finite");
  const Index n = labels.size();
  IndexList order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] < scores[b]; });

  // Sum of 1-based average ranks of the positives. Ranks are doubled so tied
  // groups stay integral: 2 * avg rank = first + last for ranks first..last.
  long long doubled_rank_sum = 0;
  long long n_pos = 0;
  for (Index start = 0; start < n;) {
    Index stop = start;
    while (stop + 1 < n && scores[order[stop + 1]] == scores[order[start]]) ++stop;
    const long long doubled_avg = (start + 1) + (stop + 1);
    for (Index k = start; k <= stop; ++k) {
      if (labels[order[k]] == 1) {
        doubled_rank_sum += doubled_avg;
        ++n_pos;
      }
    }
    start = stop + 1;
  }
  const long long n_neg = n - n_pos;
  require(n_pos > 0 && n_neg > 0, ErrorCode::SingleClass, "AUC needs both classes");
  // U = R_pos - n_pos (n_pos + 1) / 2, all doubled.
  const long long doubled_u = doubled_rank_sum - n_pos * (n_pos + 1);
  return static_cast<double>(doubled_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalReport evaluate(const Model& model, const Dataset& d) {
  const Eigen::VectorXd scores = model_decision(model, d.samples());
  const double cut = decision_threshold(model);
  const Labels& y = d.labels();
  EvalReport r;
  Labels pred(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    pred[i] = scores[i] >= cut ? 1 : -1;
    if (y[i] == 1) {
      (pred[i] == 1 ? r.tp : r.fn) += 1;
    } else {
      (pred[i] == 1 ? r.fp : r.tn) += 1;
    }
  }
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(y.size());
  const bool both = (r.tp + r.fn) > 0 && (r.tn + r.fp) > 0;
  if (both) r.auc = roc_auc(y, scores);
  return r;
}

}  // namespace bcpr
