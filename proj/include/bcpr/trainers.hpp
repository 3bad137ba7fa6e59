#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <variant>
#include <vector>

#include "bcpr/dataset.hpp"

namespace bcpr {

// ---------------------------------------------------------------- linear SVM

struct SvmConfig {
  double reg_lambda = 1e-4;
  int epochs = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

/// (lambda / 2) ||w||^2 + mean hinge loss; the bias is not regularized.
double svm_objective(const Dataset& d, const Hyperplane& h, double reg_lambda);

struct SvmTrace {
  Hyperplane averaged;                  // the model svm_train returns
  std::vector<double> epoch_objectives;  // objective of the raw iterate after each epoch
};

/// Stochastic subgradient descent on the primal hinge objective with step
/// 1 / (lambda t), one seeded permutation per epoch, w projected onto the ball
/// of radius 1 / sqrt(lambda). Returns the average of the second half of the
/// iterates.
Hyperplane svm_train(const Dataset& d, const SvmConfig& cfg);

/// Same run as svm_train, additionally recording the objective along the path.
SvmTrace svm_train_traced(const Dataset& d, const SvmConfig& cfg);

// ---------------------------------------------------------------- MLP

struct MlpConfig {
  int hidden_units = 32;
  double learning_rate = 0.01;
  int epochs = 30;
  std::uint64_t seed = 0;
  double init_scale = 0.1;

  void validate() const;
};

/// One tanh hidden layer, sigmoid output giving P(y = +1).
struct MlpModel {
  Eigen::MatrixXd w1;  // hidden x p
  Eigen::VectorXd b1;  // hidden
  Eigen::VectorXd w2;  // hidden
  double b2 = 0.0;

  Index input_dim() const noexcept { return w1.cols(); }
  Index hidden_units() const noexcept { return w1.rows(); }
  bool finite() const noexcept { return w1.allFinite() && b1.allFinite() && w2.allFinite() && std::isfinite(b2); }
};

/// Weights uniform in (-init_scale, init_scale) drawn w1 row-major then w2; biases zero.
MlpModel mlp_init(Index input_dim, const MlpConfig& cfg);

/// Mean logistic loss log(1 + exp(-y z)) over the dataset, z the output logit.
double mlp_loss(const MlpModel& model, const Dataset& d);

/// Gradient of mlp_loss, laid out like the model.
MlpModel mlp_gradient(const MlpModel& model, const Dataset& d);

/// Full-batch gradient descent.
MlpModel mlp_train(const Dataset& d, const MlpConfig& cfg);

// ---------------------------------------------------------------- perceptron

struct PerceptronConfig {
  long long max_updates = 1'000'000;
  bool pocket = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PerceptronResult {
  Hyperplane hyperplane;
  long long updates_used = 0;
  Index training_errors = 0;            // errors of the returned hyperplane
  std::vector<Index> pocket_history;    // pocket error after each pocket replacement
};

/// Rosenblatt updates (w += y x, theta += y) in a seeded order reshuffled each
/// pass. The pocket is re-examined whenever the current weights survive a longer
/// run of correct predictions than any examined before, and at every pass end.
PerceptronResult perceptron_train(const Dataset& d, const PerceptronConfig& cfg);

// ---------------------------------------------------------------- scoring

using Model = std::variant<Hyperplane, MlpModel>;

/// Raw scores: w.x + theta for a hyperplane, P(y = +1) for an MLP.
Eigen::VectorXd model_decision(const Model& model, const RowMatrix<double>& X);

double decision_threshold(const Model& model) noexcept;

Labels model_predict(const Model& model, const RowMatrix<double>& X);

}  // namespace bcpr
