#include "bcpr/trainers.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include "bcpr/error.hpp"
#include "bcpr/rng.hpp"

namespace bcpr {

namespace {

void require_both_classes(const Dataset& d) { (void)class_partition(d.labels()); }

IndexList identity_order(Index n) {
  IndexList order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  return order;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(m)) without overflow.
double softplus(double m) { return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m)); }

}  // namespace

// ---------------------------------------------------------------- linear SVM

void SvmConfig::validate() const {
  require(reg_lambda > 0.0 && std::isfinite(reg_lambda), ErrorCode::InvalidArgument, "svm reg_lambda must be > 0");
  require(epochs >= 1, ErrorCode::InvalidArgument, "svm epochs must be >= 1");
}

double svm_objective(const Dataset& d, const Hyperplane& h, double reg_lambda) {
  const Eigen::VectorXd scores = decision_values(h, d.samples());
  double hinge = 0.0;
  for (Index i = 0; i < d.rows(); ++i) hinge += std::max(0.0, 1.0 - d.labels()[i] * scores[i]);
  return 0.5 * reg_lambda * h.w.squaredNorm() + hinge / static_cast<double>(d.rows());
}

namespace {

SvmTrace run_svm(const Dataset& d, const SvmConfig& cfg, bool trace) {
  cfg.validate();
  require_both_classes(d);
  const auto& X = d.samples();
  const Labels& y = d.labels();
  const Index n = d.rows();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d.cols());
  double theta = 0.0;
  Eigen::VectorXd avg_w = Eigen::VectorXd::Zero(d.cols());
  double avg_theta = 0.0;

  SvmTrace out;
  Rng rng(cfg.seed);
  IndexList order = identity_order(n);
  const long long total = static_cast<long long>(cfg.epochs) * n;
  const long long average_from = total / 2;  // average the second half of the path only
  const double radius = 1.0 / std::sqrt(cfg.reg_lambda);
  long long t = 0;
  long long averaged = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<Index>(order));
    for (Index i : order) {
      ++t;
      const double td = static_cast<double>(t);
      const double eta = 1.0 / (cfg.reg_lambda * td);
      const double yi = y[i];
      const double margin = yi * (X.row(i).dot(w) + theta);
      w *= 1.0 - 1.0 / td;
      if (margin < 1.0) {
        w.noalias() += (eta * yi) * X.row(i).transpose();
        theta += eta * yi;
      }
      // The optimum lies inside this ball.
      const double norm = w.norm();
      if (norm > radius) w *= radius / norm;
      if (t > average_from) {
        ++averaged;
        const double k = static_cast<double>(averaged);
        avg_w += (w - avg_w) / k;
        avg_theta += (theta - avg_theta) / k;
      }
    }
    if (trace) out.epoch_objectives.push_back(svm_objective(d, Hyperplane{w, theta}, cfg.reg_lambda));
  }
  out.averaged = Hyperplane{std::move(avg_w), avg_theta};
  return out;
}

}  // namespace

Hyperplane svm_train(const Dataset& d, const SvmConfig& cfg) { return run_svm(d, cfg, false).averaged; }

SvmTrace svm_train_traced(const Dataset& d, const SvmConfig& cfg) { return run_svm(d, cfg, true); }

// ---------------------------------------------------------------- MLP

void MlpConfig::validate() const {
  require(hidden_units >= 1, ErrorCode::InvalidArgument, "mlp hidden_units must be >= 1");
  require(learning_rate > 0.0, ErrorCode::InvalidArgument, "mlp learning_rate must be > 0");
  require(epochs >= 0, ErrorCode::InvalidArgument, "mlp epochs must be >= 0");
  require(init_scale > 0.0, ErrorCode::InvalidArgument, "mlp init_scale must be > 0");
}

MlpModel mlp_init(Index input_dim, const MlpConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  MlpModel m;
  m.w1.resize(cfg.hidden_units, input_dim);
  for (Index r = 0; r < m.w1.rows(); ++r) {
    for (Index c = 0; c < m.w1.cols(); ++c) m.w1(r, c) = rng.uniform(-cfg.init_scale, cfg.init_scale);
  }
  m.b1 = Eigen::VectorXd::Zero(cfg.hidden_units);
  m.w2.resize(cfg.hidden_units);
  for (Index r = 0; r < m.w2.size(); ++r) m.w2[r] = rng.uniform(-cfg.init_scale, cfg.init_scale);
  m.b2 = 0.0;
  return m;
}

namespace {

struct Forward {
  Eigen::MatrixXd hidden;  // n x h, tanh activations
  Eigen::VectorXd logit;   // n
};

Forward forward(const MlpModel& m, const RowMatrix<double>& X) {
  require(X.cols() == m.input_dim(), ErrorCode::DimensionMismatch,
          "mlp expects " + std::to_string(m.input_dim()) + " features, got " + std::to_string(X.cols()));
  Forward f;
  f.hidden = X * m.w1.transpose();
  f.hidden.rowwise() += m.b1.transpose();
  f.hidden = f.hidden.array().tanh();
  f.logit = f.hidden * m.w2;
  f.logit.array() += m.b2;
  return f;
}

double loss_from_logits(const Eigen::VectorXd& logit, const Labels& y) {
  double total = 0.0;
  for (Index i = 0; i < logit.size(); ++i) total += softplus(-y[i] * logit[i]);
  return total / static_cast<double>(logit.size());
}

}  // namespace

double mlp_loss(const MlpModel& model, const Dataset& d) {
  return loss_from_logits(forward(model, d.samples()).logit, d.labels());
}

MlpModel mlp_gradient(const MlpModel& model, const Dataset& d) {
  const Forward f = forward(model, d.samples());
  const Labels& y = d.labels();
  const auto n = static_cast<double>(d.rows());
  // d loss_i / d z_i = -y_i sigmoid(-y_i z_i)
  Eigen::VectorXd dz(d.rows());
  for (Index i = 0; i < d.rows(); ++i) dz[i] = -y[i] * sigmoid(-y[i] * f.logit[i]) / n;

  MlpModel g;
  g.w2 = f.hidden.transpose() * dz;
  g.b2 = dz.sum();
  Eigen::MatrixXd dpre = (dz * model.w2.transpose()).array() * (1.0 - f.hidden.array().square());
  g.w1 = dpre.transpose() * d.samples();
  g.b1 = dpre.colwise().sum().transpose();
  return g;
}

MlpModel mlp_train(const Dataset& d, const MlpConfig& cfg) {
  cfg.validate();
  require_both_classes(d);
  MlpModel m = mlp_init(d.cols(), cfg);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const MlpModel g = mlp_gradient(m, d);
    m.w1 -= cfg.learning_rate * g.w1;
    m.b1 -= cfg.learning_rate * g.b1;
    m.w2 -= cfg.learning_rate * g.w2;
    m.b2 -= cfg.learning_rate * g.b2;
    if (!m.finite()) fail(ErrorCode::DivergenceDetected, "mlp weights became non-finite at epoch " + std::to_string(epoch + 1));
  }
  const double loss = mlp_loss(m, d);
  require(std::isfinite(loss), ErrorCode::DivergenceDetected, "mlp loss is not finite");
  return m;
}

// ---------------------------------------------------------------- perceptron

void PerceptronConfig::validate() const {
  require(max_updates >= 1, ErrorCode::InvalidArgument, "perceptron max_updates must be >= 1");
}

namespace {

Index count_errors(const Dataset& d, const Eigen::VectorXd& w, double theta) {
  const Eigen::VectorXd scores = (d.samples() * w).array() + theta;
  Index errors = 0;
  for (Index i = 0; i < d.rows(); ++i) errors += predicted_class(scores[i]) != d.labels()[i];
  return errors;
}

}  // namespace

PerceptronResult perceptron_train(const Dataset& d, const PerceptronConfig& cfg) {
  cfg.validate();
  require_both_classes(d);
  const auto& X = d.samples();
  const Labels& y = d.labels();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d.cols());
  double theta = 0.0;
  PerceptronResult out;

  std::optional<Index> pocket_errors;
  Index pocket_run = 0;
  Index run = 0;
  bool examined = false;  // current weights already compared against the pocket

  // Returns true once the examined weights classify everything correctly.
  const auto examine = [&]() {
    if (out.updates_used == 0 || examined) return pocket_errors == Index{0};
    examined = true;
    pocket_run = std::max(pocket_run, run);
    const Index errors = count_errors(d, w, theta);
    if (!pocket_errors || errors < *pocket_errors) {
      pocket_errors = errors;
      out.hyperplane = Hyperplane{w, theta};
      out.pocket_history.push_back(errors);
    }
    return errors == 0;
  };

  Rng rng(cfg.seed);
  IndexList order = identity_order(d.rows());
  bool done = false;
  while (!done) {
    rng.shuffle(std::span<Index>(order));
    bool mistake = false;
    for (Index i : order) {
      // Zero margin counts as a mistake, so flipping every label mirrors the run.
      const double margin = y[i] * (X.row(i).dot(w) + theta);
      if (margin > 0.0) {
        ++run;
        if (cfg.pocket && run > pocket_run && examine()) {
          done = true;
          break;
        }
        continue;
      }
      mistake = true;
      w.noalias() += static_cast<double>(y[i]) * X.row(i).transpose();
      theta += y[i];
      ++out.updates_used;
      run = 0;
      examined = false;
      if (out.updates_used >= cfg.max_updates) {
        done = true;
        break;
      }
    }
    if (!mistake) done = true;
    if (cfg.pocket && examine()) done = true;
  }

  if (!cfg.pocket || out.updates_used == 0) {
    out.hyperplane = Hyperplane{w, theta};
    out.training_errors = count_errors(d, w, theta);
  } else {
    out.training_errors = *pocket_errors;
  }
  return out;
}

// ---------------------------------------------------------------- scoring

Eigen::VectorXd model_decision(const Model& model, const RowMatrix<double>& X) {
  if (const auto* h = std::get_if<Hyperplane>(&model)) return decision_values(*h, X);
  const auto& mlp = std::get<MlpModel>(model);
  Eigen::VectorXd logit = forward(mlp, X).logit;
  for (Index i = 0; i < logit.size(); ++i) logit[i] = sigmoid(logit[i]);
  return logit;
}

double decision_threshold(const Model& model) noexcept {
  return std::holds_alternative<Hyperplane>(model) ? 0.0 : 0.5;
}

Labels model_predict(const Model& model, const RowMatrix<double>& X) {
  const Eigen::VectorXd scores = model_decision(model, X);
  const double cut = decision_threshold(model);
  Labels out(scores.size());
  for (Index i = 0; i < scores.size(); ++i) out[i] = scores[i] >= cut ? 1 : -1;
  return out;
}

}  // namespace bcpr
