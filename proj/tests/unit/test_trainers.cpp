#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bcpr/rng.hpp"
#include "bcpr/synth.hpp"
#include "bcpr/trainers.hpp"

using namespace bcpr;

namespace {

double hinge_objective(const Dataset& d, const Hyperplane& h, double lambda) {
  double loss = 0;
  for (Index i = 0; i < d.rows(); ++i) {
    double z = h.theta;
    for (Index k = 0; k < d.cols(); ++k) z += h.w[k] * d.samples()(i, k);
    loss += std::max(0.0, 1.0 - d.labels()[i] * z);
  }
  return 0.5 * lambda * h.w.squaredNorm() + loss / static_cast<double>(d.rows());
}

Index errors_of(const Dataset& d, const Hyperplane& h) {
  Index e = 0;
  for (Index i = 0; i < d.rows(); ++i) e += predicted_class(decision_value(h, d.samples().row(i))) != d.labels()[i];
  return e;
}

Dataset noisy(std::uint64_t seed, Index n, Index p, double noise) {
  Rng rng(seed);
  RowMatrix<double> X(n, p);
  Labels y(n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < p; ++k) X(i, k) = rng.normal();
    y[i] = X(i, 0) - X(i, 1 % p) + 0.3 + noise * rng.normal() >= 0 ? 1 : -1;
  }
  return Dataset(X, y);
}

Dataset xor_data() {
  RowMatrix<double> X(4, 2);
  X << 0, 0, 0, 1, 1, 0, 1, 1;
  Labels y(4);
  y << -1, 1, 1, -1;
  return Dataset(X, y);
}

Dataset one_d(std::initializer_list<double> xs, std::initializer_list<int> ys) {
  RowMatrix<double> X(static_cast<Index>(xs.size()), 1);
  Labels y(static_cast<Index>(ys.size()));
  Index i = 0;
  for (double v : xs) X(i++, 0) = v;
  i = 0;
  for (int v : ys) y[i++] = v;
  return Dataset(X, y);
}

double* param(MlpModel& m, Index j) {
  const Index a = m.w1.size(), b = a + m.b1.size(), c = b + m.w2.size();
  if (j < a) return m.w1.data() + j;
  if (j < b) return m.b1.data() + (j - a);
  if (j < c) return m.w2.data() + (j - b);
  return &m.b2;
}

}  // namespace

TEST_CASE("svm objective matches an independent evaluation") {
  const Dataset d = noisy(1, 50, 3, 0.5);
  const Hyperplane h{Eigen::Vector3d(0.4, -1.1, 0.2), 0.3};
  CHECK(svm_objective(d, h, 0.01) == doctest::Approx(hinge_objective(d, h, 0.01)).epsilon(1e-12));
  CHECK(svm_objective(d, Hyperplane{Eigen::Vector3d::Zero(), 0.0}, 5.0) == 1.0);
}

TEST_CASE("svm separates margined data") {
  const auto gen = gen_linear({.n = 2000, .p = 5, .seed = 3, .margin_gap = 0.2});
  const Hyperplane h = svm_train(gen.dataset, SvmConfig{});
  CHECK(errors_of(gen.dataset, h) == 0);
}

// The step schedule only settles once lambda * (epochs * n) is well above 1,
// so the objective properties are checked in that regime.
TEST_CASE("svm objective never ends above the zero start") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Dataset d = noisy(seed, 1000, 4, seed % 2 ? 2.0 : 0.2);
    for (double lambda : {1e-3, 1e-2, 1.0}) {
      SvmConfig cfg{.reg_lambda = lambda, .epochs = 10, .seed = seed};
      const Hyperplane h = svm_train(d, cfg);
      CHECK(hinge_objective(d, h, lambda) <= hinge_objective(d, Hyperplane{Eigen::VectorXd::Zero(4), 0.0}, lambda));
    }
  }
}

TEST_CASE("svm averaged model is near the best iterate") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = noisy(seed + 10, 1000, 5, 0.5);
    const SvmTrace trace = svm_train_traced(d, SvmConfig{.reg_lambda = 1e-3, .epochs = 20, .seed = seed});
    const double best = *std::min_element(trace.epoch_objectives.begin(), trace.epoch_objectives.end());
    CHECK(trace.epoch_objectives.size() == 20);
    CHECK(hinge_objective(d, trace.averaged, 1e-3) <= 1.05 * best);
    const Hyperplane plain = svm_train(d, SvmConfig{.reg_lambda = 1e-3, .epochs = 20, .seed = seed});
    CHECK(plain.w == trace.averaged.w);
  }
}

TEST_CASE("svm with huge regularization crushes the weights") {
  const Dataset d = noisy(4, 500, 3, 0.3);
  const Hyperplane h = svm_train(d, SvmConfig{.reg_lambda = 1e6});
  CHECK(h.w.norm() <= 1e-2);
  CHECK(h.w.norm() <= 1e-3 + 1e-12);  // projection radius
}

TEST_CASE("svm and perceptron mirror under label flip") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Dataset d = noisy(seed + 20, 200, 3, 1.0);
    const Dataset flipped(d.samples(), -d.labels());
    const Hyperplane a = svm_train(d, SvmConfig{.seed = seed});
    const Hyperplane b = svm_train(flipped, SvmConfig{.seed = seed});
    CHECK((a.w + b.w).norm() <= 1e-9);
    CHECK(std::abs(a.theta + b.theta) <= 1e-9);

    const PerceptronConfig pc{.max_updates = 500, .pocket = false, .seed = seed};
    const auto pa = perceptron_train(d, pc);
    const auto pb = perceptron_train(flipped, pc);
    CHECK((pa.hyperplane.w + pb.hyperplane.w).norm() <= 1e-9);
    CHECK(std::abs(pa.hyperplane.theta + pb.hyperplane.theta) <= 1e-9);
    CHECK(pa.updates_used == pb.updates_used);
  }
}

TEST_CASE("trainers are deterministic and reject single-class data") {
  const Dataset d = noisy(30, 200, 3, 0.5);
  CHECK(svm_train(d, SvmConfig{.seed = 2}).w == svm_train(d, SvmConfig{.seed = 2}).w);
  CHECK(svm_train(d, SvmConfig{.seed = 2}).w != svm_train(d, SvmConfig{.seed = 3}).w);
  const MlpConfig mc{.hidden_units = 4, .epochs = 5, .seed = 1};
  CHECK(mlp_train(d, mc).w1 == mlp_train(d, mc).w1);
  const PerceptronConfig pc{.max_updates = 300, .seed = 5};
  CHECK(perceptron_train(d, pc).hyperplane.w == perceptron_train(d, pc).hyperplane.w);

  const Dataset single = one_d({1, 2, 3}, {1, 1, 1});
  for (auto run : {+[](const Dataset& s) { svm_train(s, SvmConfig{}); },
                   +[](const Dataset& s) { mlp_train(s, MlpConfig{}); },
                   +[](const Dataset& s) { perceptron_train(s, PerceptronConfig{}); }}) {
    try {
      run(single);
      FAIL("expected SingleClass");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingleClass);
    }
  }
  CHECK_THROWS_AS(svm_train(d, SvmConfig{.reg_lambda = 0}), Error);
  CHECK_THROWS_AS(svm_train(d, SvmConfig{.epochs = 0}), Error);
  CHECK_THROWS_AS(perceptron_train(d, PerceptronConfig{.max_updates = 0}), Error);
  CHECK_THROWS_AS(mlp_train(d, MlpConfig{.hidden_units = 0}), Error);
}

TEST_CASE("mlp gradient agrees with central differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = noisy(seed + 40, 5, 3, 1.0);
    MlpModel m = mlp_init(3, MlpConfig{.hidden_units = 4, .seed = seed, .init_scale = 1.0});
    m.b1 = Eigen::Vector4d(0.3, -0.2, 0.1, 0.5);
    m.b2 = -0.25;
    MlpModel g = mlp_gradient(m, d);
    const Index total = m.w1.size() + m.b1.size() + m.w2.size() + 1;
    double worst = 0;
    for (Index j = 0; j < total; ++j) {
      MlpModel plus = m, minus = m;
      *param(plus, j) += 1e-5;
      *param(minus, j) -= 1e-5;
      const double fd = (mlp_loss(plus, d) - mlp_loss(minus, d)) / 2e-5;
      const double an = *param(g, j);
      worst = std::max(worst, std::abs(an - fd) / std::max(1e-6, std::abs(an) + std::abs(fd)));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("mlp learns xor") {
  const Dataset d = xor_data();
  const MlpModel m = mlp_train(d, MlpConfig{.hidden_units = 8, .learning_rate = 0.5, .epochs = 5000, .seed = 1, .init_scale = 1.0});
  CHECK(model_predict(m, d.samples()) == d.labels());
}

TEST_CASE("mlp with zero epochs is its initialization") {
  const Dataset d = noisy(50, 20, 3, 0.5);
  const MlpConfig cfg{.hidden_units = 5, .epochs = 0, .seed = 9};
  const MlpModel trained = mlp_train(d, cfg);
  const MlpModel init = mlp_init(3, cfg);
  CHECK(trained.w1 == init.w1);
  CHECK(trained.w2 == init.w2);
  CHECK(trained.b1 == init.b1);
  CHECK(trained.b2 == init.b2);
  CHECK(init.w1.cwiseAbs().maxCoeff() < 0.1);
  CHECK(init.b1.isZero(0));
  // w1 row-major, then w2.
  Rng rng(9);
  CHECK(init.w1(0, 1) == (rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)));
}

TEST_CASE("mlp divergence is reported") {
  const Dataset d = noisy(51, 50, 3, 0.5);
  try {
    mlp_train(d, MlpConfig{.learning_rate = 1e308, .epochs = 50, .init_scale = 1.0});
    FAIL("expected DivergenceDetected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivergenceDetected);
  }
}

TEST_CASE("perceptron converges on margined data") {
  const auto gen = gen_linear({.n = 500, .p = 4, .seed = 8, .margin_gap = 0.3});
  for (bool pocket : {true, false}) {
    const auto r = perceptron_train(gen.dataset, PerceptronConfig{.pocket = pocket, .seed = 1});
    CHECK(r.training_errors == 0);
    CHECK(errors_of(gen.dataset, r.hyperplane) == 0);
    CHECK(r.updates_used > 0);
    CHECK(r.updates_used < 1'000'000);
  }
}

TEST_CASE("perceptron honours the update budget") {
  const Dataset d = noisy(60, 100, 3, 2.0);
  const auto one = perceptron_train(d, PerceptronConfig{.max_updates = 1, .pocket = false});
  CHECK(one.updates_used == 1);
  CHECK(one.hyperplane.w.norm() > 0);  // exactly one row was added
  for (long long budget : {7LL, 100LL, 1000LL}) {
    CHECK(perceptron_train(d, PerceptronConfig{.max_updates = budget}).updates_used == budget);
  }
}

TEST_CASE("perceptron pocket keeps the best iterate") {
  const Dataset toy = one_d({1, -3, -1, 3}, {1, 1, -1, -1});
  const auto first_pass = perceptron_train(toy, PerceptronConfig{.max_updates = 2, .pocket = false, .seed = 3});
  const auto r = perceptron_train(toy, PerceptronConfig{.max_updates = 1000, .seed = 3});
  CHECK(r.training_errors <= first_pass.training_errors);
  CHECK(r.training_errors == errors_of(toy, r.hyperplane));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = noisy(seed + 70, 300, 3, 1.0);
    const auto res = perceptron_train(d, PerceptronConfig{.max_updates = 5000, .seed = seed});
    REQUIRE_FALSE(res.pocket_history.empty());
    CHECK(std::is_sorted(res.pocket_history.rbegin(), res.pocket_history.rend()));
    CHECK(res.training_errors == res.pocket_history.back());
    CHECK(res.training_errors == errors_of(d, res.hyperplane));
    const auto raw = perceptron_train(d, PerceptronConfig{.max_updates = 5000, .pocket = false, .seed = seed});
    CHECK(res.training_errors <= raw.training_errors);
  }
}

TEST_CASE("model_decision scoring interface") {
  Rng rng(80);
  RowMatrix<double> X(100, 3);
  for (Index i = 0; i < 100; ++i)
    for (Index k = 0; k < 3; ++k) X(i, k) = rng.normal();
  const Hyperplane h{Eigen::Vector3d(0.5, -2, 1), 0.1};
  const Eigen::VectorXd s = model_decision(h, X);
  for (Index i = 0; i < 100; ++i) CHECK(s[i] == decision_value(h, X.row(i)));
  CHECK(decision_threshold(h) == 0.0);

  MlpModel m = mlp_init(3, MlpConfig{.hidden_units = 4});
  m.w2.setZero();
  m.b2 = 0.7;
  const Eigen::VectorXd ms = model_decision(m, X);
  CHECK(ms.allFinite());
  CHECK((ms.array() == ms[0]).all());
  CHECK(decision_threshold(m) == 0.5);
  CHECK((model_predict(m, X).array() == 1).all());
  m.b2 = -0.7;
  CHECK((model_predict(m, X).array() == -1).all());

  CHECK_THROWS_AS(model_decision(h, RowMatrix<double>::Zero(2, 4)), Error);
  CHECK_THROWS_AS(model_decision(m, RowMatrix<double>::Zero(2, 4)), Error);
}
