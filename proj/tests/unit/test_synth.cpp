#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "bcpr/bcp.hpp"
#include "bcpr/synth.hpp"

using namespace bcpr;

namespace {

// Brute force: every exponent vector in [0, degree]^p with total in 1..degree,
// ordered by total degree, then descending exponent vector.
std::vector<Monomial> enumerate_basis(Index p, int degree) {
  std::vector<Monomial> out;
  Monomial e(static_cast<std::size_t>(p), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == e.size()) {
      int total = 0;
      for (int v : e) total += v;
      if (total >= 1 && total <= degree) out.push_back(e);
      return;
    }
    for (int v = 0; v <= degree; ++v) {
      e[k] = v;
      rec(k + 1);
    }
  };
  rec(0);
  const auto total = [](const Monomial& m) { int t = 0; for (int v : m) t += v; return t; };
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    if (total(a) != total(b)) return total(a) < total(b);
    return a > b;
  });
  return out;
}

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("monomial_basis examples") {
  CHECK(monomial_basis(2, 1) == std::vector<Monomial>{{1, 0}, {0, 1}});
  CHECK(monomial_basis(2, 2) == std::vector<Monomial>{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  CHECK(monomial_count(2, 2) == 5);
  CHECK(monomial_count(10, 3) == 285);
  CHECK(monomial_basis(10, 3).size() == 285);
}

TEST_CASE("monomial_basis matches brute-force enumeration") {
  for (Index p = 1; p <= 4; ++p) {
    for (int d = 1; d <= 4; ++d) {
      const auto basis = monomial_basis(p, d);
      CHECK(basis == enumerate_basis(p, d));
      CHECK(static_cast<double>(monomial_count(p, d)) == binomial(static_cast<int>(p) + d, d) - 1);
    }
  }
}

TEST_CASE("monomial_count guards against huge lifts") {
  CHECK_THROWS_AS(monomial_count(1000, 10), Error);
  CHECK_THROWS_AS(monomial_count(0, 2), Error);
  CHECK_THROWS_AS(monomial_count(2, 0), Error);
}

TEST_CASE("poly_expand examples") {
  RowMatrix<double> x(1, 2);
  x << 2, 3;
  const RowMatrix<double> z = poly_expand(x, monomial_basis(2, 2));
  CHECK(z == (RowMatrix<double>(1, 5) << 2, 3, 4, 6, 9).finished());
  CHECK(poly_expand(RowMatrix<double>::Zero(3, 2), monomial_basis(2, 3)).isZero(0));

  RowMatrix<double> X(3, 3);
  X << 1, -2, 0.5, 3, 0, -1, 0.25, 7, 2;
  CHECK(poly_expand(X, monomial_basis(3, 1)) == X);
  CHECK_THROWS_AS(poly_expand(X, monomial_basis(2, 2)), Error);
}

TEST_CASE("gen_linear labels follow the teacher and repeat per seed") {
  const auto a = gen_linear({.n = 500, .p = 4, .seed = 9});
  const auto b = gen_linear({.n = 500, .p = 4, .seed = 9});
  const auto c = gen_linear({.n = 500, .p = 4, .seed = 10});
  CHECK(a.dataset.samples() == b.dataset.samples());
  CHECK(a.dataset.labels() == b.dataset.labels());
  CHECK(a.teacher.beta == b.teacher.beta);
  CHECK(a.dataset.samples() != c.dataset.samples());
  CHECK(a.lifted_dim == 4);
  CHECK(a.teacher.seed == 9);
  const Eigen::VectorXd z = a.dataset.samples() * a.teacher.beta;
  for (Index i = 0; i < 500; ++i) CHECK(a.dataset.labels()[i] == (z[i] >= 0 ? 1 : -1));
}

TEST_CASE("gen_linear class balance and feature moments") {
  const Index n = 100000;
  const auto r = gen_linear({.n = n, .p = 10, .seed = 1});
  const double pos = (r.dataset.labels().array() == 1).cast<double>().mean();
  CHECK(pos >= 0.47);
  CHECK(pos <= 0.53);
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto& X = r.dataset.samples();
  for (Index k = 0; k < X.cols(); ++k) {
    const double mean = X.col(k).mean();
    const double var = (X.col(k).array() - mean).square().mean();
    CHECK(std::abs(mean) <= 5 / root_n);
    CHECK(std::abs(var - 1) <= 10 / root_n);
  }
}

TEST_CASE("gen_linear margin gap") {
  const auto r = gen_linear({.n = 2000, .p = 3, .seed = 4, .margin_gap = 0.2});
  const Eigen::VectorXd margin = (r.dataset.samples() * r.teacher.beta).cwiseAbs() / r.teacher.beta.norm();
  CHECK(margin.minCoeff() >= 0.2);
  try {
    gen_linear({.n = 10, .p = 2, .seed = 4, .margin_gap = 50.0});
    FAIL("expected GenerationStalled");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GenerationStalled);
  }
  CHECK_THROWS_AS(gen_linear({.n = 1, .p = 2}), Error);
  CHECK_THROWS_AS(gen_linear({.n = 10, .p = 0}), Error);
  CHECK_THROWS_AS(gen_linear({.n = 10, .p = 2, .margin_gap = -1}), Error);
}

TEST_CASE("gen_poly labels follow the lifted teacher") {
  const auto r = gen_poly({.n = 1000, .p = 3, .seed = 2, .degree = 3});
  CHECK(r.dataset.cols() == 3);
  CHECK(r.lifted_dim == 19);
  CHECK(r.teacher.beta.size() == 19);
  const Eigen::VectorXd z = poly_expand(r.dataset.samples(), monomial_basis(3, 3)) * r.teacher.beta;
  for (Index i = 0; i < 1000; ++i) CHECK(r.dataset.labels()[i] == (z[i] >= 0 ? 1 : -1));

  const auto again = gen_poly({.n = 1000, .p = 3, .seed = 2, .degree = 3});
  CHECK(again.dataset.samples() == r.dataset.samples());
  CHECK(again.teacher.beta == r.teacher.beta);
  CHECK_THROWS_AS(gen_poly({.n = 10, .p = 2, .degree = 1}), Error);
}

TEST_CASE("gen_poly data is not linearly separable in the original features") {
  const auto r = gen_poly({.n = 5000, .p = 2, .seed = 0, .degree = 3});
  BcpConfig cfg;
  cfg.max_iters = 300;
  CHECK(bcp_train(r.dataset, cfg).best_error_count > 0);
}

TEST_CASE("gen_poly data is separable in the lift") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto r = gen_poly({.n = 800, .p = 2, .seed = seed, .degree = 3, .margin_gap = 0.05});
    const Dataset lifted = r.dataset.with_samples(poly_expand(r.dataset.samples(), monomial_basis(2, 3)));
    BcpConfig cfg;
    cfg.max_iters = 20000;
    const auto res = bcp_train(lifted, cfg);
    CHECK(res.best_error_count == 0);
  }
}
