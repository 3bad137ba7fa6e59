#include "bcpr/synth.hpp"

#include <cmath>
#include <limits>

#include "bcpr/rng.hpp"

namespace bcpr {

namespace {

constexpr Index kMaxLiftedDim = Index{1} << 24;

Eigen::VectorXd draw_normal_vector(Rng& rng, Index len) {
  Eigen::VectorXd v(len);
  for (Index k = 0; k < len; ++k) v[k] = rng.normal();
  return v;
}

void collect(Index p, int remaining, Index pos, Monomial& cur, std::vector<Monomial>& out) {
  if (pos == p - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    collect(p, remaining - e, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

// Rows are drawn until n pass the margin test against `teacher` in the space
// produced by `lift`.
template <typename Lift>
Dataset draw_labelled(Rng& rng, Index n, Index p, const Eigen::VectorXd& teacher, double margin_gap,
                      Lift&& lift) {
  require(margin_gap >= 0.0 && std::isfinite(margin_gap), ErrorCode::InvalidArgument,
          "margin_gap must be non-negative");
  const double teacher_norm = teacher.norm();
  RowMatrix<double> X(n, p);
  Labels y(n);
  const Index budget = n * 1000;
  Index draws = 0;
  Index accepted = 0;
  while (accepted < n) {
    require(draws < budget, ErrorCode::GenerationStalled,
            "margin_gap rejected too many rows (" + std::to_string(draws) + " draws)");
    ++draws;
    const Eigen::RowVectorXd row = draw_normal_vector(rng, p).transpose();
    const double z = lift(row).dot(teacher);
    if (margin_gap > 0.0 && std::abs(z) / teacher_norm < margin_gap) continue;
    X.row(accepted) = row;
    y[accepted] = predicted_class(z);
    ++accepted;
  }
  return Dataset(std::move(X), std::move(y));
}

void check_shape(Index n, Index p) {
  require(n >= 2, ErrorCode::InvalidArgument, "n must be >= 2");
  require(p >= 1, ErrorCode::InvalidArgument, "p must be >= 1");
}

}  // namespace

Index monomial_count(Index p, int degree) {
  require(p >= 1 && degree >= 1, ErrorCode::InvalidArgument, "monomial basis needs p >= 1 and degree >= 1");
  // C(p + d, d) built incrementally; each partial product is itself a binomial.
  unsigned __int128 c = 1;
  for (int k = 1; k <= degree; ++k) {
    c = c * static_cast<unsigned __int128>(p + k) / static_cast<unsigned __int128>(k);
    require(c <= static_cast<unsigned __int128>(kMaxLiftedDim) + 1, ErrorCode::InvalidArgument,
            "polynomial lift too large");
  }
  return static_cast<Index>(c) - 1;
}

std::vector<Monomial> monomial_basis(Index p, int degree) {
  const Index count = monomial_count(p, degree);
  std::vector<Monomial> out;
  out.reserve(static_cast<std::size_t>(count));
  Monomial cur(static_cast<std::size_t>(p), 0);
  for (int total = 1; total <= degree; ++total) collect(p, total, 0, cur, out);
  return out;
}

SynthResult gen_linear(const LinearGenSpec& spec) {
  check_shape(spec.n, spec.p);
  Rng rng(spec.seed);
  Eigen::VectorXd beta = draw_normal_vector(rng, spec.p);
  Dataset d = draw_labelled(rng, spec.n, spec.p, beta, spec.margin_gap,
                            [](const Eigen::RowVectorXd& row) { return row.transpose(); });
  return {std::move(d), {std::move(beta), spec.seed}, spec.p};
}

SynthResult gen_poly(const PolyGenSpec& spec) {
  check_shape(spec.n, spec.p);
  require(spec.degree >= 2, ErrorCode::InvalidArgument, "polynomial degree must be >= 2");
  const auto basis = monomial_basis(spec.p, spec.degree);
  const auto lifted = static_cast<Index>(basis.size());
  Rng rng(spec.seed);
  Eigen::VectorXd beta = draw_normal_vector(rng, lifted);
  Dataset d = draw_labelled(rng, spec.n, spec.p, beta, spec.margin_gap, [&](const Eigen::RowVectorXd& row) {
    return Eigen::VectorXd(poly_expand(row, basis).transpose());
  });
  return {std::move(d), {std::move(beta), spec.seed}, lifted};
}

}  // namespace bcpr
