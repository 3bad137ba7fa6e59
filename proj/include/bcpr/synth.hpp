#pragma once

// Seeded synthetic classification data.
//
// Draw order for a given seed: the teacher vector first, then candidate rows
// one at a time (p standard normals each). Rows failing the margin gap are
// discarded and redrawn.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "bcpr/dataset.hpp"
#include "bcpr/error.hpp"

namespace bcpr {

struct LinearGenSpec {
  Index n = 1000;
  Index p = 2;
  std::uint64_t seed = 0;
  double margin_gap = 0.0;
};

struct PolyGenSpec {
  Index n = 1000;
  Index p = 2;
  std::uint64_t seed = 0;
  int degree = 3;
  double margin_gap = 0.0;
};

struct TeacherVector {
  Eigen::VectorXd beta;
  std::uint64_t seed = 0;
};

struct SynthResult {
  Dataset dataset;
  TeacherVector teacher;
  Index lifted_dim = 0;
};

using Monomial = std::vector<int>;  // one exponent per input feature

/// C(p + degree, degree) - 1, or an InvalidArgument error when it does not fit
/// the lift size limit.
Index monomial_count(Index p, int degree);

/// All monomials of total degree 1..degree. Grouped by total degree, and
/// within a group ordered by descending exponent vector, e.g. for p = 2,
/// degree = 2: x1, x2, x1^2, x1 x2, x2^2.
std::vector<Monomial> monomial_basis(Index p, int degree);

template <typename Derived>
RowMatrix<typename Derived::Scalar> poly_expand(const Eigen::MatrixBase<Derived>& X,
                                                const std::vector<Monomial>& basis) {
  using Scalar = typename Derived::Scalar;
  const Index p = X.cols();
  for (const auto& m : basis) {
    require(static_cast<Index>(m.size()) == p, ErrorCode::DimensionMismatch,
            "monomial basis was built for a different feature count");
  }
  RowMatrix<Scalar> out(X.rows(), static_cast<Index>(basis.size()));
  for (Index i = 0; i < X.rows(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      Scalar v(1);
      for (Index k = 0; k < p; ++k) {
        for (int e = 0; e < basis[j][k]; ++e) v *= X(i, k);
      }
      out(i, static_cast<Index>(j)) = v;
    }
  }
  return out;
}

/// Standard normal features, labels sign(beta . x) with 0 -> +1.
SynthResult gen_linear(const LinearGenSpec& spec);

/// Standard normal features labelled by a random hyperplane in the polynomial
/// lift. The returned dataset holds the original p features; the teacher holds
/// the lifted weights.
SynthResult gen_poly(const PolyGenSpec& spec);

}  // namespace bcpr
