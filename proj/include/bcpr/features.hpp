#pragma once

// Random Fourier features for the Gaussian RBF kernel k(x, y) = exp(-gamma ||x - y||^2).
// z(x)_j = sqrt(2 / D) cos(omega_j . x + b_j), omega_j ~ N(0, 2 gamma I), b_j ~ U[0, 2 pi).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "bcpr/dataset.hpp"
#include "bcpr/error.hpp"
#include "bcpr/rng.hpp"

namespace bcpr {

template <typename Scalar>
struct BasicRffParams {
  Index n_components = 0;
  Scalar gamma = Scalar(0);
  RowMatrix<Scalar> frequencies;  // D x p
  Vector<Scalar> offsets;         // D, in [0, 2 pi)
  std::uint64_t seed = 0;

  Index input_dim() const noexcept { return frequencies.cols(); }
};

using RffParams = BasicRffParams<double>;

/// Draws frequencies row by row, then offsets.
template <typename Scalar = double>
BasicRffParams<Scalar> rff_fit(Index p, Index n_components, Scalar gamma, std::uint64_t seed) {
  require(p >= 1 && n_components >= 1, ErrorCode::InvalidArgument, "rff needs p >= 1 and D >= 1");
  require(gamma > Scalar(0) && std::isfinite(gamma), ErrorCode::InvalidGamma, "gamma must be positive");
  Rng rng(seed);
  BasicRffParams<Scalar> params;
  params.n_components = n_components;
  params.gamma = gamma;
  params.seed = seed;
  params.frequencies.resize(n_components, p);
  const double scale = std::sqrt(2.0 * static_cast<double>(gamma));
  for (Index j = 0; j < n_components; ++j) {
    for (Index k = 0; k < p; ++k) params.frequencies(j, k) = Scalar(scale * rng.normal());
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double below_two_pi = std::nextafter(two_pi, 0.0);
  params.offsets.resize(n_components);
  for (Index j = 0; j < n_components; ++j) {
    params.offsets[j] = Scalar(std::min(two_pi * rng.uniform(), below_two_pi));
  }
  return params;
}

template <typename Scalar, typename Derived>
RowMatrix<Scalar> rff_transform(const BasicRffParams<Scalar>& params, const Eigen::MatrixBase<Derived>& X) {
  require(X.cols() == params.input_dim(), ErrorCode::DimensionMismatch,
          "rff was fitted for " + std::to_string(params.input_dim()) + " features, got " +
              std::to_string(X.cols()));
  RowMatrix<Scalar> Z = X.template cast<Scalar>() * params.frequencies.transpose();
  Z.rowwise() += params.offsets.transpose();
  const Scalar amp = std::sqrt(Scalar(2) / Scalar(params.n_components));
  Z = amp * Z.array().cos();
  return Z;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar rbf_kernel(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y,
                                     typename DerivedA::Scalar gamma) {
  using Scalar = typename DerivedA::Scalar;
  require(x.size() == y.size(), ErrorCode::DimensionMismatch, "rbf_kernel inputs differ in length");
  require(gamma > Scalar(0), ErrorCode::InvalidGamma, "gamma must be positive");
  return std::exp(-gamma * (x.derived().reshaped() - y.derived().reshaped()).squaredNorm());
}

}  // namespace bcpr
