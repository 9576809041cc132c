#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace foliate {

/// Largest manifold dimension the jet and frame machinery supports.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Chart coordinates on a product of circles. Invariant-frame backends ignore
/// the coordinates (every point is equivalent).
using Point = Vec;

/// A tangent vector: components in the backend basis (coordinate fields for
/// charts, the declared orthonormal frame for invariant-frame manifolds).
struct TangentVector {
  Point base;
  Vec components;
};

}  // namespace foliate
