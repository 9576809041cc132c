#pragma once

// The horizontal distribution D, its orthoprojector P and the induced
// connection nabla^P_X U = P nabla_X U on sections of D.

#include <functional>
#include <vector>

#include "foliate/manifold.hpp"

namespace foliate {

/// A list of vector fields evaluated at one point.
using FrameField = std::function<std::vector<Vector<Jet2>>(const Point&)>;

struct DistributionSpec {
  int rank = 0;            ///< n + 1
  FrameField frame_D;      ///< rank orthonormal fields spanning D
  FrameField frame_Dperp;  ///< m - rank orthonormal fields spanning D-perp
};

struct SubRiemannianManifold {
  Manifold manifold;
  DistributionSpec distribution;
};

/// Value of the orthoprojector onto D at one point.
struct Projector {
  Mat P;
  Mat complement() const { return Mat::Identity(P.rows(), P.cols()) - P; }
};

inline constexpr double kFrameTolerance = 1e-12;
inline constexpr double kMembershipTolerance = 1e-10;

/// Largest deviation of a frame from metric orthonormality.
double orthonormality_defect(const LocalGeometry& geo, const std::vector<Vec>& frame);

/// D-frame, D-perp frame and the projector jet at one point.
class LocalDistribution {
 public:
  /// Throws FrameError when the frames are not orthonormal, not mutually
  /// orthogonal or do not span TM.
  LocalDistribution(const SubRiemannianManifold& sr, const Point& p);

  const LocalGeometry& geometry() const { return geo_; }
  int dim() const { return geo_.dim(); }
  int rank() const { return static_cast<int>(frame_D_.size()); }

  const std::vector<Vector<Jet2>>& frame_D() const { return frame_D_; }
  const std::vector<Vector<Jet2>>& frame_Dperp() const { return frame_perp_; }

  const Matrix<Jet1>& projector_jet() const { return P_; }
  const Mat& projector() const { return P_value_; }

  Vec project(const Vec& v) const { return P_value_ * v; }
  Vector<Jet1> project(const Vector<Jet1>& v) const;

  /// P nabla_X U as a first-order jet field.
  Vector<Jet1> nabla_P(const Vector<Jet1>& X, const Vector<Jet2>& U) const;
  /// P (nabla_x W)(p).
  Vec nabla_P_at(const Vec& x, const Vector<Jet1>& W) const;

  /// R^P(X, Y)V at p (closed-form extensions of X, Y, V supplied by caller).
  Vec curvature_P(const Vector<Jet2>& X, const Vector<Jet2>& Y, const Vector<Jet2>& V) const;

  /// P sum_xi nabla_xi xi over the D-perp frame.
  Vec mean_curvature_perp() const;

 private:
  LocalGeometry geo_;
  std::vector<Vector<Jet2>> frame_D_;
  std::vector<Vector<Jet2>> frame_perp_;
  Matrix<Jet1> P_;
  Mat P_value_;
};

Projector orthoprojector(const SubRiemannianManifold& sr, const Point& p);

/// nabla^P_X U; U must lie in D at p (DomainError otherwise).
TangentVector nabla_P(const SubRiemannianManifold& sr, const TangentVector& X,
                      const VectorField& U, const Point& p);

/// R^P(X, Y)V with X, Y extended as constant-coefficient fields and V a
/// section of D.
TangentVector curvature_P(const SubRiemannianManifold& sr, const TangentVector& X,
                          const TangentVector& Y, const VectorField& V, const Point& p);

struct MeanCurvaturePerp {
  TangentVector H;
  double norm = 0.0;
  bool harmonic = false;
};

inline constexpr double kHarmonicTolerance = 1e-9;

MeanCurvaturePerp mean_curvature_perp(const SubRiemannianManifold& sr, const Point& p,
                                      double tol = kHarmonicTolerance);

/// Difference between R^P(X,Y)V evaluated with constant-coefficient extensions
/// and with extensions rescaled by smooth functions equal to one at p. Chart
/// backends only; zero means the evaluation is pointwise well defined.
double curvature_P_tensoriality_residual(const SubRiemannianManifold& sr, const Vec& X,
                                         const Vec& Y, const Vec& V, const Point& p);

}  // namespace foliate
