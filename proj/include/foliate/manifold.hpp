#pragma once

// Closed Riemannian manifolds and their Levi-Civita geometry.
//
// Two backends share one connection formula: a chart on a product of circles
// (coordinate basis, vanishing brackets) and an invariant orthonormal frame on
// a Lie group quotient (constant metric, constant structure constants
// [e_i, e_j] = c^k_ij e_k). Both reduce to the Koszul formula in a general
// basis, evaluated with second-order jets of the metric.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "foliate/jet.hpp"
#include "foliate/types.hpp"

namespace foliate {

/// Returns the m x m metric coefficients at a point as jets.
using MetricEvaluator = std::function<Matrix<Jet2>(const Point&)>;

/// A vector field known to second order in the backend basis.
using VectorField = std::function<Vector<Jet2>(const Point&)>;

/// A scalar field known to second order.
using ScalarField = std::function<Jet2(const Point&)>;

struct ChartManifold {
  int dim = 0;
  Vec periods;
  MetricEvaluator metric;
};

struct InvariantFrameManifold {
  int dim = 0;
  /// c^k_ij stored at [(k * dim + i) * dim + j].
  std::vector<double> structure;
  double volume = 0.0;

  double c(int k, int i, int j) const { return structure[(k * dim + i) * dim + j]; }

  /// Largest violation of sum_cyc [[e_i, e_j], e_k] = 0.
  double jacobi_residual() const;
};

class Manifold {
 public:
  /// Empty placeholder (dim() == 0); assign a real backend before use.
  Manifold() = default;
  /// Validates the description; throws ConstructionError.
  explicit Manifold(ChartManifold chart);
  explicit Manifold(InvariantFrameManifold frame);

  int dim() const { return dim_; }
  bool is_chart() const { return std::holds_alternative<ChartManifold>(impl_); }

  /// Chart periods; empty for invariant-frame backends.
  const Vec& periods() const;
  /// Riemannian volume declared by an invariant-frame backend.
  double declared_volume() const;

  /// Metric coefficients at p, symmetrized and checked for finiteness.
  Matrix<Jet2> metric_jet(const Point& p) const;

  double structure(int k, int i, int j) const;

  /// Reduces chart coordinates into [0, period).
  Point wrap(const Point& p) const;

 private:
  std::variant<ChartManifold, InvariantFrameManifold> impl_;
  int dim_ = 0;
  Vec empty_;
};

/// Connection coefficients at a point, Gamma^k_ij = <nabla_{b_i} b_j, b^k>.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int dim) : dim_(dim), jets_(static_cast<std::size_t>(dim * dim * dim)) {}

  int dim() const { return dim_; }
  double operator()(int k, int i, int j) const { return jets_[index(k, i, j)].v; }
  const Jet1& jet(int k, int i, int j) const { return jets_[index(k, i, j)]; }
  Jet1& jet(int k, int i, int j) { return jets_[index(k, i, j)]; }

 private:
  std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
  }
  int dim_ = 0;
  std::vector<Jet1> jets_;
};

/// Everything about the ambient Levi-Civita geometry needed at one point.
/// Immutable after construction.
class LocalGeometry {
 public:
  LocalGeometry(const Manifold& manifold, const Point& p);

  int dim() const { return dim_; }
  const Point& point() const { return point_; }
  const Manifold& manifold() const { return *manifold_; }

  const Mat& metric() const { return metric_; }
  const Matrix<Jet1>& metric_jet() const { return metric_jet_; }
  const Christoffel& christoffel() const { return gamma_; }
  double structure(int k, int i, int j) const { return manifold_->structure(k, i, j); }

  double inner(const Vec& u, const Vec& v) const { return u.dot(metric_ * v); }
  Jet1 inner(const Vector<Jet1>& u, const Vector<Jet1>& v) const;
  double norm(const Vec& u) const;

  /// nabla_X Y as a first-order jet field.
  Vector<Jet1> nabla(const Vector<Jet1>& X, const Vector<Jet2>& Y) const;
  /// (nabla_x W)(p) for a vector x at p.
  Vec nabla_at(const Vec& x, const Vector<Jet1>& W) const;
  /// [X, Y](p).
  Vec bracket_at(const Vector<Jet1>& X, const Vector<Jet1>& Y) const;
  /// Trace of nabla X at p.
  double divergence(const Vector<Jet1>& X) const;

  /// R(X, Y)V at p for fields known to second order.
  Vec riemann(const Vector<Jet2>& X, const Vector<Jet2>& Y, const Vector<Jet2>& V) const;

 private:
  const Manifold* manifold_;
  Point point_;
  int dim_;
  Mat metric_;
  Matrix<Jet1> metric_jet_;
  Christoffel gamma_;
};

Mat metric_at(const Manifold& manifold, const Point& p);

Christoffel christoffel(const Manifold& manifold, const Point& p);

TangentVector covariant_derivative(const Manifold& manifold, const VectorField& X,
                                   const VectorField& Y, const Point& p);

/// R(X, Y)V with the vectors extended as constant-coefficient fields.
TangentVector riemann(const Manifold& manifold, const TangentVector& X, const TangentVector& Y,
                      const TangentVector& V, const Point& p);

}  // namespace foliate
