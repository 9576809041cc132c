#pragma once

// A codimension-one foliation inside D: D = TF (+) span(N).
//
// LocalFoliation evaluates every leafwise object at one point. Fields that
// are differentiated again later (A, sigma_r, T_r(A), Z) are carried as
// first-order jets, so their covariant derivatives along the leaf or along N
// come out exact to rounding.

#include <string>
#include <vector>

#include "foliate/subriemannian.hpp"
#include "foliate/symmetric.hpp"

namespace foliate {

struct FoliationStructure {
  int leaf_dim = 0;         ///< n
  FrameField leaf_frame;    ///< e_1..e_n, orthonormal, spanning TF
  VectorField normal;       ///< unit N in D orthogonal to TF
  std::string integrability_witness;
};

struct FoliatedManifold {
  SubRiemannianManifold sr;
  FoliationStructure foliation;

  const Manifold& manifold() const { return sr.manifold; }
  int leaf_dim() const { return foliation.leaf_dim; }
};

/// Builds the D-frame (e_1..e_n, N) from a foliation structure.
DistributionSpec distribution_from(const FoliationStructure& fol, FrameField frame_Dperp);

/// Rotates e_1, e_2 by angle(p) inside TF. Derived quantities must not change
/// (tensoriality probe). Needs n >= 2.
FoliationStructure rotate_leaf_frame(const FoliationStructure& fol, ScalarField angle);

enum class CurvatureKind { Projected, Riemannian };

/// Leaf-frame operator matrices use the convention M(j, i) = <M e_i, e_j>.
class LocalFoliation {
 public:
  LocalFoliation(const FoliatedManifold& fm, const Point& p);

  const LocalDistribution& distribution() const { return dist_; }
  const LocalGeometry& geometry() const { return dist_.geometry(); }
  int n() const { return n_; }
  int dim() const { return dist_.dim(); }

  const std::vector<Vector<Jet2>>& leaf_frame() const { return leaf_; }
  const Vector<Jet2>& normal_field() const { return N_; }
  Vec leaf(int i) const { return values(leaf_[static_cast<std::size_t>(i)]); }
  Vec normal() const { return values(N_); }

  /// Leaf-frame coefficients <v, e_i>.
  Vec leaf_components(const Vec& v) const;
  /// sum_i c_i e_i.
  Vec from_leaf(const Vec& c) const;
  /// Orthogonal projection onto TF.
  Vec project_leaf(const Vec& v) const { return from_leaf(leaf_components(v)); }

  // --- shape operator and symmetric functions ---------------------------
  Mat shape_operator() const { return values(A_); }
  const Matrix<Jet1>& shape_operator_jet() const { return A_; }
  /// max |A_ij - A_ji| before symmetrization.
  double shape_asymmetry() const { return asymmetry_; }
  const std::vector<Jet1>& sigma_jets() const { return sigma_; }
  double sigma(int r) const { return sigma_or_zero(sigma_, r).v; }
  /// Derivative of sigma_r along a vector.
  double sigma_derivative(int r, const Vec& v) const { return sigma_or_zero(sigma_, r).along(v); }
  /// T_r(A) for r >= 0 (zero for r > n).
  Mat newton(int r) const;
  const Matrix<Jet1>& newton_jet(int r) const;

  // --- normal curvature -------------------------------------------------
  Vec Z() const { return values(Z_); }
  const Vector<Jet1>& Z_jet() const { return Z_; }
  Vec Z_leaf() const { return leaf_components(Z()); }

  Vec second_fundamental_form(const Vec& X, const Vec& Y) const;

  // --- projected curvature ----------------------------------------------
  /// R^P(e_i, X)N (or R(e_i, X)N) for X = e_b (b < n) or X = N (b = n).
  const Vec& curvature_leaf_normal(int i, int b, CurvatureKind kind = CurvatureKind::Projected) const;
  /// Matrix of V -> R^P(V, X)N on TF for X in D.
  Mat curvature_operator(const Vec& X, CurvatureKind kind = CurvatureKind::Projected) const;
  /// Same, with X given by leaf-frame coefficients.
  Mat curvature_operator_leaf(const Vec& coeffs, CurvatureKind kind = CurvatureKind::Projected) const;
  double ricci_P(const Vec& X, CurvatureKind kind = CurvatureKind::Projected) const {
    return curvature_operator(X, kind).trace();
  }
  /// R^P(X, Y)V for vectors at p (X, Y arbitrary, V in D).
  Vec curvature_P(const Vec& X, const Vec& Y, const Vec& V) const;

  // --- leafwise calculus -------------------------------------------------
  /// omega(i, k) = <nabla_v e_i, e_k>.
  Mat connection_form(const Vec& v) const;
  /// (nabla^F_v M) for a leaf-operator field M known to first order.
  Mat operator_derivative(const Matrix<Jet1>& M, const Vec& v) const;
  Mat nablaF_N_A() const { return operator_derivative(A_, normal()); }
  double leafwise_divergence(const Vector<Jet1>& X) const;
  /// Leaf components of Div_F T_r(A) = sum_i (nabla^F_{e_i} T_r) e_i.
  Vec divF_newton_direct(int r) const;
  /// Leaf components from sum_j (-1)^{j-1} tr(T_{r-j} R^P_{A^{j-1} e_l}).
  Vec divF_newton_formula(int r, CurvatureKind kind = CurvatureKind::Projected) const;
  /// sum_j (-1)^{j-1} tr(T_{r-j} R_{A^{j-1} X}) for a leaf vector X.
  double divF_newton_formula_along(int r, const Vec& X_leaf,
                                   CurvatureKind kind = CurvatureKind::Projected) const;

  // --- diagnostics --------------------------------------------------------
  double integrability_residual() const;
  double frame_defect() const { return frame_defect_; }
  /// max over the D-perp frame of |nabla^P_xi N|.
  double admissibility_residual() const;
  Vec mean_curvature_perp() const { return H_perp_; }

 private:
  void compute_curvatures(CurvatureKind kind, std::vector<Vec>& out) const;

  LocalDistribution dist_;
  int n_;
  std::vector<Vector<Jet2>> leaf_;
  Vector<Jet2> N_;
  std::vector<Vector<Jet1>> leaf1_;
  Vector<Jet1> N1_;
  /// D-frame direction b (e_b or N): P nabla_{d_b} N and nabla_{d_b} N.
  std::vector<Vector<Jet1>> WP_, WR_;
  Matrix<Jet1> A_;
  double asymmetry_ = 0.0;
  std::vector<Jet1> sigma_;
  std::vector<Matrix<Jet1>> T_;
  Matrix<Jet1> zero_;
  Vector<Jet1> Z_;
  Vec H_perp_;
  double frame_defect_ = 0.0;
  mutable std::vector<Vec> curv_P_, curv_R_;
};

// Free-function entry points (construct a LocalFoliation per call).

Mat shape_operator(const FoliatedManifold& fm, const Point& p);
TangentVector curvature_vector_Z(const FoliatedManifold& fm, const Point& p);
/// DomainError unless X, Y are tangent to the leaf.
TangentVector second_fundamental_form(const FoliatedManifold& fm, const Vec& X, const Vec& Y,
                                      const Point& p);
/// Ric^P_{X,N}; DomainError unless X lies in D.
double ricciP(const FoliatedManifold& fm, const Vec& X, const Point& p);
double leafwise_divergence(const FoliatedManifold& fm, const VectorField& X, const Point& p);

enum class DivMode { Direct, Formula };
Vec divF_newton(const FoliatedManifold& fm, int r, const Point& p, DivMode mode);
Mat nablaF_N_A(const FoliatedManifold& fm, const Point& p);
/// |(nabla^F_X A)Y - (nabla^F_Y A)X + R^P(X, Y)N| for leaf vectors X, Y.
double codazzi_residual(const FoliatedManifold& fm, const Vec& X, const Vec& Y, const Point& p);
double codazzi_residual(const LocalFoliation& local, const Vec& X, const Vec& Y);

/// Classical Codazzi equation for D = TM, checked through the second
/// fundamental form and the Riemann tensor (independent of the A / R^P path):
///   max |(nabla_X II)(Y, U) - (nabla_Y II)(X, U) - <R(X, Y)U, N>| over the leaf frame.
double classical_codazzi_residual(const LocalFoliation& local);

/// Field form of the fourth trace identity, tr(T_{r-1} nabla^F_X A) - X(sigma_r),
/// maximized over X in the leaf frame. Needs 1 <= r <= n.
double trace_identity_field_residual(const LocalFoliation& local, int r);

/// max |<(nabla^F_X T_r)Y, V> - <(nabla^F_X T_r)V, Y>| over the leaf frame.
double newton_derivative_asymmetry(const LocalFoliation& local, int r);

/// Pointwise adapted-frame identity for <nabla_{e_i} Z, e_j>; max entry residual.
double adapted_frame_identity_residual(const LocalFoliation& local);

/// Div_F(T_r(A) Z) minus its closed expression; needs 0 <= r <= n - 1.
double divergence_TrZ_residual(const LocalFoliation& local, int r);

/// max |<(Id - Pi_TF) R^P(e_a, e_b) e_c>| over the leaf frame.
double p_curvature_invariance_residual(const LocalFoliation& local);

/// max |R^P(X, Y)V - c(<Y,V>X - <X,V>Y)| over the D frame.
double constant_p_curvature_residual(const LocalFoliation& local, double c);

/// Div X - (Div_F X - <X, Z> - <X, H_perp>) for X in D. With the normal
/// term, N<X, N> is added to the bracket (needed unless X is tangent to F or
/// X = N).
double divergence_split_residual(const LocalFoliation& local, const Vector<Jet2>& X,
                                 bool with_normal_term);

/// Div_F N + sigma_1.
double divF_normal_residual(const LocalFoliation& local);

/// |A - (sigma_1 / n) Id|.
double umbilicity_residual(const LocalFoliation& local);

}  // namespace foliate
