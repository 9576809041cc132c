#include "foliate/foliation.hpp"

#include <algorithm>
#include <cmath>

#include "foliate/errors.hpp"

namespace foliate {

DistributionSpec distribution_from(const FoliationStructure& fol, FrameField frame_Dperp) {
  DistributionSpec spec;
  spec.rank = fol.leaf_dim + 1;
  spec.frame_D = [leaf = fol.leaf_frame, normal = fol.normal](const Point& p) {
    auto frame = leaf(p);
    frame.push_back(normal(p));
    return frame;
  };
  spec.frame_Dperp = std::move(frame_Dperp);
  return spec;
}

FoliationStructure rotate_leaf_frame(const FoliationStructure& fol, ScalarField angle) {
  if (fol.leaf_dim < 2) throw DomainError("leaf-frame rotation needs n >= 2");
  FoliationStructure out = fol;
  out.leaf_frame = [leaf = fol.leaf_frame, angle = std::move(angle)](const Point& p) {
    auto frame = leaf(p);
    const Jet2 phi = angle(p);
    const Jet2 c = cos(phi), s = sin(phi);
    const Vector<Jet2> e0 = frame[0], e1 = frame[1];
    for (int k = 0; k < e0.size(); ++k) {
      frame[0][k] = c * e0[k] + s * e1[k];
      frame[1][k] = c * e1[k] - s * e0[k];
    }
    return frame;
  };
  return out;
}

LocalFoliation::LocalFoliation(const FoliatedManifold& fm, const Point& p)
    : dist_(fm.sr, p), n_(fm.foliation.leaf_dim) {
  const LocalGeometry& geo = dist_.geometry();
  const int m = geo.dim();
  leaf_ = fm.foliation.leaf_frame(p);
  N_ = fm.foliation.normal(p);
  if (static_cast<int>(leaf_.size()) != n_) throw FrameError("leaf frame size differs from n");
  if (n_ < 1 || n_ + 1 > m) throw FrameError("leaf dimension must satisfy 1 <= n < m");

  std::vector<Vec> frame;
  for (const auto& e : leaf_) frame.push_back(values(e));
  frame.push_back(values(N_));
  frame_defect_ = orthonormality_defect(geo, frame);
  if (!(frame_defect_ <= kFrameTolerance))
    throw FrameError("leaf frame and N are not orthonormal (defect " +
                     std::to_string(frame_defect_) + ")");
  for (const Vec& v : frame) {
    const Vec off = v - dist_.project(v);
    if (geo.norm(off) > kMembershipTolerance) throw FrameError("leaf frame or N leaves D");
  }

  for (const auto& e : leaf_) leaf1_.push_back(truncate(e));
  N1_ = truncate(N_);

  // W_b = nabla_{d_b} N for the D-frame directions d_b = e_0..e_{n-1}, N.
  for (int b = 0; b <= n_; ++b) {
    const Vector<Jet1>& d = b < n_ ? leaf1_[static_cast<std::size_t>(b)] : N1_;
    Vector<Jet1> w = geo.nabla(d, N_);
    WP_.push_back(dist_.project(w));
    WR_.push_back(std::move(w));
  }

  // A_ji = -<nabla_{e_i} N, e_j>; P drops out since e_j lies in D.
  Matrix<Jet1> raw(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      raw(j, i) = -geo.inner(WR_[static_cast<std::size_t>(i)], leaf1_[static_cast<std::size_t>(j)]);
  A_.resize(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      asymmetry_ = std::max(asymmetry_, std::abs(raw(i, j).v - raw(j, i).v));
      A_(i, j) = 0.5 * (raw(i, j) + raw(j, i));
    }

  sigma_ = elementary_symmetric(A_);
  T_ = newton_transforms(A_, sigma_);
  zero_ = Matrix<Jet1>(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) zero_(i, j) = Jet1(0.0);

  Z_ = WP_[static_cast<std::size_t>(n_)];
  H_perp_ = dist_.mean_curvature_perp();
}

Vec LocalFoliation::leaf_components(const Vec& v) const {
  Vec c(n_);
  for (int i = 0; i < n_; ++i) c[i] = geometry().inner(v, leaf(i));
  return c;
}

Vec LocalFoliation::from_leaf(const Vec& c) const {
  Vec v = Vec::Zero(dim());
  for (int i = 0; i < n_; ++i) v += c[i] * leaf(i);
  return v;
}

Mat LocalFoliation::newton(int r) const { return values(newton_jet(r)); }

const Matrix<Jet1>& LocalFoliation::newton_jet(int r) const {
  if (r < 0) throw RangeError("Newton transformation index must be nonnegative");
  if (r > n_) return zero_;
  return T_[static_cast<std::size_t>(r)];
}

Vec LocalFoliation::second_fundamental_form(const Vec& X, const Vec& Y) const {
  const LocalGeometry& geo = geometry();
  for (const Vec* v : {&X, &Y}) {
    const Vec off = *v - project_leaf(*v);
    if (geo.norm(off) > kMembershipTolerance * (1.0 + geo.norm(*v)))
      throw DomainError("second fundamental form arguments must be tangent to the leaf");
  }
  // Extend Y with constant leaf-frame coefficients; h is tensorial.
  const Vec y = leaf_components(Y);
  Vec nabla = Vec::Zero(dim());
  for (int k = 0; k < n_; ++k) nabla += y[k] * geo.nabla_at(X, leaf1_[static_cast<std::size_t>(k)]);
  return nabla - project_leaf(nabla);
}

void LocalFoliation::compute_curvatures(CurvatureKind kind, std::vector<Vec>& out) const {
  // R(e_i, d_b)N = nabla_{e_i} W_b - nabla_{d_b} W_i - nabla_{[e_i, d_b]} N, projected
  // by P in the induced case.
  const LocalGeometry& geo = geometry();
  const bool projected = kind == CurvatureKind::Projected;
  const auto& W = projected ? WP_ : WR_;
  out.assign(static_cast<std::size_t>(n_ * (n_ + 1)), Vec());
  for (int i = 0; i < n_; ++i)
    for (int b = 0; b <= n_; ++b) {
      const Vector<Jet1>& ei = leaf1_[static_cast<std::size_t>(i)];
      const Vector<Jet1>& db = b < n_ ? leaf1_[static_cast<std::size_t>(b)] : N1_;
      Vec r = geo.nabla_at(values(ei), W[static_cast<std::size_t>(b)]) -
              geo.nabla_at(values(db), W[static_cast<std::size_t>(i)]) -
              geo.nabla_at(geo.bracket_at(ei, db), N1_);
      if (projected) r = dist_.project(r);
      out[static_cast<std::size_t>(i * (n_ + 1) + b)] = r;
    }
}

const Vec& LocalFoliation::curvature_leaf_normal(int i, int b, CurvatureKind kind) const {
  auto& cache = kind == CurvatureKind::Projected ? curv_P_ : curv_R_;
  if (cache.empty()) compute_curvatures(kind, cache);
  return cache[static_cast<std::size_t>(i * (n_ + 1) + b)];
}

Mat LocalFoliation::curvature_operator(const Vec& X, CurvatureKind kind) const {
  const LocalGeometry& geo = geometry();
  Vec coeffs(n_ + 1);
  for (int b = 0; b < n_; ++b) coeffs[b] = geo.inner(X, leaf(b));
  coeffs[n_] = geo.inner(X, normal());
  Vec inD = from_leaf(coeffs.head(n_)) + coeffs[n_] * normal();
  if (geo.norm(X - inD) > kMembershipTolerance * (1.0 + geo.norm(X)))
    throw DomainError("curvature operator argument must lie in D");
  Mat M = Mat::Zero(n_, n_);
  for (int b = 0; b <= n_; ++b) {
    if (coeffs[b] == 0.0) continue;
    for (int i = 0; i < n_; ++i) {
      const Vec col = leaf_components(curvature_leaf_normal(i, b, kind));
      M.col(i) += coeffs[b] * col;
    }
  }
  return M;
}

Mat LocalFoliation::curvature_operator_leaf(const Vec& coeffs, CurvatureKind kind) const {
  Mat M = Mat::Zero(n_, n_);
  for (int b = 0; b < n_; ++b) {
    if (coeffs[b] == 0.0) continue;
    for (int i = 0; i < n_; ++i)
      M.col(i) += coeffs[b] * leaf_components(curvature_leaf_normal(i, b, kind));
  }
  return M;
}

Vec LocalFoliation::curvature_P(const Vec& X, const Vec& Y, const Vec& V) const {
  // V as a combination of D-frame fields keeps the extension inside D.
  const int m = dim();
  Vector<Jet2> v = constant_field(Vec::Zero(m));
  const LocalGeometry& geo = geometry();
  for (int b = 0; b <= n_; ++b) {
    const Vector<Jet2>& d = b < n_ ? leaf_[static_cast<std::size_t>(b)] : N_;
    const double coeff = geo.inner(V, values(d));
    for (int k = 0; k < m; ++k) v[k] += coeff * d[k];
  }
  return dist_.curvature_P(constant_field(X), constant_field(Y), v);
}

Mat LocalFoliation::connection_form(const Vec& v) const {
  Mat w(n_, n_);
  for (int i = 0; i < n_; ++i) {
    const Vec d = geometry().nabla_at(v, leaf1_[static_cast<std::size_t>(i)]);
    for (int k = 0; k < n_; ++k) w(i, k) = geometry().inner(d, leaf(k));
  }
  return w;
}

Mat LocalFoliation::operator_derivative(const Matrix<Jet1>& M, const Vec& v) const {
  const Mat w = connection_form(v);
  const Mat Mv = values(M);
  Mat out(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      double s = M(j, i).along(v);
      for (int k = 0; k < n_; ++k) s += Mv(k, i) * w(k, j) - w(i, k) * Mv(j, k);
      out(j, i) = s;
    }
  return out;
}

double LocalFoliation::leafwise_divergence(const Vector<Jet1>& X) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += geometry().inner(geometry().nabla_at(leaf(i), X), leaf(i));
  return s;
}

Vec LocalFoliation::divF_newton_direct(int r) const {
  if (r < 0 || r > n_ - 1 + (n_ == 0))
    throw RangeError("Div_F T_r needs 0 <= r <= n - 1");
  Vec out = Vec::Zero(n_);
  const Matrix<Jet1>& T = newton_jet(r);
  for (int i = 0; i < n_; ++i) out += operator_derivative(T, leaf(i)).col(i);
  return out;
}

double LocalFoliation::divF_newton_formula_along(int r, const Vec& X_leaf,
                                                 CurvatureKind kind) const {
  const Mat A = shape_operator();
  double s = 0.0;
  Vec power = X_leaf;  // A^{j-1} X
  for (int j = 1; j <= r; ++j) {
    const Mat RX = curvature_operator_leaf(power, kind);
    const double term = (newton(r - j) * RX).trace();
    s += (j % 2 == 1) ? term : -term;
    power = A * power;
  }
  return s;
}

Vec LocalFoliation::divF_newton_formula(int r, CurvatureKind kind) const {
  if (r < 0 || r > n_ - 1) throw RangeError("Div_F T_r needs 0 <= r <= n - 1");
  Vec out(n_);
  for (int l = 0; l < n_; ++l) out[l] = divF_newton_formula_along(r, Vec::Unit(n_, l), kind);
  return out;
}

double LocalFoliation::integrability_residual() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      const Vec br = geometry().bracket_at(leaf1_[static_cast<std::size_t>(i)],
                                           leaf1_[static_cast<std::size_t>(j)]);
      worst = std::max(worst, geometry().norm(br - project_leaf(br)));
    }
  return worst;
}

double LocalFoliation::admissibility_residual() const {
  double worst = 0.0;
  for (const auto& xi : dist_.frame_Dperp())
    worst = std::max(worst, geometry().norm(dist_.nabla_P_at(values(xi), N1_)));
  return worst;
}

// ---------------------------------------------------------------------------

Mat shape_operator(const FoliatedManifold& fm, const Point& p) {
  return LocalFoliation(fm, p).shape_operator();
}

TangentVector curvature_vector_Z(const FoliatedManifold& fm, const Point& p) {
  return {p, LocalFoliation(fm, p).Z()};
}

TangentVector second_fundamental_form(const FoliatedManifold& fm, const Vec& X, const Vec& Y,
                                      const Point& p) {
  return {p, LocalFoliation(fm, p).second_fundamental_form(X, Y)};
}

double ricciP(const FoliatedManifold& fm, const Vec& X, const Point& p) {
  return LocalFoliation(fm, p).ricci_P(X);
}

double leafwise_divergence(const FoliatedManifold& fm, const VectorField& X, const Point& p) {
  const LocalFoliation local(fm, p);
  return local.leafwise_divergence(truncate(X(p)));
}

Vec divF_newton(const FoliatedManifold& fm, int r, const Point& p, DivMode mode) {
  const LocalFoliation local(fm, p);
  return mode == DivMode::Direct ? local.divF_newton_direct(r) : local.divF_newton_formula(r);
}

Mat nablaF_N_A(const FoliatedManifold& fm, const Point& p) {
  return LocalFoliation(fm, p).nablaF_N_A();
}

double codazzi_residual(const LocalFoliation& local, const Vec& X, const Vec& Y) {
  const int n = local.n();
  const Vec x = local.leaf_components(X), y = local.leaf_components(Y);
  for (const Vec* v : {&X, &Y})
    if (local.geometry().norm(*v - local.project_leaf(*v)) >
        kMembershipTolerance * (1.0 + local.geometry().norm(*v)))
      throw DomainError("Codazzi arguments must be tangent to the leaf");
  const Matrix<Jet1>& A = local.shape_operator_jet();
  Mat dA_X = Mat::Zero(n, n), dA_Y = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const Mat d = local.operator_derivative(A, local.leaf(a));
    dA_X += x[a] * d;
    dA_Y += y[a] * d;
  }
  Vec r = local.from_leaf(dA_X * y - dA_Y * x);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (x[a] == 0.0 || y[b] == 0.0) continue;
      // R^P(e_a, e_b)N
      r += x[a] * y[b] * local.curvature_leaf_normal(a, b);
    }
  return local.geometry().norm(r);
}

double codazzi_residual(const FoliatedManifold& fm, const Vec& X, const Vec& Y, const Point& p) {
  return codazzi_residual(LocalFoliation(fm, p), X, Y);
}

double classical_codazzi_residual(const LocalFoliation& local) {
  const LocalGeometry& geo = local.geometry();
  const int n = local.n();
  const auto& leaf = local.leaf_frame();
  const Vector<Jet1> N = truncate(local.normal_field());
  // II_jk = <nabla_{e_j} e_k, N> as jets.
  Matrix<Jet1> II(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      II(j, k) = geo.inner(geo.nabla(truncate(leaf[static_cast<std::size_t>(j)]),
                                     leaf[static_cast<std::size_t>(k)]),
                           N);
  auto covariant = [&](int i) {
    // (nabla_{e_i} II)(e_j, e_k) = e_i(II_jk) - II(nabla^F_{e_i} e_j, e_k) - II(e_j, nabla^F_{e_i} e_k)
    const Vec ei = local.leaf(i);
    const Mat w = local.connection_form(ei);
    const Mat v = values(II);
    Mat out(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = II(j, k).along(ei);
        for (int l = 0; l < n; ++l) s -= w(j, l) * v(l, k) + w(k, l) * v(j, l);
        out(j, k) = s;
      }
    return out;
  };
  std::vector<Mat> dII;
  for (int i = 0; i < n; ++i) dII.push_back(covariant(i));
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec R = geo.riemann(leaf[static_cast<std::size_t>(i)], leaf[static_cast<std::size_t>(j)],
                                  leaf[static_cast<std::size_t>(k)]);
        const double rhs = geo.inner(R, local.normal());
        const double lhs = dII[static_cast<std::size_t>(i)](j, k) - dII[static_cast<std::size_t>(j)](i, k);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

double trace_identity_field_residual(const LocalFoliation& local, int r) {
  const int n = local.n();
  if (r < 1 || r > n) throw RangeError("field trace identity needs 1 <= r <= n");
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    const Vec ea = local.leaf(a);
    const Mat dA = local.operator_derivative(local.shape_operator_jet(), ea);
    const double lhs = (local.newton(r - 1) * dA).trace();
    worst = std::max(worst, std::abs(lhs - local.sigma_derivative(r, ea)));
  }
  return worst;
}

double newton_derivative_asymmetry(const LocalFoliation& local, int r) {
  double worst = 0.0;
  for (int a = 0; a < local.n(); ++a) {
    const Mat d = local.operator_derivative(local.newton_jet(r), local.leaf(a));
    worst = std::max(worst, (d - d.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double adapted_frame_identity_residual(const LocalFoliation& local) {
  const int n = local.n();
  const LocalGeometry& geo = local.geometry();
  const Mat A = local.shape_operator();
  const Mat A2 = A * A;
  const Mat RN = local.curvature_operator(local.normal());
  const Mat dNA = local.nablaF_N_A();
  const Vec z = local.Z_leaf();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec dZ = geo.nabla_at(local.leaf(i), local.Z_jet());
    for (int j = 0; j < n; ++j) {
      const double lhs = geo.inner(dZ, local.leaf(j));
      const double rhs = A2(j, i) + RN(j, i) - dNA(j, i) + z[i] * z[j];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double divergence_TrZ_residual(const LocalFoliation& local, int r) {
  const int n = local.n();
  if (r < 0 || r > n - 1) throw RangeError("r must lie in [0, n - 1]");
  const LocalGeometry& geo = local.geometry();
  const int m = local.dim();
  // W = T_r(A) Z as a jet field: w_l = sum_k T_lk <Z, e_k>, W = sum_l w_l e_l.
  const Matrix<Jet1>& T = local.newton_jet(r);
  std::vector<Jet1> zeta(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    zeta[static_cast<std::size_t>(k)] =
        geo.inner(local.Z_jet(), truncate(local.leaf_frame()[static_cast<std::size_t>(k)]));
  Vector<Jet1> W(m);
  for (int c = 0; c < m; ++c) W[c] = Jet1(0.0);
  for (int l = 0; l < n; ++l) {
    Jet1 w(0.0);
    for (int k = 0; k < n; ++k) w += T(l, k) * zeta[static_cast<std::size_t>(k)];
    const Vector<Jet1> el = truncate(local.leaf_frame()[static_cast<std::size_t>(l)]);
    for (int c = 0; c < m; ++c) W[c] += w * el[c];
  }
  const double lhs = local.leafwise_divergence(W);

  const Vec z = local.Z_leaf();
  const Mat Tr = local.newton(r);
  const double rhs = local.divF_newton_formula_along(r, z) +
                     (Tr * local.curvature_operator(local.normal())).trace() + z.dot(Tr * z) -
                     (r + 2) * local.sigma(r + 2) -
                     local.sigma_derivative(r + 1, local.normal()) +
                     local.sigma(1) * local.sigma(r + 1);
  return std::abs(lhs - rhs);
}

double p_curvature_invariance_residual(const LocalFoliation& local) {
  double worst = 0.0;
  const int n = local.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Vec R = local.curvature_P(local.leaf(a), local.leaf(b), local.leaf(c));
        worst = std::max(worst, local.geometry().norm(R - local.project_leaf(R)));
      }
  return worst;
}

double constant_p_curvature_residual(const LocalFoliation& local, double c) {
  const int n = local.n();
  std::vector<Vec> D;
  for (int a = 0; a < n; ++a) D.push_back(local.leaf(a));
  D.push_back(local.normal());
  const LocalGeometry& geo = local.geometry();
  double worst = 0.0;
  for (const Vec& X : D)
    for (const Vec& Y : D)
      for (const Vec& V : D) {
        const Vec R = local.curvature_P(X, Y, V);
        const Vec model = c * (geo.inner(Y, V) * X - geo.inner(X, V) * Y);
        worst = std::max(worst, geo.norm(R - model));
      }
  return worst;
}

double divergence_split_residual(const LocalFoliation& local, const Vector<Jet2>& X,
                                 bool with_normal_term) {
  const LocalGeometry& geo = local.geometry();
  const Vector<Jet1> x = truncate(X);
  const Vec xv = values(X);
  if (geo.norm(xv - local.distribution().project(xv)) > kMembershipTolerance * (1.0 + geo.norm(xv)))
    throw DomainError("divergence split needs a field in D");
  const double full = geo.divergence(x);
  double split = local.leafwise_divergence(x) - geo.inner(xv, local.Z()) -
                 geo.inner(xv, local.mean_curvature_perp());
  if (with_normal_term) split += geo.inner(x, truncate(local.normal_field())).along(local.normal());
  return std::abs(full - split);
}

double divF_normal_residual(const LocalFoliation& local) {
  return std::abs(local.leafwise_divergence(truncate(local.normal_field())) + local.sigma(1));
}

double umbilicity_residual(const LocalFoliation& local) {
  const int n = local.n();
  const Mat A = local.shape_operator();
  const Mat model = (local.sigma(1) / n) * Mat::Identity(n, n);
  return (A - model).cwiseAbs().maxCoeff();
}

}  // namespace foliate
