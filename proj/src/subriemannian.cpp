#include "foliate/subriemannian.hpp"

#include <cmath>
#include <numbers>

#include "foliate/errors.hpp"

namespace foliate {

double orthonormality_defect(const LocalGeometry& geo, const std::vector<Vec>& frame) {
  double worst = 0.0;
  for (std::size_t a = 0; a < frame.size(); ++a)
    for (std::size_t b = a; b < frame.size(); ++b) {
      const double target = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(geo.inner(frame[a], frame[b]) - target));
    }
  return worst;
}

LocalDistribution::LocalDistribution(const SubRiemannianManifold& sr, const Point& p)
    : geo_(sr.manifold, p) {
  const int m = geo_.dim();
  frame_D_ = sr.distribution.frame_D(p);
  frame_perp_ = sr.distribution.frame_Dperp ? sr.distribution.frame_Dperp(p)
                                             : std::vector<Vector<Jet2>>{};
  if (static_cast<int>(frame_D_.size()) != sr.distribution.rank)
    throw FrameError("D-frame size does not match the declared rank");
  if (static_cast<int>(frame_D_.size() + frame_perp_.size()) != m)
    throw FrameError("D and D-perp frames do not span the tangent space");

  std::vector<Vec> all;
  for (const auto& f : frame_D_) all.push_back(values(f));
  for (const auto& f : frame_perp_) all.push_back(values(f));
  for (const auto& v : all)
    if (v.size() != m) throw FrameError("frame vector has the wrong dimension");
  const double defect = orthonormality_defect(geo_, all);
  if (!(defect <= kFrameTolerance))
    throw FrameError("D / D-perp frame is not orthonormal (defect " + std::to_string(defect) + ")");

  // P^k_l = sum_a v_a^k <v_a, b_l>
  P_.resize(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) P_(k, l) = Jet1(0.0);
  const Matrix<Jet1>& G = geo_.metric_jet();
  for (const auto& field : frame_D_) {
    const Vector<Jet1> v = truncate(field);
    Vector<Jet1> lowered(m);
    for (int l = 0; l < m; ++l) {
      Jet1 s(0.0);
      for (int q = 0; q < m; ++q) s += G(l, q) * v[q];
      lowered[l] = s;
    }
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) P_(k, l) += v[k] * lowered[l];
  }
  P_value_ = values(P_);
}

Vector<Jet1> LocalDistribution::project(const Vector<Jet1>& v) const {
  const int m = dim();
  Vector<Jet1> r(m);
  for (int k = 0; k < m; ++k) {
    Jet1 s(0.0);
    for (int l = 0; l < m; ++l) s += P_(k, l) * v[l];
    r[k] = s;
  }
  return r;
}

Vector<Jet1> LocalDistribution::nabla_P(const Vector<Jet1>& X, const Vector<Jet2>& U) const {
  return project(geo_.nabla(X, U));
}

Vec LocalDistribution::nabla_P_at(const Vec& x, const Vector<Jet1>& W) const {
  return P_value_ * geo_.nabla_at(x, W);
}

Vec LocalDistribution::curvature_P(const Vector<Jet2>& X, const Vector<Jet2>& Y,
                                   const Vector<Jet2>& V) const {
  const Vector<Jet1> x = truncate(X), y = truncate(Y);
  const Vec first = nabla_P_at(values(X), nabla_P(y, V));
  const Vec second = nabla_P_at(values(Y), nabla_P(x, V));
  const Vec third = nabla_P_at(geo_.bracket_at(x, y), truncate(V));
  return first - second - third;
}

Vec LocalDistribution::mean_curvature_perp() const {
  Vec H = Vec::Zero(dim());
  for (const auto& xi : frame_perp_) H += geo_.nabla_at(values(xi), truncate(xi));
  return P_value_ * H;
}

Projector orthoprojector(const SubRiemannianManifold& sr, const Point& p) {
  return {LocalDistribution(sr, p).projector()};
}

namespace {

void require_in_D(const LocalDistribution& local, const Vec& u, const char* what) {
  const Vec off = u - local.project(u);
  const double scale = 1.0 + local.geometry().norm(u);
  if (local.geometry().norm(off) > kMembershipTolerance * scale)
    throw DomainError(std::string(what) + " does not lie in D");
}

}  // namespace

TangentVector nabla_P(const SubRiemannianManifold& sr, const TangentVector& X,
                      const VectorField& U, const Point& p) {
  const LocalDistribution local(sr, p);
  const Vector<Jet2> u = U(p);
  require_in_D(local, values(u), "U");
  return {p, local.nabla_P_at(X.components, truncate(u))};
}

TangentVector curvature_P(const SubRiemannianManifold& sr, const TangentVector& X,
                          const TangentVector& Y, const VectorField& V, const Point& p) {
  const LocalDistribution local(sr, p);
  const Vector<Jet2> v = V(p);
  require_in_D(local, values(v), "V");
  return {p, local.curvature_P(constant_field(X.components), constant_field(Y.components), v)};
}

MeanCurvaturePerp mean_curvature_perp(const SubRiemannianManifold& sr, const Point& p,
                                      double tol) {
  const LocalDistribution local(sr, p);
  MeanCurvaturePerp out;
  out.H = {p, local.mean_curvature_perp()};
  out.norm = local.geometry().norm(out.H.components);
  out.harmonic = out.norm <= tol;
  return out;
}

double curvature_P_tensoriality_residual(const SubRiemannianManifold& sr, const Vec& X,
                                         const Vec& Y, const Vec& V, const Point& p) {
  if (!sr.manifold.is_chart())
    throw DomainError("rescaled extensions need chart coordinates");
  const LocalDistribution local(sr, p);
  const int m = local.dim();
  const Vec& periods = sr.manifold.periods();

  // Smooth periodic functions equal to one at p.
  auto bump = [&](double amplitude, int shift) {
    Jet2 f(1.0);
    for (int i = 0; i < m; ++i) {
      const double k = 2.0 * std::numbers::pi / periods[i];
      const Jet2 t = k * (Jet2::variable(p[i], i) - p[i]);
      f += amplitude * (1.0 + 0.25 * ((i + shift) % 3)) * sin(t);
    }
    return f;
  };

  // V as a combination of D-frame fields, so the extension stays in D.
  Vector<Jet2> v_plain = constant_field(Vec::Zero(m));
  for (const auto& d : local.frame_D()) {
    const double coeff = local.geometry().inner(values(d), V);
    for (int k = 0; k < m; ++k) v_plain[k] += coeff * d[k];
  }

  const Vec plain = local.curvature_P(constant_field(X), constant_field(Y), v_plain);

  Vector<Jet2> xs = constant_field(X), ys = constant_field(Y), vs = v_plain;
  const Jet2 f1 = bump(0.3, 0), f2 = bump(-0.2, 1), f3 = bump(0.25, 2);
  for (int k = 0; k < m; ++k) {
    xs[k] = f1 * xs[k];
    ys[k] = f2 * ys[k];
    vs[k] = f3 * vs[k];
  }
  const Vec scaled = local.curvature_P(xs, ys, vs);
  return local.geometry().norm(plain - scaled);
}

}  // namespace foliate
