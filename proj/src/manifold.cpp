#include "foliate/manifold.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <sstream>

#include "foliate/errors.hpp"

namespace foliate {

namespace {

std::string describe(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

double InvariantFrameManifold::jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int s = 0; s < dim; ++s) {
          double sum = 0.0;
          for (int l = 0; l < dim; ++l)
            sum += c(l, i, j) * c(s, l, k) + c(l, j, k) * c(s, l, i) + c(l, k, i) * c(s, l, j);
          worst = std::max(worst, std::abs(sum));
        }
  return worst;
}

Manifold::Manifold(ChartManifold chart) : dim_(chart.dim) {
  if (chart.dim < 1 || chart.dim > kMaxDim)
    throw ConstructionError("chart dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (chart.periods.size() != chart.dim)
    throw ConstructionError("chart needs one period per coordinate");
  for (int i = 0; i < chart.dim; ++i)
    if (!(chart.periods[i] > 0.0) || !std::isfinite(chart.periods[i]))
      throw ConstructionError("chart periods must be positive and finite");
  if (!chart.metric) throw ConstructionError("chart has no metric evaluator");
  impl_ = std::move(chart);
}

Manifold::Manifold(InvariantFrameManifold frame) : dim_(frame.dim) {
  const int m = frame.dim;
  if (m < 1 || m > kMaxDim)
    throw ConstructionError("frame dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (frame.structure.size() != static_cast<std::size_t>(m * m * m))
    throw ConstructionError("structure constants must have dim^3 entries");
  if (!(frame.volume > 0.0)) throw ConstructionError("invariant-frame volume must be positive");
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (frame.c(k, i, j) != -frame.c(k, j, i))
          throw ConstructionError("structure constants must be antisymmetric in the lower indices");
  if (frame.jacobi_residual() > 1e-12)
    throw ConstructionError("structure constants violate the Jacobi identity");
  impl_ = std::move(frame);
}

const Vec& Manifold::periods() const {
  if (const auto* chart = std::get_if<ChartManifold>(&impl_)) return chart->periods;
  return empty_;
}

double Manifold::declared_volume() const {
  if (const auto* frame = std::get_if<InvariantFrameManifold>(&impl_)) return frame->volume;
  return 0.0;
}

Matrix<Jet2> Manifold::metric_jet(const Point& p) const {
  const auto* chart = std::get_if<ChartManifold>(&impl_);
  if (chart == nullptr) {
    Matrix<Jet2> id(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) id(i, j) = Jet2(i == j ? 1.0 : 0.0);
    return id;
  }
  Matrix<Jet2> g = chart->metric(p);
  if (g.rows() != dim_ || g.cols() != dim_)
    throw EvaluationError("metric evaluator returned the wrong shape");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (!isfinite(g(i, j)))
        throw EvaluationError("metric coefficient g[" + std::to_string(i) + "][" +
                              std::to_string(j) + "] is not finite at " + describe(p));
      if (j < i) continue;
      if (std::abs(g(i, j).v - g(j, i).v) > 1e-12 * (1.0 + std::abs(g(i, j).v)))
        throw EvaluationError("metric coefficient g[" + std::to_string(i) + "][" +
                              std::to_string(j) + "] is not symmetric at " + describe(p));
    }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

double Manifold::structure(int k, int i, int j) const {
  if (const auto* frame = std::get_if<InvariantFrameManifold>(&impl_)) return frame->c(k, i, j);
  return 0.0;
}

Point Manifold::wrap(const Point& p) const {
  const auto* chart = std::get_if<ChartManifold>(&impl_);
  if (chart == nullptr) return p;
  Point q = p;
  for (int i = 0; i < dim_; ++i) {
    q[i] = std::fmod(q[i], chart->periods[i]);
    if (q[i] < 0) q[i] += chart->periods[i];
  }
  return q;
}

LocalGeometry::LocalGeometry(const Manifold& manifold, const Point& p)
    : manifold_(&manifold), point_(p), dim_(manifold.dim()) {
  const int m = dim_;
  if (p.size() != m) throw DomainError("point dimension does not match the manifold");
  const Matrix<Jet2> g = manifold.metric_jet(p);
  metric_jet_.resize(m, m);
  metric_.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      metric_jet_(i, j) = g(i, j).truncate();
      metric_(i, j) = g(i, j).v;
    }

  Eigen::LLT<Mat> llt(metric_);
  if (llt.info() != Eigen::Success)
    throw LinearSolveError("metric is not positive definite at " + describe(p));
  const Mat inv = llt.solve(Mat::Identity(m, m));

  // d(g^-1) = -g^-1 (dg) g^-1, one basis direction at a time.
  Matrix<Jet1> inv_jet(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) inv_jet(i, j) = Jet1(inv(i, j));
  for (int l = 0; l < m; ++l) {
    Mat dg(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dg(i, j) = g(i, j).g[l];
    const Mat dinv = -inv * dg * inv;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) inv_jet(i, j).g[l] = dinv(i, j);
  }

  // Lowered Koszul symbols L_{ij,l} = <nabla_{b_i} b_j, b_l>.
  const bool chart = manifold.is_chart();
  std::vector<Jet1> lowered(static_cast<std::size_t>(m * m * m));
  auto low = [&](int i, int j, int l) -> Jet1& {
    return lowered[static_cast<std::size_t>((i * m + j) * m + l)];
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) {
        Jet1 s = g(j, l).derivative(i) + g(i, l).derivative(j) - g(i, j).derivative(l);
        if (!chart) {
          for (int q = 0; q < m; ++q) {
            s += manifold.structure(q, i, j) * metric_jet_(q, l);
            s -= manifold.structure(q, i, l) * metric_jet_(q, j);
            s -= manifold.structure(q, j, l) * metric_jet_(q, i);
          }
        }
        low(i, j, l) = 0.5 * s;
      }

  gamma_ = Christoffel(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Jet1 s(0.0);
        for (int l = 0; l < m; ++l) s += inv_jet(k, l) * low(i, j, l);
        gamma_.jet(k, i, j) = s;
      }
}

Jet1 LocalGeometry::inner(const Vector<Jet1>& u, const Vector<Jet1>& v) const {
  Jet1 s(0.0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s += metric_jet_(i, j) * u[i] * v[j];
  return s;
}

double LocalGeometry::norm(const Vec& u) const { return std::sqrt(std::max(0.0, inner(u, u))); }

Vector<Jet1> LocalGeometry::nabla(const Vector<Jet1>& X, const Vector<Jet2>& Y) const {
  const int m = dim_;
  Vector<Jet1> r(m);
  Vector<Jet1> y = truncate(Y);
  for (int k = 0; k < m; ++k) {
    Jet1 s(0.0);
    for (int i = 0; i < m; ++i) {
      if (X[i].v == 0.0 && X[i].g == Grad{}) continue;
      Jet1 contraction = Y[k].derivative(i);
      for (int j = 0; j < m; ++j) contraction += gamma_.jet(k, i, j) * y[j];
      s += X[i] * contraction;
    }
    r[k] = s;
  }
  return r;
}

Vec LocalGeometry::nabla_at(const Vec& x, const Vector<Jet1>& W) const {
  const int m = dim_;
  Vec r = Vec::Zero(m);
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      if (x[i] == 0.0) continue;
      double contraction = W[k].g[i];
      for (int j = 0; j < m; ++j) contraction += gamma_(k, i, j) * W[j].v;
      s += x[i] * contraction;
    }
    r[k] = s;
  }
  return r;
}

Vec LocalGeometry::bracket_at(const Vector<Jet1>& X, const Vector<Jet1>& Y) const {
  const int m = dim_;
  Vec r = Vec::Zero(m);
  const Vec x = values(X), y = values(Y);
  for (int k = 0; k < m; ++k) {
    double s = Y[k].along(x) - X[k].along(y);
    if (!manifold_->is_chart())
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s += structure(k, i, j) * x[i] * y[j];
    r[k] = s;
  }
  return r;
}

double LocalGeometry::divergence(const Vector<Jet1>& X) const {
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    s += X[k].g[k];
    for (int j = 0; j < dim_; ++j) s += gamma_(k, k, j) * X[j].v;
  }
  return s;
}

Vec LocalGeometry::riemann(const Vector<Jet2>& X, const Vector<Jet2>& Y,
                           const Vector<Jet2>& V) const {
  const Vector<Jet1> x = truncate(X), y = truncate(Y);
  const Vec first = nabla_at(values(X), nabla(y, V));
  const Vec second = nabla_at(values(Y), nabla(x, V));
  const Vec br = bracket_at(x, y);
  const Vec third = nabla_at(br, truncate(V));
  return first - second - third;
}

Mat metric_at(const Manifold& manifold, const Point& p) { return values(manifold.metric_jet(p)); }

Christoffel christoffel(const Manifold& manifold, const Point& p) {
  return LocalGeometry(manifold, p).christoffel();
}

TangentVector covariant_derivative(const Manifold& manifold, const VectorField& X,
                                   const VectorField& Y, const Point& p) {
  const LocalGeometry geo(manifold, p);
  const Vector<Jet1> field = geo.nabla(truncate(X(p)), Y(p));
  return {p, values(field)};
}

TangentVector riemann(const Manifold& manifold, const TangentVector& X, const TangentVector& Y,
                      const TangentVector& V, const Point& p) {
  const LocalGeometry geo(manifold, p);
  return {p, geo.riemann(constant_field(X.components), constant_field(Y.components),
                         constant_field(V.components))};
}

}  // namespace foliate
