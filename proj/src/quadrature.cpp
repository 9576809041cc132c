#include "foliate/quadrature.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "foliate/errors.hpp"
#include "foliate/simd/kernels.hpp"

namespace foliate {

QuadratureGrid QuadratureGrid::full(const Manifold& manifold, const std::vector<int>& counts) {
  QuadratureGrid g;
  const int m = manifold.dim();
  g.base_ = Point::Zero(m);
  if (!manifold.is_chart()) {
    g.homogeneous_ = true;
    g.weight_ = manifold.declared_volume();
    return g;
  }
  std::vector<int> axes(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) axes[static_cast<std::size_t>(i)] = i;
  return sub(manifold, g.base_, axes, counts);
}

QuadratureGrid QuadratureGrid::sub(const Manifold& manifold, const Point& base,
                                   const std::vector<int>& axes, const std::vector<int>& counts) {
  if (!manifold.is_chart()) throw DomainError("sub-grids need a chart backend");
  if (axes.size() != counts.size()) throw DomainError("one node count per grid axis is required");
  QuadratureGrid g;
  g.base_ = base;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const int axis = axes[i];
    if (axis < 0 || axis >= manifold.dim()) throw DomainError("grid axis out of range");
    if (counts[i] < 1) throw DomainError("node counts must be positive");
    const double period = manifold.periods()[axis];
    g.axes_.push_back({axis, counts[i], period});
    g.size_ *= static_cast<std::size_t>(counts[i]);
    g.weight_ *= period / counts[i];
  }
  return g;
}

Point QuadratureGrid::node(std::size_t k) const {
  Point p = base_;
  for (auto it = axes_.rbegin(); it != axes_.rend(); ++it) {
    const auto c = static_cast<std::size_t>(it->count);
    p[it->index] = it->period * static_cast<double>(k % c) / it->count;
    k /= c;
  }
  return p;
}

std::vector<int> QuadratureGrid::counts() const {
  std::vector<int> c;
  for (const auto& a : axes_) c.push_back(a.count);
  return c;
}

double QuadratureGrid::density(const Manifold& manifold, const Point& p) const {
  if (homogeneous_) return 1.0;
  const Matrix<Jet2> g = manifold.metric_jet(p);
  const int k = static_cast<int>(axes_.size());
  Mat sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      sub(i, j) = g(axes_[static_cast<std::size_t>(i)].index, axes_[static_cast<std::size_t>(j)].index).v;
  const double det = sub.determinant();
  if (!(det > 0.0)) throw LinearSolveError("metric is not positive definite on the grid axes");
  return std::sqrt(det);
}

QuadratureGrid QuadratureGrid::refined() const {
  QuadratureGrid g = *this;
  if (homogeneous_) return g;
  g.size_ = 1;
  g.weight_ = 1.0;
  for (auto& a : g.axes_) {
    a.count *= 2;
    g.size_ *= static_cast<std::size_t>(a.count);
    g.weight_ *= a.period / a.count;
  }
  return g;
}

bool QuadratureGrid::operator==(const QuadratureGrid& other) const {
  if (homogeneous_ != other.homogeneous_ || axes_.size() != other.axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].index != other.axes_[i].index || axes_[i].count != other.axes_[i].count)
      return false;
  return base_ == other.base_;
}

double SampleTable::integrate(std::size_t c) const {
  return simd::weighted_sum(column(c), weights.data(), nodes);
}

double SampleTable::max_abs(std::size_t c) const { return simd::max_abs(column(c), nodes); }

double SampleTable::total_weight() const {
  const std::vector<double> ones(nodes, 1.0);
  return simd::weighted_sum(ones.data(), weights.data(), nodes);
}

int default_threads() {
  if (const char* env = std::getenv("FOLIATE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

std::string describe(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

SampleTable sample(const Manifold& manifold, const QuadratureGrid& grid, std::size_t width,
                   const NodeSampler& sampler, int threads) {
  SampleTable t;
  t.nodes = grid.size();
  t.width = width;
  t.data.assign(t.nodes * width, 0.0);
  t.weights.assign(t.nodes, 0.0);
  if (threads <= 0) threads = default_threads();
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), t.nodes));

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::size_t> error_node(static_cast<std::size_t>(threads), t.nodes);
  auto work = [&](int worker) {
    std::vector<double> row(width);
    // Strided assignment; every node writes only its own slots.
    for (std::size_t k = static_cast<std::size_t>(worker); k < t.nodes;
         k += static_cast<std::size_t>(threads)) {
      try {
        const Point p = grid.node(k);
        std::fill(row.begin(), row.end(), 0.0);
        sampler(p, row.data());
        const double w = grid.coordinate_weight() * grid.density(manifold, p);
        for (std::size_t c = 0; c < width; ++c) {
          if (!std::isfinite(row[c]))
            throw EvaluationError("non-finite sample (column " + std::to_string(c) + ") at point " +
                                  describe(p));
          t.data[c * t.nodes + k] = row[c];
        }
        t.weights[k] = w;
      } catch (...) {
        errors[static_cast<std::size_t>(worker)] = std::current_exception();
        error_node[static_cast<std::size_t>(worker)] = k;
        return;
      }
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::size_t first = t.nodes;
  std::exception_ptr err;
  for (std::size_t w = 0; w < errors.size(); ++w)
    if (errors[w] && error_node[w] < first) {
      first = error_node[w];
      err = errors[w];
    }
  if (err) std::rethrow_exception(err);
  return t;
}

double integrate(const Manifold& manifold, const std::function<double(const Point&)>& f,
                 const QuadratureGrid& grid, int threads) {
  const SampleTable t =
      sample(manifold, grid, 1, [&f](const Point& p, double* out) { out[0] = f(p); }, threads);
  return t.integrate(0);
}

}  // namespace foliate
