#pragma once

// Trapezoidal product quadrature on coordinate tori and their coordinate
// subtori, and single-node quadrature on homogeneous spaces.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "foliate/manifold.hpp"

namespace foliate {

struct GridAxis {
  int index = 0;  ///< chart coordinate
  int count = 1;
  double period = 1.0;
};

class QuadratureGrid {
 public:
  /// Full grid over every chart axis; invariant-frame manifolds get one node
  /// carrying the declared volume (counts ignored).
  static QuadratureGrid full(const Manifold& manifold, const std::vector<int>& counts);
  /// Grid over `axes` with the remaining coordinates pinned to `base`.
  static QuadratureGrid sub(const Manifold& manifold, const Point& base, const std::vector<int>& axes,
                            const std::vector<int>& counts);

  std::size_t size() const { return size_; }
  Point node(std::size_t k) const;
  const std::vector<GridAxis>& axes() const { return axes_; }
  std::vector<int> counts() const;
  bool homogeneous() const { return homogeneous_; }

  /// Lebesgue weight per node (the Riemannian density is applied separately).
  double coordinate_weight() const { return weight_; }
  /// sqrt det of the metric restricted to the grid axes (1 on homogeneous spaces).
  double density(const Manifold& manifold, const Point& p) const;

  /// Every axis count doubled.
  QuadratureGrid refined() const;

  bool operator==(const QuadratureGrid& other) const;

 private:
  std::vector<GridAxis> axes_;
  Point base_;
  std::size_t size_ = 1;
  double weight_ = 1.0;
  bool homogeneous_ = false;
};

/// Column-major table of per-node samples: column(c)[k] is value c at node k.
struct SampleTable {
  std::size_t nodes = 0;
  std::size_t width = 0;
  std::vector<double> data;
  std::vector<double> weights;  ///< coordinate weight times density

  const double* column(std::size_t c) const { return data.data() + c * nodes; }
  double* column(std::size_t c) { return data.data() + c * nodes; }
  /// Deterministic weighted sum of a column.
  double integrate(std::size_t c) const;
  /// Largest |value| of a column.
  double max_abs(std::size_t c) const;
  double total_weight() const;
};

/// Writes `width` values for a point into the output span.
using NodeSampler = std::function<void(const Point&, double* out)>;

/// Worker count: FOLIATE_THREADS if set, else the hardware concurrency.
int default_threads();

/// Evaluates a sampler at every node, in parallel, with per-node output
/// slots. Throws EvaluationError naming the first offending node on
/// non-finite output; sampler exceptions are rethrown for the lowest node.
SampleTable sample(const Manifold& manifold, const QuadratureGrid& grid, std::size_t width,
                   const NodeSampler& sampler, int threads = 0);

/// integral of f dvol over the grid.
double integrate(const Manifold& manifold, const std::function<double(const Point&)>& f,
                 const QuadratureGrid& grid, int threads = 0);

}  // namespace foliate
