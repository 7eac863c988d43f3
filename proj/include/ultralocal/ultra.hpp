#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ultralocal/metric.hpp"
#include "ultralocal/vr_graph.hpp"

namespace ultralocal {

// Rooted merge tree over the points of a metric space. Every internal node
// is a ball whose radius is its height. Nodes are stored bottom-up: leaves
// first (node i is leaf i for i < leaf_count), then internal nodes in order
// of non-decreasing height, the root last.
class Dendrogram {
 public:
  struct Node {
    std::vector<std::size_t> children;  // empty for leaves
    double height = 0.0;
    PointId point = 0;                  // leaves only
    std::size_t leaf_count = 1;
    PointId min_point = 0;

    bool is_leaf() const noexcept { return children.empty(); }
  };

  Dendrogram() = default;
  // Leaves carry the given point ids. Internal nodes are appended with add_node.
  explicit Dendrogram(std::span<const PointId> leaf_points);

  // Appends an internal node over existing parentless nodes and returns its index.
  std::size_t add_node(std::vector<std::size_t> children, double height);

  std::size_t leaf_count() const noexcept { return leaf_count_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t root() const noexcept { return nodes_.size() - 1; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  PointId leaf_point(std::size_t leaf) const { return nodes_[leaf].point; }
  std::size_t max_arity() const noexcept;
  // Distinct internal-node heights, descending.
  std::vector<double> distinct_heights() const;

  // Cophenetic matrix u(i, j) = height of the lowest common ancestor of
  // leaves i and j (row-major, leaf_count^2).
  std::vector<double> cophenetic() const;

  // Checks the structural invariants: single root, heights strictly
  // decreasing toward the leaves, every leaf reached exactly once.
  void validate() const;

 private:
  std::size_t leaf_count_ = 0;
  std::vector<Node> nodes_;
  std::vector<bool> has_parent_;
};

// Single-linkage dendrogram (subdominant ultrametric). Merges at exactly
// equal heights are collapsed into one multi-way node, so the tree shape does
// not depend on the input order.
Dendrogram subdominant_ultrametric(const FiniteMetricSpace& space);

using DendrogramProvider = std::function<Dendrogram(const FiniteMetricSpace&)>;

// min over x in C, y in C' of d(x, y). Throws UsageError if C == C'.
double component_distance(const FiniteMetricSpace& space, const Partition& partition,
                          std::size_t c, std::size_t c_prime);

// Full matrix of component distances, row-major over component indices.
std::vector<double> component_distance_matrix(const FiniteMetricSpace& space,
                                              const Partition& partition);

// delta_eps: the per-component ultrametric inside components of the VR
// graph, the component distance between them.
class LocalUltrametric {
 public:
  LocalUltrametric(const FiniteMetricSpace& space, double epsilon,
                   const DendrogramProvider& provider);

  double epsilon() const noexcept { return epsilon_; }
  std::size_t size() const noexcept { return n_; }
  const Partition& components() const noexcept { return components_; }
  std::span<const Dendrogram> dendrograms() const noexcept { return dendrograms_; }
  double component_distance(std::size_t c, std::size_t c_prime) const {
    return component_dist_[c * components_.component_count() + c_prime];
  }
  std::span<const double> component_distances() const noexcept { return component_dist_; }

  // delta_eps between local indices x and y.
  double operator()(std::size_t x, std::size_t y) const;
  std::vector<double> matrix() const;

 private:
  double epsilon_;
  std::size_t n_;
  Partition components_;
  std::vector<Dendrogram> dendrograms_;
  std::vector<double> component_dist_;
  // within-component cophenetic values, per component, indexed by position in members
  std::vector<std::vector<double>> within_;
  std::vector<std::size_t> position_;
};

LocalUltrametric local_ultrametric(const FiniteMetricSpace& space, double epsilon,
                                   const DendrogramProvider& provider = subdominant_ultrametric);

struct TriangleViolations {
  std::size_t triples_checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;
};

// Counts ordered triples where delta(x, z) > delta(x, y) + delta(y, z) + tol.
TriangleViolations triangle_violations(const LocalUltrametric& local, double tol = 1e-9);

// Newick with branch lengths as height differences, leaves named by point id.
std::string to_newick(const Dendrogram& tree);

}  // namespace ultralocal
