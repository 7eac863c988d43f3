#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ultralocal/metric.hpp"

namespace ultralocal {

// Partition of local vertex indices 0..n-1 into connected components.
// Components are numbered in order of their smallest member; members are
// sorted ascending.
struct Partition {
  std::vector<std::size_t> component_of;
  std::vector<std::vector<std::size_t>> members;

  std::size_t component_count() const noexcept { return members.size(); }
  std::size_t non_singleton_count() const noexcept;
  bool operator==(const Partition&) const = default;
};

// Builds the canonical partition from any union-find style labelling.
Partition make_partition(std::span<const std::size_t> representative);

// Does every block of `fine` lie inside one block of `coarse`?
bool refines(const Partition& fine, const Partition& coarse);

using Edge = std::pair<std::size_t, std::size_t>;

// Vietoris-Rips graph: an edge joins i != j whenever d(i, j) <= epsilon.
struct VRGraph {
  double epsilon = 0.0;
  std::size_t n = 0;
  std::vector<Edge> edges;  // i < j, lexicographic
  Partition components;

  std::size_t betti1() const;
};

VRGraph build_vr_graph(const FiniteMetricSpace& space, double epsilon);

// First Betti number E - V + C of a graph.
std::size_t betti1(std::size_t vertex_count, std::size_t edge_count, std::size_t component_count);

struct WeightedEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

// Minimum spanning tree of the complete graph on n vertices, O(n^2) Prim.
std::vector<WeightedEdge> minimum_spanning_tree(std::size_t n,
                                                const std::function<double(std::size_t, std::size_t)>& weight);

// Smallest epsilon for which the Vietoris-Rips graph is connected.
double connectivity_threshold(const FiniteMetricSpace& space);

// Sorted distinct off-diagonal distances; the VR graph only changes there.
std::vector<double> distinct_distances(const FiniteMetricSpace& space);

struct CliqueCheck {
  double epsilon = 0.0;
  bool all_components_are_cliques = true;
  // Members (original point ids) of the lowest-numbered non-clique component.
  std::optional<std::vector<PointId>> first_violation;
};

std::vector<CliqueCheck> clique_criterion(const FiniteMetricSpace& space,
                                          std::span<const double> epsilons);
// All components cliques at every distinct distance, i.e. the space is ultrametric.
bool is_ultrametric_by_cliques(const FiniteMetricSpace& space);

std::string to_dot(const VRGraph& graph, const FiniteMetricSpace& space);

}  // namespace ultralocal
