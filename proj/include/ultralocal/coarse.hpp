#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ultralocal/metric.hpp"
#include "ultralocal/vr_graph.hpp"

namespace ultralocal {

// Coarse epsilon-delta graph: vertices are the components of the VR graph at
// epsilon, joined when their component distance is <= delta.
struct CoarseGraph {
  double epsilon = 0.0;
  double delta = 0.0;
  Partition points;                 // components of the VR graph (coarse vertices)
  std::vector<double> weights;      // component distance matrix, row-major
  std::vector<WeightedEdge> edges;  // a < b, lexicographic
  Partition coarse_components;      // components of this graph over coarse vertices

  std::size_t vertex_count() const noexcept { return points.component_count(); }
  double weight(std::size_t a, std::size_t b) const { return weights[a * vertex_count() + b]; }
  // Number of edges inside the given coarse component.
  std::size_t edge_count(std::size_t coarse_component) const;
  // b1 of one coarse component.
  std::size_t genus(std::size_t coarse_component) const;
};

CoarseGraph build_coarse_graph(const FiniteMetricSpace& space, double epsilon, double delta);

// Same, reusing an already computed VR partition and component distances.
CoarseGraph build_coarse_graph(const Partition& components, std::vector<double> weights,
                               double epsilon, double delta);

// Local epsilon-delta genus at the point with local index x.
std::size_t local_genus(const CoarseGraph& graph, std::size_t x);

// (k-1)(k-2)/2, the genus of the complete graph on k vertices.
std::size_t genus_upper_bound(std::size_t k);

struct GenusBoundReport {
  std::vector<std::size_t> genus;  // per point
  std::vector<std::size_t> bound;  // per point
  std::vector<std::size_t> slack;  // bound - genus
  bool equality_everywhere = true;
};

// Throws InvariantError if the bound 0 <= g <= (k-1)(k-2)/2 fails anywhere.
GenusBoundReport genus_bound_check(const CoarseGraph& graph);

// Smallest delta making the coarse graph connected; epsilon itself when the
// VR graph is already connected.
double min_connecting_delta(const FiniteMetricSpace& space, double epsilon);
double min_connecting_delta(const Partition& components, const std::vector<double>& weights,
                            double epsilon);

// Genus equality at every point for every epsilon in {0} and the distinct
// distances, and every delta among the distinct component distances >= epsilon.
bool genus_bound_equality_everywhere(const FiniteMetricSpace& space);

std::string to_dot(const CoarseGraph& graph);

}  // namespace ultralocal
