#include "ultralocal/coarse.hpp"

#include <algorithm>
#include <sstream>

#include "ultralocal/error.hpp"
#include "ultralocal/ultra.hpp"
#include "ultralocal/union_find.hpp"

namespace ultralocal {

std::size_t CoarseGraph::edge_count(std::size_t coarse_component) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const auto& e) {
    return coarse_components.component_of[e.a] == coarse_component;
  }));
}

std::size_t CoarseGraph::genus(std::size_t coarse_component) const {
  return betti1(coarse_components.members[coarse_component].size(), edge_count(coarse_component), 1);
}

CoarseGraph build_coarse_graph(const Partition& components, std::vector<double> weights,
                               double epsilon, double delta) {
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be >= 0");
  if (!(delta >= epsilon)) throw UsageError("delta must be >= epsilon");
  const auto k = components.component_count();
  if (weights.size() != k * k) throw UsageError("component distance matrix has the wrong size");
  CoarseGraph g;
  g.epsilon = epsilon;
  g.delta = delta;
  g.points = components;
  g.weights = std::move(weights);
  UnionFind uf(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      const double w = g.weights[a * k + b];
      if (!(w > epsilon))
        throw InvariantError("cross-component distance does not exceed epsilon");
      if (w <= delta) {
        g.edges.push_back({a, b, w});
        uf.unite(a, b);
      }
    }
  std::vector<std::size_t> rep(k);
  for (std::size_t v = 0; v < k; ++v) rep[v] = uf.find(v);
  g.coarse_components = make_partition(rep);
  return g;
}

CoarseGraph build_coarse_graph(const FiniteMetricSpace& space, double epsilon, double delta) {
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be >= 0");
  if (!(delta >= epsilon)) throw UsageError("delta must be >= epsilon");
  auto vr = build_vr_graph(space, epsilon);
  auto weights = component_distance_matrix(space, vr.components);
  return build_coarse_graph(vr.components, std::move(weights), epsilon, delta);
}

std::size_t local_genus(const CoarseGraph& graph, std::size_t x) {
  if (x >= graph.points.component_of.size())
    throw UsageError("unknown point index " + std::to_string(x));
  const auto vertex = graph.points.component_of[x];
  return graph.genus(graph.coarse_components.component_of[vertex]);
}

std::size_t genus_upper_bound(std::size_t k) {
  // k^2/2 - 3k/2 + 1 == (k-1)(k-2)/2; zero for k in {1, 2}
  if (k < 2) return 0;
  return (k - 1) * (k - 2) / 2;
}

GenusBoundReport genus_bound_check(const CoarseGraph& graph) {
  const auto& cc = graph.coarse_components;
  std::vector<std::size_t> per_component(cc.component_count());
  for (std::size_t c = 0; c < cc.component_count(); ++c) per_component[c] = graph.genus(c);

  GenusBoundReport report;
  const auto n = graph.points.component_of.size();
  report.genus.resize(n);
  report.bound.resize(n);
  report.slack.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto c = cc.component_of[graph.points.component_of[x]];
    const auto g = per_component[c];
    const auto bound = genus_upper_bound(cc.members[c].size());
    if (g > bound)
      throw InvariantError("genus " + std::to_string(g) + " exceeds bound " +
                           std::to_string(bound) + " at point " + std::to_string(x));
    report.genus[x] = g;
    report.bound[x] = bound;
    report.slack[x] = bound - g;
    if (g != bound) report.equality_everywhere = false;
  }
  return report;
}

double min_connecting_delta(const Partition& components, const std::vector<double>& weights,
                            double epsilon) {
  const auto k = components.component_count();
  if (k <= 1) return epsilon;
  auto tree = minimum_spanning_tree(k, [&](auto a, auto b) { return weights[a * k + b]; });
  double delta = epsilon;
  for (const auto& e : tree) delta = std::max(delta, e.weight);
  return delta;
}

double min_connecting_delta(const FiniteMetricSpace& space, double epsilon) {
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be >= 0");
  auto vr = build_vr_graph(space, epsilon);
  return min_connecting_delta(vr.components, component_distance_matrix(space, vr.components),
                              epsilon);
}

bool genus_bound_equality_everywhere(const FiniteMetricSpace& space) {
  auto epsilons = distinct_distances(space);
  epsilons.insert(epsilons.begin(), 0.0);
  for (double eps : epsilons) {
    auto vr = build_vr_graph(space, eps);
    auto weights = component_distance_matrix(space, vr.components);
    std::vector<double> deltas{eps};
    const auto k = vr.components.component_count();
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) deltas.push_back(weights[a * k + b]);
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    for (double delta : deltas) {
      auto cg = build_coarse_graph(vr.components, weights, eps, delta);
      if (!genus_bound_check(cg).equality_everywhere) return false;
    }
  }
  return true;
}

std::string to_dot(const CoarseGraph& graph) {
  std::ostringstream os;
  os.precision(12);
  os << "graph coarse {\n";
  os << "  label=\"epsilon=" << graph.epsilon << ", delta=" << graph.delta << "\";\n";
  for (std::size_t v = 0; v < graph.vertex_count(); ++v)
    os << "  K" << v << " [size=" << graph.points.members[v].size()
       << ", coarse_component=" << graph.coarse_components.component_of[v] << "];\n";
  for (const auto& e : graph.edges)
    os << "  K" << e.a << " -- K" << e.b << " [label=\"" << e.weight << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace ultralocal
