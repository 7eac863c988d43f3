#include "ultralocal/vr_graph.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "ultralocal/error.hpp"
#include "ultralocal/union_find.hpp"

namespace ultralocal {

std::size_t Partition::non_singleton_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(members.begin(), members.end(), [](const auto& m) { return m.size() > 1; }));
}

Partition make_partition(std::span<const std::size_t> representative) {
  Partition out;
  out.component_of.assign(representative.size(), 0);
  std::map<std::size_t, std::size_t> number;
  for (std::size_t v = 0; v < representative.size(); ++v) {
    auto [it, inserted] = number.try_emplace(representative[v], out.members.size());
    if (inserted) out.members.emplace_back();
    out.component_of[v] = it->second;
    out.members[it->second].push_back(v);
  }
  return out;
}

bool refines(const Partition& fine, const Partition& coarse) {
  if (fine.component_of.size() != coarse.component_of.size()) return false;
  for (const auto& block : fine.members)
    for (auto v : block)
      if (coarse.component_of[v] != coarse.component_of[block.front()]) return false;
  return true;
}

std::size_t betti1(std::size_t vertex_count, std::size_t edge_count, std::size_t component_count) {
  if (edge_count + component_count < vertex_count)
    throw InvariantError("inconsistent graph counts: E + C < V");
  return edge_count + component_count - vertex_count;
}

std::size_t VRGraph::betti1() const {
  return ultralocal::betti1(n, edges.size(), components.component_count());
}

VRGraph build_vr_graph(const FiniteMetricSpace& space, double epsilon) {
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be >= 0");
  VRGraph g;
  g.epsilon = epsilon;
  g.n = space.size();
  UnionFind uf(g.n);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j)
      if (space(i, j) <= epsilon) {
        g.edges.emplace_back(i, j);
        uf.unite(i, j);
      }
  std::vector<std::size_t> rep(g.n);
  for (std::size_t v = 0; v < g.n; ++v) rep[v] = uf.find(v);
  g.components = make_partition(rep);
  return g;
}

std::vector<WeightedEdge> minimum_spanning_tree(
    std::size_t n, const std::function<double(std::size_t, std::size_t)>& weight) {
  std::vector<WeightedEdge> tree;
  if (n <= 1) return tree;
  tree.reserve(n - 1);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, kInf);
  std::vector<std::size_t> parent(n, 0);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double w = weight(current, v);
      if (w < best[v]) {
        best[v] = w;
        parent[v] = current;
      }
      if (next == n || best[v] < best[next]) next = v;
    }
    in_tree[next] = true;
    tree.push_back({std::min(parent[next], next), std::max(parent[next], next), best[next]});
    current = next;
  }
  return tree;
}

double connectivity_threshold(const FiniteMetricSpace& space) {
  auto tree = minimum_spanning_tree(space.size(), [&](auto i, auto j) { return space(i, j); });
  double t = 0.0;
  for (const auto& e : tree) t = std::max(t, e.weight);
  return t;
}

std::vector<double> distinct_distances(const FiniteMetricSpace& space) {
  std::vector<double> values;
  const auto n = space.size();
  values.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) values.push_back(space(i, j));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::vector<CliqueCheck> clique_criterion(const FiniteMetricSpace& space,
                                          std::span<const double> epsilons) {
  const auto n = space.size();
  struct PairEdge {
    double w;
    std::size_t a, b;
  };
  std::vector<PairEdge> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({space(i, j), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.w < y.w; });

  std::vector<std::size_t> order(epsilons.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return epsilons[a] < epsilons[b]; });

  // Component members and diameters are maintained incrementally while the
  // threshold sweeps upward; a component is a clique iff its diameter <= eps.
  UnionFind uf(n);
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<double> diameter(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) members[v] = {v};

  std::vector<CliqueCheck> out(epsilons.size());
  std::size_t next_pair = 0;
  for (auto idx : order) {
    const double eps = epsilons[idx];
    while (next_pair < pairs.size() && pairs[next_pair].w <= eps) {
      const auto ra = uf.find(pairs[next_pair].a);
      const auto rb = uf.find(pairs[next_pair].b);
      ++next_pair;
      if (ra == rb) continue;
      double cross = 0.0;
      for (auto x : members[ra])
        for (auto y : members[rb]) cross = std::max(cross, space(x, y));
      uf.unite(ra, rb);
      const auto root = uf.find(ra);
      const auto other = root == ra ? rb : ra;
      diameter[root] = std::max({diameter[ra], diameter[rb], cross});
      members[root].insert(members[root].end(), members[other].begin(), members[other].end());
      members[other].clear();
      members[other].shrink_to_fit();
    }
    CliqueCheck check;
    check.epsilon = eps;
    std::size_t worst_min = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (uf.find(v) != v || diameter[v] <= eps) continue;
      const auto lowest = *std::min_element(members[v].begin(), members[v].end());
      if (lowest < worst_min) {
        worst_min = lowest;
        auto ids = members[v];
        std::sort(ids.begin(), ids.end());
        std::vector<PointId> point_ids;
        for (auto m : ids) point_ids.push_back(space.id(m));
        check.first_violation = std::move(point_ids);
      }
      check.all_components_are_cliques = false;
    }
    out[idx] = std::move(check);
  }
  return out;
}

bool is_ultrametric_by_cliques(const FiniteMetricSpace& space) {
  const auto eps = distinct_distances(space);
  const auto checks = clique_criterion(space, eps);
  return std::all_of(checks.begin(), checks.end(),
                     [](const auto& c) { return c.all_components_are_cliques; });
}

std::string to_dot(const VRGraph& graph, const FiniteMetricSpace& space) {
  std::ostringstream os;
  os.precision(12);
  os << "graph vr {\n";
  os << "  label=\"epsilon=" << graph.epsilon << "\";\n";
  for (std::size_t v = 0; v < graph.n; ++v)
    os << "  " << space.id(v) << " [component=" << space.id(graph.components.members[graph.components.component_of[v]].front())
       << "];\n";
  for (const auto& [a, b] : graph.edges) os << "  " << space.id(a) << " -- " << space.id(b) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace ultralocal
