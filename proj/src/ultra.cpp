#include "ultralocal/ultra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ultralocal/error.hpp"
#include "ultralocal/union_find.hpp"

namespace ultralocal {

Dendrogram::Dendrogram(std::span<const PointId> leaf_points)
    : leaf_count_(leaf_points.size()), has_parent_(leaf_points.size(), false) {
  nodes_.reserve(2 * leaf_points.size());
  for (auto p : leaf_points) {
    Node leaf;
    leaf.point = p;
    leaf.min_point = p;
    nodes_.push_back(std::move(leaf));
  }
}

std::size_t Dendrogram::add_node(std::vector<std::size_t> children, double height) {
  if (children.size() < 2) throw InvariantError("internal dendrogram node needs >= 2 children");
  Node node;
  node.height = height;
  node.leaf_count = 0;
  node.min_point = std::numeric_limits<PointId>::max();
  for (auto c : children) {
    if (c >= nodes_.size() || has_parent_[c])
      throw InvariantError("dendrogram child is missing or already attached");
    has_parent_[c] = true;
    node.leaf_count += nodes_[c].leaf_count;
    node.min_point = std::min(node.min_point, nodes_[c].min_point);
  }
  std::sort(children.begin(), children.end(),
            [&](auto a, auto b) { return nodes_[a].min_point < nodes_[b].min_point; });
  node.children = std::move(children);
  nodes_.push_back(std::move(node));
  has_parent_.push_back(false);
  return nodes_.size() - 1;
}

std::size_t Dendrogram::max_arity() const noexcept {
  std::size_t arity = 0;
  for (const auto& n : nodes_) arity = std::max(arity, n.children.size());
  return arity;
}

std::vector<double> Dendrogram::distinct_heights() const {
  std::vector<double> heights;
  for (const auto& n : nodes_)
    if (!n.is_leaf()) heights.push_back(n.height);
  std::sort(heights.begin(), heights.end(), std::greater<>());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  return heights;
}

std::vector<double> Dendrogram::cophenetic() const {
  const auto n = leaf_count_;
  std::vector<double> u(n * n, 0.0);
  std::vector<std::vector<std::size_t>> leaves(nodes_.size());
  for (std::size_t i = 0; i < n; ++i) leaves[i] = {i};
  for (std::size_t v = n; v < nodes_.size(); ++v) {
    const auto& kids = nodes_[v].children;
    for (std::size_t a = 0; a < kids.size(); ++a)
      for (std::size_t b = a + 1; b < kids.size(); ++b)
        for (auto x : leaves[kids[a]])
          for (auto y : leaves[kids[b]]) {
            u[x * n + y] = nodes_[v].height;
            u[y * n + x] = nodes_[v].height;
          }
    for (auto k : kids) {
      leaves[v].insert(leaves[v].end(), leaves[k].begin(), leaves[k].end());
      leaves[k].clear();
    }
  }
  return u;
}

void Dendrogram::validate() const {
  if (nodes_.empty()) throw InvariantError("empty dendrogram");
  std::size_t roots = 0;
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    if (!has_parent_[v]) ++roots;
  if (roots != 1 || has_parent_[root()])
    throw InvariantError("dendrogram must have exactly one root (the last node)");
  for (const auto& node : nodes_)
    for (auto c : node.children) {
      const auto& child = nodes_[c];
      if (!child.is_leaf() && !(child.height < node.height))
        throw InvariantError("dendrogram heights must strictly decrease toward the leaves");
      if (child.is_leaf() && child.height > node.height)
        throw InvariantError("leaf above its parent");
    }
  if (nodes_[root()].leaf_count != leaf_count_)
    throw InvariantError("root does not span every leaf");
}

Dendrogram subdominant_ultrametric(const FiniteMetricSpace& space) {
  const auto n = space.size();
  if (n == 0) throw UsageError("subdominant ultrametric of an empty space");
  std::vector<PointId> ids(space.point_ids().begin(), space.point_ids().end());
  Dendrogram tree(ids);
  auto mst = minimum_spanning_tree(n, [&](auto i, auto j) { return space(i, j); });
  std::sort(mst.begin(), mst.end(), [](const auto& x, const auto& y) { return x.weight < y.weight; });

  UnionFind uf(n);
  std::vector<std::size_t> node_of(n);
  for (std::size_t v = 0; v < n; ++v) node_of[v] = v;

  for (std::size_t begin = 0; begin < mst.size();) {
    std::size_t end = begin;
    while (end < mst.size() && mst[end].weight == mst[begin].weight) ++end;
    // Old cluster roots touched by this group of equal-weight edges.
    std::vector<std::size_t> touched;
    for (std::size_t e = begin; e < end; ++e) {
      touched.push_back(uf.find(mst[e].a));
      touched.push_back(uf.find(mst[e].b));
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t e = begin; e < end; ++e) uf.unite(mst[e].a, mst[e].b);

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (auto old_root : touched) groups[uf.find(old_root)].push_back(node_of[old_root]);
    for (auto& [new_root, children] : groups)
      node_of[new_root] = tree.add_node(std::move(children), mst[begin].weight);
    begin = end;
  }
  return tree;
}

double component_distance(const FiniteMetricSpace& space, const Partition& partition,
                          std::size_t c, std::size_t c_prime) {
  if (c >= partition.component_count() || c_prime >= partition.component_count())
    throw UsageError("unknown component id");
  if (c == c_prime) throw UsageError("component distance needs two different components");
  double best = std::numeric_limits<double>::infinity();
  for (auto x : partition.members[c])
    for (auto y : partition.members[c_prime]) best = std::min(best, space(x, y));
  return best;
}

std::vector<double> component_distance_matrix(const FiniteMetricSpace& space,
                                              const Partition& partition) {
  const auto k = partition.component_count();
  std::vector<double> out(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      const double d = component_distance(space, partition, a, b);
      out[a * k + b] = d;
      out[b * k + a] = d;
    }
  return out;
}

LocalUltrametric::LocalUltrametric(const FiniteMetricSpace& space, double epsilon,
                                   const DendrogramProvider& provider)
    : epsilon_(epsilon), n_(space.size()) {
  const auto graph = build_vr_graph(space, epsilon);
  components_ = graph.components;
  component_dist_ = component_distance_matrix(space, components_);
  position_.assign(n_, 0);
  for (const auto& members : components_.members) {
    std::vector<PointId> ids;
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      position_[members[pos]] = pos;
      ids.push_back(space.id(members[pos]));
    }
    auto tree = provider(restrict(space, ids));
    tree.validate();
    if (tree.leaf_count() != ids.size())
      throw InvariantError("dendrogram provider returned the wrong number of leaves");
    for (std::size_t pos = 0; pos < ids.size(); ++pos)
      if (tree.leaf_point(pos) != ids[pos])
        throw InvariantError("dendrogram leaves must follow the point order of the space");
    within_.push_back(tree.cophenetic());
    dendrograms_.push_back(std::move(tree));
  }
}

double LocalUltrametric::operator()(std::size_t x, std::size_t y) const {
  const auto cx = components_.component_of[x];
  const auto cy = components_.component_of[y];
  if (cx != cy) return component_distance(cx, cy);
  const auto size = components_.members[cx].size();
  return within_[cx][position_[x] * size + position_[y]];
}

std::vector<double> LocalUltrametric::matrix() const {
  std::vector<double> out(n_ * n_);
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = 0; y < n_; ++y) out[x * n_ + y] = (*this)(x, y);
  return out;
}

LocalUltrametric local_ultrametric(const FiniteMetricSpace& space, double epsilon,
                                   const DendrogramProvider& provider) {
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be >= 0");
  return LocalUltrametric(space, epsilon, provider);
}

TriangleViolations triangle_violations(const LocalUltrametric& local, double tol) {
  const auto n = local.size();
  const auto m = local.matrix();
  TriangleViolations out;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = x + 1; z < n; ++z)
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        ++out.triples_checked;
        const double excess = m[x * n + z] - (m[x * n + y] + m[y * n + z]);
        if (excess > tol) {
          ++out.violations;
          out.worst_excess = std::max(out.worst_excess, excess);
        }
      }
  return out;
}

namespace {

void write_newick(const Dendrogram& tree, std::size_t v, std::ostream& os) {
  const auto& node = tree.node(v);
  if (node.is_leaf()) {
    os << node.point;
    return;
  }
  os << '(';
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) os << ',';
    const auto c = node.children[i];
    write_newick(tree, c, os);
    os << ':' << node.height - tree.node(c).height;
  }
  os << ')';
}

}  // namespace

std::string to_newick(const Dendrogram& tree) {
  std::ostringstream os;
  os.precision(12);
  if (tree.node_count() == 1) {
    os << '(' << tree.node(0).point << ");";
    return os.str();
  }
  write_newick(tree, tree.root(), os);
  os << ';';
  return os.str();
}

}  // namespace ultralocal
