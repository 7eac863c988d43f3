#include "ultralocal/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "ultralocal/error.hpp"

namespace ultralocal {

using nlohmann::ordered_json;

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DatasetInfo describe_dataset(const std::string& source, std::string_view bytes, const PointSet& points) {
  return {source, points.size(), points.dimension(), fnv1a64_hex(bytes)};
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string cluster_name(std::size_t component) { return "K" + std::to_string(component); }

std::size_t parse_cluster_name(std::string_view name) {
  if (!name.empty() && (name.front() == 'K' || name.front() == 'k')) name.remove_prefix(1);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), value);
  if (name.empty() || ec != std::errc{} || ptr != name.data() + name.size())
    throw UsageError("malformed cluster id '" + std::string(name) + "'");
  return value;
}

ordered_json clusters_json(const Partition& partition, const FiniteMetricSpace& space) {
  ordered_json out = ordered_json::array();
  for (std::size_t c = 0; c < partition.component_count(); ++c) {
    ordered_json members = ordered_json::array();
    for (auto v : partition.members[c]) members.push_back(space.id(v));
    out.push_back({{"name", cluster_name(c)},
                   {"min_point", space.id(partition.members[c].front())},
                   {"size", partition.members[c].size()},
                   {"singleton", partition.members[c].size() == 1},
                   {"members", std::move(members)}});
  }
  return out;
}

ordered_json matrix_json(std::span<const double> row_major, std::size_t n) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(round12(row_major[i * n + j]));
    out.push_back(std::move(row));
  }
  return out;
}

ordered_json murtagh_json(const MurtaghIndex& index, const MurtaghMode& mode) {
  ordered_json out{{"alpha", round12(index.alpha)},
                   {"almost_ultrametric", index.almost_ultrametric},
                   {"triangles_used", index.triangles_used},
                   {"degenerate_excluded", index.degenerate_excluded}};
  if (const auto* s = std::get_if<Sampled>(&mode))
    out["mode"] = {{"kind", "sample"}, {"count", s->count}, {"seed", s->seed}};
  else
    out["mode"] = {{"kind", "exhaustive"}};
  return out;
}

ordered_json coarse_json(const CoarseGraph& graph) {
  ordered_json edges = ordered_json::array();
  for (const auto& e : graph.edges)
    edges.push_back({{"a", cluster_name(e.a)}, {"b", cluster_name(e.b)}, {"weight", round12(e.weight)}});
  ordered_json comps = ordered_json::array();
  const auto& cc = graph.coarse_components;
  for (std::size_t c = 0; c < cc.component_count(); ++c) {
    ordered_json vertices = ordered_json::array();
    for (auto v : cc.members[c]) vertices.push_back(cluster_name(v));
    const auto k = cc.members[c].size();
    comps.push_back({{"vertices", std::move(vertices)},
                     {"edges", graph.edge_count(c)},
                     {"genus", graph.genus(c)},
                     {"genus_bound", genus_upper_bound(k)}});
  }
  const auto bound = genus_bound_check(graph);
  return {{"epsilon", round12(graph.epsilon)},
          {"delta", round12(graph.delta)},
          {"vertices", graph.vertex_count()},
          {"edges", std::move(edges)},
          {"components", std::move(comps)},
          {"genus_bound_equality_everywhere", bound.equality_everywhere}};
}

ordered_json encoding_json(const PAdicEncoding& enc, const RationalPolynomial& f,
                           const MeasureReport& check) {
  ordered_json leaves = ordered_json::array();
  for (std::size_t i = 0; i < enc.leaves.size(); ++i)
    leaves.push_back({{"point", enc.leaves[i]},
                      {"center", enc.centers[i].str()},
                      {"mass", enc.masses[i].str()},
                      {"target", enc.targets[i].str()}});
  ordered_json positions = ordered_json::array();
  for (const auto& [height, pos] : enc.positions)
    positions.push_back({{"height", round12(height)}, {"position", pos}});
  ordered_json coefficients = ordered_json::array();
  for (const auto& c : f.coefficients()) coefficients.push_back(c.str());
  ordered_json balls = ordered_json::array();
  for (const auto& b : check.balls)
    balls.push_back({{"point", b.point},
                     {"expected_valuation", b.expected_valuation},
                     {"center_valuation", b.center_valuation ? ordered_json(*b.center_valuation)
                                                             : ordered_json("inf")},
                     {"samples_checked", b.samples_checked},
                     {"valuation_mismatches", b.valuation_mismatches},
                     {"zeros", b.zeros},
                     {"ok", b.ok()}});
  return {{"p", enc.p},
          {"m", enc.m},
          {"modulus", enc.modulus().str()},
          {"digit_positions", std::move(positions)},
          {"leaves", std::move(leaves)},
          {"polynomial", {{"coefficients", std::move(coefficients)}, {"text", f.str()}}},
          {"verification", {{"ok", check.ok()}, {"balls", std::move(balls)}}}};
}

std::uint64_t encoding_prime(const LocalUltrametric& local, std::optional<std::uint64_t> requested,
                             std::vector<std::string>& warnings) {
  const auto bound = prime_lower_bound(local.dendrograms(), local.components().component_count());
  if (!requested) return next_prime_at_least(bound);
  if (!is_prime(*requested)) throw UsageError(std::to_string(*requested) + " is not prime");
  if (*requested < bound)
    warnings.push_back("p = " + std::to_string(*requested) + " is below the bound " +
                       std::to_string(bound) + " (max arity + component count)");
  return *requested;
}

ordered_json encode_cluster_json(const LocalUltrametric& local, std::size_t cluster,
                                 const ReportOptions& options, std::vector<std::string>& warnings) {
  if (cluster >= local.components().component_count())
    throw UsageError("unknown component id " + cluster_name(cluster));
  const auto p = encoding_prime(local, options.p, warnings);
  const auto& tree = local.dendrograms()[cluster];
  const auto enc = encode(tree, p, options.positions);
  const auto f = interpolate(enc);
  const auto check = verify_measure(f, enc, options.samples_per_ball);
  auto out = encoding_json(enc, f, check);
  ordered_json result{{"cluster", cluster_name(cluster)},
                      {"p_bound", prime_lower_bound(local.dendrograms(), local.components().component_count())},
                      {"samples_per_ball", options.samples_per_ball}};
  result.update(out);
  return result;
}

namespace {

ordered_json dataset_json(const DatasetInfo& d) {
  return {{"source", d.source}, {"rows", d.rows}, {"columns", d.columns}, {"fnv1a64", d.content_hash}};
}

}  // namespace

ordered_json run_report(const FiniteMetricSpace& space, const DatasetInfo& dataset,
                        const ReportOptions& options) {
  if (!(options.epsilon >= 0.0)) throw UsageError("epsilon must be >= 0");
  if (options.delta && !(*options.delta >= options.epsilon))
    throw UsageError("delta must be >= epsilon");

  std::vector<std::string> warnings;
  const auto local = local_ultrametric(space, options.epsilon);
  const auto& parts = local.components();
  const std::vector<double> weights(local.component_distances().begin(),
                                    local.component_distances().end());
  const double min_delta = min_connecting_delta(parts, weights, options.epsilon);
  const double delta = options.delta.value_or(min_delta);
  const auto graph = build_coarse_graph(parts, weights, options.epsilon, delta);

  ordered_json murtagh_clusters = ordered_json::array();
  for (std::size_t c = 0; c < parts.component_count(); ++c) {
    if (parts.members[c].size() < 3) continue;
    std::vector<PointId> ids;
    for (auto v : parts.members[c]) ids.push_back(space.id(v));
    const auto sub = restrict(space, ids);
    const auto mode = options.murtagh_mode.value_or(default_murtagh_mode(sub.size(), options.seed));
    auto entry = murtagh_json(murtagh_index(sub, mode), mode);
    entry["cluster"] = cluster_name(c);
    murtagh_clusters.push_back(std::move(entry));
  }
  ordered_json murtagh_global = nullptr;
  if (space.size() >= 3) {
    const auto mode = options.murtagh_mode.value_or(default_murtagh_mode(space.size(), options.seed));
    murtagh_global = murtagh_json(murtagh_index(space, mode), mode);
  }

  const auto violations = triangle_violations(local);

  ordered_json dendrograms = ordered_json::array();
  for (std::size_t c = 0; c < parts.component_count(); ++c)
    dendrograms.push_back({{"cluster", cluster_name(c)}, {"newick", to_newick(local.dendrograms()[c])}});

  ordered_json report{
      {"schema", kReportSchema},
      {"dataset", dataset_json(dataset)},
      {"epsilon", round12(options.epsilon)},
      {"delta", round12(delta)},
      {"delta_source", options.delta ? "user" : "min_connecting_delta"},
      {"components",
       {{"total", parts.component_count()},
        {"non_singleton", parts.non_singleton_count()},
        {"clusters", clusters_json(parts, space)}}},
      {"component_distances", matrix_json(weights, parts.component_count())},
      {"min_connecting_delta", round12(min_delta)},
      {"min_connecting_delta_note",
       parts.component_count() == 1 ? "single component: epsilon itself" : "max MST edge over component distances"},
      {"coarse_graph", coarse_json(graph)},
      {"local_ultrametric",
       {{"triples_checked", violations.triples_checked},
        {"triangle_violations", violations.violations},
        {"worst_excess", round12(violations.worst_excess)}}},
      {"dendrograms", std::move(dendrograms)},
      {"murtagh", {{"clusters", std::move(murtagh_clusters)}, {"global", std::move(murtagh_global)}}},
  };
  if (options.encode_cluster)
    report["encoding"] = encode_cluster_json(local, *options.encode_cluster, options, warnings);
  report["warnings"] = warnings;
  return report;
}

ordered_json sweep_json(const FiniteMetricSpace& space, const DatasetInfo& dataset) {
  const auto eps = distinct_distances(space);
  const auto checks = clique_criterion(space, eps);
  std::size_t violating = 0;
  ordered_json first = nullptr;
  for (const auto& c : checks) {
    if (c.all_components_are_cliques) continue;
    if (violating++ == 0)
      first = {{"epsilon", round12(c.epsilon)}, {"component", *c.first_violation}};
  }
  return {{"schema", kReportSchema},
          {"dataset", dataset_json(dataset)},
          {"connectivity_threshold", round12(connectivity_threshold(space))},
          {"distinct_distances", eps.size()},
          {"ultrametric", violating == 0},
          {"violating_epsilons", violating},
          {"first_violation", std::move(first)}};
}

}  // namespace ultralocal
