// Command-line front end: local ultrametricity reports, coarse graphs,
// Murtagh indices and p-adic cluster encodings for CSV data.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ultralocal/coarse.hpp"
#include "ultralocal/error.hpp"
#include "ultralocal/metric.hpp"
#include "ultralocal/murtagh.hpp"
#include "ultralocal/padic.hpp"
#include "ultralocal/report.hpp"
#include "ultralocal/ultra.hpp"
#include "ultralocal/vr_graph.hpp"

namespace ul = ultralocal;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct InputArgs {
  std::string path;
  bool no_header = false;
  bool distance_matrix = false;
  std::optional<std::size_t> label_col;
};

struct Input {
  ul::FiniteMetricSpace space;
  ul::DatasetInfo info;
};

Input load_input(const InputArgs& args) {
  std::ifstream in(args.path, std::ios::binary);
  if (!in) throw ul::DataError("cannot read '" + args.path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  if (args.distance_matrix) {
    auto space = ul::parse_distance_matrix(bytes, !args.no_header);
    ul::DatasetInfo info{args.path, space.size(), space.size(), ul::fnv1a64_hex(bytes)};
    return {std::move(space), std::move(info)};
  }
  ul::CsvOptions options;
  options.has_header = !args.no_header;
  options.label_column = args.label_col;
  const auto points = ul::parse_points(bytes, options);
  return {ul::euclidean_metric(points), ul::describe_dataset(args.path, bytes, points)};
}

void add_input(CLI::App* cmd, InputArgs& args) {
  cmd->add_option("dataset", args.path, "CSV file (points, or a distance matrix)")->required();
  cmd->add_flag("--no-header", args.no_header, "First row is data, not a header");
  cmd->add_option("--label-col", args.label_col,
                  "0-based label column (default: last column if non-numeric)");
  cmd->add_flag("--distance-matrix", args.distance_matrix, "Input is a square distance matrix");
}

ul::MurtaghMode parse_mode(const std::string& mode, std::size_t samples, std::uint64_t seed,
                           std::size_t n) {
  if (mode == "exhaustive") return ul::Exhaustive{};
  if (mode == "sample") return ul::Sampled{samples, seed};
  return ul::default_murtagh_mode(n, seed);
}

ul::DigitPositions parse_positions(const std::string& csv, const ul::Dendrogram& tree) {
  const auto heights = tree.distinct_heights();
  std::vector<unsigned> values;
  std::stringstream ss(csv);
  for (std::string cell; std::getline(ss, cell, ',');) values.push_back(static_cast<unsigned>(std::stoul(cell)));
  if (values.size() != heights.size())
    throw ul::UsageError("--positions needs " + std::to_string(heights.size()) +
                         " entries (one per distinct merge height, descending)");
  ul::DigitPositions out;
  for (std::size_t i = 0; i < heights.size(); ++i) out.emplace(heights[i], values[i]);
  return out;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw ul::DataError("cannot write '" + output + "'");
  out << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local ultrametricity, coarse genus and p-adic encodings of finite metric data"};
  app.require_subcommand(1);

  InputArgs input;
  double epsilon = 0.0;
  std::optional<double> delta;
  std::optional<std::uint64_t> prime;
  std::string cluster;
  std::string mode = "auto";
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  std::size_t samples_per_ball = 81;
  std::string positions;
  std::string format = "json";
  std::string kind;
  std::string output;

  auto eps_option = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--epsilon", epsilon, "VR threshold (closed, d <= epsilon)")
                    ->check(CLI::NonNegativeNumber);
    if (required) opt->required();
  };
  auto out_option = [&](CLI::App* cmd) { cmd->add_option("-o,--output", output, "Write to file instead of stdout"); };
  auto murtagh_options = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "Murtagh triangle mode")->check(CLI::IsMember({"auto", "exhaustive", "sample"}));
    cmd->add_option("--seed", seed, "Sampling seed");
    cmd->add_option("--samples", samples, "Sampled triangles");
  };
  auto encode_options = [&](CLI::App* cmd) {
    cmd->add_option("--p", prime, "Prime for the encoding (default: smallest admissible)");
    cmd->add_option("--positions", positions,
                    "Explicit digit positions, one per distinct merge height (descending), comma separated");
    cmd->add_option("--samples-per-ball", samples_per_ball, "Sweep size for the measure check");
  };

  auto* report = app.add_subcommand("report", "Full analysis at one (epsilon, delta)");
  add_input(report, input);
  eps_option(report, true);
  report->add_option("--delta", delta, "Coarse threshold (default: minimal connecting delta)");
  report->add_option("--cluster", cluster, "Cluster (K<i>) to encode p-adically");
  encode_options(report);
  murtagh_options(report);
  out_option(report);

  auto* vr = app.add_subcommand("vr", "Vietoris-Rips graph at epsilon");
  add_input(vr, input);
  eps_option(vr, true);
  vr->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
  out_option(vr);

  auto* coarse = app.add_subcommand("coarse", "Coarse epsilon-delta graph and genus");
  add_input(coarse, input);
  eps_option(coarse, true);
  coarse->add_option("--delta", delta, "Coarse threshold (default: minimal connecting delta)");
  coarse->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
  out_option(coarse);

  auto* sweep = app.add_subcommand("sweep", "Connectivity threshold and clique criterion");
  add_input(sweep, input);
  out_option(sweep);

  auto* murtagh = app.add_subcommand("murtagh", "Murtagh ultrametricity index");
  add_input(murtagh, input);
  eps_option(murtagh, false);
  murtagh->add_option("--cluster", cluster, "Restrict to a cluster K<i> of the VR graph at --epsilon");
  murtagh_options(murtagh);
  out_option(murtagh);

  auto* enc = app.add_subcommand("encode", "p-adic encoding and interpolant of one cluster");
  add_input(enc, input);
  eps_option(enc, true);
  enc->add_option("--cluster", cluster, "Cluster K<i>")->required();
  encode_options(enc);
  out_option(enc);

  auto* exp = app.add_subcommand("export", "DOT or Newick export");
  add_input(exp, input);
  eps_option(exp, true);
  exp->add_option("--kind", kind)->required()->check(CLI::IsMember({"vr", "coarse", "dendrogram"}));
  exp->add_option("--delta", delta);
  exp->add_option("--cluster", cluster, "Cluster K<i> (dendrogram)");
  exp->add_option("--format", format)->check(CLI::IsMember({"json", "dot", "newick"}));
  out_option(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const auto data = load_input(input);
    const auto& space = data.space;
    if (delta && *delta < epsilon) throw ul::UsageError("--delta must be >= --epsilon");
    auto delta_or_min = [&](const ul::Partition& parts, const std::vector<double>& w) {
      return delta.value_or(ul::min_connecting_delta(parts, w, epsilon));
    };

    if (*report) {
      ul::ReportOptions options;
      options.epsilon = epsilon;
      options.delta = delta;
      options.p = prime;
      options.seed = seed;
      options.samples_per_ball = samples_per_ball;
      if (mode != "auto") options.murtagh_mode = parse_mode(mode, samples, seed, space.size());
      if (!cluster.empty()) {
        options.encode_cluster = ul::parse_cluster_name(cluster);
        if (!positions.empty()) {
          const auto local = ul::local_ultrametric(space, epsilon);
          if (*options.encode_cluster >= local.components().component_count())
            throw ul::UsageError("unknown component id " + cluster);
          options.positions = parse_positions(positions, local.dendrograms()[*options.encode_cluster]);
        }
      }
      const auto j = ul::run_report(space, data.info, options);
      for (const auto& w : j["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
      emit(dump(j), output);
    } else if (*vr) {
      const auto g = ul::build_vr_graph(space, epsilon);
      if (format == "dot") {
        emit(ul::to_dot(g, space), output);
      } else {
        ordered_json j{{"epsilon", ul::round12(epsilon)},
                       {"vertices", g.n},
                       {"edges", g.edges.size()},
                       {"betti1", g.betti1()},
                       {"components",
                        {{"total", g.components.component_count()},
                         {"non_singleton", g.components.non_singleton_count()},
                         {"clusters", ul::clusters_json(g.components, space)}}}};
        emit(dump(j), output);
      }
    } else if (*coarse || (*exp && kind == "coarse")) {
      const auto g = ul::build_vr_graph(space, epsilon);
      auto w = ul::component_distance_matrix(space, g.components);
      const double min_delta = ul::min_connecting_delta(g.components, w, epsilon);
      const auto cg = ul::build_coarse_graph(g.components, w, epsilon, delta_or_min(g.components, w));
      if (format == "dot" || *exp) {
        emit(ul::to_dot(cg), output);
      } else {
        auto j = ul::coarse_json(cg);
        j["min_connecting_delta"] = ul::round12(min_delta);
        j["component_distances"] = ul::matrix_json(w, g.components.component_count());
        emit(dump(j), output);
      }
    } else if (*sweep) {
      emit(dump(ul::sweep_json(space, data.info)), output);
    } else if (*murtagh) {
      auto target = space;
      std::string scope = "global";
      if (!cluster.empty()) {
        const auto g = ul::build_vr_graph(space, epsilon);
        const auto c = ul::parse_cluster_name(cluster);
        if (c >= g.components.component_count()) throw ul::UsageError("unknown component id " + cluster);
        std::vector<ul::PointId> ids;
        for (auto v : g.components.members[c]) ids.push_back(space.id(v));
        target = ul::restrict(space, ids);
        scope = ul::cluster_name(c);
      }
      const auto m = parse_mode(mode, samples, seed, target.size());
      auto j = ul::murtagh_json(ul::murtagh_index(target, m), m);
      j["scope"] = scope;
      j["points"] = target.size();
      emit(dump(j), output);
    } else if (*enc) {
      const auto local = ul::local_ultrametric(space, epsilon);
      ul::ReportOptions options;
      options.epsilon = epsilon;
      options.p = prime;
      options.samples_per_ball = samples_per_ball;
      const auto c = ul::parse_cluster_name(cluster);
      if (c >= local.components().component_count()) throw ul::UsageError("unknown component id " + cluster);
      if (!positions.empty()) options.positions = parse_positions(positions, local.dendrograms()[c]);
      std::vector<std::string> warnings;
      auto j = ul::encode_cluster_json(local, c, options, warnings);
      j["warnings"] = warnings;
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      emit(dump(j), output);
    } else if (*exp && kind == "vr") {
      emit(ul::to_dot(ul::build_vr_graph(space, epsilon), space), output);
    } else if (*exp && kind == "dendrogram") {
      const auto local = ul::local_ultrametric(space, epsilon);
      const auto c = cluster.empty() ? 0 : ul::parse_cluster_name(cluster);
      if (c >= local.components().component_count()) throw ul::UsageError("unknown component id " + cluster);
      emit(ul::to_newick(local.dendrograms()[c]) + "\n", output);
    }
  } catch (const ul::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ul::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const ul::InvariantError& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
