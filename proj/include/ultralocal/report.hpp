#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ultralocal/coarse.hpp"
#include "ultralocal/metric.hpp"
#include "ultralocal/murtagh.hpp"
#include "ultralocal/padic.hpp"
#include "ultralocal/ultra.hpp"
#include "ultralocal/vr_graph.hpp"

namespace ultralocal {

inline constexpr std::string_view kReportSchema = "ultralocal.report/1";

struct DatasetInfo {
  std::string source;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::string content_hash;  // FNV-1a 64, hex
};

std::string fnv1a64_hex(std::string_view bytes);
DatasetInfo describe_dataset(const std::string& source, std::string_view bytes, const PointSet& points);

// Rounds to 12 significant digits for serialization.
double round12(double x);

// "K<i>" for component i of a partition.
std::string cluster_name(std::size_t component);
// Parses "K3" or "3".
std::size_t parse_cluster_name(std::string_view name);

struct ReportOptions {
  double epsilon = 0.0;
  std::optional<double> delta;
  std::optional<std::uint64_t> p;
  std::optional<std::size_t> encode_cluster;
  std::optional<DigitPositions> positions;
  std::optional<MurtaghMode> murtagh_mode;  // default_murtagh_mode per space when unset
  std::uint64_t seed = 1;
  std::size_t samples_per_ball = 81;
};

nlohmann::ordered_json clusters_json(const Partition& partition, const FiniteMetricSpace& space);
nlohmann::ordered_json matrix_json(std::span<const double> row_major, std::size_t n);
nlohmann::ordered_json murtagh_json(const MurtaghIndex& index, const MurtaghMode& mode);
nlohmann::ordered_json coarse_json(const CoarseGraph& graph);
nlohmann::ordered_json encoding_json(const PAdicEncoding& enc, const RationalPolynomial& f,
                                     const MeasureReport& check);

// Prime for encoding at this epsilon: the user's choice if given (warning
// appended when it violates the bound), else choose_prime.
std::uint64_t encoding_prime(const LocalUltrametric& local, std::optional<std::uint64_t> requested,
                             std::vector<std::string>& warnings);

nlohmann::ordered_json encode_cluster_json(const LocalUltrametric& local, std::size_t cluster,
                                           const ReportOptions& options,
                                           std::vector<std::string>& warnings);

// Full analysis at one (epsilon, delta).
nlohmann::ordered_json run_report(const FiniteMetricSpace& space, const DatasetInfo& dataset,
                                  const ReportOptions& options);

// Connectivity threshold and clique criterion over every distinct distance.
nlohmann::ordered_json sweep_json(const FiniteMetricSpace& space, const DatasetInfo& dataset);

}  // namespace ultralocal
