#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsample/generators.hpp"
#include "gsample/properties.hpp"
#include "gsample/samplers.hpp"

namespace gsample {

struct DatasetSpec {
  std::string name;
  std::string category;
  std::optional<std::filesystem::path> path;  ///< edge-list file, or
  std::optional<GeneratorConfig> generator;   ///< a synthetic graph
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  /// Method plus its parameters; fraction, seed and mode are set per cell.
  std::vector<SamplerConfig> samplers;
  std::vector<double> fractions{0.02, 0.04, 0.06, 0.08, 0.1};
  std::size_t repetitions = 10;
  std::uint64_t seed = 42;
  std::optional<FinalizeMode> mode;  ///< nullopt: native_mode of each method
  PathOptions paths;  ///< for the original graphs; samples use automatic mode
  /// Fraction at which distributions are recorded and compared.
  double distribution_fraction = 0.02;
  std::filesystem::path output_dir = "bench-out";
  std::optional<std::filesystem::path> cache_dir;  ///< default: output_dir/cache
  unsigned workers = 0;                            ///< 0: hardware concurrency

  /// Throws ConfigError on invalid values or duplicate dataset names.
  void validate() const;

  /// Relative dataset paths are resolved against base_dir.
  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;
};

/// Seed of one (dataset, method, phi, repetition) cell, derived from the
/// master seed so that any cell can be re-run on its own.
std::uint64_t cell_seed(std::uint64_t master, const std::string& dataset, Method method,
                        double fraction, std::size_t repetition);

/// One scalar result. A failed cell is a single row with property "error".
struct ReportRow {
  std::string dataset;
  std::string method;
  double fraction = 0;
  std::size_t repetition = 0;
  std::string property;
  std::optional<double> value;
  double elapsed_ms = 0;
  std::string error;
};

/// Per-repetition distance between a sample's distribution and the original's.
struct JsdRow {
  std::string dataset;
  std::string method;
  double fraction = 0;
  std::size_t repetition = 0;
  std::string property;  ///< degree, clustering or path_length
  std::optional<double> value;
};

/// Original-graph value of each scalar property, per dataset.
using OriginalValues = std::map<std::string, std::map<std::string, std::optional<double>>>;

struct PointStat {
  std::string dataset, method, property;
  double fraction = 0;
  std::optional<double> ratio_mean;
  std::optional<double> ci95;
  std::size_t count = 0;
};

struct RmseEntry {
  std::string dataset, method, property;
  std::optional<double> rmse;  ///< over the per-phi means of the repetitions
  double stddev = 0;           ///< of per-repetition RMSEs
  std::size_t fractions = 0;
};

struct JsdEntry {
  std::string dataset, method, property;
  std::optional<double> mean;
  double stddev = 0;
  std::size_t count = 0;
};

struct SummaryEntry {
  std::string metric;  ///< rmse or jsd
  std::string property;
  std::map<std::string, std::optional<double>> by_method;
};

struct Tables {
  std::vector<std::string> methods;  ///< column order
  std::vector<PointStat> point_stats;
  std::vector<RmseEntry> rmse;
  std::vector<JsdEntry> jsd;
  std::vector<SummaryEntry> summary;
  std::size_t gaps = 0;  ///< cells or values that could not be aggregated
};

Tables aggregate(const std::vector<ReportRow>& rows, const std::vector<JsdRow>& jsd_rows,
                 const OriginalValues& originals, std::vector<std::string> methods = {});

/// Average RMSE of `method` for `property` across datasets (nullopt if absent).
std::optional<double> summary_value(const Tables& t, const std::string& metric,
                                    const std::string& property, const std::string& method);

struct RunResult {
  std::vector<ReportRow> rows;
  std::vector<JsdRow> jsd_rows;
  OriginalValues originals;
  Tables tables;
  std::vector<std::string> failed_datasets;
  std::size_t error_rows = 0;
};

/// Runs every cell, writes the report bundle to cfg.output_dir and returns
/// everything that was written.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Rebuilds the tables from raw.csv (plus originals.csv and jsd_raw.csv next
/// to it) and writes them into out_dir.
Tables aggregate_files(const std::filesystem::path& raw_csv, const std::filesystem::path& out_dir);

void write_tables(const Tables& t, const std::filesystem::path& out_dir);

nlohmann::json report_to_json(const PropertyReport& r);
PropertyReport report_from_json(const nlohmann::json& j);

}  // namespace gsample
