#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "gsample/harness.hpp"
#include "gsample/metrics.hpp"

using namespace gsample;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() /
                   ("gsample-test-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    rows.push_back(f);
  }
  return rows;
}

ReportRow row(const std::string& d, const std::string& m, double phi, std::size_t rep,
              const std::string& p, std::optional<double> v) {
  return {d, m, phi, rep, p, v, 0.0, {}};
}

ExperimentConfig tiny_config(const fs::path& out) {
  ExperimentConfig c;
  GeneratorConfig sw;
  sw.model = GeneratorModel::small_world;
  sw.nodes = 500;
  sw.ring_degree = 6;
  sw.seed = 3;
  GeneratorConfig mm;
  mm.model = GeneratorModel::mixed;
  mm.nodes = 500;
  mm.edges_per_node = 3;
  c.datasets = {{"sw", "synthetic", std::nullopt, sw}, {"mm", "synthetic", std::nullopt, mm}};
  SamplerConfig ls;
  ls.method = Method::list;
  SamplerConfig fs_;
  fs_.method = Method::frontier;
  c.samplers = {ls, fs_};
  c.fractions = {0.02, 0.1};
  c.repetitions = 2;
  c.seed = 11;
  c.output_dir = out;
  c.workers = 2;
  return c;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("cell seeds are stable and distinct") {
    const auto a = cell_seed(42, "cora", Method::list, 0.02, 1);
    CHECK(a == cell_seed(42, "cora", Method::list, 0.02, 1));
    CHECK(a != cell_seed(43, "cora", Method::list, 0.02, 1));
    CHECK(a != cell_seed(42, "core", Method::list, 0.02, 1));
    CHECK(a != cell_seed(42, "cora", Method::frontier, 0.02, 1));
    CHECK(a != cell_seed(42, "cora", Method::list, 0.04, 1));
    CHECK(a != cell_seed(42, "cora", Method::list, 0.02, 2));
  }

  TEST_CASE("config from json") {
    const auto j = json::parse(R"({
      "datasets": [
        {"name": "cora", "category": "citation", "path": "data/cora.txt"},
        {"name": "sw", "generator": {"model": "sw", "nodes": 1000, "rewire": 0.2}}
      ],
      "samplers": ["ls", {"method": "rd", "rd_seeds": 5, "rd_top": 0.2},
                   {"method": "hj", "jump_probability": 0.1}],
      "fractions": [0.05, 0.1],
      "repetitions": 3,
      "seed": 9,
      "mode": "collected",
      "path_sources": 128,
      "output_dir": "out"
    })");
    const auto c = ExperimentConfig::from_json(j, "/base");
    REQUIRE(c.datasets.size() == 2);
    CHECK(*c.datasets[0].path == fs::path("/base/data/cora.txt"));
    CHECK(c.datasets[0].category == "citation");
    CHECK(c.datasets[1].generator->rewire == 0.2);
    CHECK(c.datasets[1].generator->ring_degree == 16);
    REQUIRE(c.samplers.size() == 3);
    CHECK(c.samplers[1].rd_seeds == 5);
    CHECK(c.samplers[1].rd_top == 0.2);
    CHECK(*c.samplers[2].jump_probability == 0.1);
    CHECK(c.fractions == std::vector<double>{0.05, 0.1});
    CHECK(c.repetitions == 3);
    CHECK(c.mode == FinalizeMode::collected);
    CHECK(c.paths.sources == 128);
    CHECK(c.output_dir == fs::path("/base/out"));

    const auto echo = ExperimentConfig::from_json(c.to_json());
    CHECK(echo.to_json() == c.to_json());
  }

  TEST_CASE("defaults cover all five methods and the standard fractions") {
    const auto c = ExperimentConfig::from_json(
        json::parse(R"({"datasets": [{"name": "a", "path": "/x"}]})"));
    CHECK(c.samplers.size() == 5);
    CHECK(c.fractions == std::vector<double>{0.02, 0.04, 0.06, 0.08, 0.1});
    CHECK(c.repetitions == 10);
    CHECK_FALSE(c.mode);  // each method's own edge policy
    const auto native = ExperimentConfig::from_json(
        json::parse(R"({"datasets": [{"name": "a", "path": "/x"}], "mode": "native"})"));
    CHECK_FALSE(native.mode);
    CHECK(native.to_json()["mode"] == "native");
  }

  TEST_CASE("invalid configs are rejected") {
    auto bad = [](const char* text) {
      return ExperimentConfig::from_json(json::parse(text));
    };
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "a", "path": "x"}, {"name": "a", "path": "y"}]})"),
                    ConfigError);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "a", "path": "x"}], "fractions": [0]})"),
                    ConfigError);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "a", "path": "x"}], "fractions": [1.5]})"),
                    ConfigError);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "a", "path": "x"}], "repetitions": 0})"),
                    ConfigError);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "a"}]})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "a,b", "path": "x"}]})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"datasets": [{"name": "a", "path": "x"}], "samplers": ["bfs"]})"),
                    ConfigError);
    CHECK_THROWS_AS(
        bad(R"({"datasets": [{"name": "a", "path": "x"}], "samplers": [{"method": "rd", "rd_top": 0}]})"),
        ConfigError);
  }

  TEST_CASE("aggregate: exact samples give ratio 1 and RMSE 0") {
    std::vector<ReportRow> rows;
    for (std::size_t rep = 1; rep <= 3; ++rep) rows.push_back(row("d", "ls", 0.02, rep, "degree", 4.0));
    OriginalValues orig{{"d", {{"degree", 4.0}}}};
    const auto t = aggregate(rows, {}, orig);
    REQUIRE(t.point_stats.size() == 1);
    CHECK(*t.point_stats[0].ratio_mean == 1.0);
    CHECK(*t.point_stats[0].ci95 == 0.0);
    REQUIRE(t.rmse.size() == 1);
    CHECK(*t.rmse[0].rmse == 0.0);
    CHECK(*summary_value(t, "rmse", "degree", "ls") == 0.0);
  }

  TEST_CASE("aggregate: RMSE over per-fraction means, averaged across datasets") {
    std::vector<ReportRow> rows;
    // Dataset a: fraction means 1.1 and 0.9 around truth 1.0 -> RMSE 0.1.
    for (std::size_t rep = 1; rep <= 2; ++rep) {
      rows.push_back(row("a", "fs", 0.02, rep, "clustering", rep == 1 ? 1.0 : 1.2));
      rows.push_back(row("a", "fs", 0.04, rep, "clustering", 0.9));
    }
    // Dataset b: single cell 0.3 off.
    rows.push_back(row("b", "fs", 0.02, 1, "clustering", 0.7));
    OriginalValues orig{{"a", {{"clustering", 1.0}}}, {"b", {{"clustering", 0.4}}}};
    const auto t = aggregate(rows, {}, orig);
    REQUIRE(t.rmse.size() == 2);
    CHECK(*t.rmse[0].rmse == doctest::Approx(0.1));
    CHECK(*t.rmse[1].rmse == doctest::Approx(0.3));
    CHECK(*summary_value(t, "rmse", "clustering", "fs") == doctest::Approx(0.2));
    // Per-repetition RMSEs for a: sqrt((0^2 + 0.1^2)/2) and sqrt((0.2^2 + 0.1^2)/2).
    const double r1 = std::sqrt(0.01 / 2), r2 = std::sqrt(0.05 / 2);
    CHECK(t.rmse[0].stddev == doctest::Approx(std::abs(r1 - r2) / std::sqrt(2.0)));
  }

  TEST_CASE("aggregate averages fifteen per-dataset RMSEs to two decimals") {
    // Average clustering RMSE of FS over fifteen datasets.
    const double fs_column[] = {0.55, 0.55, 0.77, 0.28, 0.15, 0.09, 0.25, 0.30,
                                0.27, 0.37, 0.00, 0.15, 0.10, 0.31, 0.38};
    std::vector<ReportRow> rows;
    OriginalValues orig;
    for (std::size_t i = 0; i < 15; ++i) {
      const auto name = "d" + std::to_string(i);
      orig[name]["clustering"] = 0.1;
      rows.push_back(row(name, "fs", 0.02, 1, "clustering", 0.1 + fs_column[i]));
    }
    const auto t = aggregate(rows, {}, orig);
    const double avg = *summary_value(t, "rmse", "clustering", "fs");
    CHECK(std::round(avg * 100) / 100 == doctest::Approx(0.30));
  }

  TEST_CASE("aggregate: assortativity ratios use the shifted range") {
    std::vector<ReportRow> rows{row("d", "xs", 0.02, 1, "assortativity", -0.05)};
    OriginalValues orig{{"d", {{"assortativity", -0.05}}}};
    CHECK(*aggregate(rows, {}, orig).point_stats[0].ratio_mean == 1.0);
  }

  TEST_CASE("aggregate reports gaps") {
    std::vector<ReportRow> rows{row("d", "hj", 0.02, 1, "modularity", std::nullopt),
                                row("d", "hj", 0.02, 2, "modularity", 0.5)};
    ReportRow err = row("d", "hj", 0.04, 1, "error", std::nullopt);
    err.error = "boom";
    rows.push_back(err);
    OriginalValues orig{{"d", {{"modularity", 0.5}}}};
    const auto t = aggregate(rows, {}, orig);
    CHECK(t.gaps == 2);
    CHECK(*t.rmse[0].rmse == 0.0);

    const auto none = aggregate({row("x", "hj", 0.02, 1, "degree", 3.0)}, {}, {});
    CHECK(none.gaps >= 1);
    CHECK_FALSE(none.rmse[0].rmse);
  }

  TEST_CASE("report json round trip") {
    PropertyReport r;
    r.nodes = 3;
    r.edges = 2;
    r.avg_degree = 4.0 / 3;
    r.avg_path_length = 1.5;
    r.assortativity = std::nullopt;
    r.modularity = 0.1;
    r.degree_distribution = Distribution::from_pmf({1, 2}, {2.0 / 3, 1.0 / 3});
    const auto back = report_from_json(report_to_json(r));
    CHECK(back.avg_degree == r.avg_degree);
    CHECK(*back.avg_path_length == 1.5);
    CHECK_FALSE(back.assortativity);
    CHECK(back.degree_distribution.pmf() == r.degree_distribution.pmf());
    CHECK(back.path_length_distribution.empty());
  }

  TEST_CASE("run_experiment writes a complete, reproducible bundle") {
    const auto dir = scratch("bundle");
    auto cfg = tiny_config(dir / "one");
    cfg.cache_dir = dir / "cache";
    const auto r = run_experiment(cfg);
    CHECK(r.failed_datasets.empty());
    CHECK(r.error_rows == 0);
    // datasets x methods x fractions x repetitions x 6
    CHECK(r.rows.size() == 2 * 2 * 2 * 2 * 6);
    CHECK(r.jsd_rows.size() == 2 * 2 * 2 * 3);

    const auto out = cfg.output_dir;
    for (const char* f : {"raw.csv", "point_stats.csv", "rmse.csv", "jsd.csv", "summary.csv",
                          "meta.json", "originals.csv", "jsd_raw.csv", "timings.csv"})
      CHECK_MESSAGE(fs::exists(out / f), f);
    for (const char* d : {"sw", "mm"})
      for (const char* m : {"ls", "fs"})
        for (const char* p : {"degree", "clustering", "path_length"}) {
          const auto file = out / (std::string(d) + "." + m + "." + p + ".dist.csv");
          CHECK_MESSAGE(fs::exists(file), file.string());
          CHECK(slurp(file).rfind("support,pmf,ecdf\n", 0) == 0);
        }
    CHECK(fs::exists(out / "originals" / "sw.degree.dist.csv"));
    CHECK(csv_rows(out / "raw.csv").size() == r.rows.size());
    const auto meta = json::parse(slurp(out / "meta.json"));
    CHECK(meta.contains("config"));
    CHECK(meta["datasets"].size() == 2);

    // Same config, different worker count, cached originals: identical bytes.
    auto again = tiny_config(dir / "two");
    again.cache_dir = dir / "cache";
    again.workers = 1;
    run_experiment(again);
    for (const char* f : {"raw.csv", "point_stats.csv", "rmse.csv", "jsd.csv", "summary.csv",
                          "originals.csv", "jsd_raw.csv", "sw.ls.degree.dist.csv",
                          "mm.fs.path_length.dist.csv"})
      CHECK_MESSAGE(slurp(out / f) == slurp(dir / "two" / f), f);

    // Every point statistic is the mean of the ratios in raw.csv.
    std::map<std::pair<std::string, std::string>, double> originals;
    for (const auto& f : csv_rows(out / "originals.csv"))
      if (f.size() > 2 && !f[2].empty()) originals[{f[0], f[1]}] = std::stod(f[2]);
    std::map<std::string, std::pair<double, int>> sums;
    for (const auto& f : csv_rows(out / "raw.csv")) {
      if (f.size() < 6 || f[5].empty()) continue;
      const double shift = f[4] == "assortativity" ? 1.0 : 0.0;
      const double truth = originals.at({f[0], f[4]});
      auto& [s, k] = sums[f[0] + "," + f[1] + "," + f[2] + "," + f[4]];
      s += (std::stod(f[5]) + shift) / (truth + shift);
      ++k;
    }
    std::size_t compared = 0;
    for (const auto& f : csv_rows(out / "point_stats.csv")) {
      if (f.size() < 5 || f[4].empty()) continue;
      const auto& [s, k] = sums.at(f[0] + "," + f[1] + "," + f[2] + "," + f[3]);
      CHECK(std::stod(f[4]) == doctest::Approx(s / k).epsilon(1e-9));
      ++compared;
    }
    CHECK(compared > 0);

    // Re-aggregation from the CSV files gives the same tables.
    const auto re = dir / "re";
    aggregate_files(out / "raw.csv", re);
    for (const char* f : {"point_stats.csv", "rmse.csv", "jsd.csv", "summary.csv"})
      CHECK_MESSAGE(slurp(out / f) == slurp(re / f), f);
    fs::remove_all(dir);
  }

  TEST_CASE("failures are recorded and the sweep continues") {
    const auto dir = scratch("failures");
    auto cfg = tiny_config(dir / "out");
    cfg.samplers.resize(1);
    cfg.fractions = {0.02};
    cfg.repetitions = 1;
    cfg.datasets.push_back({"missing", "real", dir / "does-not-exist.txt", std::nullopt});
    GeneratorConfig small;
    small.model = GeneratorModel::small_world;
    small.nodes = 20;
    small.ring_degree = 4;
    cfg.datasets.push_back({"small", "synthetic", std::nullopt, small});  // 0.02 * 20 < 1
    const auto r = run_experiment(cfg);
    CHECK(r.failed_datasets == std::vector<std::string>{"missing"});
    CHECK(r.error_rows == 1);
    std::size_t errors = 0, values = 0;
    for (const auto& row : r.rows) {
      if (row.property == "error") {
        ++errors;
        CHECK(row.dataset == "small");
        CHECK_FALSE(row.error.empty());
      } else {
        ++values;
      }
    }
    CHECK(errors == 1);
    CHECK(values == 2 * 6);
    CHECK(r.tables.gaps >= 1);
    const auto meta = json::parse(slurp(dir / "out" / "meta.json"));
    CHECK(meta["failed_datasets"].size() == 1);
    fs::remove_all(dir);
  }
}
