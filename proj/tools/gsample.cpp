// Command-line front end: generate, sample, properties, calibrate, bench.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsample/generators.hpp"
#include "gsample/harness.hpp"
#include "gsample/properties.hpp"
#include "gsample/samplers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gsample;

namespace {

json telemetry_json(const Telemetry& t) {
  json j{{"steps", t.steps}, {"restarts", t.restarts}, {"trimmed", t.trimmed}};
  if (t.walkers) j["walkers"] = t.walkers;
  if (t.proposals) {
    j["proposals"] = t.proposals;
    j["acceptances"] = t.acceptances;
  }
  if (t.jump_probability > 0 || t.estimated_degree > 0) {
    j["jumps"] = t.jumps;
    j["estimated_degree"] = t.estimated_degree;
    j["jump_probability"] = t.jump_probability;
  }
  return j;
}

std::string_view step_name(StepKind k) {
  switch (k) {
    case StepKind::seed: return "seed";
    case StepKind::restart: return "restart";
    case StepKind::traverse: return "traverse";
    case StepKind::reject: return "reject";
    case StepKind::jump: return "jump";
  }
  return "?";
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traversal-based graph sampling and evaluation"};
  app.require_subcommand(1);

  // generate
  GeneratorConfig gen;
  std::string gen_model, gen_output;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic graph");
  generate_cmd->add_option("--model", gen_model, "ff, sw or mm")
      ->required()
      ->check(CLI::IsMember({"ff", "sw", "mm"}));
  generate_cmd->add_option("--nodes", gen.nodes, "Node count")->required();
  generate_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  generate_cmd->add_option("--pf", gen.forward_burn, "FF forward-burn probability")
      ->capture_default_str();
  generate_cmd->add_option("--k", gen.ring_degree, "SW ring degree")->capture_default_str();
  generate_cmd->add_option("--pr", gen.rewire, "SW rewiring probability")->capture_default_str();
  generate_cmd->add_option("--kmm", gen.edges_per_node, "MM edges per new node")
      ->capture_default_str();
  generate_cmd->add_option("--beta", gen.preferential, "MM preferential fraction")
      ->capture_default_str();
  generate_cmd->add_option("-o,--output", gen_output, "Output file (default stdout)");

  // calibrate
  double cal_target = 16.31;
  std::size_t cal_nodes = 10000;
  std::uint64_t cal_seed = 1;
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "Bisect the forest-fire burn probability");
  calibrate_cmd->add_option("--target", cal_target, "Target average degree")
      ->capture_default_str();
  calibrate_cmd->add_option("--nodes", cal_nodes, "Node count")->capture_default_str();
  calibrate_cmd->add_option("--seed", cal_seed, "RNG seed")->capture_default_str();

  // sample
  SamplerConfig sc;
  std::string sample_input, sample_method = "ls", sample_mode = "induced", sample_output;
  double alpha = -1;
  bool with_trace = false;
  auto* sample_cmd = app.add_subcommand("sample", "Sample a graph");
  sample_cmd->add_option("--input", sample_input, "Edge-list file")->required();
  sample_cmd->add_option("--method", sample_method, "fs, xs, rd, ls or hj")
      ->check(CLI::IsMember({"fs", "xs", "rd", "ls", "hj"}))
      ->capture_default_str();
  sample_cmd->add_option("--phi", sc.fraction, "Sampling fraction")->required();
  sample_cmd->add_option("--seed", sc.seed, "RNG seed")->capture_default_str();
  sample_cmd->add_option("--mode", sample_mode, "collected, induced, or native (LS induced, others collected)")
      ->check(CLI::IsMember({"collected", "induced", "native"}))
      ->capture_default_str();
  sample_cmd->add_option("--walkers", sc.walkers, "FS walker count")->capture_default_str();
  sample_cmd->add_option("--rd-seeds", sc.rd_seeds, "RD seed count")->capture_default_str();
  sample_cmd->add_option("--rd-top", sc.rd_top, "RD top fraction")->capture_default_str();
  sample_cmd->add_option("--alpha", alpha, "HJ jump probability (default 1/avg degree)");
  sample_cmd->add_option("--degree-probes", sc.degree_probes, "HJ degree probes")
      ->capture_default_str();
  sample_cmd->add_option("--jump-depth", sc.jump_depth, "HJ jump-list BFS depth")
      ->capture_default_str();
  sample_cmd->add_flag("--trace", with_trace, "Include the step log in the sidecar");
  sample_cmd->add_option("-o,--output", sample_output,
                         "Edge-list output; the sidecar goes to <output>.json")
      ->required();

  // properties
  std::string prop_input, prop_output, csv_prefix;
  bool exact_paths = false, exclude_low = false;
  std::size_t path_sources = 256;
  std::uint64_t prop_seed = 1;
  auto* properties_cmd = app.add_subcommand("properties", "Compute graph properties");
  properties_cmd->add_option("--input", prop_input, "Edge-list file")->required();
  auto* exact_opt = properties_cmd->add_flag("--exact-paths", exact_paths, "All-pairs BFS");
  properties_cmd->add_option("--path-sources", path_sources, "BFS sources for path lengths")
      ->capture_default_str()
      ->excludes(exact_opt);
  properties_cmd->add_option("--seed", prop_seed, "Seed for path sources and communities")
      ->capture_default_str();
  properties_cmd->add_flag("--exclude-low-degree", exclude_low,
                           "Leave degree <= 1 nodes out of the clustering average");
  properties_cmd->add_option("--csv-prefix", csv_prefix,
                             "Write <prefix>.<property>.dist.csv per distribution");
  properties_cmd->add_option("-o,--output", prop_output, "JSON output (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark sweeps");
  bench_cmd->require_subcommand(1);
  std::string config_path;
  unsigned workers = 0;
  auto* run_cmd = bench_cmd->add_subcommand("run", "Run a sweep from a JSON config");
  run_cmd->add_option("--config", config_path, "Config file")->required()->check(
      CLI::ExistingFile);
  run_cmd->add_option("--workers", workers, "Worker threads (default: config or all cores)");
  std::string raw_path, agg_out;
  auto* agg_cmd = bench_cmd->add_subcommand("aggregate", "Rebuild tables from raw.csv");
  agg_cmd->add_option("--raw", raw_path, "raw.csv")->required()->check(CLI::ExistingFile);
  agg_cmd->add_option("--out", agg_out, "Output directory (default: next to raw.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate_cmd) {
      gen.model = parse_generator_model(gen_model);
      const Graph g = generate(gen);
      std::ostringstream out;
      write_edge_list(out, g);
      write_output(gen_output, out.str());
      std::fprintf(stderr, "generated %zu nodes, %zu edges\n", g.node_count(), g.edge_count());
    } else if (*calibrate_cmd) {
      const auto r = calibrate_forest_fire(cal_target, cal_nodes, cal_seed);
      std::cout << json{{"forward_burn", r.parameter},
                        {"average_degree", r.average_degree},
                        {"iterations", r.iterations}}
                       .dump(2)
                << '\n';
    } else if (*sample_cmd) {
      sc.method = parse_method(sample_method);
      sc.mode = sample_mode == "native" ? native_mode(sc.method) : parse_finalize_mode(sample_mode);
      if (alpha >= 0) sc.jump_probability = alpha;
      sc.record_trace = with_trace;
      const auto loaded = load_edge_list(fs::path(sample_input));
      const Graph& g = loaded.graph;
      const Sample s = sample_graph(g, sc);

      std::ofstream out(sample_output, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + sample_output);
      out << "# sample of " << sample_input << " nodes " << s.nodes.size() << " edges "
          << s.edges.size() << '\n';
      for (const auto& [u, v] : s.edges) out << g.original_id(u) << ' ' << g.original_id(v) << '\n';

      json nodes = json::array();
      for (auto v : s.nodes) nodes.push_back(g.original_id(v));
      json side{{"input", sample_input},
                {"config",
                 {{"method", std::string(to_string(sc.method))},
                  {"phi", sc.fraction},
                  {"seed", sc.seed},
                  {"mode", std::string(to_string(sc.mode))},
                  {"walkers", sc.walkers},
                  {"rd_seeds", sc.rd_seeds},
                  {"rd_top", sc.rd_top},
                  {"jump_probability",
                   sc.jump_probability ? json(*sc.jump_probability) : json(nullptr)},
                  {"degree_probes", sc.degree_probes},
                  {"jump_depth", sc.jump_depth}}},
                {"graph", {{"nodes", g.node_count()}, {"edges", g.edge_count()}}},
                {"budget", s.budget},
                {"sampled_nodes", s.nodes.size()},
                {"sampled_edges", s.edges.size()},
                {"telemetry", telemetry_json(s.telemetry)},
                {"nodes", nodes}};
      if (with_trace) {
        json steps = json::array();
        for (const auto& st : s.telemetry.trace) {
          json e{{"kind", std::string(step_name(st.kind))}, {"to", g.original_id(st.to)}};
          if (st.from != invalid_node) e["from"] = g.original_id(st.from);
          steps.push_back(std::move(e));
        }
        side["trace"] = std::move(steps);
      }
      write_output(sample_output + ".json", side.dump(2) + "\n");
    } else if (*properties_cmd) {
      const auto loaded = load_edge_list(fs::path(prop_input));
      PropertyOptions opts;
      opts.paths.mode = exact_paths ? PathMode::exact : PathMode::sampled;
      if (!exact_paths && loaded.graph.node_count() <= opts.paths.exact_threshold &&
          properties_cmd->count("--path-sources") == 0)
        opts.paths.mode = PathMode::automatic;
      opts.paths.sources = path_sources;
      opts.paths.seed = prop_seed;
      opts.community_seed = prop_seed;
      opts.clustering.exclude_low_degree = exclude_low;
      const PropertyReport r = compute_properties(loaded.graph, opts);
      json j = report_to_json(r);
      j["input"] = prop_input;
      j["load"] = {{"raw_lines", loaded.stats.raw_lines},
                   {"comment_lines", loaded.stats.comment_lines},
                   {"self_loops_dropped", loaded.stats.self_loops},
                   {"duplicates_merged", loaded.stats.duplicates}};
      write_output(prop_output, j.dump(2) + "\n");
      if (!csv_prefix.empty()) {
        const std::pair<const char*, const Distribution*> dists[] = {
            {"degree", &r.degree_distribution},
            {"clustering", &r.clustering_distribution},
            {"path_length", &r.path_length_distribution}};
        for (const auto& [name, d] : dists) {
          if (d->empty()) continue;
          std::ofstream out(csv_prefix + "." + name + ".dist.csv", std::ios::binary);
          d->write_csv(out);
        }
      }
    } else if (*run_cmd) {
      std::ifstream in(config_path);
      const auto base = fs::absolute(fs::path(config_path)).parent_path();
      ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(in), base);
      if (run_cmd->count("--workers")) cfg.workers = workers;
      const RunResult r = run_experiment(cfg);
      std::fprintf(stderr, "%zu rows, %zu error rows, %zu aggregation gaps -> %s\n",
                   r.rows.size(), r.error_rows, r.tables.gaps, cfg.output_dir.c_str());
      for (const auto& d : r.failed_datasets)
        std::fprintf(stderr, "dataset failed to load: %s\n", d.c_str());
      if (!r.failed_datasets.empty() || r.error_rows) return 3;
    } else if (*agg_cmd) {
      const fs::path raw(raw_path);
      const fs::path out = agg_out.empty() ? raw.parent_path() : fs::path(agg_out);
      const Tables t = aggregate_files(raw, out);
      std::fprintf(stderr, "%zu rmse entries, %zu jsd entries, %zu gaps -> %s\n",
                   t.rmse.size(), t.jsd.size(), t.gaps, out.c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
