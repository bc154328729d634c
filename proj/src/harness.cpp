#include "gsample/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gsample/metrics.hpp"
#include "gsample/rng.hpp"

namespace gsample {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* version = "gsample 1.0.0";

std::string num(double x, int precision = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

std::string num(const std::optional<double>& x, int precision = 17) {
  return x ? num(*x, precision) : std::string();
}

std::string phi_str(double phi) { return num(phi, 10); }

std::optional<double> parse_num(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::string sanitize(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (!line.empty()) rows.push_back(split_csv(line));
  }
  return rows;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

bool same_phi(double a, double b) { return std::abs(a - b) < 1e-12; }

json dist_to_json(const Distribution& d) {
  return {{"support", d.support()}, {"pmf", d.pmf()}};
}

Distribution dist_from_json(const json& j) {
  if (j.is_null() || j.at("support").empty()) return {};
  return Distribution::from_pmf(j.at("support").get<std::vector<double>>(),
                                j.at("pmf").get<std::vector<double>>());
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

constexpr Property distribution_properties[] = {Property::degree, Property::clustering,
                                                Property::path_length};

const Distribution& report_distribution(const PropertyReport& r, Property p) {
  switch (p) {
    case Property::degree: return r.degree_distribution;
    case Property::clustering: return r.clustering_distribution;
    default: return r.path_length_distribution;
  }
}

json sampler_to_json(const SamplerConfig& s) {
  json j{{"method", std::string(to_string(s.method))}};
  switch (s.method) {
    case Method::frontier: j["walkers"] = s.walkers; break;
    case Method::rank_degree:
      j["rd_seeds"] = s.rd_seeds;
      j["rd_top"] = s.rd_top;
      break;
    case Method::hybrid_jump:
      j["jump_probability"] = opt_json(s.jump_probability);
      j["degree_probes"] = s.degree_probes;
      j["jump_depth"] = s.jump_depth;
      break;
    default: break;
  }
  return j;
}

SamplerConfig sampler_from_json(const json& j) {
  SamplerConfig s;
  if (j.is_string()) {
    s.method = parse_method(j.get<std::string>());
    return s;
  }
  s.method = parse_method(j.at("method").get<std::string>());
  s.walkers = j.value("walkers", s.walkers);
  s.rd_seeds = j.value("rd_seeds", s.rd_seeds);
  s.rd_top = j.value("rd_top", s.rd_top);
  if (j.contains("jump_probability") && !j["jump_probability"].is_null())
    s.jump_probability = j["jump_probability"].get<double>();
  s.degree_probes = j.value("degree_probes", s.degree_probes);
  s.jump_depth = j.value("jump_depth", s.jump_depth);
  return s;
}

json generator_to_json(const GeneratorConfig& g) {
  json j{{"model", std::string(to_string(g.model))}, {"nodes", g.nodes}, {"seed", g.seed}};
  switch (g.model) {
    case GeneratorModel::forest_fire: j["forward_burn"] = g.forward_burn; break;
    case GeneratorModel::small_world:
      j["ring_degree"] = g.ring_degree;
      j["rewire"] = g.rewire;
      break;
    case GeneratorModel::mixed:
      j["edges_per_node"] = g.edges_per_node;
      j["preferential"] = g.preferential;
      break;
  }
  return j;
}

GeneratorConfig generator_from_json(const json& j) {
  GeneratorConfig g;
  g.model = parse_generator_model(j.at("model").get<std::string>());
  g.nodes = j.at("nodes").get<std::size_t>();
  g.seed = j.value("seed", g.seed);
  g.forward_burn = j.value("forward_burn", g.forward_burn);
  g.ring_degree = j.value("ring_degree", g.ring_degree);
  g.rewire = j.value("rewire", g.rewire);
  g.edges_per_node = j.value("edges_per_node", g.edges_per_node);
  g.preferential = j.value("preferential", g.preferential);
  return g;
}

std::string_view path_mode_name(PathMode m) {
  switch (m) {
    case PathMode::exact: return "exact";
    case PathMode::sampled: return "sampled";
    default: return "automatic";
  }
}

PathMode parse_path_mode(std::string_view s) {
  if (s == "exact") return PathMode::exact;
  if (s == "sampled") return PathMode::sampled;
  if (s == "automatic" || s == "auto") return PathMode::automatic;
  throw ConfigError("unknown path mode '" + std::string(s) + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw ConfigError("experiment has no datasets");
  if (samplers.empty()) throw ConfigError("experiment has no samplers");
  if (fractions.empty()) throw ConfigError("experiment has no sampling fractions");
  for (double f : fractions)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("sampling fractions must be in (0, 1]");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  std::set<std::string> names;
  for (const auto& d : datasets) {
    if (d.name.empty() || d.name.find_first_of(",/\\\n ") != std::string::npos)
      throw ConfigError("invalid dataset name '" + d.name + "'");
    if (!names.insert(d.name).second) throw ConfigError("duplicate dataset name '" + d.name + "'");
    if (d.path.has_value() == d.generator.has_value())
      throw ConfigError("dataset '" + d.name + "' needs exactly one of path or generator");
    if (d.generator) d.generator->validate();
  }
  for (const auto& s : samplers) {
    SamplerConfig probe = s;
    probe.fraction = 1.0;
    probe.validate(std::max<std::size_t>(1, probe.start_nodes.size()));
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  for (const auto& d : j.at("datasets")) {
    DatasetSpec spec;
    spec.name = d.at("name").get<std::string>();
    spec.category = d.value("category", std::string());
    if (d.contains("path")) {
      fs::path p = d["path"].get<std::string>();
      spec.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    if (d.contains("generator")) spec.generator = generator_from_json(d["generator"]);
    c.datasets.push_back(std::move(spec));
  }
  if (j.contains("samplers")) {
    for (const auto& s : j["samplers"]) c.samplers.push_back(sampler_from_json(s));
  } else {
    for (auto m : all_methods) {
      SamplerConfig s;
      s.method = m;
      c.samplers.push_back(s);
    }
  }
  if (j.contains("fractions")) c.fractions = j["fractions"].get<std::vector<double>>();
  c.repetitions = j.value("repetitions", c.repetitions);
  c.seed = j.value("seed", c.seed);
  if (j.contains("mode")) {
    const auto m = j["mode"].get<std::string>();
    c.mode = m == "native" ? std::nullopt : std::optional(parse_finalize_mode(m));
  }
  if (j.contains("path_mode")) c.paths.mode = parse_path_mode(j["path_mode"].get<std::string>());
  c.paths.sources = j.value("path_sources", c.paths.sources);
  c.distribution_fraction = j.value("distribution_fraction", c.distribution_fraction);
  if (j.contains("output_dir")) {
    fs::path p = j["output_dir"].get<std::string>();
    c.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (j.contains("cache_dir")) {
    fs::path p = j["cache_dir"].get<std::string>();
    c.cache_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  c.workers = j.value("workers", c.workers);
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json ds = json::array();
  for (const auto& d : datasets) {
    json e{{"name", d.name}, {"category", d.category}};
    if (d.path) e["path"] = d.path->string();
    if (d.generator) e["generator"] = generator_to_json(*d.generator);
    ds.push_back(std::move(e));
  }
  json ss = json::array();
  for (const auto& s : samplers) ss.push_back(sampler_to_json(s));
  return {{"datasets", ds},
          {"samplers", ss},
          {"fractions", fractions},
          {"repetitions", repetitions},
          {"seed", seed},
          {"mode", mode ? std::string(to_string(*mode)) : "native"},
          {"path_mode", std::string(path_mode_name(paths.mode))},
          {"path_sources", paths.sources},
          {"distribution_fraction", distribution_fraction},
          {"output_dir", output_dir.string()},
          {"workers", workers}};
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& dataset, Method method,
                        double fraction, std::size_t repetition) {
  std::uint64_t h = mix64(master);
  h = hash_combine(h, fnv1a(dataset));
  h = hash_combine(h, fnv1a(to_string(method)));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(fraction));
  h = hash_combine(h, repetition);
  return h;
}

// ---------------------------------------------------------------------------
// Report serialization

json report_to_json(const PropertyReport& r) {
  return {{"nodes", r.nodes},
          {"edges", r.edges},
          {"avg_degree", r.avg_degree},
          {"avg_clustering", r.avg_clustering},
          {"avg_path_length", opt_json(r.avg_path_length)},
          {"global_clustering", r.global_clustering},
          {"assortativity", opt_json(r.assortativity)},
          {"modularity", opt_json(r.modularity)},
          {"flags",
           {{"global_clustering_defined", r.global_clustering_defined},
            {"path_length_exact", r.path_length_exact},
            {"path_sources", r.path_sources},
            {"lcc_fraction", r.lcc_fraction},
            {"communities", r.communities}}},
          {"degree_distribution", dist_to_json(r.degree_distribution)},
          {"clustering_distribution", dist_to_json(r.clustering_distribution)},
          {"path_length_distribution", dist_to_json(r.path_length_distribution)}};
}

PropertyReport report_from_json(const json& j) {
  PropertyReport r;
  r.nodes = j.at("nodes").get<std::size_t>();
  r.edges = j.at("edges").get<std::size_t>();
  r.avg_degree = j.at("avg_degree").get<double>();
  r.avg_clustering = j.at("avg_clustering").get<double>();
  r.avg_path_length = opt_from(j.at("avg_path_length"));
  r.global_clustering = j.at("global_clustering").get<double>();
  r.assortativity = opt_from(j.at("assortativity"));
  r.modularity = opt_from(j.at("modularity"));
  const auto& f = j.at("flags");
  r.global_clustering_defined = f.at("global_clustering_defined").get<bool>();
  r.path_length_exact = f.at("path_length_exact").get<bool>();
  r.path_sources = f.at("path_sources").get<std::size_t>();
  r.lcc_fraction = f.at("lcc_fraction").get<double>();
  r.communities = f.at("communities").get<std::size_t>();
  r.degree_distribution = dist_from_json(j.at("degree_distribution"));
  r.clustering_distribution = dist_from_json(j.at("clustering_distribution"));
  r.path_length_distribution = dist_from_json(j.at("path_length_distribution"));
  return r;
}

// ---------------------------------------------------------------------------
// Aggregation

Tables aggregate(const std::vector<ReportRow>& rows, const std::vector<JsdRow>& jsd_rows,
                 const OriginalValues& originals, std::vector<std::string> methods) {
  Tables t;
  std::vector<std::string> datasets;
  auto remember = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : rows) {
    remember(datasets, r.dataset);
    remember(methods, r.method);
  }
  for (const auto& r : jsd_rows) {
    remember(datasets, r.dataset);
    remember(methods, r.method);
  }
  t.methods = methods;

  // (dataset, method, property) -> phi -> repetition -> value
  using Cells = std::map<double, std::map<std::size_t, std::optional<double>>>;
  std::map<std::tuple<std::string, std::string, std::string>, Cells> grouped;
  for (const auto& r : rows) {
    if (!r.error.empty() || r.property == "error") {
      ++t.gaps;
      continue;
    }
    grouped[{r.dataset, r.method, r.property}][r.fraction][r.repetition] = r.value;
  }

  auto original = [&](const std::string& d, const std::string& p) -> std::optional<double> {
    auto it = originals.find(d);
    if (it == originals.end()) return std::nullopt;
    auto jt = it->second.find(p);
    return jt == it->second.end() ? std::nullopt : jt->second;
  };

  for (const auto& d : datasets)
    for (const auto& m : methods)
      for (auto prop : all_properties) {
        const std::string p(to_string(prop));
        auto it = grouped.find({d, m, p});
        if (it == grouped.end()) continue;
        const auto truth = original(d, p);
        const double offset = prop == Property::assortativity ? 1.0 : 0.0;

        std::vector<double> phi_means;
        std::map<std::size_t, std::vector<double>> per_rep;
        std::size_t missing = 0;
        for (const auto& [phi, reps] : it->second) {
          PointStat ps{d, m, p, phi, std::nullopt, std::nullopt, 0};
          std::vector<double> ratios, values;
          for (const auto& [rep, v] : reps) {
            if (!v) {
              ++missing;
              continue;
            }
            values.push_back(*v);
            per_rep[rep].push_back(*v);
            if (truth)
              if (auto ratio = scaling_ratio(*v, *truth, offset)) ratios.push_back(*ratio);
          }
          if (!ratios.empty()) {
            const auto ci = confidence_interval_95(ratios);
            ps.ratio_mean = ci.mean;
            ps.ci95 = ci.half_width;
            ps.count = ratios.size();
          } else {
            ++t.gaps;
          }
          t.point_stats.push_back(ps);
          if (!values.empty()) phi_means.push_back(mean(values));
        }
        t.gaps += missing;

        RmseEntry e{d, m, p, std::nullopt, 0.0, phi_means.size()};
        if (truth && !phi_means.empty()) {
          e.rmse = rmse(phi_means, *truth);
          std::vector<double> rep_rmse;
          for (const auto& [rep, vals] : per_rep)
            if (vals.size() == it->second.size()) rep_rmse.push_back(rmse(vals, *truth));
          e.stddev = stddev(rep_rmse);
        } else {
          ++t.gaps;
        }
        t.rmse.push_back(e);
      }

  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> jsd_groups;
  for (const auto& r : jsd_rows) {
    auto& v = jsd_groups[{r.dataset, r.method, r.property}];
    if (r.value) v.push_back(*r.value);
    else ++t.gaps;
  }
  for (const auto& d : datasets)
    for (const auto& m : methods)
      for (auto prop : distribution_properties) {
        const std::string p(to_string(prop));
        auto it = jsd_groups.find({d, m, p});
        if (it == jsd_groups.end()) continue;
        JsdEntry e{d, m, p, std::nullopt, 0.0, it->second.size()};
        if (!it->second.empty()) {
          e.mean = mean(it->second);
          e.stddev = stddev(it->second);
        }
        t.jsd.push_back(e);
      }

  auto summarize = [&](const std::string& metric, const std::string& p, auto const& entries,
                       auto value_of) {
    SummaryEntry s{metric, p, {}};
    for (const auto& m : methods) {
      std::vector<double> vals;
      for (const auto& e : entries)
        if (e.method == m && e.property == p)
          if (auto v = value_of(e)) vals.push_back(*v);
      s.by_method[m] = vals.empty() ? std::nullopt : std::optional<double>(mean(vals));
    }
    t.summary.push_back(std::move(s));
  };
  for (auto prop : all_properties)
    summarize("rmse", std::string(to_string(prop)), t.rmse,
              [](const RmseEntry& e) { return e.rmse; });
  for (auto prop : distribution_properties)
    summarize("jsd", std::string(to_string(prop)), t.jsd,
              [](const JsdEntry& e) { return e.mean; });
  return t;
}

std::optional<double> summary_value(const Tables& t, const std::string& metric,
                                    const std::string& property, const std::string& method) {
  for (const auto& s : t.summary)
    if (s.metric == metric && s.property == property) {
      auto it = s.by_method.find(method);
      return it == s.by_method.end() ? std::nullopt : it->second;
    }
  return std::nullopt;
}

void write_tables(const Tables& t, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "point_stats.csv");
    out << "dataset,method,phi,property,scaling_ratio_mean,ci95\n";
    for (const auto& p : t.point_stats)
      out << p.dataset << ',' << p.method << ',' << phi_str(p.fraction) << ',' << p.property << ','
          << num(p.ratio_mean, 10) << ',' << num(p.ci95, 10) << '\n';
  }
  {
    auto out = open_out(out_dir / "rmse.csv");
    out << "dataset,method,property,rmse,stddev\n";
    for (const auto& e : t.rmse)
      out << e.dataset << ',' << e.method << ',' << e.property << ',' << num(e.rmse, 10) << ','
          << num(e.stddev, 10) << '\n';
  }
  {
    auto out = open_out(out_dir / "jsd.csv");
    out << "dataset,method,property,jsd,stddev\n";
    for (const auto& e : t.jsd)
      out << e.dataset << ',' << e.method << ',' << e.property << ',' << num(e.mean, 10) << ','
          << num(e.stddev, 10) << '\n';
  }
  {
    auto out = open_out(out_dir / "summary.csv");
    out << "metric,property";
    for (const auto& m : t.methods) out << ',' << m;
    out << '\n';
    for (const auto& s : t.summary) {
      out << s.metric << ',' << s.property;
      for (const auto& m : t.methods) {
        auto it = s.by_method.find(m);
        out << ',' << (it == s.by_method.end() ? std::string() : num(it->second, 10));
      }
      out << '\n';
    }
  }
}

Tables aggregate_files(const fs::path& raw_csv, const fs::path& out_dir) {
  const fs::path dir = raw_csv.parent_path();
  std::vector<ReportRow> rows;
  std::vector<std::string> methods;
  for (const auto& f : read_csv(raw_csv)) {
    if (f.size() < 7) throw std::runtime_error("malformed row in " + raw_csv.string());
    ReportRow r;
    r.dataset = f[0];
    r.method = f[1];
    r.fraction = std::stod(f[2]);
    r.repetition = std::stoul(f[3]);
    r.property = f[4];
    r.value = parse_num(f[5]);
    r.error = f[6];
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    rows.push_back(std::move(r));
  }
  OriginalValues originals;
  if (fs::exists(dir / "originals.csv"))
    for (const auto& f : read_csv(dir / "originals.csv"))
      originals[f.at(0)][f.at(1)] = parse_num(f.size() > 2 ? f[2] : "");
  std::vector<JsdRow> jsd_rows;
  if (fs::exists(dir / "jsd_raw.csv"))
    for (const auto& f : read_csv(dir / "jsd_raw.csv"))
      jsd_rows.push_back({f.at(0), f.at(1), std::stod(f.at(2)), std::stoul(f.at(3)), f.at(4),
                          parse_num(f.size() > 5 ? f[5] : "")});
  Tables t = aggregate(rows, jsd_rows, originals, methods);
  write_tables(t, out_dir);
  return t;
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct LoadedDataset {
  const DatasetSpec* spec = nullptr;
  Graph graph;
  LoadStats stats;
  PropertyReport original;
  bool cached = false;
};

struct CellResult {
  std::vector<ReportRow> rows;
  std::vector<JsdRow> jsd_rows;
  std::vector<Distribution> distributions;  // degree, clustering, path length
  double elapsed_ms = 0;
};

struct Cell {
  std::size_t dataset;
  std::size_t sampler;
  double fraction;
  std::size_t repetition;
};

PropertyReport original_report(const Graph& g, const ExperimentConfig& cfg,
                               const fs::path& cache_dir, bool& cached) {
  std::uint64_t key = g.content_hash();
  key = hash_combine(key, static_cast<std::uint64_t>(cfg.paths.mode));
  key = hash_combine(key, cfg.paths.sources);
  key = hash_combine(key, cfg.paths.seed);
  key = hash_combine(key, cfg.paths.exact_threshold);
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(key));
  const fs::path file = cache_dir / name;
  if (fs::exists(file)) {
    try {
      std::ifstream in(file);
      cached = true;
      return report_from_json(json::parse(in));
    } catch (const std::exception&) {
      cached = false;  // unreadable cache entry: recompute
    }
  }
  PropertyOptions opts;
  opts.paths = cfg.paths;
  PropertyReport r = compute_properties(g, opts);
  fs::create_directories(cache_dir);
  auto out = open_out(file);
  out << report_to_json(r).dump();
  return r;
}

CellResult run_cell(const LoadedDataset& d, const SamplerConfig& base, const Cell& cell,
                    const ExperimentConfig& cfg) {
  CellResult res;
  const auto start = std::chrono::steady_clock::now();
  const std::string method(to_string(base.method));
  const auto seed = cell_seed(cfg.seed, d.spec->name, base.method, cell.fraction, cell.repetition);
  try {
    SamplerConfig sc = base;
    sc.fraction = cell.fraction;
    sc.seed = seed;
    sc.mode = cfg.mode.value_or(native_mode(base.method));
    sc.record_trace = false;
    sc.record_walker_choices = false;
    const Sample s = sample_graph(d.graph, sc);
    const Graph sg = sample_to_graph(d.graph, s);

    PropertyOptions opts;
    opts.paths.mode = PathMode::automatic;
    opts.paths.sources = cfg.paths.sources;
    opts.paths.seed = seed;
    opts.paths.threads = 1;
    opts.community_seed = seed;
    const PropertyReport r = compute_properties(sg, opts);

    for (auto p : all_properties)
      res.rows.push_back({d.spec->name, method, cell.fraction, cell.repetition,
                          std::string(to_string(p)), property_value(r, p), 0.0, {}});
    if (same_phi(cell.fraction, cfg.distribution_fraction)) {
      for (auto p : distribution_properties) {
        const auto& sd = report_distribution(r, p);
        const auto& od = report_distribution(d.original, p);
        std::optional<double> v;
        if (!sd.empty() && !od.empty()) v = jsd(sd, od);
        res.jsd_rows.push_back(
            {d.spec->name, method, cell.fraction, cell.repetition, std::string(to_string(p)), v});
        res.distributions.push_back(sd);
      }
    }
  } catch (const std::exception& e) {
    res.rows.clear();
    res.jsd_rows.clear();
    res.distributions.clear();
    res.rows.push_back({d.spec->name, method, cell.fraction, cell.repetition, "error",
                        std::nullopt, 0.0, sanitize(e.what())});
  }
  res.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : res.rows) r.elapsed_ms = res.elapsed_ms;
  return res;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const fs::path out_dir = cfg.output_dir;
  const fs::path cache_dir = cfg.cache_dir.value_or(out_dir / "cache");
  fs::create_directories(out_dir / "originals");

  RunResult result;
  json meta_datasets = json::array();
  std::vector<LoadedDataset> loaded;
  loaded.reserve(cfg.datasets.size());
  for (const auto& spec : cfg.datasets) {
    json info{{"name", spec.name}, {"category", spec.category}};
    try {
      LoadedDataset d;
      d.spec = &spec;
      if (spec.path) {
        auto lr = load_edge_list(*spec.path);
        d.graph = std::move(lr.graph);
        d.stats = lr.stats;
        info["source"] = spec.path->string();
        info["raw_lines"] = d.stats.raw_lines;
        info["self_loops_dropped"] = d.stats.self_loops;
        info["duplicates_merged"] = d.stats.duplicates;
        info["symmetrized"] = true;
      } else {
        d.graph = generate(*spec.generator);
        info["generator"] = generator_to_json(*spec.generator);
      }
      d.original = original_report(d.graph, cfg, cache_dir, d.cached);
      info["nodes"] = d.graph.node_count();
      info["edges"] = d.graph.edge_count();
      info["original"] = report_to_json(d.original);
      info["original"].erase("degree_distribution");
      info["original"].erase("clustering_distribution");
      info["original"].erase("path_length_distribution");
      for (auto p : all_properties)
        result.originals[spec.name][std::string(to_string(p))] = property_value(d.original, p);
      for (auto p : distribution_properties) {
        auto out = open_out(out_dir / "originals" /
                            (spec.name + "." + std::string(to_string(p)) + ".dist.csv"));
        report_distribution(d.original, p).write_csv(out);
      }
      loaded.push_back(std::move(d));
    } catch (const std::exception& e) {
      info["error"] = e.what();
      result.failed_datasets.push_back(spec.name);
    }
    meta_datasets.push_back(std::move(info));
  }

  std::vector<Cell> cells;
  for (std::size_t d = 0; d < loaded.size(); ++d)
    for (std::size_t s = 0; s < cfg.samplers.size(); ++s)
      for (double phi : cfg.fractions)
        for (std::size_t rep = 1; rep <= cfg.repetitions; ++rep) cells.push_back({d, s, phi, rep});

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++)
      results[i] = run_cell(loaded[cells[i].dataset], cfg.samplers[cells[i].sampler], cells[i], cfg);
  };
  const unsigned workers = std::max(
      1u, std::min<unsigned>(cfg.workers ? cfg.workers : std::thread::hardware_concurrency(),
                             static_cast<unsigned>(std::max<std::size_t>(1, cells.size()))));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Collect in cell order so the bundle does not depend on scheduling.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Distribution>>> dists;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& r = results[i];
    for (auto& row : r.rows) {
      if (row.property == "error") ++result.error_rows;
      result.rows.push_back(std::move(row));
    }
    for (auto& row : r.jsd_rows) result.jsd_rows.push_back(std::move(row));
    if (!r.distributions.empty())
      dists[{cells[i].dataset, cells[i].sampler}].push_back(std::move(r.distributions));
  }

  for (const auto& [key, per_rep] : dists) {
    const auto& name = loaded[key.first].spec->name;
    const std::string method(to_string(cfg.samplers[key.second].method));
    for (std::size_t k = 0; k < std::size(distribution_properties); ++k) {
      std::vector<Distribution> ds;
      for (const auto& rep : per_rep)
        if (!rep[k].empty()) ds.push_back(rep[k]);
      if (ds.empty()) continue;
      auto out = open_out(out_dir / (name + "." + method + "." +
                                     std::string(to_string(distribution_properties[k])) +
                                     ".dist.csv"));
      average(ds).write_csv(out);
    }
  }

  {
    auto out = open_out(out_dir / "raw.csv");
    out << "dataset,method,phi,repetition,property,value,error\n";
    for (const auto& r : result.rows)
      out << r.dataset << ',' << r.method << ',' << phi_str(r.fraction) << ',' << r.repetition
          << ',' << r.property << ',' << num(r.value) << ',' << r.error << '\n';
  }
  {
    auto out = open_out(out_dir / "jsd_raw.csv");
    out << "dataset,method,phi,repetition,property,jsd\n";
    for (const auto& r : result.jsd_rows)
      out << r.dataset << ',' << r.method << ',' << phi_str(r.fraction) << ',' << r.repetition
          << ',' << r.property << ',' << num(r.value) << '\n';
  }
  {
    auto out = open_out(out_dir / "originals.csv");
    out << "dataset,property,value\n";
    for (const auto& d : loaded)
      for (auto p : all_properties)
        out << d.spec->name << ',' << to_string(p) << ','
            << num(result.originals[d.spec->name][std::string(to_string(p))]) << '\n';
  }
  {
    // Wall-clock data lives outside the reproducible CSVs.
    auto out = open_out(out_dir / "timings.csv");
    out << "dataset,method,phi,repetition,elapsed_ms\n";
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << loaded[cells[i].dataset].spec->name << ','
          << to_string(cfg.samplers[cells[i].sampler].method) << ',' << phi_str(cells[i].fraction)
          << ',' << cells[i].repetition << ',' << num(results[i].elapsed_ms, 6) << '\n';
  }

  std::vector<std::string> methods;
  for (const auto& s : cfg.samplers) methods.emplace_back(to_string(s.method));
  result.tables = aggregate(result.rows, result.jsd_rows, result.originals, methods);
  write_tables(result.tables, out_dir);

  json meta{{"version", version},
            {"finished_at", timestamp()},
            {"elapsed_seconds",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()},
            {"workers", workers},
            {"config", cfg.to_json()},
            {"datasets", meta_datasets},
            {"failed_datasets", result.failed_datasets},
            {"error_rows", result.error_rows},
            {"aggregation_gaps", result.tables.gaps},
            {"notes",
             "input graphs are symmetrized: direction is ignored, self-loops dropped and "
             "duplicate edges merged"}};
  auto out = open_out(out_dir / "meta.json");
  out << meta.dump(2) << '\n';
  return result;
}

}  // namespace gsample
