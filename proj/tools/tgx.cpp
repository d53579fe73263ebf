// Command-line front end: load or generate temporal graphs, run windowed
// algorithms, and drive the selectivity-sweep / estimator-accuracy
// benchmarks. Reports are JSON (run) or CSV (sweep, accuracy).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgx/algorithms.hpp"
#include "tgx/digest.hpp"
#include "tgx/engine.hpp"
#include "tgx/ingest.hpp"
#include "tgx/parallel.hpp"

namespace {

using json = nlohmann::json;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct DatasetSpec {
  std::string graph_path;
  std::string generate_cfg;
  bool undirected = false;

  bool set() const { return !graph_path.empty() || !generate_cfg.empty(); }
};

tgx::GeneratorConfig parse_generator_cfg(const std::string& cfg) {
  tgx::GeneratorConfig g;
  g.n_v = 10000;
  g.n_e = 100000;
  std::size_t pos = 0;
  while (pos < cfg.size()) {
    std::size_t end = cfg.find(',', pos);
    if (end == std::string::npos) end = cfg.size();
    const std::string item = cfg.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--generate", "expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    try {
      if (key == "nv") g.n_v = static_cast<tgx::VertexId>(std::stoull(val));
      else if (key == "ne") g.n_e = std::stoull(val);
      else if (key == "mu") g.mu = std::stod(val);
      else if (key == "sigma") g.sigma = std::stod(val);
      else if (key == "lambda") g.lambda = std::stod(val);
      else if (key == "dmin") g.d_min = std::stoull(val);
      else if (key == "dmax") g.d_max = std::stoull(val);
      else if (key == "seed") g.seed = std::stoull(val);
      else throw CLI::ValidationError("--generate", "unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw CLI::ValidationError("--generate", "bad value for '" + key + "'");
    }
  }
  return g;
}

struct LoadedDataset {
  std::vector<tgx::TemporalEdge> edges;
  tgx::VertexId n_v = 0;
  std::string descriptor;
  double load_seconds = 0.0;
};

LoadedDataset load_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  LoadedDataset out;
  const auto t0 = clock_type::now();
  if (!spec.graph_path.empty()) {
    tgx::LoadOptions opt;
    opt.seed = seed;
    tgx::LoadResult r = tgx::load_edge_list(spec.graph_path, opt);
    out.edges = std::move(r.edges);
    out.n_v = r.meta.n_v;
    out.descriptor = spec.graph_path;
  } else {
    tgx::GeneratorConfig cfg = parse_generator_cfg(spec.generate_cfg);
    out.edges = tgx::generate_synthetic(cfg);
    out.n_v = cfg.n_v;
    out.descriptor = "synthetic(nv=" + std::to_string(cfg.n_v) +
                     ",ne=" + std::to_string(cfg.n_e) + ",seed=" + std::to_string(cfg.seed) + ")";
  }
  out.load_seconds = seconds_since(t0);
  return out;
}

tgx::Ordering parse_ordering(const std::string& s) {
  if (s == "succeeds") return tgx::Ordering::Succeeds;
  if (s == "strictly-succeeds") return tgx::Ordering::StrictlySucceeds;
  if (s == "overlaps") return tgx::Ordering::Overlaps;
  throw CLI::ValidationError("--ordering", "unknown ordering '" + s + "'");
}

tgx::ForceAccess parse_force(const std::string& s) {
  if (s == "auto") return tgx::ForceAccess::Auto;
  if (s == "index" || s == "tger") return tgx::ForceAccess::Index;
  if (s == "scan") return tgx::ForceAccess::Scan;
  throw CLI::ValidationError("--force-access", "unknown access mode '" + s + "'");
}

bool is_single_source(const std::string& algo) {
  return algo == "earliest-arrival" || algo == "latest-departure" || algo == "fastest" ||
         algo == "shortest-duration" || algo == "bfs";
}

bool is_known_algo(const std::string& algo) {
  return is_single_source(algo) || algo == "cc" || algo == "kcore" || algo == "bc" ||
         algo == "pagerank";
}

std::vector<tgx::VertexId> top_out_degree_sources(const tgx::TemporalGraph& g, std::size_t k) {
  std::vector<tgx::VertexId> ids(g.vertex_count());
  std::iota(ids.begin(), ids.end(), tgx::VertexId{0});
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](tgx::VertexId a, tgx::VertexId b) {
                      const tgx::EdgeId da = g.out_csr().degree(a);
                      const tgx::EdgeId db = g.out_csr().degree(b);
                      return da != db ? da > db : a < b;
                    });
  ids.resize(k);
  return ids;
}

struct RunKnobs {
  std::string algo;
  int iterations = 100;
  double damping = 0.85;
  std::uint64_t kcore_k = 2;
  std::size_t bc_sources = 100;
};

// Runs one algorithm for one source (ignored for the global ones) and
// returns the digest of its result arrays.
std::uint64_t run_once(const tgx::TemporalGraph& g, const RunKnobs& knobs, tgx::VertexId source,
                       const tgx::QueryWindow& w, const tgx::AlgoOptions& opts) {
  if (knobs.algo == "earliest-arrival") {
    return tgx::digest_of(tgx::earliest_arrival(g, source, w, opts).values);
  }
  if (knobs.algo == "latest-departure") {
    return tgx::digest_of(tgx::latest_departure(g, source, w, opts).values);
  }
  if (knobs.algo == "fastest") {
    return tgx::digest_of(tgx::fastest_path(g, source, w, opts).values);
  }
  if (knobs.algo == "shortest-duration") {
    return tgx::digest_of(tgx::shortest_duration(g, source, w, opts).values);
  }
  if (knobs.algo == "bfs") {
    return tgx::digest_of(tgx::temporal_bfs(g, source, w, opts).values);
  }
  if (knobs.algo == "cc") {
    return tgx::digest_of(tgx::temporal_cc(g, w, opts).labels);
  }
  if (knobs.algo == "kcore") {
    return tgx::digest_of(tgx::temporal_kcore(g, w, knobs.kcore_k, opts).to_ids());
  }
  if (knobs.algo == "bc") {
    tgx::AlgoOptions o = opts;
    o.bc_source_limit = knobs.bc_sources;
    return tgx::digest_of(tgx::temporal_bc(g, w, o).scores);
  }
  if (knobs.algo == "pagerank") {
    return tgx::digest_of(
        tgx::temporal_pagerank(g, w, knobs.iterations, knobs.damping, opts).scores);
  }
  throw CLI::ValidationError("--algo", "unknown algorithm '" + knobs.algo + "'");
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal graph analytics engine"};
  app.require_subcommand(1);

  // ---- shared options ---------------------------------------------------
  DatasetSpec dataset;
  std::uint64_t seed = 42;
  int threads = 0;
  tgx::EdgeId index_cutoff = tgx::VertexIndexRegistry::kDefaultCutoff;
  double theta_sel = 0.2;
  double cost_c = 1.0;
  double cost_c_prime = 1.0;
  std::string force_access = "auto";
  std::string ordering = "strictly-succeeds";
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--graph", dataset.graph_path, "edge-list file (.gz accepted)");
    cmd->add_option("--generate", dataset.generate_cfg,
                    "synthetic config, e.g. nv=10000,ne=100000,seed=7");
    cmd->add_flag("--undirected", dataset.undirected, "symmetrize the input");
    cmd->add_option("--seed", seed, "seed for end-time sampling and generation");
    cmd->add_option("--threads", threads, "worker count (0 = library default)");
    cmd->add_option("--index-cutoff", index_cutoff, "minimum degree for indexing");
    cmd->add_option("--theta-sel", theta_sel, "selectivity threshold");
    cmd->add_option("--cost-c", cost_c, "index cost constant");
    cmd->add_option("--cost-c-prime", cost_c_prime, "scan cost constant");
    cmd->add_option("--force-access", force_access, "auto|index|scan");
    cmd->add_option("--ordering", ordering, "succeeds|strictly-succeeds|overlaps");
    cmd->add_option("--config", config_path, "JSON config file (index.cutoff, cost.*)");
  };

  // ---- run ---------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run one algorithm and print a JSON report");
  RunKnobs knobs;
  std::int64_t source_flag = -1;
  std::size_t top_k = 100;
  double window_fraction = 0.05;
  std::optional<std::uint64_t> window_start, window_end;
  std::string output_format = "json";
  add_common(run);
  run->add_option("--algo", knobs.algo, "algorithm name")->required();
  run->add_option("--source", source_flag, "single source vertex");
  run->add_option("--top-k", top_k, "number of top out-degree sources");
  run->add_option("--window-fraction", window_fraction,
                  "window over the most recent fraction of edges");
  run->add_option("--window-start", window_start, "explicit window start");
  run->add_option("--window-end", window_end, "explicit window end");
  run->add_option("--iterations", knobs.iterations, "pagerank iterations");
  run->add_option("--damping", knobs.damping, "pagerank damping");
  run->add_option("--k", knobs.kcore_k, "k-core threshold");
  run->add_option("--bc-sources", knobs.bc_sources, "betweenness source cap");
  run->add_option("--output", output_format, "json|csv");

  // ---- sweep --------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "selective indexing vs forced scan across window fractions (CSV)");
  std::vector<double> sweep_fractions{1, 2, 3, 4, 5, 10, 20};
  std::string sweep_algo = "earliest-arrival";
  std::size_t sweep_top_k = 10;
  int sweep_reps = 3;
  add_common(sweep);
  sweep->add_option("--fractions", sweep_fractions, "window fractions in percent")
      ->delimiter(',');
  sweep->add_option("--algo", sweep_algo, "algorithm to sweep");
  sweep->add_option("--top-k", sweep_top_k, "sources per measurement");
  sweep->add_option("--reps", sweep_reps, "repetitions per measurement (best taken)");

  // ---- estimator accuracy ---------------------------------------------------
  auto* acc = app.add_subcommand(
      "estimator-accuracy", "cost-model decision accuracy against exact selectivity (CSV)");
  std::vector<tgx::EdgeId> acc_cutoffs{1024, 2048, 4096, 8192};
  std::vector<double> acc_fractions{0.5, 2, 3, 4, 5, 10, 20};
  add_common(acc);
  acc->add_option("--cutoffs", acc_cutoffs, "indexing cutoffs")->delimiter(',');
  acc->add_option("--fractions", acc_fractions, "window fractions in percent")->delimiter(',');

  // ---- generate --------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "write a synthetic edge list");
  std::string gen_out;
  std::string gen_cfg;
  gen->add_option("--out", gen_out, "output path")->required();
  gen->add_option("--params", gen_cfg, "key=value list as for --generate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    // Config file supplies defaults for knobs not given on the command line.
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config " + config_path);
      json cfg = json::parse(in);
      CLI::App* active = app.get_subcommands().front();
      auto absent = [&](const std::string& flag) {
        const CLI::Option* o = active->get_option_no_throw(flag);
        return o != nullptr && o->count() == 0;
      };
      if (cfg.contains("index.cutoff") && absent("--index-cutoff")) {
        index_cutoff = cfg["index.cutoff"].get<tgx::EdgeId>();
      }
      if (cfg.contains("cost.theta_sel") && absent("--theta-sel")) {
        theta_sel = cfg["cost.theta_sel"].get<double>();
      }
      if (cfg.contains("cost.c") && absent("--cost-c")) cfg["cost.c"].get_to(cost_c);
      if (cfg.contains("cost.c_prime") && absent("--cost-c-prime")) {
        cfg["cost.c_prime"].get_to(cost_c_prime);
      }
    }

    if (threads > 0) tgx::set_workers(threads);

    if (gen->parsed()) {
      tgx::GeneratorConfig cfg = parse_generator_cfg(gen_cfg);
      std::vector<tgx::TemporalEdge> edges = tgx::generate_synthetic(cfg);
      tgx::write_edge_list(gen_out, edges);
      json report{{"path", gen_out}, {"n_v", cfg.n_v}, {"n_e", edges.size()}};
      std::cout << report.dump() << "\n";
      return 0;
    }

    if (!dataset.set()) throw CLI::ValidationError("dataset", "need --graph or --generate");

    tgx::EngineConfig engine_cfg;
    engine_cfg.index_cutoff = index_cutoff;
    engine_cfg.cost.theta_sel = theta_sel;
    engine_cfg.cost.c = cost_c;
    engine_cfg.cost.c_prime = cost_c_prime;
    engine_cfg.ordering = parse_ordering(ordering);
    engine_cfg.force_access = parse_force(force_access);

    LoadedDataset data = load_dataset(dataset, seed);

    if (run->parsed()) {
      if (!is_known_algo(knobs.algo)) {
        throw CLI::ValidationError("--algo", "unknown algorithm '" + knobs.algo + "'");
      }
      tgx::QueryWindow w;
      if (window_start || window_end) {
        w.t_a = window_start.value_or(0);
        w.t_b = window_end.value_or(tgx::kMaxTimestamp);
        if (!w.valid()) throw CLI::ValidationError("--window-start", "window start exceeds end");
      } else {
        w = tgx::window_for_recent_fraction(data.edges, window_fraction);
      }

      const auto tb0 = clock_type::now();
      tgx::TemporalGraph g = tgx::TemporalGraph::build(std::move(data.edges), data.n_v,
                                                       !dataset.undirected, engine_cfg);
      const double build_seconds = seconds_since(tb0);

      std::vector<tgx::VertexId> sources;
      if (is_single_source(knobs.algo)) {
        if (source_flag >= 0) {
          sources = {static_cast<tgx::VertexId>(source_flag)};
        } else {
          sources = top_out_degree_sources(g, top_k);
        }
      } else {
        sources = {0};  // placeholder; global algorithms ignore it
      }

      tgx::EdgeMapStats stats;
      tgx::AlgoOptions opts;
      opts.stats = &stats;

      json per_source = json::array();
      tgx::Digest combined;
      const auto tr0 = clock_type::now();
      for (const tgx::VertexId s : sources) {
        const auto ts0 = clock_type::now();
        const std::uint64_t d = run_once(g, knobs, s, w, opts);
        const double dt = seconds_since(ts0);
        combined.update_value(d);
        if (is_single_source(knobs.algo)) {
          per_source.push_back(
              {{"source", s}, {"wall_time_s", dt}, {"digest", hex64(d)}});
        } else {
          per_source.push_back({{"wall_time_s", dt}, {"digest", hex64(d)}});
        }
      }
      const double wall = seconds_since(tr0);

      json report{
          {"algorithm", knobs.algo},
          {"dataset", data.descriptor},
          {"window", {{"t_a", w.t_a}, {"t_b", w.t_b}}},
          {"threads", tgx::num_workers()},
          {"wall_time_s", wall},
          {"load_time_s", data.load_seconds},
          {"build_time_s", build_seconds},
          {"access_methods",
           {{"index", stats.index_decisions}, {"scan", stats.scan_decisions}}},
          {"digest", hex64(combined.value())},
          {"sources", per_source},
      };
      if (output_format == "csv") {
        std::cout << "algorithm,dataset,t_a,t_b,threads,wall_time_s,load_time_s,build_time_s,"
                     "index_decisions,scan_decisions,digest\n";
        std::cout << knobs.algo << ',' << data.descriptor << ',' << w.t_a << ',' << w.t_b << ','
                  << tgx::num_workers() << ',' << wall << ',' << data.load_seconds << ','
                  << build_seconds << ',' << stats.index_decisions << ','
                  << stats.scan_decisions << ',' << hex64(combined.value()) << "\n";
      } else {
        std::cout << report.dump(2) << "\n";
      }
      return 0;
    }

    auto check_fractions = [](const std::vector<double>& fractions) {
      if (fractions.empty()) {
        throw CLI::ValidationError("--fractions", "fraction list must not be empty");
      }
      for (const double pct : fractions) {
        if (!(pct > 0.0 && pct <= 100.0)) {
          throw CLI::ValidationError("--fractions", "fractions are percentages in (0, 100]");
        }
      }
    };

    if (sweep->parsed()) {
      check_fractions(sweep_fractions);
      if (!is_known_algo(sweep_algo)) {
        throw CLI::ValidationError("--algo", "unknown algorithm '" + sweep_algo + "'");
      }
      std::vector<tgx::TemporalEdge> edges_copy = data.edges;  // windows need the raw list
      tgx::TemporalGraph g = tgx::TemporalGraph::build(std::move(data.edges), data.n_v,
                                                       !dataset.undirected, engine_cfg);
      const std::vector<tgx::VertexId> sources = top_out_degree_sources(g, sweep_top_k);
      RunKnobs k;
      k.algo = sweep_algo;

      std::cout << "fraction_pct,selective_s,scan_s,ratio,digests_equal\n";
      for (const double pct : sweep_fractions) {
        const tgx::QueryWindow w = tgx::window_for_recent_fraction(edges_copy, pct / 100.0);
        auto measure = [&](tgx::ForceAccess mode, std::uint64_t& digest_out) {
          tgx::AlgoOptions opts;
          opts.force_access = mode;
          double best = std::numeric_limits<double>::max();
          for (int rep = 0; rep < std::max(1, sweep_reps); ++rep) {
            tgx::Digest d;
            const auto t0 = clock_type::now();
            for (const tgx::VertexId s : sources) d.update_value(run_once(g, k, s, w, opts));
            best = std::min(best, seconds_since(t0));
            digest_out = d.value();
          }
          return best;
        };
        // Warm-up pass so neither mode pays first-touch costs.
        std::uint64_t d_sel = 0, d_scan = 0;
        (void)run_once(g, k, sources.front(), w, tgx::AlgoOptions{});
        const double sel = measure(tgx::ForceAccess::Auto, d_sel);
        const double scan = measure(tgx::ForceAccess::Scan, d_scan);
        std::cout << pct << ',' << sel << ',' << scan << ',' << (scan > 0 ? sel / scan : 0.0)
                  << ',' << (d_sel == d_scan ? 1 : 0) << "\n";
      }
      return 0;
    }

    if (acc->parsed()) {
      check_fractions(acc_fractions);
      if (acc_cutoffs.empty()) {
        throw CLI::ValidationError("--cutoffs", "cutoff list must not be empty");
      }
      const tgx::GraphMeta meta = tgx::compute_meta(data.edges, data.n_v, true);
      const tgx::TemporalCsr out = tgx::TemporalCsr::build(data.edges, meta, tgx::Direction::Out);
      const tgx::TemporalCsr in = tgx::TemporalCsr::build(data.edges, meta, tgx::Direction::In);

      std::cout << "cutoff,fraction_pct,indexed_vertices,accuracy\n";
      for (const tgx::EdgeId cutoff : acc_cutoffs) {
        const tgx::VertexIndexRegistry reg = tgx::VertexIndexRegistry::build(out, in, cutoff);
        for (const double pct : acc_fractions) {
          const tgx::QueryWindow w = tgx::window_for_recent_fraction(data.edges, pct / 100.0);
          std::uint64_t agree = 0, total = 0;
          for (const tgx::Direction dir : {tgx::Direction::Out, tgx::Direction::In}) {
            const tgx::TemporalCsr& csr = dir == tgx::Direction::Out ? out : in;
            for (const tgx::VertexId v : reg.indexed_vertices(dir)) {
              const tgx::AccessDecision dec =
                  tgx::choose_access_method(v, reg, dir, w, engine_cfg.cost);
              const double true_beta = static_cast<double>(csr.count_in_window(v, w)) /
                                       static_cast<double>(csr.degree(v));
              const bool should_index = true_beta <= engine_cfg.cost.theta_sel;
              const bool did_index = dec.method == tgx::AccessMethod::IndexLookup;
              agree += should_index == did_index ? 1 : 0;
              ++total;
            }
          }
          const double accuracy = total == 0 ? 1.0 : static_cast<double>(agree) /
                                                         static_cast<double>(total);
          std::cout << cutoff << ',' << pct << ',' << total << ',' << accuracy << "\n";
        }
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
