#include "tgx/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_map>

#include "tgx/parallel.hpp"

namespace tgx {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& why) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + why);
}

std::string read_whole_file(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");  // transparently reads plain files too
  if (f == nullptr) throw std::runtime_error("cannot open " + path);
  std::string data;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) data.append(buf, static_cast<std::size_t>(n));
  const bool bad = n < 0;
  gzclose(f);
  if (bad) throw std::runtime_error("read error on " + path);
  return data;
}

struct Tokens {
  std::string_view tok[5];
  int count = 0;
};

Tokens split_line(std::string_view line) {
  Tokens t;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (t.count < 5) t.tok[t.count] = line.substr(i, j - i);
    ++t.count;
    i = j;
  }
  return t;
}

std::uint64_t parse_u64(std::string_view s, const std::string& path, std::size_t line_no,
                        const char* what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    parse_fail(path, line_no, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_weight(std::string_view s, const std::string& path, std::size_t line_no) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    parse_fail(path, line_no, "bad weight '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

LoadResult load_edge_list(const std::string& path, const LoadOptions& options) {
  const std::string data = read_whole_file(path);

  std::vector<TemporalEdge> edges;
  std::unordered_map<std::string, VertexId> id_map;
  VertexId max_id = 0;
  bool any_vertex = false;
  int columns = 0;

  auto vertex_of = [&](std::string_view s, std::size_t line_no) -> VertexId {
    if (options.map_ids) {
      const auto [it, inserted] = id_map.try_emplace(std::string(s), 0);
      if (inserted) it->second = static_cast<VertexId>(id_map.size() - 1);
      return it->second;
    }
    const std::uint64_t raw = parse_u64(s, path, line_no, "vertex id");
    if (raw > std::numeric_limits<VertexId>::max()) {
      parse_fail(path, line_no, "vertex id " + std::string(s) + " exceeds 32-bit range");
    }
    return static_cast<VertexId>(raw);
  };

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    std::size_t eol = data.find('\n', pos);
    if (eol == std::string::npos) eol = data.size();
    std::string_view line(data.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const Tokens t = split_line(line);
    if (t.count == 0) continue;
    if (t.tok[0].front() == '#') continue;
    if (t.count < 3 || t.count > 5) {
      parse_fail(path, line_no, "expected 3, 4, or 5 columns, found " + std::to_string(t.count));
    }
    if (columns == 0) {
      columns = t.count;
    } else if (t.count != columns) {
      parse_fail(path, line_no,
                 "column count changed from " + std::to_string(columns) + " to " +
                     std::to_string(t.count));
    }

    TemporalEdge e;
    e.source = vertex_of(t.tok[0], line_no);
    e.destination = vertex_of(t.tok[1], line_no);
    e.start = parse_u64(t.tok[2], path, line_no, "start time");
    e.end = columns >= 4 ? parse_u64(t.tok[3], path, line_no, "end time") : e.start;
    e.weight = columns == 5 ? parse_weight(t.tok[4], path, line_no) : 1.0;
    if (columns >= 4 && e.end < e.start) {
      parse_fail(path, line_no,
                 "end " + std::to_string(e.end) + " precedes start " + std::to_string(e.start));
    }
    max_id = std::max({max_id, e.source, e.destination});
    any_vertex = true;
    edges.push_back(e);
  }

  if (columns == 3) sample_end_times(edges, options.seed, options.end_sample_max);

  LoadResult out;
  const VertexId n_v =
      options.map_ids ? static_cast<VertexId>(id_map.size()) : (any_vertex ? max_id + 1 : 0);
  out.meta = compute_meta(edges, n_v, /*directed=*/true);
  out.edges = std::move(edges);
  return out;
}

void write_edge_list(const std::string& path, std::span<const TemporalEdge> edges) {
  const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  std::string chunk;
  chunk.reserve(1 << 20);
  char line[160];

  auto flush = [&](auto&& sink) {
    sink(chunk);
    chunk.clear();
  };

  if (gz) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (f == nullptr) throw std::runtime_error("cannot open " + path + " for writing");
    auto sink = [&](const std::string& s) {
      if (!s.empty() && gzwrite(f, s.data(), static_cast<unsigned>(s.size())) <= 0) {
        gzclose(f);
        throw std::runtime_error("write error on " + path);
      }
    };
    for (const TemporalEdge& e : edges) {
      const int n = std::snprintf(line, sizeof(line), "%u %u %llu %llu %.17g\n", e.source,
                                  e.destination, static_cast<unsigned long long>(e.start),
                                  static_cast<unsigned long long>(e.end), e.weight);
      chunk.append(line, static_cast<std::size_t>(n));
      if (chunk.size() > (1 << 20) - 200) flush(sink);
    }
    flush(sink);
    gzclose(f);
    return;
  }

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot open " + path + " for writing");
  auto sink = [&](const std::string& s) {
    if (!s.empty() && std::fwrite(s.data(), 1, s.size(), f) != s.size()) {
      std::fclose(f);
      throw std::runtime_error("write error on " + path);
    }
  };
  for (const TemporalEdge& e : edges) {
    const int n = std::snprintf(line, sizeof(line), "%u %u %llu %llu %.17g\n", e.source,
                                e.destination, static_cast<unsigned long long>(e.start),
                                static_cast<unsigned long long>(e.end), e.weight);
    chunk.append(line, static_cast<std::size_t>(n));
    if (chunk.size() > (1 << 20) - 200) flush(sink);
  }
  flush(sink);
  std::fclose(f);
}

void sample_end_times(std::vector<TemporalEdge>& edges, std::uint64_t seed, Timestamp d_max) {
  if (d_max < 1) throw std::invalid_argument("end-time sampling needs d_max >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Timestamp> dur(1, d_max);
  for (TemporalEdge& e : edges) e.end = e.start + dur(rng);
}

std::vector<TemporalEdge> generate_synthetic(const GeneratorConfig& cfg) {
  if (cfg.n_e > 0 && cfg.n_v == 0) throw std::invalid_argument("generator needs n_v >= 1");
  if (cfg.sigma < 0 || cfg.lambda <= 0 || cfg.d_min < 1 || cfg.d_max < cfg.d_min) {
    throw std::invalid_argument("generator parameters out of range");
  }
  std::vector<TemporalEdge> edges;
  edges.reserve(cfg.n_e);
  if (cfg.n_e == 0) return edges;

  std::mt19937_64 rng(cfg.seed);

  // Per-vertex popularity weights; sources are drawn proportionally.
  std::lognormal_distribution<double> weight_dist(cfg.mu, cfg.sigma);
  std::vector<double> cumulative(cfg.n_v);
  double run = 0.0;
  for (VertexId v = 0; v < cfg.n_v; ++v) {
    run += weight_dist(rng);
    cumulative[v] = run;
  }

  std::uniform_real_distribution<double> pick(0.0, run);
  std::uniform_int_distribution<VertexId> dst_dist(0, cfg.n_v - 1);
  std::uniform_int_distribution<Timestamp> dur_dist(cfg.d_min, cfg.d_max);
  std::exponential_distribution<double> gap_dist(cfg.lambda);
  std::vector<Timestamp> clock(cfg.n_v, 0);

  for (EdgeId i = 0; i < cfg.n_e; ++i) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick(rng));
    const VertexId src = static_cast<VertexId>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(), cfg.n_v - 1));
    // Poisson arrivals per source: exponential inter-arrival, at least one tick.
    const double gap = gap_dist(rng);
    clock[src] += std::max<Timestamp>(1, static_cast<Timestamp>(std::ceil(gap)));
    TemporalEdge e;
    e.source = src;
    e.destination = dst_dist(rng);
    e.start = clock[src];
    e.end = e.start + dur_dist(rng);
    e.weight = 1.0;
    edges.push_back(e);
  }
  return edges;
}

QueryWindow window_for_recent_fraction(std::span<const TemporalEdge> edges, double fraction) {
  if (edges.empty()) throw std::invalid_argument("window quantile needs a nonempty edge set");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("window fraction must lie in (0, 1]");
  }
  std::vector<Timestamp> starts(edges.size());
  Timestamp max_end = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    starts[i] = edges[i].start;
    max_end = std::max(max_end, edges[i].end);
  }
  parallel_sort(starts.begin(), starts.end());
  const auto want = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(edges.size()),
                       std::ceil(fraction * static_cast<double>(edges.size()))));
  const Timestamp t_a = starts[starts.size() - want];
  return QueryWindow{t_a, max_end};
}

}  // namespace tgx
