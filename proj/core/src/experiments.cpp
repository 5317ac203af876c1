#include "smallworld/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "smallworld/errors.hpp"

namespace smallworld {

void ExperimentConfig::validate() const {
  if (num_pairs < 1) throw ParamError("num_pairs must be at least 1");
  if (dropout.empty()) throw ParamError("dropout list must not be empty");
  for (double p : dropout) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParamError("dropout probabilities must lie in [0, 1]");
  }
  for (double s : s_values) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ParamError("sweep values of s must be finite and >= 0");
  }
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs f(i) for i in [0, count) over `threads` workers pulling from a shared counter.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::min<std::size_t>(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i; !failed && (i = next.fetch_add(1)) < count;) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<SourceTarget> sample_pairs(std::size_t n, std::size_t k, Rng& rng) {
  if (n < 2) throw ParamError("sample_pairs: need at least 2 vertices");
  std::uniform_int_distribution<VertexId> any(0, static_cast<VertexId>(n - 1));
  std::uniform_int_distribution<VertexId> other(0, static_cast<VertexId>(n - 2));
  std::vector<SourceTarget> pairs;
  pairs.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const VertexId s = any(rng);
    VertexId t = other(rng);
    if (t >= s) ++t;
    pairs.push_back({s, t});
  }
  return pairs;
}

std::vector<SourceTarget> experiment_pairs(std::size_t n, const ExperimentConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, "pairs"));
  return sample_pairs(n, cfg.num_pairs, rng);
}

std::vector<std::vector<RunRecord>> route_pairs(const SocialNetwork& net, std::span<const SourceTarget> pairs,
                                                std::span<const double> ps, std::uint64_t master_seed,
                                                const DistanceOracle& oracle, unsigned threads,
                                                bool reuse_target_maps) {
  std::vector<std::vector<RunRecord>> runs(ps.size(), std::vector<RunRecord>(pairs.size()));
  const std::uint64_t route_master = derive_seed(master_seed, "route");
  auto route_one = [&](std::size_t i, const DistanceMap& map) {
    for (std::size_t k = 0; k < ps.size(); ++k) {
      RouteQuery q{pairs[i].source, pairs[i].target, ps[k], derive_seed(route_master, static_cast<std::uint64_t>(i))};
      runs[k][i] = RunRecord{i, q.source, q.target, ps[k], greedy_route(net, map, q)};
    }
  };

  if (!reuse_target_maps) {
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
      auto map = distances_to_target(oracle, pairs[i].target);
      route_one(i, *map);
    });
    return runs;
  }

  // Group run indices by target; one distance map per group.
  std::map<VertexId, std::vector<std::size_t>> by_target;
  for (std::size_t i = 0; i < pairs.size(); ++i) by_target[pairs[i].target].push_back(i);
  std::vector<const std::vector<std::size_t>*> groups;
  std::vector<VertexId> targets;
  for (const auto& [t, idx] : by_target) {
    targets.push_back(t);
    groups.push_back(&idx);
  }
  parallel_for(groups.size(), threads, [&](std::size_t g) {
    auto map = distances_to_target(oracle, targets[g]);
    for (std::size_t i : *groups[g]) route_one(i, *map);
  });
  return runs;
}

std::vector<RunRecord> route_pairs(const SocialNetwork& net, std::span<const SourceTarget> pairs, double p,
                                   std::uint64_t master_seed, const DistanceOracle& oracle, unsigned threads,
                                   bool reuse_target_maps) {
  const double ps[] = {p};
  return std::move(route_pairs(net, pairs, ps, master_seed, oracle, threads, reuse_target_maps).front());
}

HopSummary summarize(std::span<const RunRecord> runs) {
  HopSummary s;
  s.runs = runs.size();
  std::vector<std::uint32_t> hops;
  for (const auto& r : runs) {
    if (r.result.delivered) hops.push_back(r.result.hops);
  }
  s.delivered = hops.size();
  s.delivery_rate = runs.empty() ? 0.0 : static_cast<double>(s.delivered) / static_cast<double>(s.runs);
  if (hops.empty()) {
    s.mean_hops = s.median_hops = s.stddev = s.std_error = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  // Sequential sums in run order keep the mean bit-stable.
  double sum = 0.0;
  for (auto h : hops) sum += h;
  s.mean_hops = sum / static_cast<double>(hops.size());
  double sq = 0.0;
  for (auto h : hops) sq += (h - s.mean_hops) * (h - s.mean_hops);
  s.stddev = hops.size() > 1 ? std::sqrt(sq / static_cast<double>(hops.size() - 1)) : 0.0;
  s.std_error = s.stddev / std::sqrt(static_cast<double>(hops.size()));
  std::sort(hops.begin(), hops.end());
  const std::size_t mid = hops.size() / 2;
  s.median_hops = hops.size() % 2 ? hops[mid] : 0.5 * (hops[mid - 1] + hops[mid]);
  s.min_hops = hops.front();
  s.max_hops = hops.back();
  return s;
}

// --- degree histograms ---------------------------------------------------------

std::uint64_t DegreeHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [d, c] : counts) t += c;
  return t;
}

std::uint32_t DegreeHistogram::min_degree() const { return counts.empty() ? 0 : counts.begin()->first; }
std::uint32_t DegreeHistogram::max_degree() const { return counts.empty() ? 0 : counts.rbegin()->first; }

double DegreeHistogram::decades() const {
  if (counts.empty() || min_degree() == 0) return 0.0;
  return std::log10(static_cast<double>(max_degree()) / static_cast<double>(min_degree()));
}

namespace {

void finish_histogram(DegreeHistogram& h) {
  const std::uint64_t total = h.total();
  if (total == 0) return;
  for (const auto& [d, c] : h.counts) {
    const std::uint32_t key = std::max<std::uint32_t>(d, 1);
    std::uint32_t lo = 1;
    while (lo * 2 <= key) lo *= 2;
    if (h.bins.empty() || h.bins.back().lo != lo) h.bins.push_back({lo, lo * 2, 0, 0.0});
    h.bins.back().count += c;
  }
  for (auto& b : h.bins) {
    b.density = static_cast<double>(b.count) / (static_cast<double>(b.hi - b.lo) * static_cast<double>(total));
  }
  // Least squares of log10(density) on log10(geometric bin centre), first bin excluded.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 1; i < h.bins.size(); ++i) {
    const auto& b = h.bins[i];
    pts.emplace_back(std::log10(std::sqrt(static_cast<double>(b.lo) * static_cast<double>(b.hi))),
                     std::log10(b.density));
  }
  if (pts.size() < 2) return;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx > 0) h.tail_slope = sxy / sxx;
}

}  // namespace

DegreeHistogram degree_distribution(const SocialNetwork& net) {
  DegreeHistogram h;
  for (VertexId v = 0; v < net.size(); ++v) ++h.counts[net.total_degree(v)];
  finish_histogram(h);
  return h;
}

DegreeHistogram degree_distribution(const SocialNetwork& net, std::span<const RoutingTrace> traces) {
  DegreeHistogram h;
  for (const auto& t : traces) {
    for (const auto& step : t.steps) ++h.counts[step.total_degree];
    ++h.counts[net.total_degree(t.final_vertex)];
  }
  finish_histogram(h);
  return h;
}

DegreeHistogram degree_distribution(const SocialNetwork& net, std::span<const RunRecord> runs) {
  std::vector<RoutingTrace> traces;
  traces.reserve(runs.size());
  for (const auto& r : runs) traces.push_back(r.result.trace);
  return degree_distribution(net, traces);
}

// --- experiments -----------------------------------------------------------------

ExperimentReport run_hop_experiment(const SocialNetwork& net, const ExperimentConfig& cfg,
                                    const DistanceOracle& oracle) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = cfg;
  report.params = net.params();
  report.vertices = net.size();
  report.road_edges = net.base().edge_count();
  report.long_range_edges = net.long_range().size();
  report.dropout = cfg.dropout.front();
  const auto pairs = experiment_pairs(net.size(), cfg);
  report.runs = route_pairs(net, pairs, report.dropout, cfg.seed, oracle, resolve_threads(cfg.threads),
                            cfg.reuse_target_maps);
  report.summary = summarize(report.runs);
  report.whole = degree_distribution(net);
  report.visited = degree_distribution(net, std::span<const RunRecord>(report.runs));
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<SweepPoint> dropout_sweep(const SocialNetwork& net, const ExperimentConfig& cfg,
                                      const DistanceOracle& oracle) {
  cfg.validate();
  const auto pairs = experiment_pairs(net.size(), cfg);
  auto runs = route_pairs(net, pairs, cfg.dropout, cfg.seed, oracle, resolve_threads(cfg.threads),
                          cfg.reuse_target_maps);
  std::vector<SweepPoint> out;
  for (std::size_t k = 0; k < cfg.dropout.size(); ++k) out.push_back({cfg.dropout[k], summarize(runs[k])});
  return out;
}

std::uint64_t sweep_seed(std::uint64_t base_seed, double s) { return derive_seed(base_seed, s); }

std::vector<SweepPoint> sweep_clustering_exponent(std::shared_ptr<const RoadNetwork> g, const ModelParams& base,
                                                  std::span<const double> s_values, const ExperimentConfig& cfg,
                                                  const DistanceOracle& oracle) {
  cfg.validate();
  if (s_values.empty()) throw ParamError("sweep_clustering_exponent: no s values");
  const auto pairs = experiment_pairs(g->size(), cfg);
  const unsigned threads = resolve_threads(cfg.threads);
  // Networks are built in parallel across sweep points; routing then uses all
  // workers for one point at a time.
  std::vector<std::optional<SocialNetwork>> nets(s_values.size());
  parallel_for(s_values.size(), threads, [&](std::size_t k) {
    ModelParams params = base;
    params.s = s_values[k];
    params.seed = sweep_seed(base.seed, s_values[k]);
    nets[k] = construct(g, params, oracle);
  });
  std::vector<SweepPoint> out;
  for (std::size_t k = 0; k < s_values.size(); ++k) {
    auto runs = route_pairs(*nets[k], pairs, cfg.dropout.front(), cfg.seed, oracle, threads, cfg.reuse_target_maps);
    out.push_back({s_values[k], summarize(runs)});
    nets[k].reset();
  }
  return out;
}

}  // namespace smallworld
