#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smallworld/distance.hpp"
#include "smallworld/models.hpp"
#include "smallworld/routing.hpp"

namespace smallworld {

inline constexpr std::uint64_t kDefaultSeed = 20240229;

struct ExperimentConfig {
  std::string dataset_id = "unnamed";
  std::size_t num_pairs = 1000;
  std::vector<double> dropout{0.0};  // first entry drives run_hop_experiment
  std::vector<double> s_values;      // clustering-exponent sweep, may be empty
  std::uint64_t seed = kDefaultSeed; // every sub-seed derives from this
  unsigned threads = 0;              // 0: hardware concurrency
  bool reuse_target_maps = true;     // compute one distance map per distinct target

  // Throws ParamError on num_pairs == 0, an empty dropout list, or p outside [0, 1].
  void validate() const;
};

struct SourceTarget {
  VertexId source = 0;
  VertexId target = 0;
  friend bool operator==(const SourceTarget&, const SourceTarget&) = default;
};

// k uniform pairs with source != target; pairs may repeat. Throws ParamError for n < 2.
std::vector<SourceTarget> sample_pairs(std::size_t n, std::size_t k, Rng& rng);

// The pair list an experiment uses for `cfg`.
std::vector<SourceTarget> experiment_pairs(std::size_t n, const ExperimentConfig& cfg);

struct RunRecord {
  std::size_t run_id = 0;
  VertexId source = 0;
  VertexId target = 0;
  double dropout = 0.0;
  RouteResult result;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Routes every pair at dropout p. Run i uses a route seed derived from
// (master_seed, i) only, so the same run sees the same random stream at every
// p and dropout is coupled across a sweep. Output order follows `pairs`.
std::vector<RunRecord> route_pairs(const SocialNetwork& net, std::span<const SourceTarget> pairs, double p,
                                   std::uint64_t master_seed, const DistanceOracle& oracle, unsigned threads = 1,
                                   bool reuse_target_maps = true);

// Same, for several dropout values at once: each target's map is computed once
// and reused for every p. Result is indexed [p index][run].
std::vector<std::vector<RunRecord>> route_pairs(const SocialNetwork& net, std::span<const SourceTarget> pairs,
                                                std::span<const double> ps, std::uint64_t master_seed,
                                                const DistanceOracle& oracle, unsigned threads = 1,
                                                bool reuse_target_maps = true);

// Hop statistics over delivered runs only.
struct HopSummary {
  std::size_t runs = 0;
  std::size_t delivered = 0;
  double delivery_rate = 0.0;
  double mean_hops = 0.0;  // NaN when nothing was delivered
  double median_hops = 0.0;
  double stddev = 0.0;     // sample standard deviation
  double std_error = 0.0;  // stddev / sqrt(delivered)
  std::uint32_t min_hops = 0;
  std::uint32_t max_hops = 0;
  friend bool operator==(const HopSummary&, const HopSummary&) = default;
};

HopSummary summarize(std::span<const RunRecord> runs);

struct LogBin {
  std::uint32_t lo = 0;  // [lo, hi)
  std::uint32_t hi = 0;
  std::uint64_t count = 0;
  double density = 0.0;  // count / (width * total)
};

struct DegreeHistogram {
  std::map<std::uint32_t, std::uint64_t> counts;  // total degree -> count
  std::vector<LogBin> bins;                       // powers-of-two bins
  std::optional<double> tail_slope;               // least squares on log-log bins, first bin excluded

  std::uint64_t total() const;
  std::uint32_t min_degree() const;
  std::uint32_t max_degree() const;
  // log10(max_degree / min_degree) over the histogram's support.
  double decades() const;
};

// Total-degree histogram of every vertex.
DegreeHistogram degree_distribution(const SocialNetwork& net);
// Visit-frequency weighted: each holder in each trace (forwarders and the final
// holder) adds one count at its total degree.
DegreeHistogram degree_distribution(const SocialNetwork& net, std::span<const RoutingTrace> traces);
DegreeHistogram degree_distribution(const SocialNetwork& net, std::span<const RunRecord> runs);

struct ExperimentReport {
  ExperimentConfig config;
  ModelParams params;
  std::size_t vertices = 0;
  std::size_t road_edges = 0;
  std::size_t long_range_edges = 0;
  double dropout = 0.0;
  HopSummary summary;
  std::vector<RunRecord> runs;
  DegreeHistogram whole;
  DegreeHistogram visited;
  double wall_seconds = 0.0;  // not serialized, so reports stay byte-stable
};

// Routes cfg.num_pairs pairs at cfg.dropout.front().
ExperimentReport run_hop_experiment(const SocialNetwork& net, const ExperimentConfig& cfg,
                                    const DistanceOracle& oracle);

struct SweepPoint {
  double param = 0.0;
  HopSummary summary;
};

// One point per cfg.dropout entry, same pairs and route seeds throughout.
std::vector<SweepPoint> dropout_sweep(const SocialNetwork& net, const ExperimentConfig& cfg,
                                      const DistanceOracle& oracle);

// Regenerates the network for each s (seed derived from (base.seed, s)) and
// routes the same pair list at cfg.dropout.front(). `oracle` serves both
// construction and routing, so it should not be an unbounded cache.
std::vector<SweepPoint> sweep_clustering_exponent(std::shared_ptr<const RoadNetwork> g, const ModelParams& base,
                                                  std::span<const double> s_values, const ExperimentConfig& cfg,
                                                  const DistanceOracle& oracle);

// Seed used for the network at sweep point s.
std::uint64_t sweep_seed(std::uint64_t base_seed, double s);

unsigned resolve_threads(unsigned requested);

}  // namespace smallworld
