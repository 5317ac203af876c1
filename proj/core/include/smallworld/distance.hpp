#pragma once

#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "smallworld/roadnet.hpp"

namespace smallworld {

// Exact road-network distances from one source to every vertex.
struct DistanceMap {
  VertexId source = 0;
  std::vector<double> dist;

  double operator[](VertexId v) const { return dist[v]; }
  std::size_t size() const noexcept { return dist.size(); }
  friend bool operator==(const DistanceMap&, const DistanceMap&) = default;
};

// Single-source shortest paths over road edges (binary-heap Dijkstra).
// Throws ParamError when `source` is out of range.
DistanceMap sssp(const RoadNetwork& g, VertexId source);

// d(u, t) for every u. Valid as sssp from `target` because road edges are undirected.
class DistanceOracle;
std::shared_ptr<const DistanceMap> distances_to_target(const DistanceOracle& oracle, VertexId target);

// Source of exact DistanceMaps over one road network. Implementations may cache
// but must always return the same values as sssp().
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;
  virtual std::shared_ptr<const DistanceMap> distances_from(VertexId source) const = 0;
  virtual const RoadNetwork& network() const = 0;
};

// Computes a fresh map on every call. Memory stays O(n).
class DijkstraOracle final : public DistanceOracle {
 public:
  explicit DijkstraOracle(std::shared_ptr<const RoadNetwork> g) : g_(std::move(g)) {}
  std::shared_ptr<const DistanceMap> distances_from(VertexId source) const override;
  const RoadNetwork& network() const override { return *g_; }

 private:
  std::shared_ptr<const RoadNetwork> g_;
};

// Memoizes maps from an inner oracle. Safe for concurrent use; two threads
// racing on the same source both compute it and the last write wins (the
// values are identical).
class CachingOracle final : public DistanceOracle {
 public:
  explicit CachingOracle(std::shared_ptr<const DistanceOracle> inner) : inner_(std::move(inner)) {}
  std::shared_ptr<const DistanceMap> distances_from(VertexId source) const override;
  const RoadNetwork& network() const override { return inner_->network(); }

  std::size_t cached() const;
  void clear();

 private:
  std::shared_ptr<const DistanceOracle> inner_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<VertexId, std::shared_ptr<const DistanceMap>> cache_;
};

}  // namespace smallworld
