#include "smallworld/distance.hpp"

#include <limits>
#include <mutex>
#include <queue>
#include <string>

#include "smallworld/errors.hpp"

namespace smallworld {

DistanceMap sssp(const RoadNetwork& g, VertexId source) {
  if (source >= g.size()) {
    throw ParamError("sssp: source " + std::to_string(source) + " out of range [0, " + std::to_string(g.size()) + ")");
  }
  DistanceMap out{source, std::vector<double>(g.size(), std::numeric_limits<double>::infinity())};
  auto& dist = out.dist;
  using Item = std::pair<double, VertexId>;
  std::vector<Item> storage;
  storage.reserve(g.size());
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq(std::greater<>{}, std::move(storage));
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& a : g.neighbors(v)) {
      const double nd = d + a.weight;
      if (nd < dist[a.head]) {
        dist[a.head] = nd;
        pq.push({nd, a.head});
      }
    }
  }
  return out;
}

std::shared_ptr<const DistanceMap> distances_to_target(const DistanceOracle& oracle, VertexId target) {
  return oracle.distances_from(target);
}

std::shared_ptr<const DistanceMap> DijkstraOracle::distances_from(VertexId source) const {
  return std::make_shared<const DistanceMap>(sssp(*g_, source));
}

std::shared_ptr<const DistanceMap> CachingOracle::distances_from(VertexId source) const {
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(source); it != cache_.end()) return it->second;
  }
  auto map = inner_->distances_from(source);
  std::unique_lock lock(mutex_);
  cache_[source] = map;
  return map;
}

std::size_t CachingOracle::cached() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

void CachingOracle::clear() {
  std::unique_lock lock(mutex_);
  cache_.clear();
}

}  // namespace smallworld
