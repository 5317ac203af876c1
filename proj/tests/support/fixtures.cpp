#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

namespace smallworld::testing {

RoadNetwork path_graph(const std::vector<double>& weights) {
  std::vector<Coord> coords;
  std::vector<RoadEdge> edges;
  for (std::size_t i = 0; i <= weights.size(); ++i) coords.push_back({static_cast<double>(i), 0.0});
  for (std::size_t i = 0; i < weights.size(); ++i) {
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), weights[i]});
  }
  return RoadNetwork::from_edges(std::move(coords), std::move(edges));
}

RoadNetwork random_connected(std::size_t n, std::size_t extra, std::uint64_t seed, bool integer_weights) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(1.0, 10.0);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  auto draw_weight = [&] { return integer_weights ? std::round(weight(rng)) : weight(rng); };
  std::vector<Coord> coords(n);
  for (auto& c : coords) c = {pos(rng), pos(rng)};
  std::vector<RoadEdge> edges;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    edges.push_back({static_cast<VertexId>(parent(rng)), static_cast<VertexId>(v), draw_weight()});
  }
  if (n >= 2) {
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    for (std::size_t i = 0; i < extra; ++i) {
      auto a = any(rng), b = any(rng);
      if (a != b) edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b), draw_weight()});
    }
  }
  return RoadNetwork::from_edges(std::move(coords), std::move(edges));
}

std::shared_ptr<const RoadNetwork> share(RoadNetwork g) { return std::make_shared<const RoadNetwork>(std::move(g)); }

SocialNetwork road_only(std::shared_ptr<const RoadNetwork> g) {
  std::vector<VertexId> order(g->size());
  std::iota(order.begin(), order.end(), VertexId{0});
  ModelParams p;
  p.kind = ModelKind::kKleinberg;
  return SocialNetwork::from_parts(std::move(g), p, {}, std::move(order));
}

std::vector<double> bellman_ford(const RoadNetwork& g, VertexId source) {
  std::vector<double> d(g.size(), std::numeric_limits<double>::infinity());
  d[source] = 0.0;
  for (std::size_t round = 1; round < g.size(); ++round) {
    bool changed = false;
    for (const auto& e : g.edges()) {
      if (d[e.u] + e.weight < d[e.v]) {
        d[e.v] = d[e.u] + e.weight;
        changed = true;
      }
      if (d[e.v] + e.weight < d[e.u]) {
        d[e.u] = d[e.v] + e.weight;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return d;
}

ChiSquare chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected_probability) {
  ChiSquare out;
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probability[i] * total;
    if (expected_probability[i] == 0.0) {
      if (observed[i] != 0) out.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    ++cells;
    const double diff = static_cast<double>(observed[i]) - e;
    out.statistic += diff * diff / e;
  }
  out.dof = cells > 1 ? cells - 1 : 1;
  boost::math::chi_squared dist(static_cast<double>(out.dof));
  out.critical_99 = boost::math::quantile(dist, 0.99);
  return out;
}


std::pair<RoadNetwork, RoadNetwork> split_at_x(const RoadNetwork& g, double cut) {
  auto half = [&](bool left) {
    std::vector<VertexId> remap(g.size(), ~VertexId{0});
    std::vector<Coord> coords;
    std::vector<RoadEdge> edges;
    auto id = [&](VertexId v) {
      if (remap[v] == ~VertexId{0}) {
        remap[v] = static_cast<VertexId>(coords.size());
        coords.push_back(g.coord(v));
      }
      return remap[v];
    };
    for (const auto& e : g.edges()) {
      const bool u_left = g.coord(e.u).x < cut, v_left = g.coord(e.v).x < cut;
      if (left ? (u_left || v_left) : (!u_left || !v_left)) edges.push_back({id(e.u), id(e.v), e.weight});
    }
    return RoadNetwork::from_edges(std::move(coords), std::move(edges));
  };
  return {half(true), half(false)};
}

}  // namespace smallworld::testing
