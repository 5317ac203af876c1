#include "smallworld/routing.hpp"

#include <limits>
#include <queue>
#include <random>
#include <string>

#include "smallworld/errors.hpp"

namespace smallworld {

RouteResult greedy_route(const SocialNetwork& net, const DistanceMap& target_map, const RouteQuery& q) {
  const std::size_t n = net.size();
  if (q.source >= n || q.target >= n) throw ParamError("greedy_route: query vertex out of range");
  if (target_map.source != q.target || target_map.size() != n) {
    throw ParamError("greedy_route: distance map does not belong to the query target");
  }
  if (!(q.dropout_p >= 0.0 && q.dropout_p <= 1.0)) throw ParamError("greedy_route: dropout must be in [0, 1]");

  Rng rng(q.seed);
  std::bernoulli_distribution drop(q.dropout_p);
  RouteResult result;
  VertexId current = q.source;
  while (current != q.target) {
    if (q.dropout_p > 0.0 && drop(rng)) {
      result.trace.outcome = RouteOutcome::kDropped;
      result.trace.final_vertex = current;
      result.delivered = false;
      return result;
    }
    const double here = target_map[current];
    result.trace.steps.push_back({current, here, net.total_degree(current)});

    VertexId best = current;
    double best_dist = std::numeric_limits<double>::infinity();
    net.for_each_contact(current, [&](VertexId u) {
      const double d = target_map[u];
      if (d < best_dist || (d == best_dist && u < best)) {
        best = u;
        best_dist = d;
      }
    });
    if (!(best_dist < here)) {
      throw InvariantError("greedy_route: no contact of vertex " + std::to_string(current) +
                           " is strictly closer to target " + std::to_string(q.target));
    }
    current = best;
    ++result.hops;
  }
  result.trace.outcome = RouteOutcome::kDelivered;
  result.trace.final_vertex = current;
  result.delivered = true;
  return result;
}

std::uint32_t hop_distance(const SocialNetwork& net, VertexId source, VertexId target) {
  const std::size_t n = net.size();
  if (source >= n || target >= n) throw ParamError("hop_distance: vertex out of range");
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> hops(n, kUnseen);
  std::queue<VertexId> frontier;
  hops[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    VertexId v = frontier.front();
    frontier.pop();
    if (v == target) return hops[v];
    net.for_each_contact(v, [&](VertexId u) {
      if (hops[u] == kUnseen) {
        hops[u] = hops[v] + 1;
        frontier.push(u);
      }
    });
  }
  return kUnseen;
}

}  // namespace smallworld
