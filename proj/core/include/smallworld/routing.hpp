#pragma once

#include <cstdint>
#include <vector>

#include "smallworld/distance.hpp"
#include "smallworld/models.hpp"

namespace smallworld {

struct RouteQuery {
  VertexId source = 0;
  VertexId target = 0;
  double dropout_p = 0.0;  // per-holder probability of abandoning the message
  std::uint64_t seed = 0;
};

enum class RouteOutcome { kDelivered, kDropped };

// One forwarding holder: the vertex, its road distance to the target, and its
// total contact count.
struct TraceStep {
  VertexId vertex = 0;
  double remaining = 0.0;
  std::uint32_t total_degree = 0;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

// `steps` lists every holder that forwarded the message, in order, so the last
// step of a delivered trace is the vertex one hop before the target. The holder
// where the message ended (target, or the vertex that dropped it) is `final_vertex`.
struct RoutingTrace {
  std::vector<TraceStep> steps;
  VertexId final_vertex = 0;
  RouteOutcome outcome = RouteOutcome::kDelivered;
  friend bool operator==(const RoutingTrace&, const RoutingTrace&) = default;
};

struct RouteResult {
  bool delivered = false;
  std::uint32_t hops = 0;  // forwarding events, including the one into the target
  RoutingTrace trace;
  friend bool operator==(const RouteResult&, const RouteResult&) = default;
};

// Greedy decentralized routing: each holder forwards to the contact (road or
// long-range) with the smallest road distance to the target, ties to the
// smallest id. Before each forwarding decision the holder drops the message
// with probability q.dropout_p (the source included). Randomness comes only
// from q.seed.
//
// Throws ParamError on out-of-range vertices or a map for the wrong target, and
// InvariantError if a holder has no strictly closer contact.
RouteResult greedy_route(const SocialNetwork& net, const DistanceMap& target_map, const RouteQuery& q);

// d_h: unweighted hop distance over road and long-range edges (BFS).
std::uint32_t hop_distance(const SocialNetwork& net, VertexId source, VertexId target);

}  // namespace smallworld
