#include <doctest.h>

#include <random>

#include "smallworld/errors.hpp"
#include "smallworld/routing.hpp"
#include "support/fixtures.hpp"

using namespace smallworld;
using smallworld::testing::path_graph;
using smallworld::testing::random_connected;
using smallworld::testing::road_only;
using smallworld::testing::share;

namespace {

RouteResult route(const SocialNetwork& net, VertexId s, VertexId t, double p = 0.0, std::uint64_t seed = 1) {
  const auto map = sssp(net.base(), t);
  return greedy_route(net, map, {s, t, p, seed});
}

SocialNetwork with_edges(std::shared_ptr<const RoadNetwork> g, std::vector<LongRangeEdge> edges) {
  std::vector<VertexId> order(g->size());
  for (VertexId i = 0; i < order.size(); ++i) order[i] = i;
  return SocialNetwork::from_parts(std::move(g), ModelParams{}, std::move(edges), std::move(order));
}

}  // namespace

TEST_CASE("source equals target is a zero-hop delivery") {
  const auto net = road_only(share(path_graph({1, 1, 1})));
  const auto r = route(net, 2, 2);
  CHECK(r.delivered);
  CHECK(r.hops == 0);
  CHECK(r.trace.steps.empty());
  CHECK(r.trace.final_vertex == 2);
}

TEST_CASE("direct contact is one hop") {
  const auto net = with_edges(share(path_graph({1, 1, 1, 1})), {{0, 4}});
  const auto r = route(net, 0, 4);
  CHECK(r.delivered);
  CHECK(r.hops == 1);
}

TEST_CASE("five-vertex path is routed end to end") {
  const auto net = road_only(share(path_graph({1, 2, 3, 4})));
  const auto r = route(net, 0, 4);
  CHECK(r.delivered);
  CHECK(r.hops == 4);
  REQUIRE(r.trace.steps.size() == 4);
  const std::vector<double> remaining{10, 9, 7, 4};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(r.trace.steps[i].vertex == i);
    CHECK(r.trace.steps[i].remaining == remaining[i]);
  }
  // Last step is the holder one hop before the target.
  CHECK(r.trace.steps.back().remaining == 4);
  CHECK(r.trace.final_vertex == 4);
  CHECK(r.trace.outcome == RouteOutcome::kDelivered);
}

TEST_CASE("greedy takes the long-range shortcut") {
  const auto net = with_edges(share(path_graph({1, 1, 1, 1, 1, 1})), {{0, 5}});
  const auto r = route(net, 0, 6);
  CHECK(r.hops == 2);
  CHECK(r.trace.steps[1].vertex == 5);
}

TEST_CASE("ties go to the smallest vertex id") {
  // Square 0-1-3, 0-2-3 with equal weights: from 0 towards 3, both 1 and 2 are at distance 1.
  const auto g = share(RoadNetwork::from_edges({{0, 0}, {1, 0}, {0, 1}, {1, 1}},
                                               {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}}));
  const auto r = route(road_only(g), 0, 3);
  CHECK(r.trace.steps[1].vertex == 1);
}

TEST_CASE("dropout one drops at the source") {
  const auto net = road_only(share(path_graph({1, 1})));
  const auto r = route(net, 0, 2, 1.0);
  CHECK_FALSE(r.delivered);
  CHECK(r.hops == 0);
  CHECK(r.trace.outcome == RouteOutcome::kDropped);
  CHECK(r.trace.final_vertex == 0);
  CHECK(r.trace.steps.empty());
}

TEST_CASE("dropout one still delivers when source is target") {
  const auto net = road_only(share(path_graph({1, 1})));
  CHECK(route(net, 1, 1, 1.0).delivered);
}

TEST_CASE("routing rejects bad queries") {
  const auto net = road_only(share(path_graph({1, 1})));
  const auto map = sssp(net.base(), 2);
  CHECK_THROWS_AS(greedy_route(net, map, {0, 1, 0.0, 1}), ParamError);
  CHECK_THROWS_AS(greedy_route(net, map, {5, 2, 0.0, 1}), ParamError);
  CHECK_THROWS_AS(greedy_route(net, map, {0, 2, 1.5, 1}), ParamError);
}

TEST_CASE("a map without progress triggers the invariant check") {
  const auto net = road_only(share(path_graph({1, 1})));
  DistanceMap bogus{2, {1, 1, 0}};
  CHECK_THROWS_AS(greedy_route(net, bogus, {0, 2, 0.0, 1}), InvariantError);
}

TEST_CASE("random queries: delivery, strict progress, hop bound, determinism") {
  const auto g = share(random_connected(400, 300, 61));
  DijkstraOracle oracle(g);
  ModelParams p;
  p.m = 2;
  p.seed = 67;
  const auto net = construct_npa(g, p, oracle);
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(net.size() - 1));
  for (int i = 0; i < 300; ++i) {
    const VertexId s = pick(rng), t = pick(rng);
    const auto map = sssp(net.base(), t);
    const auto r = greedy_route(net, map, {s, t, 0.0, 1});
    CHECK(r.delivered);
    CHECK(r.hops == r.trace.steps.size());
    for (std::size_t k = 1; k < r.trace.steps.size(); ++k) {
      CHECK(r.trace.steps[k].remaining < r.trace.steps[k - 1].remaining);
    }
    for (const auto& step : r.trace.steps) CHECK(step.total_degree == net.total_degree(step.vertex));
    CHECK(r.hops >= hop_distance(net, s, t));

    const auto d1 = greedy_route(net, map, {s, t, 0.3, 99});
    const auto d2 = greedy_route(net, map, {s, t, 0.3, 99});
    CHECK(d1 == d2);
  }
}

TEST_CASE("hop distance") {
  const auto net = with_edges(share(path_graph({1, 1, 1, 1, 1})), {{1, 4}});
  CHECK(hop_distance(net, 0, 0) == 0);
  CHECK(hop_distance(net, 0, 5) == 3);
  CHECK(hop_distance(net, 0, 4) == 2);
}
