#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "smallworld/models.hpp"
#include "smallworld/roadnet.hpp"

namespace smallworld::testing {

// Path 0 - 1 - ... - k with the given edge weights; vertex i sits at (i, 0).
RoadNetwork path_graph(const std::vector<double>& weights);

// Random spanning tree plus `extra` random edges; weights uniform in [1, 10]
// (integers when `integer_weights`). Always connected.
RoadNetwork random_connected(std::size_t n, std::size_t extra, std::uint64_t seed, bool integer_weights = false);

std::shared_ptr<const RoadNetwork> share(RoadNetwork g);

// Cuts g along the vertical line x = cut into two networks that share the
// endpoints of every crossing edge (both halves keep those edges), the way
// adjacent state files share border vertices. Each half is reindexed densely.
std::pair<RoadNetwork, RoadNetwork> split_at_x(const RoadNetwork& g, double cut);

// Social network with no long-range edges.
SocialNetwork road_only(std::shared_ptr<const RoadNetwork> g);

// Brute-force reference: n-1 relaxation rounds over every edge in both directions.
std::vector<double> bellman_ford(const RoadNetwork& g, VertexId source);

// Pearson chi-square statistic of observed counts against expected probabilities.
// Cells with zero expected probability must be observed zero times (otherwise +inf).
struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double critical_99 = 0.0;
  bool accepted() const { return statistic <= critical_99; }
};
ChiSquare chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected_probability);

}  // namespace smallworld::testing
