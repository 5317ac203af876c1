#pragma once

#include <cstddef>
#include <cstdint>

#include "smallworld/roadnet.hpp"

namespace smallworld {

// Synthetic road-like network: points drawn from a mix of towns (Gaussian
// clusters with Zipf-distributed populations) and uniform rural background,
// connected by their relative neighbourhood graph. RNGs contain the Euclidean
// MST and have average degree close to 2.5, like real road graphs. Weights are
// rounded Euclidean lengths with a small detour factor (integers, as in the
// TIGER/Line DIMACS files).
struct SyntheticRoadOptions {
  std::size_t vertices = 10'000;   // exact size of the returned network
  double rural_fraction = 0.35;    // share of points outside towns
  std::size_t people_per_town = 1500;
  double spacing = 1000.0;         // mean rural point spacing, in coordinate units
  Coord origin{};
  std::uint64_t seed = 1;
};

// Connected network of exactly `opts.vertices` vertices: the first vertices in
// Dijkstra order from the vertex nearest the region centre.
RoadNetwork synthetic_road_network(const SyntheticRoadOptions& opts);

}  // namespace smallworld
