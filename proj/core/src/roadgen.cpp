#include "smallworld/roadgen.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>
#include <vector>

#include "smallworld/errors.hpp"
#include "smallworld/seed.hpp"

namespace smallworld {

namespace {

// Uniform grid over the points for radius queries.
class PointGrid {
 public:
  PointGrid(const std::vector<Coord>& pts, double cell) : pts_(pts), cell_(cell) {
    for (VertexId i = 0; i < pts.size(); ++i) cells_[key(cell_of(pts[i].x), cell_of(pts[i].y))].push_back(i);
  }

  // Calls f(j) for every point j within `radius` of p (j may equal the query point).
  template <typename F>
  void within(const Coord& p, double radius, F&& f) const {
    const auto r = static_cast<std::int64_t>(std::ceil(radius / cell_));
    const auto cx = cell_of(p.x), cy = cell_of(p.y);
    const double r2 = radius * radius;
    for (auto dx = -r; dx <= r; ++dx) {
      for (auto dy = -r; dy <= r; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (VertexId j : it->second) {
          const double ex = pts_[j].x - p.x, ey = pts_[j].y - p.y;
          if (ex * ex + ey * ey <= r2) f(j);
        }
      }
    }
  }

 private:
  std::int64_t cell_of(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) << 32) ^ static_cast<std::uint64_t>(y & 0xffffffff);
  }

  const std::vector<Coord>& pts_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<VertexId>> cells_;
};

double dist(const Coord& a, const Coord& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

RoadNetwork synthetic_road_network(const SyntheticRoadOptions& opts) {
  if (opts.vertices < 2) throw ParamError("synthetic_road_network: need at least 2 vertices");
  if (!(opts.rural_fraction >= 0.0 && opts.rural_fraction <= 1.0)) {
    throw ParamError("synthetic_road_network: rural_fraction must lie in [0, 1]");
  }
  Rng rng(derive_seed(opts.seed, "roadgen"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Oversample so the Dijkstra ball can be cut to the exact size.
  const std::size_t pool = opts.vertices + opts.vertices / 3 + 16;
  const double side = std::sqrt(static_cast<double>(pool)) * opts.spacing;
  const std::size_t towns = std::max<std::size_t>(1, pool / std::max<std::size_t>(1, opts.people_per_town));

  std::vector<Coord> town_centre(towns);
  std::vector<double> town_weight(towns);
  double weight_sum = 0.0;
  for (std::size_t t = 0; t < towns; ++t) {
    town_centre[t] = {opts.origin.x + (0.1 + 0.8 * unit(rng)) * side, opts.origin.y + (0.1 + 0.8 * unit(rng)) * side};
    town_weight[t] = 1.0 / static_cast<double>(t + 1);
    weight_sum += town_weight[t];
  }

  std::vector<Coord> pts;
  pts.reserve(pool);
  const auto rural = static_cast<std::size_t>(std::round(opts.rural_fraction * static_cast<double>(pool)));
  for (std::size_t i = 0; i < rural; ++i) {
    pts.push_back({opts.origin.x + unit(rng) * side, opts.origin.y + unit(rng) * side});
  }
  std::vector<std::size_t> town_pop(towns, 0);
  for (std::size_t i = rural; i < pool; ++i) {
    double r = unit(rng) * weight_sum;
    std::size_t t = 0;
    while (t + 1 < towns && r > town_weight[t]) r -= town_weight[t++];
    ++town_pop[t];
  }
  for (std::size_t t = 0; t < towns; ++t) {
    // Town radius grows with population at roughly 4x the rural density.
    const double sigma = 0.5 * opts.spacing * std::sqrt(static_cast<double>(town_pop[t]) / 4.0);
    for (std::size_t k = 0; k < town_pop[t]; ++k) {
      pts.push_back({town_centre[t].x + sigma * gauss(rng), town_centre[t].y + sigma * gauss(rng)});
    }
  }
  for (auto& p : pts) p = {std::round(p.x), std::round(p.y)};
  std::sort(pts.begin(), pts.end(), [](const Coord& a, const Coord& b) { return std::pair{a.x, a.y} < std::pair{b.x, b.y}; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Relative neighbourhood graph: (u, v) is an edge iff no w is strictly closer
  // to both u and v than they are to each other. Candidates v come from a
  // radius that grows until u has enough neighbours.
  PointGrid grid(pts, opts.spacing);
  std::vector<RoadEdge> edges;
  std::vector<VertexId> near;
  for (VertexId u = 0; u < pts.size(); ++u) {
    double radius = opts.spacing;
    for (;;) {
      near.clear();
      grid.within(pts[u], radius, [&](VertexId j) { near.push_back(j); });
      if (near.size() >= 16 || near.size() == pts.size() || radius > side * 2) break;
      radius *= 1.5;
    }
    for (VertexId v : near) {
      if (v <= u) continue;
      const double duv = dist(pts[u], pts[v]);
      bool empty_lune = true;
      for (VertexId w : near) {
        if (w == u || w == v) continue;
        if (std::max(dist(pts[u], pts[w]), dist(pts[v], pts[w])) < duv) {
          empty_lune = false;
          break;
        }
      }
      if (empty_lune && duv <= radius) {
        // Points of the lune lie within duv of u, hence inside `near`.
        std::uniform_real_distribution<double> detour(1.0, 1.15);
        edges.push_back({u, v, std::max(1.0, std::round(duv * detour(rng)))});
      }
    }
  }
  RoadNetwork lcc = extract_lcc(RoadNetwork::from_edges(pts, std::move(edges)));
  if (lcc.size() < opts.vertices) {
    throw ParamError("synthetic_road_network: connected component smaller than requested size");
  }

  // Compact region around the centre.
  const Coord centre{opts.origin.x + 0.5 * side, opts.origin.y + 0.5 * side};
  VertexId start = 0;
  double best = INFINITY;
  for (VertexId v = 0; v < lcc.size(); ++v) {
    const double d = dist(lcc.coord(v), centre);
    if (d < best) {
      best = d;
      start = v;
    }
  }
  std::vector<double> dmin(lcc.size(), INFINITY);
  std::vector<bool> taken(lcc.size(), false);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dmin[start] = 0.0;
  pq.push({0.0, start});
  std::size_t count = 0;
  while (!pq.empty() && count < opts.vertices) {
    auto [d, v] = pq.top();
    pq.pop();
    if (taken[v]) continue;
    taken[v] = true;
    ++count;
    for (const auto& a : lcc.neighbors(v)) {
      if (!taken[a.head] && d + a.weight < dmin[a.head]) {
        dmin[a.head] = d + a.weight;
        pq.push({dmin[a.head], a.head});
      }
    }
  }

  // Each taken vertex's Dijkstra predecessor was taken before it, so the
  // induced subgraph is connected.
  std::vector<VertexId> remap(lcc.size(), ~VertexId{0});
  std::vector<Coord> out_coords;
  for (VertexId v = 0; v < lcc.size(); ++v) {
    if (taken[v]) {
      remap[v] = static_cast<VertexId>(out_coords.size());
      out_coords.push_back(lcc.coord(v));
    }
  }
  std::vector<RoadEdge> out_edges;
  for (const auto& e : lcc.edges()) {
    if (taken[e.u] && taken[e.v]) out_edges.push_back({remap[e.u], remap[e.v], e.weight});
  }
  return RoadNetwork::from_edges(std::move(out_coords), std::move(out_edges));
}

}  // namespace smallworld
