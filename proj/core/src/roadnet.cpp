#include "smallworld/roadnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <unordered_map>

#include "smallworld/errors.hpp"
#include "text_util.hpp"

namespace smallworld {

using detail::format_double;
using detail::next_line;
using detail::parse_number;
using detail::split_ws;

RoadNetwork RoadNetwork::from_edges(std::vector<Coord> coords, std::vector<RoadEdge> edges) {
  const std::size_t n = coords.size();
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw FormatError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                        ") references a vertex outside [0, " + std::to_string(n) + ")");
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      throw FormatError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                        ") has non-positive weight " + format_double(e.weight));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::erase_if(edges, [](const RoadEdge& e) { return e.u == e.v; });
  std::sort(edges.begin(), edges.end(), [](const RoadEdge& a, const RoadEdge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.weight < b.weight;
  });
  // Sorted by weight within a pair, so unique keeps the minimum.
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const RoadEdge& a, const RoadEdge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());

  RoadNetwork g;
  g.coords_ = std::move(coords);
  g.edges_ = std::move(edges);
  g.offsets_.assign(n + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.arcs_.resize(2 * g.edges_.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : g.edges_) {
    g.arcs_[fill[e.u]++] = {e.v, e.weight};
    g.arcs_[fill[e.v]++] = {e.u, e.weight};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.arcs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.arcs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]),
              [](const Arc& a, const Arc& b) { return a.head < b.head; });
  }
  return g;
}

std::size_t RoadNetwork::max_degree() const noexcept {
  std::size_t best = 0;
  for (std::size_t v = 0; v < size(); ++v) best = std::max(best, degree(static_cast<VertexId>(v)));
  return best;
}

double RoadNetwork::min_weight() const noexcept {
  if (edges_.empty()) return 0.0;
  double w = edges_.front().weight;
  for (const auto& e : edges_) w = std::min(w, e.weight);
  return w;
}

double RoadNetwork::max_weight() const noexcept {
  double w = 0.0;
  for (const auto& e : edges_) w = std::max(w, e.weight);
  return w;
}

// --- DIMACS ---------------------------------------------------------------

RoadNetwork parse_dimacs(std::istream& gr, std::istream& co) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  std::vector<RoadEdge> edges;

  while (next_line(gr, line, lineno)) {
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (n) throw FormatError("duplicate problem line", lineno);
      if (tok.size() != 4 || tok[1] != "sp") throw FormatError("malformed header, expected 'p sp <n> <m>'", lineno);
      auto nv = parse_number<std::size_t>(tok[2]);
      auto mv = parse_number<std::size_t>(tok[3]);
      if (!nv || !mv) throw FormatError("malformed header counts", lineno);
      n = *nv;
      edges.reserve(*mv);
      continue;
    }
    if (tok[0] == "a") {
      if (!n) throw FormatError("arc before 'p sp' header", lineno);
      if (tok.size() != 4) throw FormatError("malformed arc line, expected 'a <u> <v> <w>'", lineno);
      auto u = parse_number<std::size_t>(tok[1]);
      auto v = parse_number<std::size_t>(tok[2]);
      auto w = parse_number<double>(tok[3]);
      if (!u || !v || !w) throw FormatError("malformed arc line", lineno);
      if (*u < 1 || *u > *n || *v < 1 || *v > *n) {
        throw FormatError("arc references vertex outside [1, " + std::to_string(*n) + "]", lineno);
      }
      if (!(*w > 0.0) || !std::isfinite(*w)) throw FormatError("non-positive arc weight", lineno);
      edges.push_back({static_cast<VertexId>(*u - 1), static_cast<VertexId>(*v - 1), *w});
      continue;
    }
    throw FormatError(n ? "unexpected line in .gr file" : "malformed header, expected 'p sp <n> <m>'", lineno);
  }
  if (!n) throw FormatError("missing 'p sp <n> <m>' header");

  std::vector<Coord> coords(*n);
  std::vector<bool> seen(*n, false);
  lineno = 0;
  while (next_line(co, line, lineno)) {
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "c" || tok[0] == "p") continue;
    if (tok[0] != "v" || tok.size() != 4) throw FormatError("malformed coordinate line, expected 'v <id> <x> <y>'", lineno);
    auto id = parse_number<std::size_t>(tok[1]);
    auto x = parse_number<double>(tok[2]);
    auto y = parse_number<double>(tok[3]);
    if (!id || !x || !y) throw FormatError("malformed coordinate line", lineno);
    if (*id < 1 || *id > *n) throw FormatError("coordinate for vertex outside [1, " + std::to_string(*n) + "]", lineno);
    coords[*id - 1] = {*x, *y};
    seen[*id - 1] = true;
  }
  for (std::size_t i = 0; i < *n; ++i) {
    if (!seen[i]) throw FormatError("vertex " + std::to_string(i + 1) + " has no coordinates");
  }
  return RoadNetwork::from_edges(std::move(coords), std::move(edges));
}

RoadNetwork parse_dimacs_files(const std::filesystem::path& gr, const std::filesystem::path& co) {
  std::ifstream grs(gr);
  if (!grs) throw Error("cannot open " + gr.string());
  std::ifstream cos(co);
  if (!cos) throw Error("cannot open " + co.string());
  try {
    return parse_dimacs(grs, cos);
  } catch (const FormatError& e) {
    throw FormatError(gr.filename().string() + "/" + co.filename().string() + ": " + e.what());
  }
}

void write_dimacs(std::ostream& gr, std::ostream& co, const RoadNetwork& g) {
  gr << "p sp " << g.size() << ' ' << 2 * g.edge_count() << '\n';
  for (const auto& e : g.edges()) {
    const auto w = format_double(e.weight);
    gr << "a " << e.u + 1 << ' ' << e.v + 1 << ' ' << w << '\n';
    gr << "a " << e.v + 1 << ' ' << e.u + 1 << ' ' << w << '\n';
  }
  co << "p aux sp co " << g.size() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    co << "v " << i + 1 << ' ' << format_double(g.coords()[i].x) << ' ' << format_double(g.coords()[i].y)
       << '\n';
  }
}

// --- LCC / normalization ------------------------------------------------------

RoadNetwork extract_lcc(const RoadNetwork& g, std::vector<VertexId>* original_ids) {
  const std::size_t n = g.size();
  if (n == 0) throw ParamError("extract_lcc: empty graph");

  constexpr VertexId kUnset = ~VertexId{0};
  std::vector<VertexId> comp(n, kUnset);
  VertexId best_comp = 0;
  std::size_t best_size = 0;
  VertexId next_comp = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    std::size_t size = 0;
    comp[s] = next_comp;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      ++size;
      for (const auto& a : g.neighbors(v)) {
        if (comp[a.head] == kUnset) {
          comp[a.head] = next_comp;
          stack.push_back(a.head);
        }
      }
    }
    // Components are discovered in order of their smallest id, so strict '>'
    // resolves ties towards the smaller id.
    if (size > best_size) {
      best_size = size;
      best_comp = next_comp;
    }
    ++next_comp;
  }

  std::vector<VertexId> remap(n, kUnset);
  std::vector<Coord> coords;
  coords.reserve(best_size);
  if (original_ids) original_ids->clear();
  for (VertexId v = 0; v < n; ++v) {
    if (comp[v] != best_comp) continue;
    remap[v] = static_cast<VertexId>(coords.size());
    coords.push_back(g.coord(v));
    if (original_ids) original_ids->push_back(v);
  }
  std::vector<RoadEdge> edges;
  for (const auto& e : g.edges()) {
    if (comp[e.u] == best_comp) edges.push_back({remap[e.u], remap[e.v], e.weight});
  }
  return RoadNetwork::from_edges(std::move(coords), std::move(edges));
}

RoadNetwork normalize_weights(const RoadNetwork& g) {
  if (g.edge_count() == 0) return g;
  const double w_min = g.min_weight();
  if (!(w_min > 0.0)) throw FormatError("normalize_weights: zero-weight edge present");
  std::vector<RoadEdge> edges(g.edges().begin(), g.edges().end());
  for (auto& e : edges) e.weight /= w_min;
  return RoadNetwork::from_edges(std::vector<Coord>(g.coords().begin(), g.coords().end()), std::move(edges));
}

// --- merging -------------------------------------------------------------------

namespace {

struct DisjointSets {
  std::vector<VertexId> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), VertexId{0}); }
  VertexId find(VertexId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;  // smallest id stays the representative
  }
};

}  // namespace

MergeResult stitch_networks(std::span<const RoadNetwork> gs, double stitch_radius) {
  if (gs.empty()) throw ParamError("merge_networks: at least one network is required");
  if (!(stitch_radius >= 0.0)) throw ParamError("merge_networks: stitch radius must be nonnegative");

  std::size_t total = 0;
  std::vector<std::size_t> base;
  for (const auto& g : gs) {
    base.push_back(total);
    total += g.size();
  }
  std::vector<Coord> coords;
  std::vector<std::uint32_t> owner;
  coords.reserve(total);
  owner.reserve(total);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    coords.insert(coords.end(), gs[k].coords().begin(), gs[k].coords().end());
    owner.insert(owner.end(), gs[k].size(), static_cast<std::uint32_t>(k));
  }

  DisjointSets sets(total);
  if (gs.size() > 1) {
    // Bucket vertices into cells of side `stitch_radius` (exact coordinates at radius 0)
    // and compare against the 3x3 neighbourhood.
    const double cell = stitch_radius > 0.0 ? stitch_radius : 1.0;
    auto key_of = [&](double x, double y) {
      return stitch_radius > 0.0 ? std::pair<double, double>{std::floor(x / cell), std::floor(y / cell)}
                                 : std::pair<double, double>{x, y};
    };
    std::map<std::pair<double, double>, std::vector<VertexId>> buckets;
    for (VertexId v = 0; v < total; ++v) buckets[key_of(coords[v].x, coords[v].y)].push_back(v);
    const double r2 = stitch_radius * stitch_radius;
    for (VertexId v = 0; v < total; ++v) {
      auto [kx, ky] = key_of(coords[v].x, coords[v].y);
      const int reach = stitch_radius > 0.0 ? 1 : 0;
      for (int dx = -reach; dx <= reach; ++dx) {
        for (int dy = -reach; dy <= reach; ++dy) {
          auto it = buckets.find({kx + dx, ky + dy});
          if (it == buckets.end()) continue;
          for (VertexId u : it->second) {
            if (u <= v || owner[u] == owner[v]) continue;
            const double ex = coords[u].x - coords[v].x;
            const double ey = coords[u].y - coords[v].y;
            if (ex * ex + ey * ey <= r2) sets.unite(u, v);
          }
        }
      }
    }
  }

  constexpr VertexId kUnset = ~VertexId{0};
  std::vector<VertexId> remap(total, kUnset);
  std::vector<Coord> merged_coords;
  for (VertexId v = 0; v < total; ++v) {
    VertexId r = sets.find(v);
    if (remap[r] == kUnset) {
      remap[r] = static_cast<VertexId>(merged_coords.size());
      merged_coords.push_back(coords[r]);
    }
    remap[v] = remap[r];
  }

  MergeResult result;
  std::vector<RoadEdge> edges;
  for (std::size_t k = 0; k < gs.size(); ++k) {
    for (const auto& e : gs[k].edges()) {
      VertexId u = remap[base[k] + e.u];
      VertexId v = remap[base[k] + e.v];
      if (u == v) {
        ++result.dropped_self_loops;
        continue;
      }
      edges.push_back({u, v, e.weight});
    }
  }
  if (result.dropped_self_loops > 0) {
    result.warnings.push_back("stitching collapsed " + std::to_string(result.dropped_self_loops) +
                              " edge(s) into self-loops; dropped");
  }
  result.union_vertices = merged_coords.size();
  result.network = RoadNetwork::from_edges(std::move(merged_coords), std::move(edges));
  return result;
}

MergeResult merge_networks(std::span<const RoadNetwork> gs, double stitch_radius) {
  MergeResult result = stitch_networks(gs, stitch_radius);
  RoadNetwork lcc = extract_lcc(result.network);
  if (lcc.size() < result.union_vertices) {
    result.warnings.push_back("largest component keeps " + std::to_string(lcc.size()) + " of " +
                              std::to_string(result.union_vertices) + " stitched vertices");
  }
  if (2 * lcc.size() < result.union_vertices) {
    result.low_quality = true;
    result.warnings.push_back("stitching quality: largest component is less than half of the union");
  }
  result.network = normalize_weights(lcc);
  return result;
}

// --- snapshots -------------------------------------------------------------------

void write_roadnet(std::ostream& out, const RoadNetwork& g) {
  out << "roadnet v1\n";
  out << "n " << g.size() << " m " << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << "e " << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << "c " << i << ' ' << format_double(g.coords()[i].x) << ' ' << format_double(g.coords()[i].y) << '\n';
  }
}

RoadNetwork read_roadnet_body(std::istream& in, std::size_t& lineno) {
  std::string line;
  if (!next_line(in, line, lineno)) throw FormatError("roadnet: missing size line", lineno);
  auto tok = split_ws(line);
  if (tok.size() != 4 || tok[0] != "n" || tok[2] != "m") throw FormatError("roadnet: expected 'n <n> m <m>'", lineno);
  auto n = parse_number<std::size_t>(tok[1]);
  auto m = parse_number<std::size_t>(tok[3]);
  if (!n || !m) throw FormatError("roadnet: malformed counts", lineno);

  std::vector<RoadEdge> edges;
  edges.reserve(*m);
  for (std::size_t i = 0; i < *m; ++i) {
    if (!next_line(in, line, lineno)) throw FormatError("roadnet: truncated edge list", lineno);
    tok = split_ws(line);
    if (tok.size() != 4 || tok[0] != "e") throw FormatError("roadnet: expected 'e <u> <v> <w>'", lineno);
    auto u = parse_number<VertexId>(tok[1]);
    auto v = parse_number<VertexId>(tok[2]);
    auto w = parse_number<double>(tok[3]);
    if (!u || !v || !w) throw FormatError("roadnet: malformed edge", lineno);
    if (*u >= *v) throw FormatError("roadnet: edge endpoints must satisfy u < v", lineno);
    if (!edges.empty() && std::pair{edges.back().u, edges.back().v} >= std::pair{*u, *v}) {
      throw FormatError("roadnet: edges must be strictly ascending", lineno);
    }
    edges.push_back({*u, *v, *w});
  }
  std::vector<Coord> coords(*n);
  for (std::size_t i = 0; i < *n; ++i) {
    if (!next_line(in, line, lineno)) throw FormatError("roadnet: truncated coordinate list", lineno);
    tok = split_ws(line);
    if (tok.size() != 4 || tok[0] != "c") throw FormatError("roadnet: expected 'c <id> <x> <y>'", lineno);
    auto id = parse_number<std::size_t>(tok[1]);
    auto x = parse_number<double>(tok[2]);
    auto y = parse_number<double>(tok[3]);
    if (!id || !x || !y || *id != i) throw FormatError("roadnet: malformed coordinate", lineno);
    coords[i] = {*x, *y};
  }
  try {
    return RoadNetwork::from_edges(std::move(coords), std::move(edges));
  } catch (const FormatError& e) {
    throw FormatError(std::string("roadnet: ") + e.what(), lineno);
  }
}

RoadNetwork read_roadnet(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno) || line != "roadnet v1") {
    throw FormatError("not a roadnet v1 snapshot (bad magic header)", 1);
  }
  RoadNetwork g = read_roadnet_body(in, lineno);
  while (next_line(in, line, lineno)) {
    if (!split_ws(line).empty()) throw FormatError("roadnet: trailing data", lineno);
  }
  return g;
}

RoadNetwork load_roadnet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_roadnet(in);
}

void save_roadnet(const std::filesystem::path& path, const RoadNetwork& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_roadnet(out, g);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace smallworld
