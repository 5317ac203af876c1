#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace smallworld {

// Dense vertex index in [0, n).
using VertexId = std::uint32_t;

struct Coord {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

struct RoadEdge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 0.0;
  friend bool operator==(const RoadEdge&, const RoadEdge&) = default;
};

struct Arc {
  VertexId head = 0;
  double weight = 0.0;
};

// Immutable weighted undirected road graph with per-vertex coordinates.
//
// Edges are stored canonically: u < v, sorted lexicographically, no
// self-loops, parallel edges collapsed to the minimum weight. Adjacency is
// kept in CSR form with both directions of every edge.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  // Builds a canonical network. Self-loops are dropped, parallel edges keep the
  // minimum weight. Throws FormatError on out-of-range ids or weights that are
  // not finite and strictly positive.
  static RoadNetwork from_edges(std::vector<Coord> coords, std::vector<RoadEdge> edges);

  std::size_t size() const noexcept { return coords_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const Coord> coords() const noexcept { return coords_; }
  std::span<const RoadEdge> edges() const noexcept { return edges_; }
  const Coord& coord(VertexId v) const { return coords_[v]; }

  std::span<const Arc> neighbors(VertexId v) const noexcept {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const noexcept;

  // Both return 0 for an edgeless network.
  double min_weight() const noexcept;
  double max_weight() const noexcept;

  friend bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
    return a.coords_ == b.coords_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Coord> coords_;
  std::vector<RoadEdge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Arc> arcs_;
};

// Parses a DIMACS 9th-challenge `.gr` / `.co` pair. Vertex ids are 1-based in
// the files and 0-based in the result. Arcs are symmetrized.
RoadNetwork parse_dimacs(std::istream& gr, std::istream& co);
RoadNetwork parse_dimacs_files(const std::filesystem::path& gr, const std::filesystem::path& co);

// Writes the network as a DIMACS pair (each undirected edge as two arcs).
void write_dimacs(std::ostream& gr, std::ostream& co, const RoadNetwork& g);

// Subgraph induced by the largest connected component, re-indexed in ascending
// original-id order. Equal-size components: the one holding the smallest id wins.
// `original_ids`, when given, receives the original id of each new vertex.
RoadNetwork extract_lcc(const RoadNetwork& g, std::vector<VertexId>* original_ids = nullptr);

// Divides every weight by the minimum weight so the smallest becomes exactly 1.
RoadNetwork normalize_weights(const RoadNetwork& g);

struct MergeResult {
  RoadNetwork network;
  std::size_t union_vertices = 0;   // after unification, before LCC
  std::size_t dropped_self_loops = 0;
  bool low_quality = false;          // LCC holds less than half of the union
  std::vector<std::string> warnings;
};

// Disjoint union followed by unification of vertices from different inputs whose
// coordinates lie within `stitch_radius` (Euclidean). No LCC, no normalization.
MergeResult stitch_networks(std::span<const RoadNetwork> gs, double stitch_radius);

// stitch_networks followed by extract_lcc and normalize_weights.
MergeResult merge_networks(std::span<const RoadNetwork> gs, double stitch_radius);

// Canonical text snapshot (`roadnet v1`). Output is bit-exact and diff-stable.
void write_roadnet(std::ostream& out, const RoadNetwork& g);
RoadNetwork read_roadnet(std::istream& in);
// Reads a roadnet block whose magic line has already been consumed; `line` tracks
// the current 1-based line number for diagnostics.
RoadNetwork read_roadnet_body(std::istream& in, std::size_t& line);

RoadNetwork load_roadnet(const std::filesystem::path& path);
void save_roadnet(const std::filesystem::path& path, const RoadNetwork& g);

}  // namespace smallworld
