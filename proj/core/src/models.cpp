#include "smallworld/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "smallworld/errors.hpp"
#include "text_util.hpp"

namespace smallworld {

using detail::format_double;
using detail::next_line;
using detail::parse_number;
using detail::split_ws;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kKleinberg: return "kl";
    case ModelKind::kBarabasiAlbert: return "ba";
    case ModelKind::kNeighborhoodPA: return "npa";
    case ModelKind::kNeighborhoodPACapped: return "npa-cap";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "kl") return ModelKind::kKleinberg;
  if (lower == "ba") return ModelKind::kBarabasiAlbert;
  if (lower == "npa") return ModelKind::kNeighborhoodPA;
  if (lower == "npa-cap" || lower == "npa_cap") return ModelKind::kNeighborhoodPACapped;
  throw ParamError("unknown model '" + std::string(text) + "' (expected kl, ba, npa, npa-cap)");
}

void ModelParams::validate() const {
  if (m < 1) throw ParamError("m must be at least 1");
  if (!(s >= 0.0) || !std::isfinite(s)) throw ParamError("clustering exponent s must be finite and >= 0");
  if (kind == ModelKind::kNeighborhoodPACapped) {
    if (!cap) throw ParamError("npa-cap requires a cap");
    if (*cap <= m) throw ParamError("cap must exceed m");
  } else if (cap) {
    throw ParamError("cap is only valid for npa-cap");
  }
}

std::uint32_t log2_cap(std::size_t n) {
  std::uint32_t c = 0;
  while ((std::size_t{1} << c) < n) ++c;
  return c;
}

// --- SocialNetwork ------------------------------------------------------------

SocialNetwork SocialNetwork::from_parts(std::shared_ptr<const RoadNetwork> base, ModelParams params,
                                        std::vector<LongRangeEdge> long_range, std::vector<VertexId> insertion_order) {
  if (!base) throw ParamError("social network needs a base road network");
  const std::size_t n = base->size();
  for (auto& e : long_range) {
    if (e.u >= n || e.v >= n) throw FormatError("long-range edge references a vertex out of range");
    if (e.u == e.v) throw FormatError("long-range self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(long_range.begin(), long_range.end());
  if (std::adjacent_find(long_range.begin(), long_range.end()) != long_range.end()) {
    throw FormatError("duplicate long-range edge");
  }
  if (insertion_order.size() != n) throw FormatError("insertion order is not a permutation of the vertices");
  {
    std::vector<bool> seen(n, false);
    for (VertexId v : insertion_order) {
      if (v >= n || seen[v]) throw FormatError("insertion order is not a permutation of the vertices");
      seen[v] = true;
    }
  }

  SocialNetwork net;
  net.base_ = std::move(base);
  net.params_ = params;
  net.long_range_ = std::move(long_range);
  net.order_ = std::move(insertion_order);
  net.lr_offsets_.assign(n + 1, 0);
  for (const auto& e : net.long_range_) {
    ++net.lr_offsets_[e.u + 1];
    ++net.lr_offsets_[e.v + 1];
  }
  std::partial_sum(net.lr_offsets_.begin(), net.lr_offsets_.end(), net.lr_offsets_.begin());
  net.lr_heads_.resize(2 * net.long_range_.size());
  std::vector<std::size_t> fill(net.lr_offsets_.begin(), net.lr_offsets_.end() - 1);
  // Edges are sorted by (u, v), so each head list comes out ascending.
  for (const auto& e : net.long_range_) net.lr_heads_[fill[e.u]++] = e.v;
  for (const auto& e : net.long_range_) net.lr_heads_[fill[e.v]++] = e.u;
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(net.lr_heads_.begin() + static_cast<std::ptrdiff_t>(net.lr_offsets_[v]),
              net.lr_heads_.begin() + static_cast<std::ptrdiff_t>(net.lr_offsets_[v + 1]));
  }

  net.total_degree_.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    // Both lists are sorted ascending: count the size of their union.
    auto road = net.base_->neighbors(v);
    auto lr = net.long_range_neighbors(v);
    std::size_t i = 0, j = 0, count = 0;
    while (i < road.size() || j < lr.size()) {
      if (j == lr.size() || (i < road.size() && road[i].head < lr[j])) {
        ++i;
      } else if (i == road.size() || lr[j] < road[i].head) {
        ++j;
      } else {
        ++i;
        ++j;
      }
      ++count;
    }
    net.total_degree_[v] = static_cast<std::uint32_t>(count);
  }
  return net;
}

std::uint32_t SocialNetwork::max_added_degree() const noexcept {
  std::uint32_t best = 0;
  for (VertexId v = 0; v < size(); ++v) best = std::max(best, added_degree(v));
  return best;
}

std::uint32_t SocialNetwork::max_total_degree() const noexcept {
  return total_degree_.empty() ? 0 : *std::max_element(total_degree_.begin(), total_degree_.end());
}

// --- sampling ---------------------------------------------------------------------

WeightVector WeightVector::from_weights(std::vector<double> weights) {
  WeightVector wv;
  wv.z = 0.0;
  for (double w : weights) wv.z += w;
  wv.weights = std::move(weights);
  return wv;
}

namespace {

// Inverse-CDF sampler over a dense weight array. Reuses its buffer across calls.
class PrefixSampler {
 public:
  // Returns the total weight (the left-to-right sum, identical to WeightVector::z).
  double reset(std::span<const double> weights) {
    prefix_.resize(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] < 0.0 || std::isnan(weights[i])) throw SamplingError("negative or NaN sampling weight");
      acc += weights[i];
      prefix_[i] = acc;
    }
    return acc;
  }

  // One draw. Zero-weight entries have prefix equal to their predecessor, so
  // upper_bound never lands on them.
  VertexId draw(Rng& rng) const {
    const double total = prefix_.back();
    std::uniform_real_distribution<double> uni(0.0, total);
    const double r = uni(rng);
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), r);
    if (it == prefix_.end()) {
      // r == total after rounding: take the last positive entry.
      it = std::lower_bound(prefix_.begin(), prefix_.end(), total);
    }
    return static_cast<VertexId>(it - prefix_.begin());
  }

  std::vector<VertexId> draw_set(std::uint32_t m, Rng& rng) const {
    std::vector<VertexId> picks;
    picks.reserve(m);
    for (std::uint32_t t = 0; t < m; ++t) picks.push_back(draw(rng));
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    return picks;
  }

 private:
  std::vector<double> prefix_;
};

inline double inverse_power(double d, double s) {
  if (s == 0.0) return 1.0;
  if (s == 2.0) return 1.0 / (d * d);
  return 1.0 / std::pow(d, s);
}

}  // namespace

std::vector<VertexId> sample_m(const WeightVector& weights, std::uint32_t m, Rng& rng) {
  if (m < 1) throw ParamError("sample_m: m must be at least 1");
  PrefixSampler sampler;
  const double total = sampler.reset(weights.weights);
  if (!(total > 0.0) || !(weights.z > 0.0)) throw SamplingError("sample_m: no candidate has positive weight (z == 0)");
  return sampler.draw_set(m, rng);
}

WeightVector kl_weights(const DistanceMap& from_v, double s) {
  std::vector<double> w(from_v.size());
  for (VertexId u = 0; u < from_v.size(); ++u) w[u] = (u == from_v.source) ? 0.0 : inverse_power(from_v[u], s);
  return WeightVector::from_weights(std::move(w));
}

WeightVector ba_weights(std::span<const std::uint32_t> added_degree, VertexId v) {
  std::vector<double> w(added_degree.begin(), added_degree.end());
  w[v] = 0.0;
  return WeightVector::from_weights(std::move(w));
}

WeightVector npa_weights(std::span<const std::uint32_t> added_degree, const DistanceMap& from_v, double s,
                         std::optional<std::uint32_t> cap) {
  std::vector<double> w(added_degree.size(), 0.0);
  for (VertexId u = 0; u < added_degree.size(); ++u) {
    if (u == from_v.source || added_degree[u] == 0) continue;
    if (cap && added_degree[u] >= *cap) continue;
    w[u] = static_cast<double>(added_degree[u]) * inverse_power(from_v[u], s);
  }
  return WeightVector::from_weights(std::move(w));
}

// --- constructions -------------------------------------------------------------------

namespace {

class EdgeAccumulator {
 public:
  explicit EdgeAccumulator(std::size_t n) : degree_(n, 0) {}

  bool add(VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (std::uint64_t{a} << 32) | b;
    if (!keys_.insert(key).second) return false;
    edges_.push_back({a, b});
    ++degree_[a];
    ++degree_[b];
    return true;
  }

  std::span<const std::uint32_t> degrees() const noexcept { return degree_; }
  std::vector<LongRangeEdge> take() { return std::move(edges_); }

 private:
  std::vector<std::uint32_t> degree_;
  std::unordered_set<std::uint64_t> keys_;
  std::vector<LongRangeEdge> edges_;
};

void check_kind(const ModelParams& params, ModelKind expected) {
  params.validate();
  if (params.kind != expected) {
    throw ParamError("expected model kind " + std::string(to_string(expected)) + ", got " +
                     std::string(to_string(params.kind)));
  }
}

void check_oracle(const RoadNetwork& g, const DistanceOracle& oracle) {
  if (oracle.network().size() != g.size()) throw ParamError("distance oracle belongs to a different road network");
}

// Shared body of BA, NPA and NPA-cap: random seed clique, random insertion
// order, per-vertex weights computed once before the vertex's m draws.
SocialNetwork construct_preferential(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                                     const DistanceOracle* oracle) {
  const std::size_t n = g->size();
  const std::uint32_t m = params.m;
  if (n < std::size_t{m} + 2) {
    throw ParamError("network has " + std::to_string(n) + " vertices; need at least m + 2 = " + std::to_string(m + 2));
  }
  const bool uses_distance = params.kind != ModelKind::kBarabasiAlbert && params.s != 0.0;
  const std::uint32_t cap =
      params.kind == ModelKind::kNeighborhoodPACapped ? params.cap.value_or(UINT32_MAX) : UINT32_MAX;

  Rng rng(params.seed);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::shuffle(order.begin(), order.end(), rng);

  EdgeAccumulator acc(n);
  for (std::uint32_t i = 0; i <= m; ++i) {
    for (std::uint32_t j = i + 1; j <= m; ++j) acc.add(order[i], order[j]);
  }
  std::vector<VertexId> active(order.begin(), order.begin() + m + 1);

  std::vector<double> weights(n, 0.0);
  PrefixSampler sampler;
  for (std::size_t idx = std::size_t{m} + 1; idx < n; ++idx) {
    const VertexId v = order[idx];
    std::shared_ptr<const DistanceMap> dist;
    if (uses_distance) dist = oracle->distances_from(v);
    const auto deg = acc.degrees();
    std::fill(weights.begin(), weights.end(), 0.0);
    for (VertexId u : active) {
      if (deg[u] >= cap) continue;
      double w = static_cast<double>(deg[u]);
      if (uses_distance) w *= inverse_power((*dist)[u], params.s);
      weights[u] = w;
    }
    if (!(sampler.reset(weights) > 0.0)) {
      throw SamplingError("vertex " + std::to_string(v) + ": every candidate is at or above the degree cap (z == 0)");
    }
    for (VertexId u : sampler.draw_set(m, rng)) acc.add(v, u);
    active.push_back(v);
  }
  return SocialNetwork::from_parts(std::move(g), params, acc.take(), std::move(order));
}

}  // namespace

SocialNetwork construct_kl(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                           const DistanceOracle& oracle) {
  check_kind(params, ModelKind::kKleinberg);
  check_oracle(*g, oracle);
  const std::size_t n = g->size();
  if (n < 2) throw ParamError("KL needs at least 2 vertices");

  Rng rng(params.seed);
  EdgeAccumulator acc(n);
  std::vector<double> weights(n, 0.0);
  PrefixSampler sampler;
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  for (VertexId v : order) {
    if (params.s == 0.0) {
      std::fill(weights.begin(), weights.end(), 1.0);
      weights[v] = 0.0;
    } else {
      auto dist = oracle.distances_from(v);
      for (VertexId u = 0; u < n; ++u) weights[u] = (u == v) ? 0.0 : inverse_power((*dist)[u], params.s);
    }
    if (!(sampler.reset(weights) > 0.0)) throw SamplingError("vertex " + std::to_string(v) + ": z == 0");
    for (VertexId u : sampler.draw_set(params.m, rng)) acc.add(v, u);
  }
  return SocialNetwork::from_parts(std::move(g), params, acc.take(), std::move(order));
}

SocialNetwork construct_ba(std::shared_ptr<const RoadNetwork> g, const ModelParams& params) {
  check_kind(params, ModelKind::kBarabasiAlbert);
  return construct_preferential(std::move(g), params, nullptr);
}

SocialNetwork construct_npa(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                            const DistanceOracle& oracle) {
  check_kind(params, ModelKind::kNeighborhoodPA);
  check_oracle(*g, oracle);
  return construct_preferential(std::move(g), params, &oracle);
}

SocialNetwork construct_npa_cap(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                                const DistanceOracle& oracle) {
  check_kind(params, ModelKind::kNeighborhoodPACapped);
  check_oracle(*g, oracle);
  return construct_preferential(std::move(g), params, &oracle);
}

SocialNetwork construct(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                        const DistanceOracle& oracle) {
  switch (params.kind) {
    case ModelKind::kKleinberg: return construct_kl(std::move(g), params, oracle);
    case ModelKind::kBarabasiAlbert: return construct_ba(std::move(g), params);
    case ModelKind::kNeighborhoodPA: return construct_npa(std::move(g), params, oracle);
    case ModelKind::kNeighborhoodPACapped: return construct_npa_cap(std::move(g), params, oracle);
  }
  throw ParamError("unknown model kind");
}

// --- snapshots ------------------------------------------------------------------------

void write_socialnet(std::ostream& out, const SocialNetwork& net) {
  const auto& p = net.params();
  out << "socialnet v1\n";
  out << "params " << to_string(p.kind) << ' ' << p.m << ' ' << format_double(p.s) << ' '
      << (p.cap ? std::to_string(*p.cap) : std::string("none")) << ' ' << p.seed << '\n';
  out << "edges " << net.long_range().size() << '\n';
  for (const auto& e : net.long_range()) out << "l " << e.u << ' ' << e.v << '\n';
  out << "order";
  for (VertexId v : net.insertion_order()) out << ' ' << v;
  out << '\n';
  write_roadnet(out, net.base());
}

SocialNetwork read_socialnet(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno) || line != "socialnet v1") {
    throw FormatError("not a socialnet v1 snapshot (bad magic header)", 1);
  }

  if (!next_line(in, line, lineno)) throw FormatError("socialnet: missing params line", lineno);
  auto tok = split_ws(line);
  if (tok.size() != 6 || tok[0] != "params") throw FormatError("socialnet: expected 'params <kind> <m> <s> <cap> <seed>'", lineno);
  ModelParams params;
  try {
    params.kind = parse_model_kind(tok[1]);
  } catch (const ParamError& e) {
    throw FormatError(std::string("socialnet: ") + e.what(), lineno);
  }
  auto m = parse_number<std::uint32_t>(tok[2]);
  auto s = parse_number<double>(tok[3]);
  auto seed = parse_number<std::uint64_t>(tok[5]);
  if (!m || !s || !seed) throw FormatError("socialnet: malformed params", lineno);
  params.m = *m;
  params.s = *s;
  params.seed = *seed;
  if (tok[4] != "none") {
    auto cap = parse_number<std::uint32_t>(tok[4]);
    if (!cap) throw FormatError("socialnet: malformed cap", lineno);
    params.cap = *cap;
  }
  try {
    params.validate();
  } catch (const ParamError& e) {
    throw FormatError(std::string("socialnet: ") + e.what(), lineno);
  }

  if (!next_line(in, line, lineno)) throw FormatError("socialnet: missing edge count", lineno);
  tok = split_ws(line);
  std::optional<std::size_t> count;
  if (tok.size() == 2 && tok[0] == "edges") count = parse_number<std::size_t>(tok[1]);
  if (!count) throw FormatError("socialnet: expected 'edges <count>'", lineno);
  std::vector<LongRangeEdge> edges;
  edges.reserve(*count);
  for (std::size_t i = 0; i < *count; ++i) {
    if (!next_line(in, line, lineno)) throw FormatError("socialnet: truncated edge list", lineno);
    tok = split_ws(line);
    if (tok.size() != 3 || tok[0] != "l") throw FormatError("socialnet: expected 'l <u> <v>'", lineno);
    auto u = parse_number<VertexId>(tok[1]);
    auto v = parse_number<VertexId>(tok[2]);
    if (!u || !v || *u >= *v) throw FormatError("socialnet: malformed long-range edge", lineno);
    if (!edges.empty() && LongRangeEdge{*u, *v} <= edges.back()) {
      throw FormatError("socialnet: long-range edges must be strictly ascending", lineno);
    }
    edges.push_back({*u, *v});
  }

  if (!next_line(in, line, lineno)) throw FormatError("socialnet: missing order line", lineno);
  tok = split_ws(line);
  if (tok.empty() || tok[0] != "order") throw FormatError("socialnet: expected 'order ...'", lineno);
  std::vector<VertexId> order;
  order.reserve(tok.size() - 1);
  for (std::size_t i = 1; i < tok.size(); ++i) {
    auto v = parse_number<VertexId>(tok[i]);
    if (!v) throw FormatError("socialnet: malformed order entry", lineno);
    order.push_back(*v);
  }

  if (!next_line(in, line, lineno) || line != "roadnet v1") {
    throw FormatError("socialnet: expected embedded 'roadnet v1' block", lineno);
  }
  auto base = std::make_shared<const RoadNetwork>(read_roadnet_body(in, lineno));
  while (next_line(in, line, lineno)) {
    if (!split_ws(line).empty()) throw FormatError("socialnet: trailing data", lineno);
  }
  try {
    return SocialNetwork::from_parts(std::move(base), params, std::move(edges), std::move(order));
  } catch (const FormatError& e) {
    throw FormatError(std::string("socialnet: ") + e.what());
  }
}

SocialNetwork load_socialnet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_socialnet(in);
}

void save_socialnet(const std::filesystem::path& path, const SocialNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_socialnet(out, net);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace smallworld
