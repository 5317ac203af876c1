#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smallworld/distance.hpp"
#include "smallworld/roadnet.hpp"
#include "smallworld/seed.hpp"

namespace smallworld {

enum class ModelKind { kKleinberg, kBarabasiAlbert, kNeighborhoodPA, kNeighborhoodPACapped };

std::string_view to_string(ModelKind kind);
// Accepts "kl", "ba", "npa", "npa-cap" (case-insensitive). Throws ParamError.
ModelKind parse_model_kind(std::string_view text);

struct ModelParams {
  ModelKind kind = ModelKind::kNeighborhoodPA;
  std::uint32_t m = 1;               // long-range links per processed vertex
  double s = 2.0;                    // clustering exponent; ignored by BA
  std::optional<std::uint32_t> cap;  // NPA-cap only: vertices with degree >= cap are ineligible
  std::uint64_t seed = 1;

  // Throws ParamError when m == 0, s < 0, cap <= m, or cap given for a non-capped model.
  void validate() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// ceil(log2 n), the "log n" degree cap.
std::uint32_t log2_cap(std::size_t n);

struct LongRangeEdge {
  VertexId u = 0;  // u < v
  VertexId v = 0;
  friend auto operator<=>(const LongRangeEdge&, const LongRangeEdge&) = default;
};

// A road network plus the long-range edges added by a generative model.
class SocialNetwork {
 public:
  // Validates and indexes the parts: edges must be in range, free of self-loops
  // and duplicates; `insertion_order` must be a permutation of [0, n).
  static SocialNetwork from_parts(std::shared_ptr<const RoadNetwork> base, ModelParams params,
                                  std::vector<LongRangeEdge> long_range, std::vector<VertexId> insertion_order);

  const RoadNetwork& base() const noexcept { return *base_; }
  const std::shared_ptr<const RoadNetwork>& base_ptr() const noexcept { return base_; }
  const ModelParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return base_->size(); }

  // Sorted ascending by (u, v).
  std::span<const LongRangeEdge> long_range() const noexcept { return long_range_; }
  std::span<const VertexId> long_range_neighbors(VertexId v) const noexcept {
    return {lr_heads_.data() + lr_offsets_[v], lr_heads_.data() + lr_offsets_[v + 1]};
  }
  std::uint32_t added_degree(VertexId v) const noexcept {
    return static_cast<std::uint32_t>(lr_offsets_[v + 1] - lr_offsets_[v]);
  }
  // Number of distinct contacts: road neighbours union long-range neighbours.
  std::uint32_t total_degree(VertexId v) const noexcept { return total_degree_[v]; }
  std::span<const VertexId> insertion_order() const noexcept { return order_; }

  std::uint32_t max_added_degree() const noexcept;
  std::uint32_t max_total_degree() const noexcept;

  // Visits every contact of v: road neighbours first, then long-range ones.
  template <typename F>
  void for_each_contact(VertexId v, F&& f) const {
    for (const auto& a : base_->neighbors(v)) f(a.head);
    for (VertexId u : long_range_neighbors(v)) f(u);
  }

  friend bool operator==(const SocialNetwork& a, const SocialNetwork& b) {
    return a.params_ == b.params_ && a.long_range_ == b.long_range_ && a.order_ == b.order_ &&
           *a.base_ == *b.base_;
  }

 private:
  std::shared_ptr<const RoadNetwork> base_;
  ModelParams params_;
  std::vector<LongRangeEdge> long_range_;
  std::vector<std::size_t> lr_offsets_;
  std::vector<VertexId> lr_heads_;
  std::vector<std::uint32_t> total_degree_;
  std::vector<VertexId> order_;
};

// Unnormalized sampling weights indexed by VertexId and their sum z.
struct WeightVector {
  std::vector<double> weights;
  double z = 0.0;

  // z is the left-to-right sum of `weights`.
  static WeightVector from_weights(std::vector<double> weights);
};

// m independent categorical draws with P(u) = weights[u] / z. Duplicates
// collapse, so the result (sorted ascending) may hold fewer than m vertices.
// Throws SamplingError if no weight is positive.
std::vector<VertexId> sample_m(const WeightVector& weights, std::uint32_t m, Rng& rng);

// The per-vertex weighting rules of the three models; `v` (the vertex being
// processed) always gets weight 0.
WeightVector kl_weights(const DistanceMap& from_v, double s);
WeightVector ba_weights(std::span<const std::uint32_t> added_degree, VertexId v);
WeightVector npa_weights(std::span<const std::uint32_t> added_degree, const DistanceMap& from_v, double s,
                         std::optional<std::uint32_t> cap = std::nullopt);

SocialNetwork construct_kl(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                           const DistanceOracle& oracle);
SocialNetwork construct_ba(std::shared_ptr<const RoadNetwork> g, const ModelParams& params);
SocialNetwork construct_npa(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                            const DistanceOracle& oracle);
SocialNetwork construct_npa_cap(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                                const DistanceOracle& oracle);

// Dispatches on params.kind.
SocialNetwork construct(std::shared_ptr<const RoadNetwork> g, const ModelParams& params,
                        const DistanceOracle& oracle);

// `socialnet v1` snapshot: params, long-range edges, insertion order, then the
// embedded `roadnet v1` base graph.
void write_socialnet(std::ostream& out, const SocialNetwork& net);
SocialNetwork read_socialnet(std::istream& in);
SocialNetwork load_socialnet(const std::filesystem::path& path);
void save_socialnet(const std::filesystem::path& path, const SocialNetwork& net);

}  // namespace smallworld
