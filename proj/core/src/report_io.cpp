#include "smallworld/report_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "smallworld/errors.hpp"
#include "text_util.hpp"

namespace smallworld {

using detail::format_double;
using json = nlohmann::ordered_json;

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const HopSummary& s) {
  return json{{"runs", s.runs},
              {"delivered", s.delivered},
              {"delivery_rate", number_or_null(s.delivery_rate)},
              {"mean_hops", number_or_null(s.mean_hops)},
              {"median_hops", number_or_null(s.median_hops)},
              {"stddev", number_or_null(s.stddev)},
              {"std_error", number_or_null(s.std_error)},
              {"min_hops", s.min_hops},
              {"max_hops", s.max_hops}};
}

json to_json(const DegreeHistogram& h) {
  json counts = json::array();
  for (const auto& [d, c] : h.counts) counts.push_back({d, c});
  json bins = json::array();
  for (const auto& b : h.bins) bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}, {"density", b.density}});
  return json{{"total", h.total()},
              {"min_degree", h.min_degree()},
              {"max_degree", h.max_degree()},
              {"decades", h.decades()},
              {"tail_slope", h.tail_slope ? json(*h.tail_slope) : json(nullptr)},
              {"counts", std::move(counts)},
              {"log_bins", std::move(bins)}};
}

json to_json(const ModelParams& p) {
  return json{{"kind", std::string(to_string(p.kind))},
              {"m", p.m},
              {"s", p.s},
              {"cap", p.cap ? json(*p.cap) : json(nullptr)},
              {"seed", p.seed}};
}

json to_json(const ExperimentConfig& c) {
  return json{{"dataset", c.dataset_id},
              {"num_pairs", c.num_pairs},
              {"dropout", c.dropout},
              {"sweep_s", c.s_values},
              {"seed", c.seed},
              {"reuse_target_maps", c.reuse_target_maps}};
}

json to_json(std::span<const SweepPoint> pts) {
  json arr = json::array();
  for (const auto& p : pts) {
    json row = to_json(p.summary);
    row["param"] = p.param;
    arr.push_back(std::move(row));
  }
  return arr;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_report_json(std::ostream& out, const ExperimentBundle& bundle) {
  const auto& r = bundle.primary;
  json doc{{"schema", "report v1"},
           {"config", to_json(r.config)},
           {"network", json{{"params", to_json(r.params)},
                            {"vertices", r.vertices},
                            {"road_edges", r.road_edges},
                            {"long_range_edges", r.long_range_edges}}},
           {"dropout", r.dropout},
           {"summary", to_json(r.summary)},
           {"degree_whole", to_json(r.whole)},
           {"degree_visited", to_json(r.visited)},
           {"dropout_sweep", to_json(bundle.dropout_sweep)},
           {"s_sweep", to_json(bundle.s_sweep)}};
  out << doc.dump(2) << '\n';
}

void write_hops_csv(std::ostream& out, std::span<const RunRecord> runs) {
  out << "run_id,source,target,delivered,hops\n";
  for (const auto& r : runs) {
    out << r.run_id << ',' << r.source << ',' << r.target << ',' << (r.result.delivered ? 1 : 0) << ','
        << r.result.hops << '\n';
  }
}

void write_degdist_csv(std::ostream& out, const DegreeHistogram& whole, const DegreeHistogram& visited) {
  out << "degree,count,which\n";
  for (const auto& [d, c] : whole.counts) out << d << ',' << c << ",whole\n";
  for (const auto& [d, c] : visited.counts) out << d << ',' << c << ",visited\n";
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "param,mean_hops,delivery_rate\n";
  for (const auto& p : points) {
    out << format_double(p.param) << ','
        << (std::isfinite(p.summary.mean_hops) ? format_double(p.summary.mean_hops) : std::string("nan")) << ','
        << format_double(p.summary.delivery_rate) << '\n';
  }
}

void write_trace_csv(std::ostream& out, std::span<const RunRecord> runs) {
  out << "run_id,step,vertex,remaining,total_degree\n";
  for (const auto& r : runs) {
    const auto& steps = r.result.trace.steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      out << r.run_id << ',' << i << ',' << steps[i].vertex << ',' << format_double(steps[i].remaining) << ','
          << steps[i].total_degree << '\n';
    }
  }
}

void write_report_files(const std::filesystem::path& dir, const ExperimentBundle& bundle) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "report.json");
    write_report_json(out, bundle);
  }
  {
    auto out = open_out(dir / "hops.csv");
    write_hops_csv(out, bundle.primary.runs);
  }
  {
    auto out = open_out(dir / "degdist.csv");
    write_degdist_csv(out, bundle.primary.whole, bundle.primary.visited);
  }
  {
    auto out = open_out(dir / "trace.csv");
    write_trace_csv(out, bundle.primary.runs);
  }
  {
    auto out = open_out(dir / "sweep.csv");
    write_sweep_csv(out, bundle.s_sweep.empty() ? std::span<const SweepPoint>(bundle.dropout_sweep)
                                                : std::span<const SweepPoint>(bundle.s_sweep));
  }
}

}  // namespace smallworld
