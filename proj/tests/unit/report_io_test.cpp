#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "smallworld/report_io.hpp"
#include "support/fixtures.hpp"

using namespace smallworld;
using smallworld::testing::random_connected;
using smallworld::testing::share;
using json = nlohmann::ordered_json;

namespace {

ExperimentBundle make_bundle() {
  const auto g = share(random_connected(150, 80, 97));
  DijkstraOracle oracle(g);
  ModelParams p;
  p.m = 2;
  p.seed = 101;
  const auto net = construct_npa(g, p, oracle);
  ExperimentConfig cfg;
  cfg.dataset_id = "toy";
  cfg.num_pairs = 40;
  cfg.dropout = {0.0, 0.5};
  cfg.threads = 1;
  ExperimentBundle b;
  b.primary = run_hop_experiment(net, cfg, oracle);
  b.dropout_sweep = dropout_sweep(net, cfg, oracle);
  return b;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("report json layout") {
  const auto b = make_bundle();
  std::ostringstream out;
  write_report_json(out, b);
  const auto doc = json::parse(out.str());
  CHECK(doc["schema"] == "report v1");
  CHECK(doc["config"]["dataset"] == "toy");
  CHECK(doc["config"]["num_pairs"] == 40);
  CHECK(doc["network"]["params"]["kind"] == "npa");
  CHECK(doc["network"]["params"]["cap"].is_null());
  CHECK(doc["network"]["vertices"] == 150);
  CHECK(doc["summary"]["runs"] == 40);
  CHECK(doc["summary"]["delivery_rate"] == 1.0);
  CHECK(doc["dropout_sweep"].size() == 2);
  CHECK(doc["s_sweep"].empty());
  CHECK(doc["degree_whole"]["total"] == 150);
  CHECK_FALSE(doc.contains("wall_seconds"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  CHECK(keys.front() == "schema");
}

TEST_CASE("report json is byte-stable") {
  std::ostringstream a, b;
  auto first = make_bundle();
  auto second = make_bundle();
  second.primary.wall_seconds = first.primary.wall_seconds + 10;
  write_report_json(a, first);
  write_report_json(b, second);
  CHECK(a.str() == b.str());
}

TEST_CASE("undelivered summaries serialize as null") {
  ExperimentBundle b;
  b.primary.summary.mean_hops = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream out;
  write_report_json(out, b);
  CHECK(json::parse(out.str())["summary"]["mean_hops"].is_null());
}

TEST_CASE("csv layouts") {
  const auto b = make_bundle();
  std::ostringstream hops, deg, sweep, trace;
  write_hops_csv(hops, b.primary.runs);
  write_degdist_csv(deg, b.primary.whole, b.primary.visited);
  write_sweep_csv(sweep, b.dropout_sweep);
  write_trace_csv(trace, b.primary.runs);

  const auto h = lines(hops.str());
  CHECK(h.front() == "run_id,source,target,delivered,hops");
  CHECK(h.size() == 41);
  const auto& r0 = b.primary.runs[0];
  CHECK(h[1] == "0," + std::to_string(r0.source) + "," + std::to_string(r0.target) + ",1," +
                    std::to_string(r0.result.hops));

  const auto d = lines(deg.str());
  CHECK(d.front() == "degree,count,which");
  CHECK(d.size() == 1 + b.primary.whole.counts.size() + b.primary.visited.counts.size());

  const auto s = lines(sweep.str());
  CHECK(s.front() == "param,mean_hops,delivery_rate");
  CHECK(s.size() == 3);
  CHECK(s[1].rfind("0,", 0) == 0);
  CHECK(s[1].substr(s[1].rfind(',')) == ",1");

  std::size_t steps = 0;
  for (const auto& r : b.primary.runs) steps += r.result.trace.steps.size();
  const auto t = lines(trace.str());
  CHECK(t.front() == "run_id,step,vertex,remaining,total_degree");
  CHECK(t.size() == 1 + steps);
}

TEST_CASE("report files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "smallworld_report_io_test";
  std::filesystem::remove_all(dir);
  auto b = make_bundle();
  write_report_files(dir, b);
  for (const char* name : {"report.json", "hops.csv", "degdist.csv", "trace.csv", "sweep.csv"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  CHECK(lines(slurp(dir / "sweep.csv")).size() == 3);

  b.s_sweep = {{1.0, b.primary.summary}, {2.0, b.primary.summary}, {3.0, b.primary.summary}};
  write_report_files(dir, b);
  CHECK(lines(slurp(dir / "sweep.csv")).size() == 4);
  std::filesystem::remove_all(dir);
}
