#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "smallworld/models.hpp"
#include "smallworld/roadgen.hpp"
#include "smallworld/roadnet.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace smallworld;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "smallworld");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("SMALLWORLD_TMP");
  fs::path dir = (env ? fs::path(env) : fs::temp_directory_path() / "smallworld_cli") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string l; std::getline(in, l);) ++n;
  return n;
}

// synth -> ingest -> generate -> experiment, all artifacts under dir.
void pipeline(const fs::path& dir, const std::string& model = "npa") {
  const auto prefix = (dir / "toy").string();
  REQUIRE(run({"synth", "--n", "600", "--seed", "3", "--out-prefix", prefix}).code == 0);
  REQUIRE(run({"ingest", "--gr", prefix + ".gr", "--co", prefix + ".co", "--out", (dir / "toy.roadnet").string()})
              .code == 0);
  REQUIRE(run({"generate", "--net", (dir / "toy.roadnet").string(), "--model", model, "--m", "2", "--seed", "5",
               "--out", (dir / "toy.social").string()})
              .code == 0);
  REQUIRE(run({"experiment", "--social", (dir / "toy.social").string(), "--pairs", "200", "--dropout", "0,0.2",
               "--out-dir", (dir / "report").string(), "--threads", "2"})
              .code == 0);
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"generate", "--model", "npa"}).code == 1);
}

TEST_CASE("full pipeline writes every artifact") {
  const auto dir = scratch("pipeline");
  pipeline(dir);
  for (const char* f : {"report.json", "hops.csv", "degdist.csv", "trace.csv", "sweep.csv"}) {
    CHECK(fs::exists(dir / "report" / f));
  }
  CHECK(count_lines(dir / "report" / "hops.csv") == 201);
  CHECK(count_lines(dir / "report" / "sweep.csv") == 3);
  CHECK(slurp(dir / "report" / "report.json").find("\"delivery_rate\": 1.0") != std::string::npos);
}

TEST_CASE("ingest prints the network summary") {
  const auto dir = scratch("ingest");
  const auto prefix = (dir / "g").string();
  REQUIRE(run({"synth", "--n", "300", "--out-prefix", prefix}).code == 0);
  const auto r = run({"ingest", "--gr", prefix + ".gr", "--co", prefix + ".co", "--out", (dir / "g.roadnet").string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n 300\n", 0) == 0);
  CHECK(r.out.find("min_weight 1\n") != std::string::npos);
  CHECK(load_roadnet(dir / "g.roadnet").min_weight() == 1.0);
}

TEST_CASE("pipeline is byte-identical across runs") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  pipeline(a);
  pipeline(b);
  for (const char* f : {"toy.gr", "toy.co", "toy.roadnet", "toy.social"}) CHECK(slurp(a / f) == slurp(b / f));
  for (const char* f : {"report.json", "hops.csv", "degdist.csv", "trace.csv", "sweep.csv"}) {
    CHECK(slurp(a / "report" / f) == slurp(b / "report" / f));
  }
}

TEST_CASE("ingest rejects a snapshot given as DIMACS input") {
  const auto dir = scratch("reject");
  const auto prefix = (dir / "g").string();
  REQUIRE(run({"synth", "--n", "200", "--out-prefix", prefix}).code == 0);
  const auto snap = (dir / "g.roadnet").string();
  REQUIRE(run({"ingest", "--gr", prefix + ".gr", "--co", prefix + ".co", "--out", snap}).code == 0);
  const auto r = run({"ingest", "--gr", snap, "--co", prefix + ".co", "--out", (dir / "again").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1") != std::string::npos);
  CHECK(run({"ingest", "--gr", (dir / "missing.gr").string(), "--co", prefix + ".co", "--out", snap}).code == 2);
  CHECK(run({"generate", "--net", prefix + ".gr", "--model", "npa", "--out", (dir / "x").string()}).code == 2);
}

TEST_CASE("generate flag consistency") {
  const auto dir = scratch("flags");
  const auto prefix = (dir / "g").string();
  REQUIRE(run({"synth", "--n", "200", "--out-prefix", prefix}).code == 0);
  const auto net = (dir / "g.roadnet").string();
  REQUIRE(run({"ingest", "--gr", prefix + ".gr", "--co", prefix + ".co", "--out", net}).code == 0);
  const auto out = (dir / "s").string();
  CHECK(run({"generate", "--net", net, "--model", "kl", "--cap", "5", "--out", out}).code == 1);
  CHECK(run({"generate", "--net", net, "--model", "npa-cap", "--out", out}).code == 1);
  CHECK(run({"generate", "--net", net, "--model", "npa-cap", "--m", "4", "--cap", "3", "--out", out}).code == 1);
  CHECK(run({"generate", "--net", net, "--model", "npa-cap", "--cap", "lots", "--out", out}).code == 1);
  CHECK(run({"generate", "--net", net, "--model", "ba", "--s", "2", "--out", out}).code == 1);
  CHECK(run({"generate", "--net", net, "--model", "grid", "--out", out}).code == 1);
  CHECK(run({"generate", "--net", net, "--model", "npa", "--m", "0", "--out", out}).code == 1);

  const auto r = run({"generate", "--net", net, "--model", "npa-cap", "--m", "2", "--cap", "log", "--out", out});
  CHECK(r.code == 0);
  const auto social = load_socialnet(out);
  CHECK(social.params().cap == log2_cap(200));
}

TEST_CASE("generated network respects the edge budget") {
  const auto dir = scratch("budget");
  const auto prefix = (dir / "g").string();
  REQUIRE(run({"synth", "--n", "500", "--out-prefix", prefix}).code == 0);
  const auto net = (dir / "g.roadnet").string();
  REQUIRE(run({"ingest", "--gr", prefix + ".gr", "--co", prefix + ".co", "--out", net}).code == 0);
  const auto r = run({"generate", "--net", net, "--model", "npa", "--m", "4", "--s", "2", "--out",
                      (dir / "s").string()});
  REQUIRE(r.code == 0);
  const auto social = load_socialnet(dir / "s");
  const std::size_t n = social.size();
  CHECK(social.long_range().size() <= 4 * (n - 5) + 10);
  CHECK(r.out.find("long_range_edges " + std::to_string(social.long_range().size())) == 0);
}

TEST_CASE("dropout list gives one sweep row per value") {
  const auto dir = scratch("sweep");
  pipeline(dir);
  const auto r = run({"experiment", "--social", (dir / "toy.social").string(), "--pairs", "100", "--dropout",
                      "0,0.1,0.2,0.3,0.4,0.5", "--out-dir", (dir / "sw").string()});
  CHECK(r.code == 0);
  CHECK(count_lines(dir / "sw" / "sweep.csv") == 7);
  CHECK(run({"experiment", "--social", (dir / "toy.social").string(), "--dropout", "0,1.5", "--out-dir",
             (dir / "bad").string()})
            .code == 1);
}

TEST_CASE("s sweep writes one row per exponent") {
  const auto dir = scratch("ssweep");
  pipeline(dir);
  const auto r = run({"experiment", "--social", (dir / "toy.social").string(), "--pairs", "50", "--sweep-s",
                      "1.0,1.5,2.0,2.5", "--out-dir", (dir / "ss").string()});
  CHECK(r.code == 0);
  CHECK(count_lines(dir / "ss" / "sweep.csv") == 5);
}

TEST_CASE("merge of two states sharing a border") {
  const auto dir = scratch("merge");
  SyntheticRoadOptions opts;
  opts.vertices = 800;
  opts.seed = 9;
  const auto whole = synthetic_road_network(opts);
  double lo = whole.coord(0).x, hi = lo;
  for (VertexId v = 0; v < whole.size(); ++v) {
    lo = std::min(lo, whole.coord(v).x);
    hi = std::max(hi, whole.coord(v).x);
  }
  const auto [west, east] = smallworld::testing::split_at_x(whole, 0.5 * (lo + hi));
  for (const auto& [name, g] : {std::pair{"west", &west}, std::pair{"east", &east}}) {
    std::ofstream gr(dir / (std::string(name) + ".gr")), co(dir / (std::string(name) + ".co"));
    write_dimacs(gr, co, *g);
  }
  const auto w = (dir / "west").string(), e = (dir / "east").string();
  const auto r = run({"ingest", "--merge", "--gr", w + ".gr", "--co", w + ".co", "--gr", e + ".gr", "--co", e + ".co",
                      "--out", (dir / "merged").string()});
  CHECK(r.code == 0);
  const auto merged = load_roadnet(dir / "merged");
  CHECK(merged.size() == whole.size());
  CHECK(merged.edge_count() == whole.edge_count());
  CHECK(run({"ingest", "--gr", w + ".gr", "--co", w + ".co", "--gr", e + ".gr", "--co", e + ".co", "--out",
             (dir / "x").string()})
            .code == 1);
}
