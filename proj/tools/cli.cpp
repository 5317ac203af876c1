#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "smallworld/distance.hpp"
#include "smallworld/errors.hpp"
#include "smallworld/experiments.hpp"
#include "smallworld/models.hpp"
#include "smallworld/report_io.hpp"
#include "smallworld/roadgen.hpp"
#include "smallworld/roadnet.hpp"

namespace smallworld::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : Error {
  using Error::Error;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct IngestArgs {
  std::vector<std::string> gr;
  std::vector<std::string> co;
  std::string out;
  bool merge = false;
  double stitch_radius = 0.0;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  if (a.gr.size() != a.co.size()) throw UsageError("every --gr needs a matching --co");
  if (a.gr.size() > 1 && !a.merge) throw UsageError("several inputs given; pass --merge to combine them");
  if (a.merge && a.gr.size() < 2) throw UsageError("--merge needs at least two --gr/--co pairs");

  RoadNetwork g;
  if (a.merge) {
    std::vector<RoadNetwork> parts;
    for (std::size_t i = 0; i < a.gr.size(); ++i) parts.push_back(parse_dimacs_files(a.gr[i], a.co[i]));
    MergeResult merged = merge_networks(parts, a.stitch_radius);
    for (const auto& w : merged.warnings) err << "warning: " << w << '\n';
    g = std::move(merged.network);
  } else {
    RoadNetwork raw = parse_dimacs_files(a.gr.front(), a.co.front());
    RoadNetwork lcc = extract_lcc(raw);
    if (lcc.size() < raw.size()) {
      err << "note: kept largest component, " << lcc.size() << " of " << raw.size() << " vertices\n";
    }
    g = normalize_weights(lcc);
  }
  save_roadnet(a.out, g);
  out << "n " << g.size() << "\nm " << g.edge_count() << "\nmin_weight " << g.min_weight() << "\nmax_weight "
      << g.max_weight() << '\n';
  return kOk;
}

struct GenerateArgs {
  std::string net;
  std::string model;
  std::uint32_t m = 1;
  std::optional<double> s;
  std::optional<std::string> cap;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  ModelParams params;
  params.kind = parse_model_kind(a.model);
  params.m = a.m;
  params.seed = a.seed;
  if (params.kind == ModelKind::kBarabasiAlbert) {
    if (a.s) throw UsageError("--s has no effect for the ba model");
    params.s = 0.0;
  } else {
    params.s = a.s.value_or(2.0);
  }
  if (a.cap && params.kind != ModelKind::kNeighborhoodPACapped) throw UsageError("--cap is only valid with --model npa-cap");
  if (!a.cap && params.kind == ModelKind::kNeighborhoodPACapped) throw UsageError("--model npa-cap requires --cap");

  auto g = std::make_shared<const RoadNetwork>(load_roadnet(a.net));
  if (a.cap) {
    if (*a.cap == "log") {
      params.cap = log2_cap(g->size());
    } else {
      std::uint32_t c = 0;
      try {
        std::size_t used = 0;
        c = static_cast<std::uint32_t>(std::stoul(*a.cap, &used));
        if (used != a.cap->size()) throw std::invalid_argument("cap");
      } catch (const std::exception&) {
        throw UsageError("--cap must be a positive integer or 'log'");
      }
      params.cap = c;
    }
  }
  try {
    params.validate();
  } catch (const ParamError& e) {
    throw UsageError(e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  DijkstraOracle oracle(g);
  SocialNetwork net = construct(g, params, oracle);
  save_socialnet(a.out, net);
  out << "long_range_edges " << net.long_range().size() << "\nmax_added_degree " << net.max_added_degree()
      << "\nmax_total_degree " << net.max_total_degree() << "\nwall_seconds " << seconds_since(start) << '\n';
  return kOk;
}

struct ExperimentArgs {
  std::string social;
  std::size_t pairs = 1000;
  std::vector<double> dropout{0.0};
  std::vector<double> sweep_s;
  std::string out_dir;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  std::string dataset;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.dataset_id = a.dataset.empty() ? fs::path(a.social).stem().string() : a.dataset;
  cfg.num_pairs = a.pairs;
  cfg.dropout = a.dropout;
  cfg.s_values = a.sweep_s;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  try {
    cfg.validate();
  } catch (const ParamError& e) {
    throw UsageError(e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  const SocialNetwork net = load_socialnet(a.social);
  DijkstraOracle oracle(net.base_ptr());
  ExperimentBundle bundle;
  bundle.primary = run_hop_experiment(net, cfg, oracle);
  bundle.dropout_sweep = dropout_sweep(net, cfg, oracle);
  if (!cfg.s_values.empty()) {
    if (net.params().kind == ModelKind::kBarabasiAlbert) throw UsageError("--sweep-s needs a distance-based model");
    bundle.s_sweep = sweep_clustering_exponent(net.base_ptr(), net.params(), cfg.s_values, cfg, oracle);
  }
  write_report_files(a.out_dir, bundle);

  const auto& s = bundle.primary.summary;
  out << "mean_hops " << s.mean_hops << "\nmedian_hops " << s.median_hops << "\ndelivery_rate " << s.delivery_rate
      << '\n';
  for (const auto& p : bundle.dropout_sweep) {
    out << "dropout " << p.param << " mean_hops " << p.summary.mean_hops << " delivery_rate "
        << p.summary.delivery_rate << '\n';
  }
  for (const auto& p : bundle.s_sweep) out << "s " << p.param << " mean_hops " << p.summary.mean_hops << '\n';
  out << "wall_seconds " << seconds_since(start) << '\n';
  return kOk;
}

struct SynthArgs {
  std::size_t vertices = 10'000;
  std::uint64_t seed = kDefaultSeed;
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::string out_prefix;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SyntheticRoadOptions opts;
  opts.vertices = a.vertices;
  opts.seed = a.seed;
  opts.origin = {a.origin_x, a.origin_y};
  RoadNetwork g = synthetic_road_network(opts);
  std::ofstream gr(a.out_prefix + ".gr", std::ios::binary);
  std::ofstream co(a.out_prefix + ".co", std::ios::binary);
  if (!gr || !co) throw Error("cannot write " + a.out_prefix + ".{gr,co}");
  write_dimacs(gr, co, g);
  out << "n " << g.size() << "\nm " << g.edge_count() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-world social networks on road networks: build, route, measure.", "smallworld"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "DIMACS .gr/.co -> normalized largest-component roadnet snapshot");
  ingest_cmd->add_option("--gr", ingest.gr, "DIMACS graph file (repeat with --merge)")->required();
  ingest_cmd->add_option("--co", ingest.co, "DIMACS coordinate file (repeat with --merge)")->required();
  ingest_cmd->add_option("--out,-o", ingest.out, "output roadnet snapshot")->required();
  ingest_cmd->add_flag("--merge", ingest.merge, "merge several networks into one");
  ingest_cmd->add_option("--stitch-radius", ingest.stitch_radius, "unify vertices of different inputs within this distance")
      ->check(CLI::NonNegativeNumber)->capture_default_str();

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "build a social network (kl, ba, npa, npa-cap) over a roadnet snapshot");
  gen_cmd->add_option("--net", gen.net, "roadnet snapshot")->required();
  gen_cmd->add_option("--model", gen.model, "kl | ba | npa | npa-cap")->required();
  gen_cmd->add_option("--m", gen.m, "long-range links per vertex")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--s", gen.s, "clustering exponent (default 2)");
  gen_cmd->add_option("--cap", gen.cap, "npa-cap degree cap: integer or 'log'");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--out,-o", gen.out, "output socialnet snapshot")->required();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "route sampled pairs greedily and write report files");
  exp_cmd->add_option("--social", exp.social, "socialnet snapshot")->required();
  exp_cmd->add_option("--pairs", exp.pairs, "number of source/target pairs")->check(CLI::PositiveNumber)->capture_default_str();
  exp_cmd->add_option("--dropout", exp.dropout, "comma-separated dropout probabilities")->delimiter(',')->capture_default_str();
  exp_cmd->add_option("--sweep-s", exp.sweep_s, "comma-separated clustering exponents to sweep")->delimiter(',');
  exp_cmd->add_option("--out-dir", exp.out_dir, "directory for report.json and CSVs")->required();
  exp_cmd->add_option("--seed", exp.seed, "master seed for pairs and dropout")->capture_default_str();
  exp_cmd->add_option("--threads", exp.threads, "worker threads (0: all cores)")->capture_default_str();
  exp_cmd->add_option("--dataset", exp.dataset, "dataset id recorded in the report");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic road-like network as DIMACS .gr/.co");
  synth_cmd->add_option("--n", synth.vertices, "vertex count")->check(CLI::Range(2, 100'000'000))->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
  synth_cmd->add_option("--origin-x", synth.origin_x, "x offset of the region")->capture_default_str();
  synth_cmd->add_option("--origin-y", synth.origin_y, "y offset of the region")->capture_default_str();
  synth_cmd->add_option("--out-prefix", synth.out_prefix, "writes <prefix>.gr and <prefix>.co")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out, err);
    if (*gen_cmd) return cmd_generate(gen, out);
    if (*exp_cmd) return cmd_experiment(exp, out);
    if (*synth_cmd) return cmd_synth(synth, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParamError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace smallworld::cli
