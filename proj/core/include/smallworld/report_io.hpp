#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "smallworld/experiments.hpp"

namespace smallworld {

// Everything one `experiment` invocation produces.
struct ExperimentBundle {
  ExperimentReport primary;
  std::vector<SweepPoint> dropout_sweep;
  std::vector<SweepPoint> s_sweep;
};

// `report v1` JSON document. Key order and number formatting are fixed so equal
// inputs give byte-identical output.
void write_report_json(std::ostream& out, const ExperimentBundle& bundle);

// run_id,source,target,delivered,hops
void write_hops_csv(std::ostream& out, std::span<const RunRecord> runs);
// degree,count,which  (which is "whole" or "visited")
void write_degdist_csv(std::ostream& out, const DegreeHistogram& whole, const DegreeHistogram& visited);
// param,mean_hops,delivery_rate
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);
// run_id,step,vertex,remaining,total_degree
void write_trace_csv(std::ostream& out, std::span<const RunRecord> runs);

// Writes report.json, hops.csv, degdist.csv, trace.csv and sweep.csv into `dir`
// (created if missing). sweep.csv holds the s sweep when one was run, otherwise
// the dropout sweep.
void write_report_files(const std::filesystem::path& dir, const ExperimentBundle& bundle);

}  // namespace smallworld
