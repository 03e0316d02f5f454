#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synergy/classic_measures.hpp"
#include "synergy/examples.hpp"
#include "synergy/joint_table.hpp"
#include "synergy/optimizer.hpp"
#include "synergy/union_info.hpp"

namespace synergy {

/// Everything the CLI reports for one input distribution.
struct MeasureReport {
  std::string source;        // file path or "example:<name>"
  std::string content_hash;  // FNV-1a 64 over the canonical TSV dump
  std::vector<std::string> predictor_names;
  std::vector<Index> predictor_alphabets;
  Index target_alphabet = 0;

  ClassicReport classic;
  double i_vk_upper_bound = 0;
  double i_vk_best = 0;
  SvkInterval s_vk;
  std::optional<Pid2> pid2;

  OptimizerConfig config;
  int restarts_used = 0;
  bool converged = true;
};

/// Runs every measure on one table; `want_pid2` adds the n=2 decomposition
/// (ignored for other n).
MeasureReport measure_all(const JointTableD& t, const std::string& source,
                          const OptimizerConfig& cfg = {}, bool want_pid2 = false);

/// Stable-key-order JSON; identical input and seed give byte-identical text.
std::string report_json(const MeasureReport& r);

/// Key/value listing with 6-decimal numbers.
std::string report_table_text(const MeasureReport& r);

/// One evaluated row of the reproduction table.
struct Table1Entry {
  ExampleId id;
  std::optional<MeasureReport> report;  // empty on failure
  std::string error;
};

/// Evaluates all ten bundled examples (in parallel, results in canonical
/// order).
std::vector<Table1Entry> table1_entries(const OptimizerConfig& cfg = {});

/// Columnar text; S_VK appears as its [lower, upper] bracket for the two
/// examples whose published value is an interval.
std::string table1_text(const std::vector<Table1Entry>& entries);
std::string table1_json(const std::vector<Table1Entry>& entries);

/// Published values the reproduction is checked against.
struct Table1Expected {
  ExampleId id;
  double s_max;
  double wms;
  double delta_i;
  std::optional<double> s_vk;  // empty where only an interval is published
};
const std::vector<Table1Expected>& table1_expected();

/// Compares entries against the published values (1e-3 on S_max/WMS/ΔI and
/// pointwise S_VK; interval examples need lower ≥ 0.2703 and upper = 0.5).
/// Returns human-readable problems; empty means the reproduction passes.
std::vector<std::string> check_table1(const std::vector<Table1Entry>& entries);

}  // namespace synergy
