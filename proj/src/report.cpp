#include "synergy/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "synergy/table_io.hpp"

namespace synergy {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

std::string six(double value) {
  if (std::signbit(value) && value > -5e-7) value = 0.0;  // avoid "-0.000000"
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

bool interval_published(ExampleId id) {
  return id == ExampleId::And || id == ExampleId::AndDuplicate;
}

ordered_json report_to_json(const MeasureReport& r) {
  ordered_json j;
  j["input"] = {{"source", r.source}, {"content_hash", r.content_hash}};
  ordered_json alphabets = ordered_json::array();
  for (const Index k : r.predictor_alphabets) alphabets.push_back(k);
  j["shape"] = {{"n", r.predictor_names.size()},
                {"predictor_names", r.predictor_names},
                {"predictor_alphabets", alphabets},
                {"target_alphabet", r.target_alphabet}};
  ordered_json m;
  m["i_whole"] = r.classic.i_whole;
  m["i_singletons"] = r.classic.i_singletons;
  m["s_max"] = r.classic.s_max;
  m["wms"] = r.classic.wms;
  m["delta_i"] = r.classic.delta_i;
  m["i_vk"] = {{"upper_bound", r.i_vk_upper_bound}, {"best", r.i_vk_best}};
  m["s_vk"] = {{"lower", r.s_vk.lower}, {"best", r.s_vk.best}, {"upper", r.s_vk.upper}};
  j["measures"] = std::move(m);
  if (r.pid2) {
    j["pid2"] = {{"redundancy", r.pid2->redundancy},
                 {"unique1", r.pid2->unique1},
                 {"unique2", r.pid2->unique2},
                 {"synergy", r.pid2->synergy}};
  }
  j["optimizer"] = {{"restarts", r.config.restarts},
                    {"max_iterations", r.config.max_iterations},
                    {"tolerance_bits", r.config.tolerance_bits},
                    {"feasibility_tolerance", r.config.feasibility_tolerance},
                    {"seed", r.config.seed},
                    {"restarts_used", r.restarts_used},
                    {"converged", r.converged}};
  return j;
}

}  // namespace

MeasureReport measure_all(const JointTableD& t, const std::string& source,
                          const OptimizerConfig& cfg, bool want_pid2) {
  MeasureReport r;
  r.source = source;
  r.content_hash = fnv1a64(dump_tsv(t));
  for (Index a = 0; a < t.predictor_count(); ++a) {
    r.predictor_names.push_back(t.axes()[std::size_t(a)].name);
    r.predictor_alphabets.push_back(t.axes()[std::size_t(a)].size());
  }
  r.target_alphabet = t.target_axis().size();
  r.config = cfg;

  r.classic = classic_report(t);
  const UnionInfoResult u = minimize_union_information(t, cfg);
  r.i_vk_upper_bound = u.upper_bound_value;
  r.i_vk_best = u.best_value;
  r.s_vk = {r.classic.i_whole - u.upper_bound_value, r.classic.i_whole - u.best_value,
            r.classic.s_max, u.converged};
  r.restarts_used = u.restarts_used;
  r.converged = u.converged;

  if (want_pid2 && t.predictor_count() == 2) {
    Pid2 p;
    p.redundancy = r.classic.i_singletons[0] + r.classic.i_singletons[1] - u.best_value;
    p.unique1 = r.classic.i_singletons[0] - p.redundancy;
    p.unique2 = r.classic.i_singletons[1] - p.redundancy;
    p.synergy = r.classic.i_whole - u.best_value;
    r.pid2 = p;
  }
  return r;
}

std::string report_json(const MeasureReport& r) { return report_to_json(r).dump(2) + "\n"; }

std::string report_table_text(const MeasureReport& r) {
  std::ostringstream out;
  const auto row = [&out](const std::string& key, const std::string& value) {
    out << pad_right(key, 18) << value << '\n';
  };
  row("source", r.source);
  std::string names;
  for (const auto& name : r.predictor_names) {
    if (!names.empty()) names += ' ';
    names += name;
  }
  row("predictors", names);
  row("I(whole:Y)", six(r.classic.i_whole));
  for (std::size_t i = 0; i < r.predictor_names.size(); ++i) {
    row("I(" + r.predictor_names[i] + ":Y)", six(r.classic.i_singletons[i]));
  }
  row("S_max", six(r.classic.s_max));
  row("WMS", six(r.classic.wms));
  row("Delta_I", six(r.classic.delta_i));
  row("I_VK upper bound", six(r.i_vk_upper_bound));
  row("I_VK best", six(r.i_vk_best));
  row("S_VK", "[" + six(r.s_vk.lower) + ", " + six(r.s_vk.upper) + "] best " + six(r.s_vk.best));
  if (r.pid2) {
    row("redundancy", six(r.pid2->redundancy));
    row("unique " + r.predictor_names[0], six(r.pid2->unique1));
    row("unique " + r.predictor_names[1], six(r.pid2->unique2));
    row("synergy", six(r.pid2->synergy));
  }
  row("converged", r.converged ? "yes" : "no");
  return out.str();
}

std::vector<Table1Entry> table1_entries(const OptimizerConfig& cfg) {
  std::vector<std::future<MeasureReport>> futures;
  for (const ExampleId id : all_examples()) {
    futures.push_back(std::async(std::launch::async, [id, cfg] {
      return measure_all(build_example(id), "example:" + std::string(example_name(id)), cfg);
    }));
  }
  std::vector<Table1Entry> entries;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    Table1Entry entry;
    entry.id = all_examples()[i];
    try {
      entry.report = futures[i].get();
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string table1_text(const std::vector<Table1Entry>& entries) {
  std::ostringstream out;
  out << pad_right("example", 14) << pad_left("S_max", 9) << pad_left("WMS", 10)
      << pad_left("Delta_I", 10) << pad_left("S_VK", 22) << '\n';
  for (const auto& entry : entries) {
    out << pad_right(example_name(entry.id), 14);
    if (!entry.report) {
      out << "error: " << entry.error << '\n';
      continue;
    }
    const MeasureReport& r = *entry.report;
    out << pad_left(six(r.classic.s_max), 9) << pad_left(six(r.classic.wms), 10)
        << pad_left(six(r.classic.delta_i), 10);
    if (interval_published(entry.id)) {
      out << pad_left("[" + six(r.s_vk.lower) + ", " + six(r.s_vk.upper) + "]", 22);
    } else {
      out << pad_left(six(r.s_vk.best), 22);
    }
    out << '\n';
  }
  return out.str();
}

std::string table1_json(const std::vector<Table1Entry>& entries) {
  ordered_json rows = ordered_json::array();
  for (const auto& entry : entries) {
    if (entry.report) {
      rows.push_back(report_to_json(*entry.report));
    } else {
      rows.push_back({{"input", {{"source", "example:" + std::string(example_name(entry.id))}}},
                      {"error", entry.error}});
    }
  }
  return rows.dump(2) + "\n";
}

const std::vector<Table1Expected>& table1_expected() {
  static const std::vector<Table1Expected> rows = {
      {ExampleId::Rdn, 0.0, -1.0, 0.0, 0.0},
      {ExampleId::Unq, 1.0, 0.0, 0.0, 0.0},
      {ExampleId::Xor, 1.0, 1.0, 1.0, 1.0},
      {ExampleId::XorDuplicate, 1.0, 1.0, 1.0, 1.0},
      {ExampleId::XorLoses, 0.0, 0.0, 0.0, 0.0},
      {ExampleId::RdnXor, 1.0, 0.0, 1.0, 1.0},
      {ExampleId::And, 0.5, 0.18872187554086717, 0.10375937481971094, std::nullopt},
      {ExampleId::RdnUnqXor, 2.0, 0.0, 1.0, 1.0},
      {ExampleId::AndDuplicate, 0.5, -0.12255624891826566, 0.038000773361262515, std::nullopt},
      {ExampleId::XorMultiCoal, 1.0, 1.0, 1.0, 1.0},
  };
  return rows;
}

std::vector<std::string> check_table1(const std::vector<Table1Entry>& entries) {
  std::vector<std::string> problems;
  const auto complain = [&problems](ExampleId id, const std::string& what, double got,
                                    double want) {
    std::ostringstream out;
    out << example_name(id) << ": " << what << " = " << got << ", published " << want;
    problems.push_back(out.str());
  };

  for (const auto& expected : table1_expected()) {
    const auto entry = std::find_if(entries.begin(), entries.end(),
                                    [&](const Table1Entry& e) { return e.id == expected.id; });
    if (entry == entries.end() || !entry->report) {
      problems.push_back(std::string(example_name(expected.id)) + ": " +
                         (entry == entries.end() ? "missing from output" : entry->error));
      continue;
    }
    const MeasureReport& r = *entry->report;
    if (std::abs(r.classic.s_max - expected.s_max) > 1e-3)
      complain(expected.id, "S_max", r.classic.s_max, expected.s_max);
    if (std::abs(r.classic.wms - expected.wms) > 1e-3)
      complain(expected.id, "WMS", r.classic.wms, expected.wms);
    if (std::abs(r.classic.delta_i - expected.delta_i) > 1e-3)
      complain(expected.id, "Delta_I", r.classic.delta_i, expected.delta_i);
    if (expected.s_vk) {
      if (std::abs(r.s_vk.best - *expected.s_vk) > 1e-3)
        complain(expected.id, "S_VK", r.s_vk.best, *expected.s_vk);
    } else {
      if (r.s_vk.lower < 0.2704 - 1e-4) complain(expected.id, "S_VK lower", r.s_vk.lower, 0.2704);
      if (std::abs(r.s_vk.upper - 0.5) > 1e-6) complain(expected.id, "S_VK upper", r.s_vk.upper, 0.5);
      if (r.s_vk.best < r.s_vk.lower - 1e-6 || r.s_vk.best > r.s_vk.upper + 1e-6)
        complain(expected.id, "S_VK best outside its interval", r.s_vk.best, r.s_vk.lower);
    }
  }
  return problems;
}

}  // namespace synergy
