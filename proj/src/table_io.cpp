#include "synergy/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace synergy {

namespace {

constexpr Index kMaxCells = Index(1) << 24;

[[noreturn]] void fail(long line_no, const std::string& message) {
  throw std::invalid_argument("line " + std::to_string(line_no) + ": " + message);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) fields.push_back(field);
  return fields;
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

double parse_probability(const std::string& text, long line_no) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + text.size() || !std::isfinite(value)) {
    fail(line_no, "malformed probability '" + text + "'");
  }
  if (value < 0) fail(line_no, "negative probability " + text);
  return value;
}

struct Row {
  std::vector<Index> state;
  double p = 0;
};

}  // namespace

JointTableD load_tsv(std::istream& in, bool renormalize) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> states;  // per column, first appearance
  std::vector<std::map<std::string, Index>> state_index;
  std::vector<Row> rows;
  std::map<std::string, long> seen;  // state tuple -> first line

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(strip_comment(line));
    if (fields.empty()) continue;

    if (columns.empty()) {
      if (fields.size() < 3 || fields[fields.size() - 1] != "p" ||
          fields[fields.size() - 2] != "target") {
        fail(line_no, "header must list predictor columns, then 'target', then 'p'");
      }
      columns.assign(fields.begin(), fields.end() - 1);
      states.resize(columns.size());
      state_index.resize(columns.size());
      continue;
    }

    if (fields.size() != columns.size() + 1) {
      fail(line_no, "expected " + std::to_string(columns.size() + 1) + " fields, got " +
                        std::to_string(fields.size()));
    }

    Row row;
    std::string key;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      auto [it, fresh] = state_index[c].try_emplace(fields[c], Index(states[c].size()));
      if (fresh) states[c].push_back(fields[c]);
      row.state.push_back(it->second);
      key += fields[c];
      key += '\x1f';
    }
    row.p = parse_probability(fields[columns.size()], line_no);

    const auto [it, fresh] = seen.try_emplace(key, line_no);
    if (!fresh) {
      fail(line_no, "duplicate state row (first listed on line " + std::to_string(it->second) + ")");
    }
    rows.push_back(std::move(row));
  }

  if (columns.empty()) throw std::invalid_argument("empty input: no header row");
  if (rows.empty()) throw std::invalid_argument("no data rows");

  std::vector<VariableAxis> axes;
  Index cells = 1;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    axes.push_back({columns[c], states[c]});
    if (cells > kMaxCells / Index(states[c].size())) {
      throw std::invalid_argument("state space too large for a dense table");
    }
    cells *= Index(states[c].size());
  }

  DenseVector<double> mass = DenseVector<double>::Zero(cells);
  double total = 0;
  for (const auto& row : rows) {
    Index flat = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      flat = flat * Index(states[c].size()) + row.state[c];
    }
    mass[flat] = row.p;
    total += row.p;
  }
  if (renormalize && std::abs(total - 1.0) < 1e-3 && total > 0) mass /= total;

  return JointTableD(std::move(axes), std::move(mass));
}

JointTableD load_tsv_file(const std::string& path, bool renormalize) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return load_tsv(in, renormalize);
}

void dump_tsv(const JointTableD& t, std::ostream& out) {
  for (Index a = 0; a + 1 < t.axis_count(); ++a) out << t.axes()[std::size_t(a)].name << '\t';
  out << "target\tp\n";

  char buffer[64];
  std::vector<Index> state(std::size_t(t.axis_count()));
  for (Index flat = 0; flat < t.size(); ++flat) {
    if (t.mass()[flat] <= 0) continue;
    t.unflatten(flat, state);
    for (Index a = 0; a < t.axis_count(); ++a) {
      out << t.axes()[std::size_t(a)].states[std::size_t(state[std::size_t(a)])] << '\t';
    }
    std::snprintf(buffer, sizeof buffer, "%.17g", t.mass()[flat]);
    out << buffer << '\n';
  }
}

std::string dump_tsv(const JointTableD& t) {
  std::ostringstream out;
  dump_tsv(t, out);
  return out.str();
}

}  // namespace synergy
