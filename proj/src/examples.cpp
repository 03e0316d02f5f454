#include "synergy/examples.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace synergy {
namespace {

struct Row {
  std::vector<std::string> states;  // predictors then target
  double mass;
};

// Splits "ra0 rb0 rab0" into its whitespace-separated state labels.
std::vector<std::string> split_states(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Assembles a table from explicit rows; state order follows first appearance.
JointTableD table_from_rows(const std::vector<std::string>& axis_names,
                            const std::vector<Row>& rows) {
  std::vector<VariableAxis> axes;
  for (const auto& name : axis_names) axes.push_back({name, {}});
  for (const auto& row : rows) {
    for (size_t k = 0; k < axes.size(); ++k) {
      if (axes[k].state_index(row.states[k]) < 0)
        axes[k].states.push_back(row.states[k]);
    }
  }
  Index cells = 1;
  for (const auto& ax : axes) cells *= ax.size();
  DenseVector<double> mass = DenseVector<double>::Zero(cells);
  std::vector<Index> st(axes.size());
  for (const auto& row : rows) {
    for (size_t k = 0; k < axes.size(); ++k)
      st[k] = axes[k].state_index(row.states[k]);
    Index flat = 0;
    for (size_t k = 0; k < axes.size(); ++k) flat = flat * axes[k].size() + st[k];
    mass[flat] += row.mass;
  }
  return JointTableD(std::move(axes), std::move(mass));
}

// Builds rows from a transcribed list of state lines sharing a uniform mass.
std::vector<Row> transcribed(const std::vector<std::string>& lines, double mass) {
  std::vector<Row> rows;
  for (const auto& line : lines) rows.push_back({split_states(line), mass});
  return rows;
}

void require_same_rows(ExampleId id, const std::vector<Row>& generated,
                       const std::vector<Row>& listed) {
  auto key = [](const Row& r) {
    std::string k;
    for (const auto& s : r.states) k += s + '\x1f';
    return k;
  };
  std::map<std::string, double> want;
  for (const auto& r : listed) want[key(r)] += r.mass;
  std::map<std::string, double> got;
  for (const auto& r : generated)
    if (r.mass != 0.0) got[key(r)] += r.mass;
  if (want != got)
    throw std::logic_error("generated rows for '" + example_name(id) +
                           "' do not match the transcribed table");
}

const char* bit(int v) { return v ? "1" : "0"; }

std::vector<Row> generate_rows(ExampleId id) {
  std::vector<Row> rows;
  switch (id) {
    case ExampleId::Rdn:
      // One shared bit, copied to both predictors and the target.
      for (const char* r : {"r", "R"}) rows.push_back({{r, r, r}, 0.5});
      break;
    case ExampleId::Unq:
      // Each predictor contributes its own letter; the target is the pair.
      for (const char* a : {"a", "A"})
        for (const char* b : {"b", "B"})
          rows.push_back({{a, b, std::string(a) + b}, 0.25});
      break;
    case ExampleId::Xor:
      for (int a : {0, 1})
        for (int b : {0, 1}) rows.push_back({{bit(a), bit(b), bit(a ^ b)}, 0.25});
      break;
    case ExampleId::XorDuplicate:
      // The first input is repeated as a third predictor.
      for (int a : {0, 1})
        for (int b : {0, 1})
          rows.push_back({{bit(a), bit(b), bit(a), bit(a ^ b)}, 0.25});
      break;
    case ExampleId::XorLoses:
      // A third predictor already equals the parity target.
      for (int a : {0, 1})
        for (int b : {0, 1})
          rows.push_back({{bit(a), bit(b), bit(a ^ b), bit(a ^ b)}, 0.25});
      break;
    case ExampleId::RdnXor:
      // A shared letter plus a private parity digit per predictor.
      for (const char* l : {"r", "R"})
        for (int d1 : {0, 1})
          for (int d2 : {0, 1})
            rows.push_back({{l + std::string(bit(d1)), l + std::string(bit(d2)),
                             l + std::string(bit(d1 ^ d2))},
                            0.125});
      break;
    case ExampleId::And:
      for (int a : {0, 1})
        for (int b : {0, 1}) rows.push_back({{bit(a), bit(b), bit(a & b)}, 0.25});
      break;
    case ExampleId::RdnUnqXor:
      // Shared letter (r/R), one private letter per predictor (a/A, b/B),
      // and a parity digit; the target collects all four components.
      for (const char* l1 : {"r", "R"})
        for (const char* l2 : {"a", "A"})
          for (const char* l3 : {"b", "B"})
            for (int d1 : {0, 1})
              for (int d2 : {0, 1})
                rows.push_back(
                    {{std::string(l1) + l2 + bit(d1), std::string(l1) + l3 + bit(d2),
                      std::string(l1) + l2 + l3 + bit(d1 ^ d2)},
                     1.0 / 32});
      break;
    case ExampleId::AndDuplicate:
      for (int a : {0, 1})
        for (int b : {0, 1})
          rows.push_back({{bit(a), bit(b), bit(a), bit(a & b)}, 0.25});
      break;
    case ExampleId::XorMultiCoal:
      // Three shared wires; each predictor reads a different pair and the
      // target is the parity of all three.
      for (int a : {0, 1})
        for (int b : {0, 1})
          for (int c : {0, 1}) {
            const std::string wa = a ? "A" : "a";
            const std::string wb = b ? "B" : "b";
            const std::string wc = c ? "C" : "c";
            rows.push_back({{wa + wb, wa + wc, wb + wc, bit(a ^ b ^ c)}, 0.125});
          }
      break;
  }
  return rows;
}

std::vector<Row> listed_rows(ExampleId id) {
  switch (id) {
    case ExampleId::Rdn:
      return transcribed({"r r r", "R R R"}, 1.0 / 2);
    case ExampleId::Unq:
      return transcribed({"a b ab", "a B aB", "A b Ab", "A B AB"}, 1.0 / 4);
    case ExampleId::Xor:
      return transcribed({"0 0 0", "0 1 1", "1 0 1", "1 1 0"}, 1.0 / 4);
    case ExampleId::XorDuplicate:
      return transcribed({"0 0 0 0", "0 1 0 1", "1 0 1 1", "1 1 1 0"}, 1.0 / 4);
    case ExampleId::XorLoses:
      return transcribed({"0 0 0 0", "0 1 1 1", "1 0 1 1", "1 1 0 0"}, 1.0 / 4);
    case ExampleId::RdnXor:
      return transcribed({"r0 r0 r0", "r0 r1 r1", "r1 r0 r1", "r1 r1 r0",
                          "R0 R0 R0", "R0 R1 R1", "R1 R0 R1", "R1 R1 R0"},
                         1.0 / 8);
    case ExampleId::And:
      return transcribed({"0 0 0", "0 1 0", "1 0 0", "1 1 1"}, 1.0 / 4);
    case ExampleId::RdnUnqXor:
      return transcribed(
          {"ra0 rb0 rab0", "ra0 rb1 rab1", "ra1 rb0 rab1", "ra1 rb1 rab0",
           "ra0 rB0 raB0", "ra0 rB1 raB1", "ra1 rB0 raB1", "ra1 rB1 raB0",
           "rA0 rb0 rAb0", "rA0 rb1 rAb1", "rA1 rb0 rAb1", "rA1 rb1 rAb0",
           "rA0 rB0 rAB0", "rA0 rB1 rAB1", "rA1 rB0 rAB1", "rA1 rB1 rAB0",
           "Ra0 Rb0 Rab0", "Ra0 Rb1 Rab1", "Ra1 Rb0 Rab1", "Ra1 Rb1 Rab0",
           "Ra0 RB0 RaB0", "Ra0 RB1 RaB1", "Ra1 RB0 RaB1", "Ra1 RB1 RaB0",
           "RA0 Rb0 RAb0", "RA0 Rb1 RAb1", "RA1 Rb0 RAb1", "RA1 Rb1 RAb0",
           "RA0 RB0 RAB0", "RA0 RB1 RAB1", "RA1 RB0 RAB1", "RA1 RB1 RAB0"},
          1.0 / 32);
    case ExampleId::AndDuplicate:
      return transcribed({"0 0 0 0", "0 1 0 0", "1 0 1 0", "1 1 1 1"}, 1.0 / 4);
    case ExampleId::XorMultiCoal:
      return transcribed({"ab ac bc 0", "AB Ac Bc 0", "Ab AC bC 0", "aB aC BC 0",
                          "Ab Ac bc 1", "aB ac Bc 1", "ab aC bC 1", "AB AC BC 1"},
                         1.0 / 8);
  }
  throw std::invalid_argument("unknown example id");
}

std::vector<std::string> axis_names(ExampleId id) {
  switch (id) {
    case ExampleId::XorDuplicate:
    case ExampleId::XorLoses:
    case ExampleId::AndDuplicate:
    case ExampleId::XorMultiCoal:
      return {"X1", "X2", "X3", "Y"};
    default:
      return {"X1", "X2", "Y"};
  }
}

}  // namespace

const std::vector<ExampleId>& all_examples() {
  static const std::vector<ExampleId> ids{
      ExampleId::Rdn,          ExampleId::Unq,       ExampleId::Xor,
      ExampleId::XorDuplicate, ExampleId::XorLoses,  ExampleId::RdnXor,
      ExampleId::And,          ExampleId::RdnUnqXor, ExampleId::AndDuplicate,
      ExampleId::XorMultiCoal,
  };
  return ids;
}

std::string example_name(ExampleId id) {
  switch (id) {
    case ExampleId::Rdn: return "Rdn";
    case ExampleId::Unq: return "Unq";
    case ExampleId::Xor: return "Xor";
    case ExampleId::XorDuplicate: return "XorDuplicate";
    case ExampleId::XorLoses: return "XorLoses";
    case ExampleId::RdnXor: return "RdnXor";
    case ExampleId::And: return "And";
    case ExampleId::RdnUnqXor: return "RdnUnqXor";
    case ExampleId::AndDuplicate: return "AndDuplicate";
    case ExampleId::XorMultiCoal: return "XorMultiCoal";
  }
  throw std::invalid_argument("unknown example id");
}

std::optional<ExampleId> parse_example_id(std::string_view name) {
  auto lowered = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
  };
  const std::string want = lowered(name);
  for (ExampleId id : all_examples())
    if (lowered(example_name(id)) == want) return id;
  return std::nullopt;
}

JointTableD build_example(ExampleId id) {
  // Construct from the gate-logic enumeration (product state order, matching
  // the bundled circuits) and cross-check it against the published listing.
  const auto generated = generate_rows(id);
  require_same_rows(id, generated, listed_rows(id));
  return table_from_rows(axis_names(id), generated);
}

}  // namespace synergy
