#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synergy/circuit.hpp"
#include "synergy/report.hpp"
#include "synergy/table_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

struct Options {
  std::string input;
  std::string example;
  std::string format = "table";
  bool renormalize = false;
  bool pid2 = false;
  bool check = false;
  synergy::OptimizerConfig cfg;
};

void add_optimizer_flags(CLI::App* cmd, synergy::OptimizerConfig& cfg) {
  cmd->add_option("--restarts", cfg.restarts, "random optimizer starts");
  cmd->add_option("--max-iters", cfg.max_iterations, "iteration cap per start");
  cmd->add_option("--tol", cfg.tolerance_bits, "objective stopping tolerance in bits");
  cmd->add_option("--seed", cfg.seed, "random seed");
}

void add_format_flag(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "json"}));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

synergy::JointTableD load_input(const Options& opt, std::string& label) {
  if (!opt.example.empty()) {
    const auto id = synergy::parse_example_id(opt.example);
    if (!id) {
      std::string names;
      for (const auto e : synergy::all_examples()) {
        names += ' ';
        names += synergy::example_name(e);
      }
      throw std::invalid_argument("unknown example '" + opt.example + "'; known:" + names);
    }
    label = "example:" + std::string(synergy::example_name(*id));
    return synergy::build_example(*id);
  }
  label = opt.input;
  if (opt.input == "-") return synergy::load_tsv(std::cin, opt.renormalize);
  if (ends_with(opt.input, ".circ")) {
    const auto spec = synergy::parse_circuit(read_file(opt.input));
    return synergy::compile_circuit(spec);
  }
  return synergy::load_tsv_file(opt.input, opt.renormalize);
}

int run_compute(const Options& opt) {
  std::string label;
  synergy::JointTableD table = [&] {
    try {
      return load_input(opt, label);
    } catch (const synergy::CircuitError& e) {
      throw std::invalid_argument(opt.input + ":" + e.what());
    }
  }();

  const auto report = synergy::measure_all(table, label, opt.cfg, opt.pid2);
  if (!report.converged) {
    std::cerr << "warning: optimizer did not converge within its iteration budget;"
              << " reported values are the best found\n";
  }
  std::cout << (opt.format == "json" ? synergy::report_json(report)
                                     : synergy::report_table_text(report));
  return kExitOk;
}

int run_table1(const Options& opt) {
  const auto entries = synergy::table1_entries(opt.cfg);
  std::cout << (opt.format == "json" ? synergy::table1_json(entries)
                                     : synergy::table1_text(entries));

  int failures = 0;
  for (const auto& entry : entries) {
    if (!entry.report) ++failures;
  }
  if (failures > 0) {
    std::cerr << failures << " example(s) failed\n";
    return kExitCheckFailed;
  }
  if (opt.check) {
    const auto problems = synergy::check_table1(entries);
    for (const auto& problem : problems) std::cerr << "check failed: " << problem << '\n';
    if (!problems.empty()) return kExitCheckFailed;
    std::cerr << "all published values reproduced\n";
  }
  return kExitOk;
}

int run_examples_list() {
  for (const auto id : synergy::all_examples()) std::cout << synergy::example_name(id) << '\n';
  return kExitOk;
}

int run_examples_dump(const std::string& name) {
  const auto id = synergy::parse_example_id(name);
  if (!id) throw std::invalid_argument("unknown example '" + name + "'");
  synergy::dump_tsv(synergy::build_example(*id), std::cout);
  return kExitOk;
}

int run_circuit_check(const std::string& path) {
  const std::string text = read_file(path);
  try {
    const auto spec = synergy::parse_circuit(text);
    const auto table = synergy::compile_circuit(spec);
    std::cout << path << ": ok; variables";
    for (const auto& axis : table.axes()) {
      std::cout << ' ' << axis.name << '(' << axis.size() << ')';
    }
    std::cout << "; " << table.size() << " cells\n";
    return kExitOk;
  } catch (const synergy::CircuitError& e) {
    std::cerr << path << ':' << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redundant/unique/synergistic information measures for discrete predictors"};
  app.require_subcommand(1);
  Options opt;

  auto* compute = app.add_subcommand(
      "compute", "measure one distribution (.tsv), circuit (.circ), '-' for stdin TSV");
  compute->add_option("input", opt.input, "input file or '-'");
  compute->add_option("--example", opt.example, "bundled example name instead of a file");
  compute->add_flag("--renormalize", opt.renormalize,
                    "rescale masses whose sum is within 1e-3 of 1");
  compute->add_flag("--pid2", opt.pid2, "include the two-predictor decomposition");
  add_format_flag(compute, opt.format);
  add_optimizer_flags(compute, opt.cfg);

  auto* table1 = app.add_subcommand("table1", "run all bundled examples");
  table1->add_flag("--check", opt.check, "compare against published values");
  add_format_flag(table1, opt.format);
  add_optimizer_flags(table1, opt.cfg);

  auto* examples = app.add_subcommand("examples", "bundled example corpus");
  examples->require_subcommand(1);
  examples->add_subcommand("list", "list example names");
  std::string dump_name;
  auto* dump = examples->add_subcommand("dump", "print an example as TSV");
  dump->add_option("id", dump_name, "example name")->required();

  auto* circuit = app.add_subcommand("circuit", "circuit files");
  circuit->require_subcommand(1);
  std::string circuit_path;
  auto* check = circuit->add_subcommand("check", "parse and compile a circuit file");
  check->add_option("file", circuit_path, "circuit file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (compute->parsed()) {
      if (opt.input.empty() == opt.example.empty()) {
        std::cerr << "error: give exactly one of an input file or --example\n";
        return kExitBadInput;
      }
      return run_compute(opt);
    }
    if (table1->parsed()) return run_table1(opt);
    if (examples->parsed()) {
      if (dump->parsed()) return run_examples_dump(dump_name);
      return run_examples_list();
    }
    if (circuit->parsed()) return run_circuit_check(circuit_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitOk;
}
