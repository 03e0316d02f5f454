#include "doctest.h"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "synergy/circuit.hpp"
#include "synergy/examples.hpp"

using namespace synergy;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string circuit_path(const char* filename) {
  return std::string(SYNERGY_CIRCUIT_DIR) + "/" + filename;
}

JointTableD compile_text(const std::string& text) {
  return compile_circuit(parse_circuit(text));
}

}  // namespace

TEST_CASE("a two-input parity circuit compiles to the expected table") {
  const std::string text =
      "source X1 uniform(2)\n"
      "source X2 uniform(2)\n"
      "Y := XOR(X1, X2)\n"
      "predictors: X1 X2\n"
      "target: Y\n";
  CHECK(compile_text(text) == build_example(ExampleId::Xor));
}

TEST_CASE("every bundled circuit reproduces its reference table") {
  const std::pair<const char*, ExampleId> files[] = {
      {"rdn.circ", ExampleId::Rdn},
      {"unq.circ", ExampleId::Unq},
      {"xor.circ", ExampleId::Xor},
      {"xor_duplicate.circ", ExampleId::XorDuplicate},
      {"xor_loses.circ", ExampleId::XorLoses},
      {"rdn_xor.circ", ExampleId::RdnXor},
      {"and.circ", ExampleId::And},
      {"rdn_unq_xor.circ", ExampleId::RdnUnqXor},
      {"and_duplicate.circ", ExampleId::AndDuplicate},
      {"xor_multi_coal.circ", ExampleId::XorMultiCoal},
  };
  for (const auto& [filename, id] : files) {
    INFO(filename);
    CHECK(compile_text(read_file(circuit_path(filename))) == build_example(id));
  }
}

TEST_CASE("parse errors carry the offending position") {
  auto error_of = [](const std::string& text) -> CircuitError {
    try {
      compile_text(text);
    } catch (const CircuitError& e) {
      return e;
    }
    FAIL("expected a parse error");
    return CircuitError(0, 0, "");
  };

  const CircuitError dup = error_of(
      "source a uniform(2)\n"
      "source a uniform(2)\n"
      "predictors: a\ntarget: a\n");
  CHECK(dup.line() == 2);
  CHECK(dup.col() == 8);
  CHECK(std::string(dup.what()) == "2:8: name 'a' is already declared");

  const CircuitError cycle = error_of(
      "source a uniform(2)\n"
      "Y := XOR(a, Y)\n"
      "predictors: a\ntarget: Y\n");
  CHECK(cycle.line() == 2);
  CHECK(cycle.col() == 13);
  CHECK(std::string(cycle.what()).find("circular reference") != std::string::npos);

  auto message_of = [&](const std::string& text) { return std::string(error_of(text).what()); };

  CHECK(message_of("source a uniform(2)\nY := NAND(a, a)\npredictors: a\ntarget: Y\n")
            .find("unknown operation 'NAND'") != std::string::npos);
  CHECK(message_of("source a uniform(2)\nY := NOT(a, a)\npredictors: a\ntarget: Y\n")
            .find("argument(s), got 2") != std::string::npos);
  CHECK(message_of("source a dist(0.5, 0.4)\npredictors: a\ntarget: a\n")
            .find("distribution sums to 0.9") != std::string::npos);
  CHECK(message_of("source a uniform(2) labels(x)\npredictors: a\ntarget: a\n")
            .find("expected 2 labels, got 1") != std::string::npos);
  CHECK(message_of("source a uniform(2)\npredictors: a\n")
            .find("missing 'target:'") != std::string::npos);
  CHECK(message_of("source a uniform(2)\ntarget: a\n")
            .find("missing 'predictors:'") != std::string::npos);
  CHECK(message_of("source a uniform(2)\npredictors: a\ntarget: a\n")
            .find("may not also be a predictor") != std::string::npos);

  // Gates demand two-valued inputs: a four-state concatenation is rejected.
  CHECK(message_of(
            "source a uniform(2)\n"
            "source b uniform(2)\n"
            "c := CONCAT(a, b)\n"
            "Y := XOR(c, a)\n"
            "predictors: a b\ntarget: Y\n")
            .find("must be two-valued, it has 4 states") != std::string::npos);
}

TEST_CASE("the joint source space is capped") {
  std::ostringstream text;
  for (int k = 0; k < 21; ++k) text << "source s" << k << " uniform(2)\n";
  text << "Y := COPY(s0)\npredictors: s1 s2\ntarget: Y\n";
  CHECK_THROWS_WITH_AS(compile_text(text.str()),
                       doctest::Contains("state space exceeds"), std::invalid_argument);
}

TEST_CASE("token deletions yield located errors, never crashes") {
  for (const char* filename : {"xor.circ", "rdn_unq_xor.circ"}) {
    const std::string text = read_file(circuit_path(filename));

    std::vector<std::pair<size_t, size_t>> tokens;
    size_t i = 0;
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      tokens.emplace_back(i, j);
      i = j;
    }

    for (size_t k = 0; k < tokens.size(); ++k) {
      INFO(filename << " without token #" << k);
      const std::string mutated =
          text.substr(0, tokens[k].first) + text.substr(tokens[k].second);
      try {
        (void)compile_text(mutated);  // deletions may leave a valid circuit
      } catch (const CircuitError& e) {
        int line = 0, col = 0;
        CHECK(std::sscanf(e.what(), "%d:%d:", &line, &col) == 2);
        CHECK(line >= 1);
        CHECK(col >= 1);
      }
      // any other exception type escapes and fails the test case
    }
  }
}
