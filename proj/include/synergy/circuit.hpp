#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "synergy/joint_table.hpp"

namespace synergy {

/// Parse or validation failure with a 1-based source position.
/// what() is formatted exactly as "line:col: message".
class CircuitError : public std::runtime_error {
 public:
  CircuitError(int line, int col, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + message),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

enum class GateOp { Xor, And, Or, Not, Copy, Concat };

/// An independent input variable.  States default to "0".."k-1" and may be
/// renamed with a labels(...) suffix; probabilities default to uniform.
struct SourceDecl {
  std::string name;
  std::vector<double> probs;
  std::vector<std::string> labels;
};

/// One wire assignment `name := OP(args...)`.
struct GateDef {
  std::string name;
  GateOp op;
  std::vector<std::string> args;
};

/// A validated circuit: sources and definitions in declaration order plus the
/// chosen predictor wires and target wire.
///
/// Text grammar, one declaration per line ('#' starts a comment):
///   source <name> uniform(<k>) [labels(<l1>,...,<lk>)]
///   source <name> dist(<p1>,...,<pk>) [labels(<l1>,...,<lk>)]
///   <name> := <OP>(<arg>, <arg>...)      OP in XOR AND OR NOT COPY CONCAT
///   predictors: <name> <name>...
///   target: <name>
/// XOR/AND/OR take two two-valued wires and NOT one (a wire's second state is
/// its true value); COPY forwards any wire; CONCAT joins two or more wires by
/// concatenating their state labels.  Names must be declared before use.
struct CircuitSpec {
  std::vector<SourceDecl> sources;
  std::vector<GateDef> definitions;
  std::vector<std::string> predictors;
  std::string target;
};

/// Parses and fully validates circuit text.  Throws CircuitError with the
/// offending position on any lexical, syntactic, or semantic problem.
CircuitSpec parse_circuit(const std::string& text);

/// Enumerates the joint source assignments (capped at 2^20 states), evaluates
/// every wire, and accumulates the (predictors..., target) mass table.
JointTableD compile_circuit(const CircuitSpec& spec);

}  // namespace synergy
