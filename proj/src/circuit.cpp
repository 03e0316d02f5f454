#include "synergy/circuit.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

namespace synergy {
namespace {

constexpr Index kMaxStateSpace = Index(1) << 20;

struct Token {
  enum Kind { Ident, Number, Punct, End } kind;
  std::string text;
  int col;  // 1-based
};

// Splits one line into tokens; '#' ends the line.
std::vector<Token> lex_line(const std::string& line, int line_no) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    const int col = static_cast<int>(i) + 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      out.push_back({Token::Ident, line.substr(i, j - i), col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t j = i;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '.' ||
              line[j] == '+' || line[j] == '-' ||
              ((line[j] == 'e' || line[j] == 'E') && j + 1 < line.size())))
        ++j;
      out.push_back({Token::Number, line.substr(i, j - i), col});
      i = j;
    } else if (c == ':' && i + 1 < line.size() && line[i + 1] == '=') {
      out.push_back({Token::Punct, ":=", col});
      i += 2;
    } else if (c == '(' || c == ')' || c == ',' || c == ':') {
      out.push_back({Token::Punct, std::string(1, c), col});
      ++i;
    } else {
      throw CircuitError(line_no, col, std::string("unexpected character '") + c + "'");
    }
  }
  const int end_col = static_cast<int>(line.size()) + 1;
  out.push_back({Token::End, "", end_col});
  return out;
}

// Cursor over one line of tokens with located error helpers.
class LineParser {
 public:
  LineParser(std::vector<Token> tokens, int line_no)
      : tokens_(std::move(tokens)), line_(line_no) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at_end() const { return peek().kind == Token::End; }

  Token take() {
    Token t = tokens_[pos_];
    if (t.kind != Token::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw CircuitError(line_, at.col, message);
  }

  Token expect_ident(const std::string& what) {
    if (peek().kind != Token::Ident) fail(peek(), "expected " + what);
    return take();
  }

  void expect_punct(const std::string& text) {
    if (peek().kind != Token::Punct || peek().text != text)
      fail(peek(), "expected '" + text + "'");
    take();
  }

  // A state label may look like an identifier or a bare number.
  Token expect_label() {
    if (peek().kind != Token::Ident && peek().kind != Token::Number)
      fail(peek(), "expected a state label");
    return take();
  }

  double expect_number() {
    if (peek().kind != Token::Number) fail(peek(), "expected a number");
    const Token t = take();
    char* end = nullptr;
    const double v = std::strtod(t.text.c_str(), &end);
    if (end == nullptr || *end != '\0' || !std::isfinite(v))
      fail(t, "malformed number '" + t.text + "'");
    return v;
  }

  void expect_line_end() {
    if (!at_end()) fail(peek(), "unexpected trailing input");
  }

  int line() const { return line_; }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int line_;
};

std::optional<GateOp> gate_op(const std::string& name) {
  if (name == "XOR") return GateOp::Xor;
  if (name == "AND") return GateOp::And;
  if (name == "OR") return GateOp::Or;
  if (name == "NOT") return GateOp::Not;
  if (name == "COPY") return GateOp::Copy;
  if (name == "CONCAT") return GateOp::Concat;
  return std::nullopt;
}

size_t gate_min_args(GateOp op) {
  switch (op) {
    case GateOp::Not:
    case GateOp::Copy: return 1;
    case GateOp::Concat: return 2;
    default: return 2;
  }
}

size_t gate_max_args(GateOp op) {
  switch (op) {
    case GateOp::Not:
    case GateOp::Copy: return 1;
    case GateOp::Concat: return SIZE_MAX;
    default: return 2;
  }
}

bool gate_needs_binary(GateOp op) {
  return op == GateOp::Xor || op == GateOp::And || op == GateOp::Or ||
         op == GateOp::Not;
}

// Wire alphabets in declaration order, keyed by name.
using AlphabetMap = std::map<std::string, std::vector<std::string>>;

std::vector<std::string> concat_alphabet(
    const std::vector<const std::vector<std::string>*>& parts) {
  std::vector<std::string> labels{""};
  for (const auto* part : parts) {
    std::vector<std::string> next;
    next.reserve(labels.size() * part->size());
    for (const auto& prefix : labels)
      for (const auto& s : *part) next.push_back(prefix + s);
    labels = std::move(next);
  }
  return labels;
}

std::vector<std::string> derive_alphabet(const GateDef& def, const AlphabetMap& known) {
  if (gate_needs_binary(def.op)) return {"0", "1"};
  if (def.op == GateOp::Copy) return known.at(def.args[0]);
  std::vector<const std::vector<std::string>*> parts;
  for (const auto& arg : def.args) parts.push_back(&known.at(arg));
  return concat_alphabet(parts);
}

}  // namespace

CircuitSpec parse_circuit(const std::string& text) {
  CircuitSpec spec;
  AlphabetMap alphabets;
  bool saw_predictors = false;
  bool saw_target = false;
  int predictors_line = 0;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    LineParser p(lex_line(raw, line_no), line_no);
    if (p.at_end()) continue;

    const Token head = p.expect_ident("a declaration");
    if (head.text == "source") {
      const Token name = p.expect_ident("a source name");
      if (alphabets.count(name.text))
        p.fail(name, "name '" + name.text + "' is already declared");
      const Token kind = p.expect_ident("'uniform' or 'dist'");

      SourceDecl src;
      src.name = name.text;
      if (kind.text == "uniform") {
        p.expect_punct("(");
        const Token arity_tok = p.peek();
        const double arity_raw = p.expect_number();
        const int arity = static_cast<int>(arity_raw);
        if (arity_raw != arity || arity < 1)
          p.fail(arity_tok, "alphabet size must be a positive integer");
        p.expect_punct(")");
        src.probs.assign(arity, 1.0 / arity);
      } else if (kind.text == "dist") {
        p.expect_punct("(");
        double sum = 0.0;
        while (true) {
          const Token prob_tok = p.peek();
          const double v = p.expect_number();
          if (v < 0.0) p.fail(prob_tok, "probabilities must be nonnegative");
          src.probs.push_back(v);
          sum += v;
          if (p.peek().kind == Token::Punct && p.peek().text == ",") {
            p.take();
            continue;
          }
          break;
        }
        p.expect_punct(")");
        if (std::abs(sum - 1.0) > 1e-9)
          p.fail(kind, "distribution sums to " + detail::format_g(sum));
      } else {
        p.fail(kind, "expected 'uniform' or 'dist'");
      }

      if (p.peek().kind == Token::Ident && p.peek().text == "labels") {
        const Token labels_tok = p.take();
        p.expect_punct("(");
        while (true) {
          src.labels.push_back(p.expect_label().text);
          if (p.peek().kind == Token::Punct && p.peek().text == ",") {
            p.take();
            continue;
          }
          break;
        }
        p.expect_punct(")");
        if (src.labels.size() != src.probs.size())
          p.fail(labels_tok, "expected " + std::to_string(src.probs.size()) +
                                 " labels, got " + std::to_string(src.labels.size()));
        for (size_t a = 0; a < src.labels.size(); ++a)
          for (size_t b = a + 1; b < src.labels.size(); ++b)
            if (src.labels[a] == src.labels[b])
              p.fail(labels_tok, "label '" + src.labels[a] + "' repeats");
      } else {
        for (size_t k = 0; k < src.probs.size(); ++k)
          src.labels.push_back(std::to_string(k));
      }
      p.expect_line_end();
      alphabets[src.name] = src.labels;
      spec.sources.push_back(std::move(src));
    } else if (head.text == "predictors") {
      p.expect_punct(":");
      if (saw_predictors)
        p.fail(head, "predictors are already declared on line " +
                         std::to_string(predictors_line));
      saw_predictors = true;
      predictors_line = line_no;
      while (!p.at_end()) {
        const Token name = p.expect_ident("a predictor name");
        if (!alphabets.count(name.text))
          p.fail(name, "unknown name '" + name.text + "'");
        for (const auto& seen : spec.predictors)
          if (seen == name.text)
            p.fail(name, "predictor '" + name.text + "' repeats");
        spec.predictors.push_back(name.text);
      }
      if (spec.predictors.empty())
        p.fail(p.peek(), "expected at least one predictor name");
    } else if (head.text == "target") {
      p.expect_punct(":");
      if (saw_target) p.fail(head, "target is already declared");
      saw_target = true;
      const Token name = p.expect_ident("a target name");
      if (!alphabets.count(name.text))
        p.fail(name, "unknown name '" + name.text + "'");
      spec.target = name.text;
      p.expect_line_end();
    } else {
      // A wire definition: <name> := <OP>(<args>)
      if (alphabets.count(head.text))
        p.fail(head, "name '" + head.text + "' is already declared");
      p.expect_punct(":=");
      const Token op_tok = p.expect_ident("an operation");
      const auto op = gate_op(op_tok.text);
      if (!op) p.fail(op_tok, "unknown operation '" + op_tok.text + "'");

      GateDef def;
      def.name = head.text;
      def.op = *op;
      p.expect_punct("(");
      std::vector<Token> arg_tokens;
      while (true) {
        const Token arg = p.expect_ident("an argument name");
        arg_tokens.push_back(arg);
        def.args.push_back(arg.text);
        if (p.peek().kind == Token::Punct && p.peek().text == ",") {
          p.take();
          continue;
        }
        break;
      }
      p.expect_punct(")");
      p.expect_line_end();

      if (def.args.size() < gate_min_args(*op) || def.args.size() > gate_max_args(*op))
        p.fail(op_tok, op_tok.text + " takes " +
                           (gate_min_args(*op) == gate_max_args(*op)
                                ? std::to_string(gate_min_args(*op))
                                : "at least " + std::to_string(gate_min_args(*op))) +
                           " argument(s), got " + std::to_string(def.args.size()));
      for (const auto& arg : arg_tokens) {
        if (arg.text == def.name)
          p.fail(arg, "circular reference: '" + def.name +
                          "' cannot appear in its own definition");
        if (!alphabets.count(arg.text))
          p.fail(arg, "unknown name '" + arg.text + "'");
        if (gate_needs_binary(*op) && alphabets[arg.text].size() != 2)
          p.fail(arg, "argument '" + arg.text + "' of " + op_tok.text +
                          " must be two-valued, it has " +
                          std::to_string(alphabets[arg.text].size()) + " states");
      }

      auto alphabet = derive_alphabet(def, alphabets);
      for (size_t a = 0; a < alphabet.size(); ++a)
        for (size_t b = a + 1; b < alphabet.size(); ++b)
          if (alphabet[a] == alphabet[b])
            p.fail(op_tok, "concatenated labels collide on '" + alphabet[a] + "'");
      alphabets[def.name] = std::move(alphabet);
      spec.definitions.push_back(std::move(def));
    }
  }

  const int eof_line = line_no + 1;
  if (!saw_predictors)
    throw CircuitError(eof_line, 1, "missing 'predictors:' declaration");
  if (!saw_target) throw CircuitError(eof_line, 1, "missing 'target:' declaration");
  for (const auto& name : spec.predictors)
    if (name == spec.target)
      throw CircuitError(eof_line, 1,
                         "target '" + name + "' may not also be a predictor");
  return spec;
}

JointTableD compile_circuit(const CircuitSpec& spec) {
  // Re-derive alphabets; hand-built specs get plain (unlocated) diagnostics.
  AlphabetMap alphabets;
  std::map<std::string, const SourceDecl*> sources;
  for (const auto& src : spec.sources) {
    if (src.labels.size() != src.probs.size() || src.probs.empty())
      throw std::invalid_argument("source '" + src.name + "' is malformed");
    if (alphabets.count(src.name))
      throw std::invalid_argument("name '" + src.name + "' is declared twice");
    alphabets[src.name] = src.labels;
    sources[src.name] = &src;
  }
  for (const auto& def : spec.definitions) {
    if (alphabets.count(def.name))
      throw std::invalid_argument("name '" + def.name + "' is declared twice");
    const size_t lo = gate_min_args(def.op), hi = gate_max_args(def.op);
    if (def.args.size() < lo || def.args.size() > hi)
      throw std::invalid_argument("definition of '" + def.name +
                                  "' has the wrong argument count");
    for (const auto& arg : def.args) {
      if (!alphabets.count(arg))
        throw std::invalid_argument("unknown name '" + arg + "'");
      if (gate_needs_binary(def.op) && alphabets[arg].size() != 2)
        throw std::invalid_argument("argument '" + arg + "' must be two-valued");
    }
    alphabets[def.name] = derive_alphabet(def, alphabets);
  }
  if (spec.predictors.empty()) throw std::invalid_argument("no predictors chosen");
  for (const auto& name : spec.predictors)
    if (!alphabets.count(name))
      throw std::invalid_argument("unknown predictor '" + name + "'");
  if (!alphabets.count(spec.target))
    throw std::invalid_argument("unknown target '" + spec.target + "'");

  Index space = 1;
  for (const auto& src : spec.sources) {
    space *= static_cast<Index>(src.probs.size());
    if (space > kMaxStateSpace)
      throw std::invalid_argument(
          "state space exceeds " + std::to_string(kMaxStateSpace) +
          " joint source states");
  }

  // Output axes: chosen predictors in order, then the target.
  std::vector<VariableAxis> axes;
  for (const auto& name : spec.predictors) axes.push_back({name, alphabets[name]});
  axes.push_back({spec.target, alphabets[spec.target]});
  Index cells = 1;
  for (const auto& ax : axes) cells *= ax.size();
  DenseVector<double> mass = DenseVector<double>::Zero(cells);

  // Odometer over joint source states; wires evaluate to state indices.
  std::vector<Index> counter(spec.sources.size(), 0);
  std::map<std::string, Index> value;
  for (Index step = 0; step < space; ++step) {
    double prob = 1.0;
    for (size_t s = 0; s < spec.sources.size(); ++s) {
      value[spec.sources[s].name] = counter[s];
      prob *= spec.sources[s].probs[counter[s]];
    }
    for (const auto& def : spec.definitions) {
      Index v = 0;
      switch (def.op) {
        case GateOp::Xor: v = value[def.args[0]] ^ value[def.args[1]]; break;
        case GateOp::And: v = value[def.args[0]] & value[def.args[1]]; break;
        case GateOp::Or: v = value[def.args[0]] | value[def.args[1]]; break;
        case GateOp::Not: v = 1 - value[def.args[0]]; break;
        case GateOp::Copy: v = value[def.args[0]]; break;
        case GateOp::Concat:
          for (const auto& arg : def.args)
            v = v * static_cast<Index>(alphabets[arg].size()) + value[arg];
          break;
      }
      value[def.name] = v;
    }
    Index flat = 0;
    for (size_t k = 0; k < spec.predictors.size(); ++k)
      flat = flat * axes[k].size() + value[spec.predictors[k]];
    flat = flat * axes.back().size() + value[spec.target];
    mass[flat] += prob;

    for (Index s = static_cast<Index>(counter.size()) - 1; s >= 0; --s) {
      if (++counter[s] < static_cast<Index>(spec.sources[s].probs.size())) break;
      counter[s] = 0;
    }
  }
  return JointTableD(std::move(axes), std::move(mass));
}

}  // namespace synergy
