#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synergy/joint_table.hpp"

namespace synergy {

/// The ten bundled reference distributions.
enum class ExampleId {
  Rdn,
  Unq,
  Xor,
  XorDuplicate,
  XorLoses,
  RdnXor,
  And,
  RdnUnqXor,
  AndDuplicate,
  XorMultiCoal,
};

/// Canonical presentation order of the corpus.
const std::vector<ExampleId>& all_examples();

std::string example_name(ExampleId id);

/// Case-insensitive lookup; empty when the name is unknown.
std::optional<ExampleId> parse_example_id(std::string_view name);

/// Builds the named reference table.  Each table is generated from its gate
/// logic and verified cell-for-cell against a transcribed row list before
/// being returned, so a transcription slip cannot pass silently.
JointTableD build_example(ExampleId id);

}  // namespace synergy
