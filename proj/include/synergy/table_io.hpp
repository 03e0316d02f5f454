#pragma once

#include <iosfwd>
#include <string>

#include "synergy/joint_table.hpp"

namespace synergy {

/// Reads a tab-separated distribution.  The header names the predictor
/// columns followed by the literal columns `target` and `p`; each further
/// line gives one state tuple and its probability.  '#' starts a comment,
/// blank lines are skipped, and states enter an axis in order of first
/// appearance; unlisted state tuples carry mass 0.
///
/// With `renormalize`, a total mass within 1e-3 of 1 is rescaled to exactly
/// 1; otherwise the table's own sum tolerance applies.  All problems raise
/// std::invalid_argument with the input line in the message.
JointTableD load_tsv(std::istream& in, bool renormalize = false);
JointTableD load_tsv_file(const std::string& path, bool renormalize = false);

/// Writes the positive-mass cells in table order with round-trippable
/// (17 significant digit) probabilities.
void dump_tsv(const JointTableD& t, std::ostream& out);
std::string dump_tsv(const JointTableD& t);

}  // namespace synergy
