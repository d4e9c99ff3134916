#pragma once

#include <string>
#include <vector>

#include "sparkle/bench/protocol.hpp"

namespace sparkle::bench {

/// Integer scores in protocol dimension order, each in [1, 5].
struct DimScores {
  std::vector<int> values;
  std::string reasoning;

  friend bool operator==(const DimScores&, const DimScores&) = default;
};

/// The judge prompt with the instruction substituted. Throws ValidationError
/// on an empty instruction.
std::string build_judge_prompt(const Protocol& protocol, const std::string& instruction);

/// Reads "<Dimension>: <int>" lines (case-insensitive, list bullets and
/// emphasis markers ignored) and the "Brief reasoning" line. Throws
/// ValidationError on a missing dimension, a value outside 1..5, or
/// conflicting duplicates.
DimScores parse_judge_response(const std::string& text, const Protocol& protocol);

/// Caps every non-anchor dimension at the anchor's score.
DimScores enforce_caps(DimScores scores, const Protocol& protocol);

}  // namespace sparkle::bench
