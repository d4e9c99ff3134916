#pragma once

#include <string>
#include <vector>

namespace sparkle::bench {

struct Dimension {
  std::string name;    // as written in judge responses
  std::string abbrev;  // table column, e.g. "FgIn"
};

/// Ordered judging dimensions; dimension 0 is the cap anchor
/// (Instruction Compliance) in both protocols.
struct Protocol {
  std::string name;
  std::vector<Dimension> dimensions;
  std::size_t cap_anchor = 0;

  std::size_t size() const { return dimensions.size(); }
  friend bool operator==(const Protocol& a, const Protocol& b) { return a.name == b.name; }
};

/// Six dimensions: Ins, Vis, FgIn, FgMo, BgDy, BgVi.
const Protocol& sparkle6();
/// Three dimensions: Ins, Cons, VQ.
const Protocol& openve3();
/// "sparkle6" / "openve3"; throws ValidationError otherwise.
const Protocol& protocol_by_name(const std::string& name);

}  // namespace sparkle::bench
