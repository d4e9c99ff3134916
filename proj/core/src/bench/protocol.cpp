#include "sparkle/bench/protocol.hpp"

#include "sparkle/error.hpp"

namespace sparkle::bench {

const Protocol& sparkle6() {
  static const Protocol p{"sparkle6",
                          {{"Instruction Compliance", "Ins"},
                           {"Overall Visual Quality", "Vis"},
                           {"Foreground Integrity", "FgIn"},
                           {"Foreground Motion Consistency", "FgMo"},
                           {"Background Dynamics", "BgDy"},
                           {"Background Visual Quality", "BgVi"}},
                          0};
  return p;
}

const Protocol& openve3() {
  static const Protocol p{"openve3",
                          {{"Instruction Compliance", "Ins"},
                           {"Consistency & Detail Fidelity", "Cons"},
                           {"Visual Quality & Stability", "VQ"}},
                          0};
  return p;
}

const Protocol& protocol_by_name(const std::string& name) {
  if (name == "sparkle6") return sparkle6();
  if (name == "openve3") return openve3();
  throw ValidationError("unknown protocol '" + name + "' (expected sparkle6 or openve3)");
}

}  // namespace sparkle::bench
