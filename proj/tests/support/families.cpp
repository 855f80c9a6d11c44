#include "families.hpp"

#include <fmt/format.h>

namespace fam {

// n is arbitrary, so the loop copies x into z and z into y for any number
// of rounds. Intervals widen every variable to the full range; the single
// descending step then bounds z (by the guard on x) but not y, which only
// learns z's bound one step later. Assuming z's bound at the head fixes y.
std::vector<SpeedupMember> speedup_family() {
  std::vector<SpeedupMember> out;
  for (unsigned bits : {6u, 7u, 8u}) {
    for (unsigned start : {0u, 1u, 2u, 3u}) {
      const unsigned bound = (1u << bits) - 2;
      SpeedupMember m;
      m.id = fmt::format("chain_w{}_s{}", bits, start);
      m.bits = bits;
      m.source = fmt::format(
          "int x = {};\nint n;\nint z;\nint y;\n"
          "n = nondet();\n"
          "@H: while (x < n) {{\n  y = z;\n  z = x;\n  x = x + 1;\n}}\n"
          "@E: skip;\n",
          start);
      m.target_pred = fmt::format("y <= {}", bound);
      m.target_label = "E";
      m.candidate_pred = fmt::format("z <= {}", bound);
      m.candidate_label = "H";
      out.push_back(std::move(m));
    }
  }
  return out;
}

RaceFixture race_fixture() {
  RaceFixture f{speedup_family()[8], {}};  // 8 bits, start 0
  f.candidates = {"x <= 255@H", "n >= 0@H",   "true@H",     "y <= 255@E",
                  "x >= 0@E",   "z <= 254@H", "z >= 0@H",   "n <= 255@E"};
  return f;
}

}  // namespace fam
