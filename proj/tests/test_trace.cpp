#include <doctest.h>

#include "tdgen/randomtd.hpp"
#include "tdgen/trace.hpp"

#include "helpers.hpp"

using namespace tdgen;

namespace {

// Fixture: clk has rising edges at 5, 15, 25, 35; d changes between them.
const char* kSampledVcd = R"($timescale 1ns $end
$var wire 1 ! clk $end
$var wire 1 " d $end
$var reg 4 # v $end
$enddefinitions $end
#0
0!
0"
b0 #
#5
1!
#7
1"
b101 #
#10
0!
#15
1!
#20
0!
0"
#25
1!
b1111 #
#30
0!
#35
1!
)";

}  // namespace

TEST_CASE("trace: post-edge sampling takes the value just after each rising edge") {
  VcdDocument doc = parse_vcd(kSampledVcd);
  TimingDiagram td = sample_to_diagram(doc, "clk");
  REQUIRE(td.num_cycles == 4);
  // d: 0 at edge 5 (changes at 7), 1 at 15, 0 at 25 (changed at 20), 0 at 35
  const SignalTrace& d = td.signal("d");
  CHECK(d.samples[0].bit == LogicValue::Bit0);
  CHECK(d.samples[1].bit == LogicValue::Bit1);
  CHECK(d.samples[2].bit == LogicValue::Bit0);
  CHECK(d.samples[3].bit == LogicValue::Bit0);
  // v: 0, 5, 15, 15
  const SignalTrace& v = td.signal("v");
  CHECK(v.samples[0].word == 0);
  CHECK(v.samples[1].word == 5);
  CHECK(v.samples[2].word == 15);
  CHECK(v.samples[3].word == 15);
  // the clock lane is the all-1 convention
  for (const CycleValue& c : td.signal("clk").samples) CHECK(c.bit == LogicValue::Bit1);
}

TEST_CASE("trace: falling-edge sampling and error cases") {
  VcdDocument doc = parse_vcd(kSampledVcd);
  TimingDiagram td = sample_to_diagram(doc, "clk", ClockEdge::Falling);
  CHECK(td.num_cycles == 3);  // falls at 10, 20, 30
  CHECK_THROWS_AS(sample_to_diagram(doc, "v"), Error);        // not scalar
  CHECK_THROWS_AS(sample_to_diagram(doc, "nothere"), Error);  // unknown signal

  VcdDocument flat = parse_vcd("$timescale 1ns $end\n$var wire 1 ! clk $end\n"
                               "$enddefinitions $end\n#0\n1!\n#10\n");
  CHECK_THROWS_AS(sample_to_diagram(flat, "clk"), Error);  // no 0->1 edge
}

TEST_CASE("trace: counting queries match brute-force scans of the samples") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    TimingDiagram td = random_td(seed);
    for (const SignalTrace& s : td.signals) {
      if (s.width != 1) {
        CHECK_THROWS_AS(count_transitions(td, s.name), Error);
        continue;
      }
      std::size_t trans = 0, rise = 0, fall = 0;
      for (std::size_t i = 1; i < s.samples.size(); ++i) {
        LogicValue a = s.samples[i - 1].bit, b = s.samples[i].bit;
        bool def = (a == LogicValue::Bit0 || a == LogicValue::Bit1) &&
                   (b == LogicValue::Bit0 || b == LogicValue::Bit1);
        if (def && a != b) ++trans;
        if (a == LogicValue::Bit0 && b == LogicValue::Bit1) ++rise;
        if (a == LogicValue::Bit1 && b == LogicValue::Bit0) ++fall;
      }
      CHECK(count_transitions(td, s.name) == trans);
      CHECK(count_rising_edges(td, s.name) == rise);
      CHECK(count_falling_edges(td, s.name) == fall);
    }
  }
}

TEST_CASE("trace: value_at_cycle bounds") {
  TimingDiagram td = random_td(7);
  CHECK_NOTHROW(value_at_cycle(td, td.signals[1].name, 0));
  CHECK_THROWS_AS(value_at_cycle(td, td.signals[1].name, td.num_cycles), Error);
  CHECK_THROWS_AS(value_at_cycle(td, "missing", 0), Error);
}
