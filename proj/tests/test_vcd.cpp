#include <doctest.h>

#include "tdgen/vcd.hpp"

#include "helpers.hpp"

using namespace tdgen;

namespace {

const char* kMinimalVcd = R"($timescale 1ns $end
$scope module top $end
$var wire 1 ! clk $end
$var wire 1 " rst $end
$var reg 8 # data $end
$upscope $end
$enddefinitions $end
#0
$dumpvars
0!
1"
b00000000 #
$end
#5
1!
0"
b1010 #
#10
0!
#15
1!
bzzzzzzzz #
#20
0!
bx #
#25
1!
)";

}  // namespace

TEST_CASE("vcd: minimal fixture parses with flattened scopes") {
  VcdDocument doc = parse_vcd(kMinimalVcd);
  REQUIRE(doc.declarations.size() == 3);
  CHECK(doc.timescale_magnitude == 1);
  CHECK(doc.timescale_unit == "ns");
  CHECK(doc.declarations[0].reference_name == "top.clk");
  CHECK(doc.declarations[2].reference_name == "top.data");
  CHECK(doc.declarations[2].width == 8);
  CHECK(doc.end_time == 25);
}

TEST_CASE("vcd: vector changes left-extend per the x/z rules") {
  VcdDocument doc = parse_vcd(kMinimalVcd);
  std::size_t data = doc.var_index("#");
  // b1010 on an 8-bit var pads with zeros
  CHECK(value_at_time(doc, data, 5).word == 0b1010);
  // bzzzzzzzz is all-z
  CHECK(value_at_time(doc, data, 15).kind == CycleValue::Kind::WordHighZ);
  // bx extends x across the whole width
  CHECK(value_at_time(doc, data, 20).kind == CycleValue::Kind::WordUnknown);
}

TEST_CASE("vcd: value before any event is unknown") {
  VcdDocument doc = parse_vcd("$timescale 1ns $end\n$var wire 1 ! a $end\n"
                              "$enddefinitions $end\n#4\n1!\n");
  CHECK(value_at_time(doc, std::size_t{0}, 3).bit == LogicValue::Unknown);
  CHECK(value_at_time(doc, std::size_t{0}, 4).bit == LogicValue::Bit1);
  CHECK(value_at_time(doc, std::size_t{0}, 1000).bit == LogicValue::Bit1);
}

TEST_CASE("vcd: malformed inputs error with specific codes") {
  auto code_of = [](const std::string& text) {
    try {
      parse_vcd(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::BadConfig;  // sentinel: no error raised
  };
  CHECK(code_of("$var wire 1 ! a $end\n") == Errc::MalformedHeader);  // no $enddefinitions
  CHECK(code_of("$enddefinitions $end\n#0\n1!\n") == Errc::UnknownVarId);
  CHECK(code_of("$var tri 1 ! a $end\n$enddefinitions $end\n") == Errc::MalformedHeader);
  CHECK(code_of("$var wire 1 ! a $end\n$var wire 1 ! b $end\n$enddefinitions $end\n") ==
        Errc::MalformedHeader);  // duplicate id
  CHECK(code_of("$var wire 4 ! a $end\n$enddefinitions $end\n#0\n1!\n") == Errc::WidthMismatch);
  CHECK(code_of("$var wire 1 ! a $end\n$enddefinitions $end\n#5\n1!\n#3\n0!\n") ==
        Errc::ParseFailure);  // decreasing timestamps
}

TEST_CASE("vcd: serialize/parse round-trip on random documents") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    VcdDocument doc = testutil::make_random_vcd(seed);
    VcdDocument back = parse_vcd(serialize_vcd(doc));
    REQUIRE(back.declarations.size() == doc.declarations.size());
    for (std::size_t i = 0; i < doc.declarations.size(); ++i) {
      CHECK(back.declarations[i].id_code == doc.declarations[i].id_code);
      CHECK(back.declarations[i].reference_name == doc.declarations[i].reference_name);
      CHECK(back.declarations[i].width == doc.declarations[i].width);
      CHECK(back.declarations[i].kind == doc.declarations[i].kind);
    }
    REQUIRE(back.events.size() == doc.events.size());
    for (std::size_t i = 0; i < doc.events.size(); ++i) {
      CHECK(back.events[i].time == doc.events[i].time);
      CHECK(back.events[i].var == doc.events[i].var);
      CHECK(back.events[i].value == doc.events[i].value);
    }
    CHECK(back.end_time == doc.end_time);
  }
}

TEST_CASE("vcd: value_at_time agrees with the linear-scan oracle") {
  Rng rng(0xabcdef);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    VcdDocument doc = testutil::make_random_vcd(seed);
    for (int q = 0; q < 50; ++q) {
      std::size_t var = static_cast<std::size_t>(rng.below(doc.declarations.size()));
      std::uint64_t t = rng.below(doc.end_time + 10);
      CHECK(value_at_time(doc, var, t) == testutil::value_at_time_naive(doc, var, t));
    }
  }
}
