#include <doctest.h>

#include "tdgen/randomtd.hpp"
#include "tdgen/svg.hpp"
#include "tdgen/wavejson.hpp"

#include "helpers.hpp"

using namespace tdgen;

namespace {

std::size_t count_substr(const std::string& text, const std::string& needle) {
  std::size_t n = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_CASE("svg: output is well-formed XML with one group per lane") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    TimingDiagram td = random_td(seed);
    std::string svg = render_svg(emit_wavejson(td));
    CHECK(testutil::xml_well_formed(svg));
    CHECK(count_substr(svg, "<g class=\"lane\">") == td.signals.size());
    // every lane is named in a text label
    for (const SignalTrace& s : td.signals) CHECK(svg.find(">" + s.name + "<") != std::string::npos);
  }
}

TEST_CASE("svg: visual features map to sample content") {
  TimingDiagram td;
  td.clock_name = "clk";
  td.num_cycles = 4;
  td.signals.push_back({"clk", 1, std::vector<CycleValue>(4, CycleValue::make_bit(LogicValue::Bit1))});
  td.signals.push_back({"a", 1,
                        {CycleValue::make_bit(LogicValue::Bit0),
                         CycleValue::make_bit(LogicValue::Bit1),
                         CycleValue::make_bit(LogicValue::Unknown),
                         CycleValue::make_bit(LogicValue::HighZ)}});
  td.signals.push_back({"bus", 8,
                        {CycleValue::make_word(0xab), CycleValue::make_word(0xab),
                         CycleValue::make_word(0xcd), CycleValue::word_unknown()}});
  std::string svg = render_svg(emit_wavejson(td));
  CHECK(testutil::xml_well_formed(svg));
  CHECK(count_substr(svg, "url(#hatch)") == 2);           // one x cell per lane with x
  CHECK(count_substr(svg, "class=\"trans\"") == 1);       // single defined 0->1 transition on a
  CHECK(svg.find("0xab") != std::string::npos);           // bus span labels
  CHECK(svg.find("0xcd") != std::string::npos);
  CHECK(count_substr(svg, "0xab") == 1);                  // the repeated value is one span
}

TEST_CASE("svg: names are XML-escaped") {
  WaveDocument doc;
  doc.lanes.push_back({"a<b>&\"q\"", "01", {}, std::nullopt});
  std::string svg = render_svg(doc);
  CHECK(testutil::xml_well_formed(svg));
  CHECK(svg.find("a&lt;b&gt;&amp;&quot;q&quot;") != std::string::npos);
}

TEST_CASE("svg: hscale scales the geometry") {
  TimingDiagram td = random_td(5);
  WaveDocument narrow = emit_wavejson(td), wide = emit_wavejson(td);
  wide.hscale = 2;
  std::string a = render_svg(narrow), b = render_svg(wide);
  CHECK(a != b);
  CHECK(testutil::xml_well_formed(b));
}
