#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "tdgen/wavejson.hpp"

namespace tdgen {

namespace svgdetail {

inline std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Geom {
  double cell;        // per-cycle column width
  double label_w = 100.0;
  double lane_h = 30.0;
  double lane_gap = 10.0;
  double hi_off = 4.0;   // y offset of the high level inside a lane
  double lo_off = 26.0;  // y offset of the low level

  double x(std::size_t cycle) const { return label_w + cell * static_cast<double>(cycle); }
};

}  // namespace svgdetail

// Wavedrom-like SVG rendering. Fidelity target is geometric, not
// pixel-identical to wavedrom-cli: levels, transition strokes, hatched x
// regions, mid-level z, labeled hexagons for buses, square-wave clocks.
inline std::string render_svg(const WaveDocument& doc) {
  using svgdetail::escape_xml;
  svgdetail::Geom g;
  g.cell = 40.0 * static_cast<double>(doc.hscale);

  std::size_t cycles = 0;
  std::vector<std::vector<CycleValue>> decoded;
  decoded.reserve(doc.lanes.size());
  for (const WaveLane& lane : doc.lanes) {
    decoded.push_back(decode_lane(lane));
    cycles = std::max(cycles, decoded.back().size());
  }

  double width = g.label_w + g.cell * static_cast<double>(cycles) + 10.0;
  double height = 30.0 + (g.lane_h + g.lane_gap) * static_cast<double>(doc.lanes.size());

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"monospace\">\n";
  os << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
        "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" "
        "stroke=\"#888\" stroke-width=\"1\"/></pattern></defs>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";

  for (std::size_t li = 0; li < doc.lanes.size(); ++li) {
    const WaveLane& lane = doc.lanes[li];
    const std::vector<CycleValue>& samples = decoded[li];
    double y0 = 20.0 + (g.lane_h + g.lane_gap) * static_cast<double>(li);
    double hi = y0 + g.hi_off, lo = y0 + g.lo_off, mid = (hi + lo) / 2.0;

    os << "<g class=\"lane\">\n";
    os << "<text x=\"4\" y=\"" << mid + 4.0 << "\" font-size=\"12\">" << escape_xml(lane.name)
       << "</text>\n";

    if (lane.is_clock()) {
      bool pos = lane.wave[0] == 'p';
      std::ostringstream path;
      path << "M " << g.x(0) << " " << (pos ? lo : hi);
      for (std::size_t c = 0; c < samples.size(); ++c) {
        double xa = g.x(c), xm = xa + g.cell / 2.0, xb = xa + g.cell;
        double first = pos ? hi : lo, second = pos ? lo : hi;
        path << " L " << xa << " " << first << " L " << xm << " " << first << " L " << xm << " "
             << second << " L " << xb << " " << second;
      }
      os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"black\"/>\n";
      os << "</g>\n";
      continue;
    }

    bool bus = false;
    for (const CycleValue& v : samples)
      if (!v.is_bit()) bus = true;

    if (bus) {
      // spans of equal word values drawn as labeled hexagons
      std::size_t c = 0;
      while (c < samples.size()) {
        std::size_t e = c + 1;
        while (e < samples.size() && samples[e] == samples[c]) ++e;
        double xa = g.x(c), xb = g.x(e);
        const CycleValue& v = samples[c];
        if (v.kind == CycleValue::Kind::WordUnknown) {
          os << "<rect x=\"" << xa << "\" y=\"" << hi << "\" width=\"" << xb - xa
             << "\" height=\"" << lo - hi << "\" fill=\"url(#hatch)\" stroke=\"black\"/>\n";
        } else if (v.kind == CycleValue::Kind::WordHighZ) {
          os << "<line x1=\"" << xa << "\" y1=\"" << mid << "\" x2=\"" << xb << "\" y2=\"" << mid
             << "\" stroke=\"black\"/>\n";
        } else {
          double notch = std::min(5.0, (xb - xa) / 4.0);
          os << "<path d=\"M " << xa << " " << mid << " L " << xa + notch << " " << hi << " L "
             << xb - notch << " " << hi << " L " << xb << " " << mid << " L " << xb - notch << " "
             << lo << " L " << xa + notch << " " << lo << " Z\" fill=\"#e8f0fe\" "
                "stroke=\"black\"/>\n";
          os << "<text x=\"" << (xa + xb) / 2.0 << "\" y=\"" << mid + 4.0
             << "\" font-size=\"11\" text-anchor=\"middle\">" << escape_xml(cycle_value_string(v))
             << "</text>\n";
        }
        c = e;
      }
      os << "</g>\n";
      continue;
    }

    // scalar: horizontal level segments, vertical strokes on transitions
    for (std::size_t c = 0; c < samples.size(); ++c) {
      double xa = g.x(c), xb = xa + g.cell;
      switch (samples[c].bit) {
        case LogicValue::Bit0:
          os << "<line x1=\"" << xa << "\" y1=\"" << lo << "\" x2=\"" << xb << "\" y2=\"" << lo
             << "\" stroke=\"black\"/>\n";
          break;
        case LogicValue::Bit1:
          os << "<line x1=\"" << xa << "\" y1=\"" << hi << "\" x2=\"" << xb << "\" y2=\"" << hi
             << "\" stroke=\"black\"/>\n";
          break;
        case LogicValue::Unknown:
          os << "<rect x=\"" << xa << "\" y=\"" << hi << "\" width=\"" << g.cell
             << "\" height=\"" << lo - hi << "\" fill=\"url(#hatch)\" stroke=\"black\"/>\n";
          break;
        case LogicValue::HighZ:
          os << "<line x1=\"" << xa << "\" y1=\"" << mid << "\" x2=\"" << xb << "\" y2=\"" << mid
             << "\" stroke=\"black\"/>\n";
          break;
      }
      if (c > 0 && samples[c - 1].defined() && samples[c].defined() &&
          samples[c - 1].bit != samples[c].bit) {
        os << "<line class=\"trans\" x1=\"" << xa << "\" y1=\"" << hi << "\" x2=\"" << xa
           << "\" y2=\"" << lo << "\" stroke=\"black\"/>\n";
      }
    }
    os << "</g>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace tdgen
