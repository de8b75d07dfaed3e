#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdgen/errors.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/trace.hpp"

namespace tdgen {

// One wavedrom lane. Alphabet: 0 1 x z = . p n ('.' repeats the previous
// cycle, '=' consumes one data label, p/n only lead a clock lane).
struct WaveLane {
  std::string name;
  std::string wave;
  std::vector<std::string> data;
  std::optional<std::size_t> width;  // extension field, lets buses round-trip exactly

  bool is_clock() const { return !wave.empty() && (wave[0] == 'p' || wave[0] == 'n'); }

  bool operator==(const WaveLane&) const = default;
};

struct WaveDocument {
  std::vector<WaveLane> lanes;
  std::size_t hscale = 1;

  bool operator==(const WaveDocument&) const = default;
};

// ---- emit ----------------------------------------------------------------

inline WaveDocument emit_wavejson(const TimingDiagram& td) {
  WaveDocument doc;
  bool clock_present = td.has_signal(td.clock_name);
  if (!clock_present) {
    WaveLane clk;
    clk.name = td.clock_name;
    clk.wave = "p" + std::string(td.num_cycles > 0 ? td.num_cycles - 1 : 0, '.');
    doc.lanes.push_back(std::move(clk));
  }
  for (const SignalTrace& s : td.signals) {
    WaveLane lane;
    lane.name = s.name;
    if (s.name == td.clock_name) {
      lane.wave = "p" + std::string(td.num_cycles > 0 ? td.num_cycles - 1 : 0, '.');
      doc.lanes.push_back(std::move(lane));
      continue;
    }
    if (s.width > 1) lane.width = s.width;
    const CycleValue* prev = nullptr;
    for (const CycleValue& v : s.samples) {
      if (prev != nullptr && v == *prev) {
        lane.wave.push_back('.');
        continue;
      }
      switch (v.kind) {
        case CycleValue::Kind::Bit:
          lane.wave.push_back(logic_char(v.bit));
          break;
        case CycleValue::Kind::Word:
          lane.wave.push_back('=');
          lane.data.push_back(v.label ? *v.label : hex_string(v.word));
          break;
        case CycleValue::Kind::WordUnknown:
          lane.wave.push_back('x');
          break;
        case CycleValue::Kind::WordHighZ:
          lane.wave.push_back('z');
          break;
      }
      prev = &v;
    }
    doc.lanes.push_back(std::move(lane));
  }
  return doc;
}

// ---- decode --------------------------------------------------------------

namespace detail {

inline bool parse_hex_label(const std::string& s, std::uint64_t& out) {
  if (s.size() < 3 || s[0] != '0' || s[1] != 'x') return false;
  std::uint64_t v = 0;
  for (std::size_t i = 2; i < s.size(); ++i) {
    char c = s[i];
    std::uint64_t d;
    if (c >= '0' && c <= '9') d = static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') d = static_cast<std::uint64_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') d = static_cast<std::uint64_t>(c - 'A' + 10);
    else return false;
    v = (v << 4) | d;
  }
  out = v;
  return true;
}

inline std::size_t min_word_width(std::uint64_t w) {
  std::size_t n = 1;
  while (w >>= 1) ++n;
  return n;
}

}  // namespace detail

// Expand one lane into per-cycle samples. Non-hex data labels become
// labeled words numbered by first appearance within the lane.
inline std::vector<CycleValue> decode_lane(const WaveLane& lane, std::size_t* width_out = nullptr) {
  std::vector<CycleValue> samples;
  std::size_t data_used = 0;
  std::size_t width = 1;
  std::vector<std::string> seen_labels;
  for (std::size_t i = 0; i < lane.wave.size(); ++i) {
    char c = lane.wave[i];
    switch (c) {
      case 'p':
      case 'n':
        if (i != 0) fail(Errc::UnsupportedWaveChar, "clock char inside lane " + lane.name);
        samples.push_back(CycleValue::make_bit(LogicValue::Bit1));
        break;
      case '.':
        if (samples.empty()) fail(Errc::UnsupportedWaveChar, "'.' leads lane " + lane.name);
        samples.push_back(samples.back());
        break;
      case '0':
      case '1':
        samples.push_back(CycleValue::make_bit(c == '1' ? LogicValue::Bit1 : LogicValue::Bit0));
        break;
      case 'x':
        samples.push_back(lane.width && *lane.width > 1 ? CycleValue::word_unknown()
                                                        : CycleValue::make_bit(LogicValue::Unknown));
        break;
      case 'z':
        samples.push_back(lane.width && *lane.width > 1 ? CycleValue::word_highz()
                                                        : CycleValue::make_bit(LogicValue::HighZ));
        break;
      case '=': {
        if (data_used >= lane.data.size())
          fail(Errc::DataCountMismatch, "lane " + lane.name + " has more '=' than data");
        const std::string& label = lane.data[data_used++];
        std::uint64_t w;
        if (detail::parse_hex_label(label, w)) {
          samples.push_back(CycleValue::make_word(w));
          width = std::max(width, detail::min_word_width(w));
        } else {
          std::size_t idx = 0;
          while (idx < seen_labels.size() && seen_labels[idx] != label) ++idx;
          if (idx == seen_labels.size()) seen_labels.push_back(label);
          samples.push_back(CycleValue::make_word(idx, label));
          width = std::max(width, std::size_t{2});
        }
        break;
      }
      default:
        fail(Errc::UnsupportedWaveChar, std::string("'") + c + "' in lane " + lane.name);
    }
  }
  if (data_used != lane.data.size())
    fail(Errc::DataCountMismatch, "lane " + lane.name + " has unused data labels");
  std::size_t effective = lane.width.value_or(width);
  if (effective > 1 && !lane.is_clock()) {
    // a bus lane holds word samples only; promote stray bit cells
    for (CycleValue& v : samples) {
      if (!v.is_bit()) continue;
      switch (v.bit) {
        case LogicValue::Bit0: v = CycleValue::make_word(0); break;
        case LogicValue::Bit1: v = CycleValue::make_word(1); break;
        case LogicValue::Unknown: v = CycleValue::word_unknown(); break;
        case LogicValue::HighZ: v = CycleValue::word_highz(); break;
      }
    }
  }
  if (width_out != nullptr) *width_out = effective;
  return samples;
}

inline TimingDiagram decode_wave(const WaveDocument& doc) {
  TimingDiagram td;
  td.clock_name = "clk";  // implicit unless a clock lane names one
  bool saw_clock = false;
  std::size_t cycles = 0;
  bool first = true;
  for (const WaveLane& lane : doc.lanes) {
    std::size_t width = 1;
    SignalTrace tr;
    tr.samples = decode_lane(lane, &width);
    tr.name = lane.name;
    tr.width = lane.is_clock() ? 1 : width;
    if (lane.is_clock() && !saw_clock) {
      td.clock_name = lane.name;
      saw_clock = true;
    }
    if (first) {
      cycles = tr.samples.size();
      first = false;
    } else if (tr.samples.size() != cycles) {
      fail(Errc::RaggedLanes, "lane " + lane.name + " decodes to a different cycle count");
    }
    td.signals.push_back(std::move(tr));
  }
  td.num_cycles = cycles;
  return td;
}

// ---- JSON ----------------------------------------------------------------

inline nlohmann::json wave_to_json(const WaveDocument& doc) {
  nlohmann::json sig = nlohmann::json::array();
  for (const WaveLane& lane : doc.lanes) {
    nlohmann::json j{{"name", lane.name}, {"wave", lane.wave}};
    if (!lane.data.empty()) j["data"] = lane.data;
    if (lane.width) j["width"] = *lane.width;
    sig.push_back(std::move(j));
  }
  return nlohmann::json{{"signal", std::move(sig)}, {"config", {{"hscale", doc.hscale}}}};
}

inline WaveDocument wave_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("signal") || !j["signal"].is_array())
    fail(Errc::ParseFailure, "WaveJSON object must contain a \"signal\" array");
  WaveDocument doc;
  if (j.contains("config") && j["config"].contains("hscale"))
    doc.hscale = j["config"]["hscale"].get<std::size_t>();
  for (const nlohmann::json& s : j["signal"]) {
    WaveLane lane;
    lane.name = s.value("name", "");
    lane.wave = s.value("wave", "");
    if (s.contains("data")) {
      if (s["data"].is_string())
        lane.data.push_back(s["data"].get<std::string>());
      else
        for (const nlohmann::json& d : s["data"]) lane.data.push_back(d.get<std::string>());
    }
    if (s.contains("width")) lane.width = s["width"].get<std::size_t>();
    doc.lanes.push_back(std::move(lane));
  }
  return doc;
}

inline TimingDiagram parse_wavejson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseFailure, e.what());
  }
  return decode_wave(wave_from_json(j));
}

// ---- presentation randomization -----------------------------------------

struct RandomizeOpts {
  bool permute_lanes = false;
  std::size_t max_pad = 0;  // idle cycles appended, uniform in [0, max_pad]
  bool flip_case = false;
};

// Shuffle non-clock lane order, pad trailing idle cycles, flip name case.
// Per-signal value sequences (up to the pad) are untouched.
inline WaveDocument randomize_presentation(const WaveDocument& doc, std::uint64_t seed,
                                           const RandomizeOpts& opts) {
  WaveDocument out = doc;
  Rng rng(seed);
  if (opts.permute_lanes) {
    std::vector<WaveLane> clocks, rest;
    for (WaveLane& lane : out.lanes)
      (lane.is_clock() ? clocks : rest).push_back(std::move(lane));
    rng.shuffle(rest);
    out.lanes = std::move(clocks);
    out.lanes.insert(out.lanes.end(), rest.begin(), rest.end());
  }
  if (opts.max_pad > 0) {
    std::size_t pad = static_cast<std::size_t>(rng.below(opts.max_pad + 1));
    for (WaveLane& lane : out.lanes)
      if (!lane.wave.empty()) lane.wave.append(pad, '.');
  }
  if (opts.flip_case) {
    for (WaveLane& lane : out.lanes) {
      if (!rng.coin()) continue;
      bool upper = rng.coin();
      for (char& c : lane.name)
        c = static_cast<char>(upper ? std::toupper(static_cast<unsigned char>(c))
                                    : std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

}  // namespace tdgen
