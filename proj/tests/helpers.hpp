#pragma once

// Shared test utilities: random VCD documents, deliberately naive
// reference oracles, and a small XML well-formedness walker. The oracles
// use different algorithms than the library so agreement is meaningful.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tdgen/logic.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/trace.hpp"
#include "tdgen/vcd.hpp"

namespace testutil {

// Random but well-formed VCD: a toggling clock plus a handful of scalar
// and vector vars with events aligned to random times.
inline tdgen::VcdDocument make_random_vcd(std::uint64_t seed) {
  tdgen::Rng rng(seed);
  tdgen::VcdDocument doc;

  std::size_t n_vars = static_cast<std::size_t>(rng.range(2, 5));
  doc.declarations.push_back({"!", "clk", 1, "wire"});
  for (std::size_t i = 0; i < n_vars; ++i) {
    tdgen::VarDecl v;
    v.id_code = "v" + std::to_string(i);
    v.reference_name = "sig" + std::to_string(i);
    v.width = rng.coin() ? 1 : static_cast<std::size_t>(rng.range(2, 12));
    v.kind = rng.coin() ? "wire" : "reg";
    doc.declarations.push_back(std::move(v));
  }

  std::uint64_t half_period = 5;
  std::size_t n_edges = static_cast<std::size_t>(rng.range(4, 20));
  std::uint64_t t_end = 2 * half_period * n_edges;

  std::vector<tdgen::VcdEvent> events;
  // clock: 0 at t=0, rising at odd multiples of half_period
  for (std::uint64_t t = 0, v = 0; t <= t_end; t += half_period, v ^= 1)
    events.push_back({t, 0, {v ? tdgen::LogicValue::Bit1 : tdgen::LogicValue::Bit0}});

  for (std::size_t vi = 1; vi < doc.declarations.size(); ++vi) {
    std::size_t width = doc.declarations[vi].width;
    std::uint64_t t = 0;
    while (t <= t_end) {
      tdgen::LogicVector bits;
      for (std::size_t b = 0; b < width; ++b) {
        std::uint64_t roll = rng.below(10);
        if (roll == 0)
          bits.push_back(tdgen::LogicValue::Unknown);
        else if (roll == 1)
          bits.push_back(tdgen::LogicValue::HighZ);
        else
          bits.push_back(rng.coin() ? tdgen::LogicValue::Bit1 : tdgen::LogicValue::Bit0);
      }
      events.push_back({t, vi, std::move(bits)});
      t += rng.range(1, 3 * half_period);
    }
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const tdgen::VcdEvent& a, const tdgen::VcdEvent& b) {
                     return a.time < b.time;
                   });
  doc.events = std::move(events);
  doc.end_time = t_end;
  return doc;
}

// Forward linear scan, the textbook definition of "most recent value".
inline tdgen::CycleValue value_at_time_naive(const tdgen::VcdDocument& doc, std::size_t var,
                                             std::uint64_t t) {
  const tdgen::LogicVector* last = nullptr;
  for (const tdgen::VcdEvent& e : doc.events) {
    if (e.time > t) break;
    if (e.var == var) last = &e.value;
  }
  if (last == nullptr)
    return doc.declarations[var].width == 1
               ? tdgen::CycleValue::make_bit(tdgen::LogicValue::Unknown)
               : tdgen::CycleValue::word_unknown();
  return tdgen::CycleValue::from_bits(*last);
}

// Minimal XML well-formedness walk: balanced tags, quoted attributes,
// no stray '<' or '&'.
inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  auto skip_until = [&](const std::string& end) {
    std::size_t p = text.find(end, i);
    if (p == std::string::npos) return false;
    i = p + end.size();
    return true;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '<') {
      if (text.compare(i, 2, "<?") == 0) {
        if (!skip_until("?>")) return false;
        continue;
      }
      if (text.compare(i, 4, "<!--") == 0) {
        if (!skip_until("-->")) return false;
        continue;
      }
      std::size_t close = text.find('>', i);
      if (close == std::string::npos) return false;
      std::string tag = text.substr(i + 1, close - i - 1);
      // quotes must pair up inside the tag
      std::size_t quotes = 0;
      for (char tc : tag)
        if (tc == '"') ++quotes;
      if (quotes % 2 != 0) return false;
      if (!tag.empty() && tag[0] == '/') {
        std::string name = tag.substr(1);
        if (stack.empty() || stack.back() != name) return false;
        stack.pop_back();
      } else if (!tag.empty() && tag.back() == '/') {
        // self-closing
      } else {
        std::size_t sp = tag.find_first_of(" \t\n");
        stack.push_back(sp == std::string::npos ? tag : tag.substr(0, sp));
      }
      i = close + 1;
    } else if (c == '&') {
      std::size_t semi = text.find(';', i);
      if (semi == std::string::npos || semi - i > 6) return false;
      i = semi + 1;
    } else if (c == '>') {
      return false;
    } else {
      ++i;
    }
  }
  return stack.empty();
}

}  // namespace testutil
