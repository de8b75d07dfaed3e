#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tdgen/errors.hpp"
#include "tdgen/logic.hpp"
#include "tdgen/vcd.hpp"

namespace tdgen {

struct SignalTrace {
  std::string name;
  std::size_t width = 1;
  std::vector<CycleValue> samples;  // one per cycle
};

using CycleRange = std::pair<std::size_t, std::size_t>;  // [first, last) 0-indexed

// Cycle-sampled multi-signal trace; the hub representation. Cycles are
// 0-indexed here; question text converts to the 1-indexed phrasing.
// By convention the clock lane's samples are all Bit1 (each cycle is one
// sampling edge of that clock).
struct TimingDiagram {
  std::vector<SignalTrace> signals;
  std::string clock_name;
  std::size_t num_cycles = 0;
  std::map<std::string, CycleRange> annotations;  // band label -> cycle range

  const SignalTrace& signal(const std::string& name) const {
    for (const SignalTrace& s : signals)
      if (s.name == name) return s;
    fail(Errc::UnknownSignal, name);
  }

  bool has_signal(const std::string& name) const {
    for (const SignalTrace& s : signals)
      if (s.name == name) return true;
    return false;
  }

  bool operator==(const TimingDiagram& o) const {
    if (clock_name != o.clock_name || num_cycles != o.num_cycles ||
        signals.size() != o.signals.size())
      return false;
    for (std::size_t i = 0; i < signals.size(); ++i) {
      if (signals[i].name != o.signals[i].name || signals[i].width != o.signals[i].width ||
          signals[i].samples != o.signals[i].samples)
        return false;
    }
    return true;
  }
};

enum class ClockEdge { Rising, Falling };

// Sample every declared signal just after each requested clock edge.
// Cycle n = value after the n-th edge; the clock itself is included as a
// constant-1 lane (see TimingDiagram convention).
inline TimingDiagram sample_to_diagram(const VcdDocument& doc, const std::string& clock,
                                       ClockEdge edge = ClockEdge::Rising) {
  std::size_t clk_idx = doc.var_index_by_name(clock);
  if (doc.declarations[clk_idx].width != 1) fail(Errc::NotScalar, clock + " is not a scalar clock");

  std::vector<std::uint64_t> edge_times;
  LogicValue prev = LogicValue::Unknown;
  for (const VcdEvent& e : doc.events) {
    if (e.var != clk_idx) continue;
    LogicValue cur = e.value[0];
    if (edge == ClockEdge::Rising && prev == LogicValue::Bit0 && cur == LogicValue::Bit1)
      edge_times.push_back(e.time);
    if (edge == ClockEdge::Falling && prev == LogicValue::Bit1 && cur == LogicValue::Bit0)
      edge_times.push_back(e.time);
    prev = cur;
  }
  if (edge_times.empty()) fail(Errc::NoClockEdges, "no " +
                               std::string(edge == ClockEdge::Rising ? "rising" : "falling") +
                               " edges on " + clock);

  TimingDiagram td;
  td.clock_name = doc.declarations[clk_idx].reference_name;
  td.num_cycles = edge_times.size();
  for (std::size_t vi = 0; vi < doc.declarations.size(); ++vi) {
    SignalTrace tr;
    tr.name = doc.declarations[vi].reference_name;
    tr.width = doc.declarations[vi].width;
    tr.samples.reserve(edge_times.size());
    for (std::uint64_t t : edge_times) {
      if (vi == clk_idx)
        tr.samples.push_back(CycleValue::make_bit(LogicValue::Bit1));
      else
        tr.samples.push_back(value_at_time(doc, vi, t + 1));  // post-edge sample
    }
    td.signals.push_back(std::move(tr));
  }
  return td;
}

inline CycleValue value_at_cycle(const TimingDiagram& td, const std::string& name,
                                 std::size_t cycle) {
  const SignalTrace& s = td.signal(name);
  if (cycle >= s.samples.size()) fail(Errc::IndexOutOfRange, "cycle out of range");
  return s.samples[cycle];
}

inline std::vector<CycleValue> value_sequence(const TimingDiagram& td, const std::string& name) {
  return td.signal(name).samples;
}

namespace detail {
inline const SignalTrace& scalar_signal(const TimingDiagram& td, const std::string& name) {
  const SignalTrace& s = td.signal(name);
  if (s.width != 1) fail(Errc::NotScalar, name);
  return s;
}
}  // namespace detail

// Adjacent sample pairs with differing defined values. Pairs touching
// Unknown/HighZ never count, so every question has an unambiguous answer.
inline std::size_t count_transitions(const TimingDiagram& td, const std::string& name) {
  const SignalTrace& s = detail::scalar_signal(td, name);
  std::size_t n = 0;
  for (std::size_t i = 1; i < s.samples.size(); ++i) {
    const CycleValue& a = s.samples[i - 1];
    const CycleValue& b = s.samples[i];
    if (a.defined() && b.defined() && a.bit != b.bit) ++n;
  }
  return n;
}

inline std::size_t count_rising_edges(const TimingDiagram& td, const std::string& name) {
  const SignalTrace& s = detail::scalar_signal(td, name);
  std::size_t n = 0;
  for (std::size_t i = 1; i < s.samples.size(); ++i)
    if (s.samples[i - 1].bit == LogicValue::Bit0 && s.samples[i].bit == LogicValue::Bit1) ++n;
  return n;
}

inline std::size_t count_falling_edges(const TimingDiagram& td, const std::string& name) {
  const SignalTrace& s = detail::scalar_signal(td, name);
  std::size_t n = 0;
  for (std::size_t i = 1; i < s.samples.size(); ++i)
    if (s.samples[i - 1].bit == LogicValue::Bit1 && s.samples[i].bit == LogicValue::Bit0) ++n;
  return n;
}

}  // namespace tdgen
