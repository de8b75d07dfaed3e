#pragma once

// Seeded random diagrams: a clock lane plus a mix of scalar and bus
// lanes, with optional x/z cells. Used for caption generation at scale
// and as the input distribution of the round-trip property tests.

#include <cstdint>
#include <string>
#include <vector>

#include "tdgen/logic.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/trace.hpp"

namespace tdgen {

struct RandomTdOpts {
  std::size_t min_cycles = 8;
  std::size_t max_cycles = 24;
  std::size_t min_signals = 2;   // besides the clock
  std::size_t max_signals = 6;
  bool allow_unknown = true;     // sprinkle x cells
  bool allow_highz = true;       // sprinkle z cells
  double hold_bias = 0.55;       // chance a cycle repeats the previous value
};

inline TimingDiagram random_td(std::uint64_t seed, const RandomTdOpts& opts = {}) {
  Rng rng(seed);
  TimingDiagram td;
  td.clock_name = "clk";
  td.num_cycles = static_cast<std::size_t>(
      rng.range(static_cast<std::uint64_t>(opts.min_cycles),
                static_cast<std::uint64_t>(opts.max_cycles)));

  SignalTrace clock;
  clock.name = "clk";
  clock.width = 1;
  clock.samples.assign(td.num_cycles, CycleValue::make_bit(LogicValue::Bit1));
  td.signals.push_back(std::move(clock));

  std::size_t n = static_cast<std::size_t>(
      rng.range(static_cast<std::uint64_t>(opts.min_signals),
                static_cast<std::uint64_t>(opts.max_signals)));
  const char* scalar_names[] = {"en", "rdy", "req", "ack", "valid", "sel", "we", "irq"};
  const char* bus_names[] = {"data", "addr", "cnt", "out_byte", "sum", "idx"};
  std::size_t scalar_used = 0, bus_used = 0;

  for (std::size_t s = 0; s < n; ++s) {
    SignalTrace lane;
    // always at least one scalar lane, so edge/transition questions stay askable
    bool bus = s != 0 && rng.coin();
    if (bus && bus_used < std::size(bus_names)) {
      lane.name = bus_names[bus_used++];
      lane.width = static_cast<std::size_t>(rng.range(2, 16));
    } else if (scalar_used < std::size(scalar_names)) {
      lane.name = scalar_names[scalar_used++];
      lane.width = 1;
    } else {
      lane.name = "sig" + std::to_string(s);
      lane.width = 1;
    }
    std::uint64_t mask = lane.width >= 64 ? ~std::uint64_t{0}
                                          : ((std::uint64_t{1} << lane.width) - 1);

    CycleValue prev = lane.width == 1 ? CycleValue::make_bit(LogicValue::Bit0)
                                      : CycleValue::make_word(0);
    for (std::size_t c = 0; c < td.num_cycles; ++c) {
      bool hold = c > 0 && rng.below(100) < static_cast<std::uint64_t>(opts.hold_bias * 100);
      if (hold) {
        lane.samples.push_back(prev);
        continue;
      }
      std::uint64_t roll = rng.below(20);
      CycleValue v;
      if (opts.allow_unknown && roll == 0) {
        v = lane.width == 1 ? CycleValue::make_bit(LogicValue::Unknown)
                            : CycleValue::word_unknown();
      } else if (opts.allow_highz && roll == 1) {
        v = lane.width == 1 ? CycleValue::make_bit(LogicValue::HighZ)
                            : CycleValue::word_highz();
      } else if (lane.width == 1) {
        v = CycleValue::make_bit(rng.coin() ? LogicValue::Bit1 : LogicValue::Bit0);
      } else {
        v = CycleValue::make_word(rng.next() & mask);
      }
      lane.samples.push_back(v);
      prev = v;
    }
    td.signals.push_back(std::move(lane));
  }
  return td;
}

}  // namespace tdgen
