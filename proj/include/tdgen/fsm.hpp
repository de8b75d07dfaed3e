#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tdgen/errors.hpp"
#include "tdgen/trace.hpp"

namespace tdgen {

using RegFile = std::map<std::string, std::uint64_t>;
using InputMap = std::map<std::string, std::uint64_t>;

struct RegisterSpec {
  std::string name;
  std::size_t width = 1;
  std::uint64_t reset = 0;
};

struct OutputSpec {
  std::string name;
  std::size_t width = 1;
};

// Synchronous Moore FSM plus datapath. `next` is the combinational
// next-state/next-register function of the sampled state and the
// current-cycle inputs; the result is what the following edge samples.
struct TaskMachine {
  std::string name;
  std::vector<std::string> state_names;
  int initial_state = 0;
  std::vector<RegisterSpec> registers;
  std::vector<std::string> inputs;
  std::vector<OutputSpec> moore_output_specs;
  std::vector<OutputSpec> comb_output_specs;

  std::function<std::pair<int, RegFile>(int state, const RegFile&, const InputMap&)> next;
  std::function<RegFile(int state)> moore_outputs;
  std::function<RegFile(int state, const RegFile&, const InputMap&)> comb_outputs;  // optional

  RegFile reset_registers() const {
    RegFile r;
    for (const RegisterSpec& rs : registers) r[rs.name] = rs.reset;
    return r;
  }

  std::size_t state_width() const {
    std::size_t n = state_names.size() <= 1 ? 1 : state_names.size() - 1;
    std::size_t w = 1;
    while (n >>= 1) ++w;
    return std::max<std::size_t>(w, 2);  // rendered as a labeled bus lane
  }
};

struct StepRecord {
  int state = 0;      // sampled at this cycle's edge
  RegFile registers;  // sampled values
  InputMap inputs;    // current-cycle inputs
  RegFile outputs;    // moore + combinational outputs this cycle
};

struct StepTrace {
  std::vector<StepRecord> steps;

  std::size_t cycles() const { return steps.size(); }
};

// Run `machine` for `cycles` cycles. The returned diagram has lanes for
// clk, every input, the state (labeled bus), every register, and every
// output, in that order.
inline std::pair<StepTrace, TimingDiagram> simulate(
    const TaskMachine& machine, const std::vector<InputMap>& input_schedule, std::size_t cycles) {
  if (input_schedule.size() < cycles)
    fail(Errc::IncompleteSchedule, "schedule covers " + std::to_string(input_schedule.size()) +
                                       " of " + std::to_string(cycles) + " cycles");
  StepTrace trace;
  trace.steps.reserve(cycles);

  int state = machine.initial_state;
  RegFile regs = machine.reset_registers();
  for (std::size_t c = 0; c < cycles; ++c) {
    const InputMap& in = input_schedule[c];
    for (const std::string& name : machine.inputs)
      if (!in.contains(name))
        fail(Errc::IncompleteSchedule, "cycle " + std::to_string(c) + " misses input " + name);

    StepRecord rec;
    rec.state = state;
    rec.registers = regs;
    rec.inputs = in;
    rec.outputs = machine.moore_outputs ? machine.moore_outputs(state) : RegFile{};
    if (machine.comb_outputs)
      for (auto& [k, v] : machine.comb_outputs(state, regs, in)) rec.outputs[k] = v;
    trace.steps.push_back(rec);

    auto [ns, nr] = machine.next(state, regs, in);
    state = ns;
    regs = std::move(nr);
  }

  TimingDiagram td;
  td.clock_name = "clk";
  td.num_cycles = cycles;

  SignalTrace clk{"clk", 1, std::vector<CycleValue>(cycles, CycleValue::make_bit(LogicValue::Bit1))};
  td.signals.push_back(std::move(clk));

  auto bit_of = [](std::uint64_t v) {
    return CycleValue::make_bit(v ? LogicValue::Bit1 : LogicValue::Bit0);
  };

  for (const std::string& name : machine.inputs) {
    SignalTrace tr{name, 1, {}};
    for (const StepRecord& r : trace.steps) tr.samples.push_back(bit_of(r.inputs.at(name)));
    td.signals.push_back(std::move(tr));
  }
  {
    SignalTrace tr{"state", machine.state_width(), {}};
    for (const StepRecord& r : trace.steps)
      tr.samples.push_back(CycleValue::make_word(
          static_cast<std::uint64_t>(r.state),
          machine.state_names[static_cast<std::size_t>(r.state)]));
    td.signals.push_back(std::move(tr));
  }
  for (const RegisterSpec& rs : machine.registers) {
    SignalTrace tr{rs.name, rs.width, {}};
    for (const StepRecord& r : trace.steps) {
      std::uint64_t v = r.registers.at(rs.name);
      tr.samples.push_back(rs.width == 1 ? bit_of(v) : CycleValue::make_word(v));
    }
    td.signals.push_back(std::move(tr));
  }
  auto emit_outputs = [&](const std::vector<OutputSpec>& specs) {
    for (const OutputSpec& os : specs) {
      SignalTrace tr{os.name, os.width, {}};
      for (const StepRecord& r : trace.steps) {
        std::uint64_t v = r.outputs.at(os.name);
        tr.samples.push_back(os.width == 1 ? bit_of(v) : CycleValue::make_word(v));
      }
      td.signals.push_back(std::move(tr));
    }
  };
  emit_outputs(machine.moore_output_specs);
  emit_outputs(machine.comb_output_specs);

  return {std::move(trace), std::move(td)};
}

enum class ReceiverVariant { Stop, Wait };

// Serial receiver: frames of 8 data bits, a parity bit and a stop bit
// arrive on `in` after a start bit (0) seen from idle. A frame is
// accepted when the 9 data+parity bits have odd parity and the stop bit
// is 1. S0 idle, S1 receiving, S2 success (done), S3 failure (err).
// The Wait variant holds S3 until the line is 1 again; Stop re-arms
// immediately. Data bits enter out_byte LSB-first; odd tracks the
// running XOR of received bits.
inline TaskMachine serial_receiver_machine(ReceiverVariant variant = ReceiverVariant::Stop) {
  enum { S0, S1, S2, S3 };
  TaskMachine m;
  m.name = variant == ReceiverVariant::Stop ? "serial_parity_stop" : "serial_parity_wait";
  m.state_names = {"S0", "S1", "S2", "S3"};
  m.initial_state = S0;
  m.registers = {{"data_cnt", 4, 0}, {"out_byte", 8, 0}, {"odd", 1, 0}};
  m.inputs = {"in"};
  m.moore_output_specs = {{"done", 1}, {"err", 1}};

  m.moore_outputs = [](int state) {
    return RegFile{{"done", state == S2 ? 1u : 0u}, {"err", state == S3 ? 1u : 0u}};
  };

  m.next = [variant](int state, const RegFile& regs, const InputMap& in_map)
      -> std::pair<int, RegFile> {
    std::uint64_t in = in_map.at("in");
    RegFile r = regs;
    auto reset = [&r] { r["data_cnt"] = 0; r["out_byte"] = 0; r["odd"] = 0; };
    switch (state) {
      case S0:
        reset();
        return {in == 0 ? S1 : S0, r};
      case S1: {
        std::uint64_t cnt = regs.at("data_cnt");
        if (cnt < 9) {
          if (cnt < 8) r["out_byte"] = regs.at("out_byte") | (in << cnt);
          r["odd"] = regs.at("odd") ^ in;
          r["data_cnt"] = cnt + 1;
          return {S1, r};
        }
        // data_cnt == 9: the stop bit is on the line, decide the frame
        bool accept = regs.at("odd") == 1 && in == 1;
        return {accept ? S2 : S3, r};
      }
      case S2:
        reset();
        return {in == 0 ? S1 : S0, r};
      case S3:
        reset();
        if (variant == ReceiverVariant::Stop) return {S0, r};
        return {in == 1 ? S0 : S3, r};
    }
    fail(Errc::BadMachineDefinition, "unknown state");
  };
  return m;
}

// Free-running counter: cnt increments mod 2^width while the enable
// input is high, holds otherwise; rst clears synchronously.
inline TaskMachine counter_machine(std::size_t width, const std::string& enable_input = "en") {
  if (width < 1) fail(Errc::BadMachineDefinition, "counter width must be >= 1");
  TaskMachine m;
  m.name = "w_counter";
  m.state_names = {"RUN"};
  m.initial_state = 0;
  m.registers = {{"cnt", width, 0}};
  m.inputs = {enable_input, "rst"};
  m.moore_outputs = [](int) { return RegFile{}; };
  std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
  m.next = [mask, enable_input](int state, const RegFile& regs, const InputMap& in)
      -> std::pair<int, RegFile> {
    RegFile r = regs;
    if (in.at("rst"))
      r["cnt"] = 0;
    else if (in.at(enable_input))
      r["cnt"] = (regs.at("cnt") + 1) & mask;
    return {state, r};
  };
  return m;
}

}  // namespace tdgen
