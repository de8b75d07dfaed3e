#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tdgen/errors.hpp"
#include "tdgen/fsm.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/trace.hpp"

namespace tdgen {

enum class Scenario { Success, Failure };

inline const char* scenario_name(Scenario s) {
  return s == Scenario::Success ? "success" : "failure";
}

inline Scenario scenario_from_name(const std::string& s) {
  if (s == "success") return Scenario::Success;
  if (s == "failure") return Scenario::Failure;
  fail(Errc::BadConfig, "unknown scenario " + s);
}

enum class BandConstraint { Free, ParityEven, ParityOdd };

struct Band {
  std::string label;
  bool clamp = false;
  std::vector<std::uint8_t> clamp_bits;  // when clamp
  std::size_t random_length = 0;         // when !clamp
  BandConstraint constraint = BandConstraint::Free;

  std::size_t length() const { return clamp ? clamp_bits.size() : random_length; }
};

struct BandPlan {
  std::string task;
  Scenario scenario = Scenario::Success;
  std::vector<Band> bands;

  std::size_t total_length() const {
    std::size_t n = 0;
    for (const Band& b : bands) n += b.length();
    return n;
  }
};

namespace banddetail {

inline Band clamp_band(std::string label, const std::string& bits) {
  Band b;
  b.label = std::move(label);
  b.clamp = true;
  for (char c : bits) b.clamp_bits.push_back(c == '1' ? 1 : 0);
  return b;
}

inline Band random_band(std::string label, std::size_t len, BandConstraint constraint) {
  Band b;
  b.label = std::move(label);
  b.random_length = len;
  b.constraint = constraint;
  return b;
}

}  // namespace banddetail

inline bool is_serial_task(const std::string& task) {
  return task == "serial_parity_stop" || task == "serial_parity_wait";
}

inline bool is_known_task(const std::string& task) {
  return is_serial_task(task) || task == "w_counter";
}

// Clamp/constrained-random layout of the stimulated input. For the
// serial tasks: band a arms the receiver ("110", start bit last), frame 1
// carries even-parity data (b) plus the clamped parity bit (c) so the
// 9-bit parity comes out odd, frame 2 (e, f) inverts that so its parity
// check fails; d and g clamp the stop bits, which is where Success and
// Failure differ. A 2-cycle "10" gap band between the frames re-arms the
// receiver (idle bit, then frame 2's start bit) for every variant.
inline BandPlan build_band_plan(const std::string& task, Scenario scenario,
                                std::size_t tail_length = 4) {
  using banddetail::clamp_band;
  using banddetail::random_band;
  BandPlan plan;
  plan.task = task;
  plan.scenario = scenario;
  if (is_serial_task(task)) {
    const char* stop = scenario == Scenario::Success ? "1" : "0";
    plan.bands.push_back(clamp_band("a", "110"));
    plan.bands.push_back(random_band("b", 8, BandConstraint::ParityEven));
    plan.bands.push_back(clamp_band("c", "1"));
    plan.bands.push_back(clamp_band("d", stop));
    plan.bands.push_back(clamp_band("gap", "10"));
    plan.bands.push_back(random_band("e", 8, BandConstraint::ParityOdd));
    plan.bands.push_back(clamp_band("f", "1"));
    plan.bands.push_back(clamp_band("g", stop));
    plan.bands.push_back(random_band("h", tail_length, BandConstraint::Free));
    return plan;
  }
  if (task == "w_counter") {
    plan.bands.push_back(clamp_band("a", "11"));
    plan.bands.push_back(random_band("b", 6, BandConstraint::Free));
    plan.bands.push_back(clamp_band("c", "00"));
    plan.bands.push_back(random_band("d", 6, BandConstraint::Free));
    plan.bands.push_back(random_band("h", tail_length, BandConstraint::Free));
    return plan;
  }
  fail(Errc::UnknownTask, task);
}

// Clamps verbatim; parity bands uniform over the words of the required
// popcount parity (len-1 free bits, last bit forced — exactly uniform
// over the constrained set).
inline std::vector<std::uint8_t> realize_inputs(const BandPlan& plan, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> bits;
  bits.reserve(plan.total_length());
  for (const Band& b : plan.bands) {
    if (b.clamp) {
      bits.insert(bits.end(), b.clamp_bits.begin(), b.clamp_bits.end());
      continue;
    }
    if (b.constraint != BandConstraint::Free && b.random_length == 0)
      fail(Errc::InfeasibleConstraint, "parity constraint on empty band " + b.label);
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i + 1 < b.random_length || (b.constraint == BandConstraint::Free &&
                                                        i < b.random_length);
         ++i) {
      std::uint8_t v = static_cast<std::uint8_t>(rng.next() & 1);
      bits.push_back(v);
      acc ^= v;
    }
    if (b.constraint == BandConstraint::ParityEven) bits.push_back(acc);  // xor to 0
    if (b.constraint == BandConstraint::ParityOdd) bits.push_back(static_cast<std::uint8_t>(acc ^ 1));
  }
  return bits;
}

struct FrameInfo {
  std::size_t start_cycle = 0;    // cycle carrying the start bit
  std::size_t first_data = 0;     // first S1 cycle
  std::size_t parity_cycle = 0;   // cycle consuming the parity bit
  std::size_t stop_cycle = 0;     // data_cnt==9 evaluation cycle
  std::size_t verdict_cycle = 0;  // cycle where S2/S3 is sampled
  bool accepted = false;
  std::uint64_t out_byte = 0;  // at the evaluation cycle
};

// Everything qa_reasoning needs to know about one generated diagram.
struct GenContext {
  std::string task;
  Scenario scenario = Scenario::Success;
  std::uint64_t seed = 0;
  BandPlan plan;
  std::map<std::string, CycleRange> bands;  // label -> [first, last)
  std::vector<std::uint8_t> input_bits;
  StepTrace trace;
  std::vector<FrameInfo> frames;  // serial tasks only

  int state_at(std::size_t cycle) const { return trace.steps.at(cycle).state; }
  std::uint64_t reg_at(const std::string& name, std::size_t cycle) const {
    return trace.steps.at(cycle).registers.at(name);
  }
};

inline TaskMachine task_machine(const std::string& task) {
  if (task == "serial_parity_stop") return serial_receiver_machine(ReceiverVariant::Stop);
  if (task == "serial_parity_wait") return serial_receiver_machine(ReceiverVariant::Wait);
  if (task == "w_counter") return counter_machine(4);
  fail(Errc::UnknownTask, task);
}

namespace banddetail {

inline std::vector<FrameInfo> extract_frames(const StepTrace& trace) {
  enum { S0, S1, S2, S3 };
  std::vector<FrameInfo> frames;
  const auto& steps = trace.steps;
  for (std::size_t c = 0; c + 1 < steps.size(); ++c) {
    if (steps[c].state != S1 || steps[c].registers.at("data_cnt") != 9) continue;
    FrameInfo f;
    f.stop_cycle = c;
    f.verdict_cycle = c + 1;
    f.accepted = steps[c + 1].state == S2;
    f.out_byte = steps[c].registers.at("out_byte");
    f.parity_cycle = c - 1;
    f.first_data = c - 9;
    f.start_cycle = f.first_data - 1;
    frames.push_back(f);
  }
  return frames;
}

}  // namespace banddetail

// Realize the plan, run the machine, and return the diagram together
// with the context downstream QA generation consumes. Band boundaries
// (and the i..l motif anchors for serial tasks) are stored as diagram
// annotations.
inline std::pair<TimingDiagram, GenContext> generate_td(const std::string& task,
                                                        Scenario scenario, std::uint64_t seed) {
  if (!is_known_task(task)) fail(Errc::UnknownTask, task);
  Rng rng(seed);
  std::size_t tail = static_cast<std::size_t>(rng.range(2, 6));

  GenContext ctx;
  ctx.task = task;
  ctx.scenario = scenario;
  ctx.seed = seed;
  ctx.plan = build_band_plan(task, scenario, tail);
  ctx.input_bits = realize_inputs(ctx.plan, rng.next());

  std::size_t pos = 0;
  for (const Band& b : ctx.plan.bands) {
    ctx.bands[b.label] = {pos, pos + b.length()};
    pos += b.length();
  }

  TaskMachine machine = task_machine(task);
  std::vector<InputMap> schedule;
  schedule.reserve(ctx.input_bits.size());
  for (std::uint8_t bit : ctx.input_bits) {
    InputMap in;
    if (is_serial_task(task)) {
      in["in"] = bit;
    } else {
      in["en"] = bit;
      in["rst"] = 0;
    }
    schedule.push_back(std::move(in));
  }

  auto [trace, td] = simulate(machine, schedule, schedule.size());
  ctx.trace = std::move(trace);

  if (is_serial_task(task)) {
    ctx.frames = banddetail::extract_frames(ctx.trace);
    if (ctx.frames.size() >= 1) {
      ctx.bands["i"] = {ctx.frames[0].verdict_cycle, ctx.frames[0].verdict_cycle + 1};
      ctx.bands["k"] = {ctx.frames[0].stop_cycle, ctx.frames[0].stop_cycle + 1};
    }
    if (ctx.frames.size() >= 2) {
      ctx.bands["j"] = {ctx.frames[1].verdict_cycle, ctx.frames[1].verdict_cycle + 1};
      ctx.bands["l"] = {ctx.frames[1].stop_cycle, ctx.frames[1].stop_cycle + 1};
    }
  }
  td.annotations = ctx.bands;
  return {std::move(td), std::move(ctx)};
}

struct MotifEntry {
  std::string band;
  std::string signal;
  std::vector<std::uint64_t> expected;  // one value per cycle of the band
};

using MotifSpec = std::vector<MotifEntry>;

// The fixed observables every seed must reproduce.
inline MotifSpec motif_spec(const std::string& task, Scenario scenario) {
  if (is_serial_task(task)) {
    bool ok = scenario == Scenario::Success;
    return {
        {"i", "done", {ok ? 1u : 0u}},
        {"i", "err", {ok ? 0u : 1u}},
        {"j", "done", {0}},
        {"j", "err", {1}},  // frame 2's parity check fails in both scenarios
        {"k", "odd", {1}},
        {"l", "odd", {0}},
    };
  }
  if (task == "w_counter") return {{"a", "cnt", {0, 1}}};
  fail(Errc::UnknownTask, task);
}

struct MotifResult {
  bool pass = true;
  std::string first_mismatch;
};

inline MotifResult check_motifs(const TimingDiagram& td, const std::string& task,
                                Scenario scenario) {
  MotifResult result;
  for (const MotifEntry& entry : motif_spec(task, scenario)) {
    auto it = td.annotations.find(entry.band);
    if (it == td.annotations.end())
      fail(Errc::MissingAnnotations, "band " + entry.band + " not annotated");
    auto [first, last] = it->second;
    if (last - first != entry.expected.size())
      fail(Errc::MissingAnnotations, "band " + entry.band + " extent mismatch");
    for (std::size_t i = 0; i < entry.expected.size(); ++i) {
      CycleValue v = value_at_cycle(td, entry.signal, first + i);
      std::uint64_t got = v.is_bit() ? (v.bit == LogicValue::Bit1 ? 1 : 0) : v.word;
      if (!v.defined() || got != entry.expected[i]) {
        result.pass = false;
        result.first_mismatch = "band " + entry.band + ": " + entry.signal + " at cycle " +
                                std::to_string(first + i) + " is " + cycle_value_string(v) +
                                ", expected " + std::to_string(entry.expected[i]);
        return result;
      }
    }
  }
  return result;
}

}  // namespace tdgen
