#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tdgen/bands.hpp"
#include "tdgen/errors.hpp"
#include "tdgen/qa.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/trace.hpp"

namespace tdgen {

// One reasoning-question type. Answers are built from the step trace so
// every factual clause they make can be re-verified independently.
struct ReasoningTemplate {
  std::string id;
  std::string task;
  QaCategory category = QaCategory::FSM;
  std::vector<Scenario> applicable;  // empty = any scenario
  std::string inspiration;           // which worked example or family this follows
  std::function<QaPair(const GenContext&, const TimingDiagram&)> build;
};

namespace rdetail {

inline std::string nth(std::size_t cycle0) {  // 0-indexed cycle -> ordinal text
  std::size_t n = cycle0 + 1;
  const char* suffix = "th";
  if (n % 100 < 11 || n % 100 > 13) {
    if (n % 10 == 1) suffix = "st";
    else if (n % 10 == 2) suffix = "nd";
    else if (n % 10 == 3) suffix = "rd";
  }
  return std::to_string(n) + suffix;
}

inline std::string cyc(std::size_t cycle0) { return std::to_string(cycle0 + 1); }

inline std::string state_name(const GenContext& ctx, std::size_t cycle) {
  return task_machine(ctx.task).state_names.at(static_cast<std::size_t>(ctx.state_at(cycle)));
}

inline Clause sig_clause(const std::string& signal, std::size_t cycle, std::string expected) {
  Clause c;
  c.kind = Clause::Kind::SignalValue;
  c.signal = signal;
  c.cycle = cycle;
  c.expected = std::move(expected);
  return c;
}

inline Clause state_clause(std::size_t cycle, std::string expected) {
  Clause c;
  c.kind = Clause::Kind::StateValue;
  c.signal = "state";
  c.cycle = cycle;
  c.expected = std::move(expected);
  return c;
}

inline std::string bit_str(std::uint64_t v) { return v ? "1" : "0"; }

}  // namespace rdetail

// ---- serial receiver templates -------------------------------------------

namespace rdetail {

inline std::vector<ReasoningTemplate> serial_templates(const std::string& task) {
  std::vector<ReasoningTemplate> out;
  const bool wait_variant = task == "serial_parity_wait";

  auto add = [&](std::string id, QaCategory cat, std::vector<Scenario> when,
                 std::string inspiration,
                 std::function<QaPair(const GenContext&, const TimingDiagram&)> build) {
    out.push_back({task + "." + std::move(id), task, cat, std::move(when), std::move(inspiration),
                   std::move(build)});
  };

  // -- FSM design family --

  add("fsm_start_detect", QaCategory::FSM, {}, "critical timing analysis, start-bit event",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        std::size_t s = f.start_cycle;
        QaPair p;
        p.question = "What happens at the " + nth(s) +
                     " clk rising edge and the following one clk cycle?";
        p.answer = "At the " + nth(s) + " rising edge, state=S0. However, in=0 in this clk "
                   "cycle, which triggers next_state to become S1 through combinatorial logic. "
                   "Then in the " + nth(s + 1) +
                   " clk rising edge, state will get sampled as S1 through sequential logic.";
        Grounding g;
        g.clauses = {state_clause(s, "S0"), sig_clause("in", s, "0"), state_clause(s + 1, "S1")};
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_stop_eval", QaCategory::FSM, {}, "critical timing analysis, data_cnt=9 condition",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        std::string stop = bit_str(ctx.input_bits.at(f.stop_cycle));
        std::string verdict = state_name(ctx, f.verdict_cycle);
        QaPair p;
        p.question = "Please give an explanation of state transition when data_cnt=9.";
        p.answer = "data_cnt reaches 9 in clk cycle " + cyc(f.stop_cycle) +
                   ", which is the critical condition: all 9 data and parity bits have been "
                   "received and the stop bit is on in (in=" + stop + "). " +
                   (f.accepted ? "The 9 received bits have odd parity and the stop bit is 1, so "
                                 "next_state becomes S2 through combinatorial logic. "
                               : "The frame check fails, so next_state becomes S3 through "
                                 "combinatorial logic. ") +
                   "At the " + nth(f.verdict_cycle) + " clk rising edge, state gets sampled as " +
                   verdict + ".";
        Grounding g;
        g.clauses = {sig_clause("data_cnt", f.stop_cycle, hex_string(9)),
                     state_clause(f.stop_cycle, "S1"), sig_clause("in", f.stop_cycle, stop),
                     state_clause(f.verdict_cycle, verdict)};
        g.primary = 3;
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_state_sequence", QaCategory::FSM, {}, "FSM design, trajectory overview",
      [](const GenContext& ctx, const TimingDiagram&) {
        std::vector<std::string> order;
        std::vector<std::size_t> witness;
        for (std::size_t c = 0; c < ctx.trace.cycles(); ++c) {
          std::string s = state_name(ctx, c);
          if (std::find(order.begin(), order.end(), s) == order.end()) {
            order.push_back(s);
            witness.push_back(c);
          }
        }
        std::string list;
        for (std::size_t i = 0; i < order.size(); ++i) list += (i ? ", " : "") + order[i];
        QaPair p;
        p.question = "Which distinct states does the FSM visit, in order of first appearance?";
        p.answer = "The FSM visits " + list + ". The first appearances are sampled at clk "
                   "cycles ";
        for (std::size_t i = 0; i < witness.size(); ++i)
          p.answer += (i ? ", " : "") + cyc(witness[i]);
        p.answer += " respectively.";
        Grounding g;
        for (std::size_t i = 0; i < order.size(); ++i)
          g.clauses.push_back(state_clause(witness[i], order[i]));
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_first_receiving", QaCategory::FSM, {}, "FSM design, start of reception",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        QaPair p;
        p.question = "At which clk rising edge is state first sampled as S1, and what triggers "
                     "the transition?";
        p.answer = "state is first sampled as S1 at the " + nth(f.first_data) +
                   " clk rising edge. The trigger is the start bit: in=0 in clk cycle " +
                   cyc(f.start_cycle) + " while state=S0, so next_state becomes S1 through "
                   "combinatorial logic and is sampled at the next edge.";
        Grounding g;
        g.clauses = {state_clause(f.first_data, "S1"), sig_clause("in", f.start_cycle, "0"),
                     state_clause(f.start_cycle, "S0")};
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_done_pulse", QaCategory::FSM, {Scenario::Success}, "FSM design, success scenario",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        QaPair p;
        p.question = "In which clk cycle is done high, and why?";
        p.answer = "done is high in clk cycle " + cyc(f.verdict_cycle) + ". The first frame "
                   "passes both checks: the 9 data and parity bits have odd parity and the stop "
                   "bit is 1, so next_state becomes S2 and is sampled at the " +
                   nth(f.verdict_cycle) + " clk rising edge; done is the Moore output of S2.";
        Grounding g;
        g.clauses = {sig_clause("done", f.verdict_cycle, "1"),
                     state_clause(f.verdict_cycle, "S2")};
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_err_pulse", QaCategory::FSM, {}, "FSM design, failure path",
      [](const GenContext& ctx, const TimingDiagram&) {
        std::size_t c = ctx.frames.at(0).accepted ? ctx.frames.at(1).verdict_cycle
                                                  : ctx.frames.at(0).verdict_cycle;
        QaPair p;
        p.question = "In which clk cycle does err first go high, and why?";
        p.answer = "err first goes high in clk cycle " + cyc(c) + ". The frame evaluated at "
                   "that edge fails its check, so next_state becomes S3 through combinatorial "
                   "logic and is sampled there; err is the Moore output of S3.";
        Grounding g;
        g.clauses = {sig_clause("err", c, "1"), state_clause(c, "S3")};
        if (c > 0) g.clauses.push_back(sig_clause("err", c - 1, "0"));
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_leave_receiving", QaCategory::FSM, {}, "FSM design, leaving S1",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        std::string verdict = state_name(ctx, f.verdict_cycle);
        QaPair p;
        p.question = "Why does the FSM leave S1 after the " + nth(f.stop_cycle) +
                     " clk rising edge?";
        p.answer = "In clk cycle " + cyc(f.stop_cycle) + " data_cnt equals 9, the critical "
                   "condition: the stop bit is on the line, so S1 must resolve the frame. "
                   "next_state becomes " + verdict + " through combinatorial logic and state is "
                   "sampled as " + verdict + " at the " + nth(f.verdict_cycle) + " edge.";
        Grounding g;
        g.clauses = {state_clause(f.stop_cycle, "S1"),
                     sig_clause("data_cnt", f.stop_cycle, hex_string(9)),
                     state_clause(f.verdict_cycle, verdict)};
        g.primary = 2;
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_after_verdict", QaCategory::FSM, {}, "FSM design, re-arming after a frame",
      [wait_variant](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        std::string verdict = state_name(ctx, f.verdict_cycle);
        std::string after = state_name(ctx, f.verdict_cycle + 1);
        QaPair p;
        p.question = "Which state follows " + verdict + " after the first frame, and why?";
        p.answer = "state=" + verdict + " in clk cycle " + cyc(f.verdict_cycle) +
                   " lasts one cycle here; in=" + bit_str(ctx.input_bits.at(f.verdict_cycle)) +
                   " during that cycle, so " +
                   (verdict == "S3" && wait_variant
                        ? std::string("S3 waits for the line to be 1 and then returns to S0; ")
                        : verdict == "S3"
                              ? std::string("S3 returns directly to S0; ")
                              : std::string("S2 re-arms: with in=1 it returns to S0; ")) +
                   "the next edge samples " + after + ".";
        Grounding g;
        g.clauses = {state_clause(f.verdict_cycle, verdict),
                     state_clause(f.verdict_cycle + 1, after)};
        g.primary = 1;
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_frame2_verdict", QaCategory::FSM, {}, "conditioned generation, frame-2 parity chain",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(1);
        QaPair p;
        p.question = "Is the second frame accepted? Explain using the parity requirement.";
        p.answer = "No. When data_cnt=9 in clk cycle " + cyc(f.stop_cycle) + ", odd=0: the 9 "
                   "received bits of the second frame have an even number of 1s, violating the "
                   "odd-parity requirement. next_state therefore becomes S3 and err is high in "
                   "clk cycle " + cyc(f.verdict_cycle) + ".";
        Grounding g;
        g.clauses = {sig_clause("odd", f.stop_cycle, "0"), state_clause(f.verdict_cycle, "S3"),
                     sig_clause("err", f.verdict_cycle, "1")};
        p.grounding = std::move(g);
        return p;
      });

  add("fsm_cycles_in_s1", QaCategory::FSM, {}, "FSM design, duration of reception",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        std::size_t span = f.stop_cycle - f.first_data + 1;
        QaPair p;
        p.question = "For how many consecutive clk cycles is state=S1 during the first frame?";
        p.answer = "state=S1 for " + std::to_string(span) + " consecutive cycles, from clk "
                   "cycle " + cyc(f.first_data) + " to clk cycle " + cyc(f.stop_cycle) +
                   ": 9 cycles receiving the data and parity bits, then the data_cnt=9 cycle "
                   "that checks the stop bit.";
        Grounding g;
        g.clauses = {state_clause(f.first_data, "S1"), state_clause(f.stop_cycle, "S1"),
                     state_clause(f.verdict_cycle, state_name(ctx, f.verdict_cycle))};
        p.grounding = std::move(g);
        return p;
      });

  // -- datapath design family --

  add("dp_data_cnt_scenarios", QaCategory::Counter, {},
      "datapath design, data_cnt become 0 / keep unchanged / add 1",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        QaPair p;
        p.question = "In which scenarios will data_cnt become 0, keep unchanged, and add 1?";
        p.answer = "data_cnt is held at 0 while the receiver idles in S0 (for example clk "
                   "cycle " + cyc(0) + "). It adds 1 for every data or parity bit received in "
                   "S1: in clk cycle " + cyc(f.first_data) + " it is 0 and in clk cycle " +
                   cyc(f.first_data + 1) + " it is 1. It keeps unchanged once it reaches 9, "
                   "while the frame verdict is taken (clk cycles " + cyc(f.stop_cycle) +
                   " and " + cyc(f.verdict_cycle) + ").";
        Grounding g;
        g.clauses = {sig_clause("data_cnt", 0, hex_string(0)),
                     sig_clause("data_cnt", f.first_data, hex_string(0)),
                     sig_clause("data_cnt", f.first_data + 1, hex_string(1)),
                     sig_clause("data_cnt", f.stop_cycle, hex_string(9)),
                     sig_clause("data_cnt", f.verdict_cycle, hex_string(9))};
        g.primary = 2;
        p.grounding = std::move(g);
        return p;
      });

  add("dp_data_cnt_at", QaCategory::Counter, {}, "datapath design, counter reading",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        Rng rng(ctx.seed ^ hash_str("dp_data_cnt_at"));
        std::size_t c = f.first_data + static_cast<std::size_t>(rng.below(10));
        std::uint64_t v = ctx.reg_at("data_cnt", c);
        QaPair p;
        p.question = "What is the value of data_cnt at clock cycle " + cyc(c) + "?";
        p.answer = "data_cnt is " + std::to_string(v) + " at clock cycle " + cyc(c) +
                   ": it has counted the bits received since the frame started.";
        Grounding g;
        g.clauses = {sig_clause("data_cnt", c, hex_string(v))};
        p.grounding = std::move(g);
        return p;
      });

  add("dp_data_cnt_reach9", QaCategory::Counter, {}, "datapath design, critical condition",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        std::string verdict = state_name(ctx, f.verdict_cycle);
        QaPair p;
        p.question = "At which clk cycle does data_cnt first reach 9, and what does that "
                     "trigger?";
        p.answer = "data_cnt first reaches 9 in clk cycle " + cyc(f.stop_cycle) + ". That is "
                   "the critical condition for the state transition: the bit on in is the stop "
                   "bit, the frame check resolves, and the next edge samples state as " +
                   verdict + ".";
        Grounding g;
        g.clauses = {sig_clause("data_cnt", f.stop_cycle, hex_string(9)),
                     sig_clause("data_cnt", f.stop_cycle - 1, hex_string(8)),
                     state_clause(f.verdict_cycle, verdict)};
        p.grounding = std::move(g);
        return p;
      });

  add("dp_out_byte_shift", QaCategory::CTA, {}, "datapath design, out_byte stores in",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        std::string b0 = bit_str(ctx.input_bits.at(f.first_data));
        QaPair p;
        p.question = "How does out_byte store the bits from in sequentially?";
        p.answer = "While state=S1, each of the first 8 received bits of in is shifted into "
                   "out_byte, first bit into the least significant position. The first data "
                   "bit in=" + b0 + " arrives in clk cycle " + cyc(f.first_data) +
                   "; after all 8 data bits, out_byte holds " + hex_string(f.out_byte) +
                   " when the frame is evaluated in clk cycle " + cyc(f.stop_cycle) + ".";
        Grounding g;
        g.clauses = {sig_clause("in", f.first_data, b0),
                     sig_clause("out_byte", f.stop_cycle, hex_string(f.out_byte)),
                     state_clause(f.first_data, "S1")};
        g.primary = 1;
        p.grounding = std::move(g);
        return p;
      });

  add("dp_out_byte_value", QaCategory::CTA, {}, "datapath design, assembled byte",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        QaPair p;
        p.question = "What is the value of out_byte when the first frame is evaluated, and "
                     "which clk cycles of in formed it?";
        p.answer = "out_byte is " + hex_string(f.out_byte) + " in clk cycle " +
                   cyc(f.stop_cycle) + ". It was assembled LSB-first from in over clk cycles " +
                   cyc(f.first_data) + " to " + cyc(f.first_data + 7) + ".";
        Grounding g;
        g.clauses = {sig_clause("out_byte", f.stop_cycle, hex_string(f.out_byte)),
                     sig_clause("in", f.first_data, bit_str(ctx.input_bits.at(f.first_data)))};
        p.grounding = std::move(g);
        return p;
      });

  add("dp_odd_high", QaCategory::CTA, {}, "motif reproduction, odd pulse of frame 1",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(0);
        QaPair p;
        p.question = "Why is odd high in clk cycle " + cyc(f.stop_cycle) + "?";
        p.answer = "odd tracks the running parity of the bits received on in. By clk cycle " +
                   cyc(f.stop_cycle) + " the receiver has taken all 9 data and parity bits of "
                   "the first frame, and they contain an odd number of 1s, so odd=1.";
        Grounding g;
        g.clauses = {sig_clause("odd", f.stop_cycle, "1"),
                     sig_clause("data_cnt", f.stop_cycle, hex_string(9))};
        p.grounding = std::move(g);
        return p;
      });

  add("dp_odd_low_frame2", QaCategory::CTA, {}, "motif reproduction, odd low for frame 2",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f = ctx.frames.at(1);
        QaPair p;
        p.question = "Why is odd low when the second frame's stop bit is checked?";
        p.answer = "In clk cycle " + cyc(f.stop_cycle) + " the second frame's 9 received bits "
                   "contain an even number of 1s, so the running parity odd is 0. This is "
                   "exactly why the frame is rejected at the next edge.";
        Grounding g;
        g.clauses = {sig_clause("odd", f.stop_cycle, "0"),
                     state_clause(f.verdict_cycle, "S3")};
        p.grounding = std::move(g);
        return p;
      });

  add("sta_odd_at", QaCategory::STA, {}, "simple timing analysis, single-signal reading",
      [](const GenContext& ctx, const TimingDiagram&) {
        Rng rng(ctx.seed ^ hash_str("sta_odd_at"));
        std::size_t c = static_cast<std::size_t>(rng.below(ctx.trace.cycles()));
        std::string v = bit_str(ctx.reg_at("odd", c));
        QaPair p;
        p.question = "What is the value of odd at clock cycle " + cyc(c) + "?";
        p.answer = "odd is " + v + " at clock cycle " + cyc(c) + ".";
        Grounding g;
        g.clauses = {sig_clause("odd", c, v)};
        p.grounding = std::move(g);
        return p;
      });

  add("sta_in_at", QaCategory::STA, {}, "simple timing analysis, single-signal reading",
      [](const GenContext& ctx, const TimingDiagram&) {
        Rng rng(ctx.seed ^ hash_str("sta_in_at"));
        std::size_t c = static_cast<std::size_t>(rng.below(ctx.input_bits.size()));
        std::string v = bit_str(ctx.input_bits.at(c));
        QaPair p;
        p.question = "What is the value of in at clock cycle " + cyc(c) + "?";
        p.answer = "in is " + v + " at clock cycle " + cyc(c) + ".";
        Grounding g;
        g.clauses = {sig_clause("in", c, v)};
        p.grounding = std::move(g);
        return p;
      });

  add("sta_done_edges", QaCategory::STA, {}, "simple timing analysis, done activity",
      [](const GenContext&, const TimingDiagram& td) {
        std::size_t n = count_rising_edges(td, "done");
        QaPair p;
        p.question = "How many rising edges does the signal done have?";
        p.answer = std::to_string(n) +
                   (n == 1 ? ": done pulses once, when a frame is accepted." :
                             ": no frame is accepted in this diagram.");
        Clause c;
        c.kind = Clause::Kind::RisingEdgeCount;
        c.signal = "done";
        c.expected = std::to_string(n);
        Grounding g;
        g.clauses = {c};
        p.grounding = std::move(g);
        return p;
      });

  add("sta_err_edges", QaCategory::STA, {}, "simple timing analysis, err activity",
      [](const GenContext&, const TimingDiagram& td) {
        std::size_t n = count_rising_edges(td, "err");
        QaPair p;
        p.question = "How many rising edges does the signal err have?";
        p.answer = std::to_string(n) + ": err rises once for every rejected frame.";
        Clause c;
        c.kind = Clause::Kind::RisingEdgeCount;
        c.signal = "err";
        c.expected = std::to_string(n);
        Grounding g;
        g.clauses = {c};
        p.grounding = std::move(g);
        return p;
      });

  add("cta_verdict_then_restart", QaCategory::CTA, {},
      "complex timing analysis, frame boundary chain reaction",
      [](const GenContext& ctx, const TimingDiagram&) {
        const FrameInfo& f1 = ctx.frames.at(0);
        const FrameInfo& f2 = ctx.frames.at(1);
        std::string verdict = state_name(ctx, f1.verdict_cycle);
        std::string pulse = f1.accepted ? "done" : "err";
        QaPair p;
        p.question = "What happens in clk cycle " + cyc(f1.verdict_cycle) +
                     " and the following two clk cycles?";
        p.answer = "In clk cycle " + cyc(f1.verdict_cycle) + " the first frame's verdict is "
                   "sampled: state=" + verdict + " and " + pulse + " is high for one cycle. "
                   "The line then idles at 1, so the FSM returns to S0, and in clk cycle " +
                   cyc(f2.start_cycle) + " the start bit in=0 arrives; the " +
                   nth(f2.first_data) + " edge samples state=S1 and the second frame begins.";
        Grounding g;
        g.clauses = {state_clause(f1.verdict_cycle, verdict),
                     sig_clause(pulse, f1.verdict_cycle, "1"),
                     sig_clause("in", f2.start_cycle, "0"),
                     state_clause(f2.first_data, "S1")};
        p.grounding = std::move(g);
        return p;
      });

  return out;
}

// ---- counter templates ---------------------------------------------------

inline std::vector<ReasoningTemplate> counter_templates() {
  std::vector<ReasoningTemplate> out;
  const std::string task = "w_counter";

  auto add = [&](std::string id, QaCategory cat, std::string inspiration,
                 std::function<QaPair(const GenContext&, const TimingDiagram&)> build) {
    out.push_back({task + "." + std::move(id), task, cat, {}, std::move(inspiration),
                   std::move(build)});
  };

  auto cnt_at = [](const GenContext& ctx, std::size_t c) { return ctx.reg_at("cnt", c); };

  add("cnt_at", QaCategory::Counter, "counter reading at a cycle",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        Rng rng(ctx.seed ^ hash_str("cnt_at"));
        std::size_t c = static_cast<std::size_t>(rng.below(ctx.trace.cycles()));
        std::uint64_t v = cnt_at(ctx, c);
        QaPair p;
        p.question = "What is the value of cnt at clock cycle " + cyc(c) + "?";
        p.answer = "cnt is " + std::to_string(v) + " at clock cycle " + cyc(c) + ".";
        Grounding g;
        g.clauses = {sig_clause("cnt", c, hex_string(v))};
        p.grounding = std::move(g);
        return p;
      });

  add("cnt_sequence", QaCategory::Counter, "counter trajectory",
      [](const GenContext& ctx, const TimingDiagram& td) {
        std::string seq = sequence_string(td.signal("cnt").samples);
        QaPair p;
        p.question = "What is the sequence of values for the signal cnt?";
        p.answer = seq;
        Clause c;
        c.kind = Clause::Kind::ValueSequence;
        c.signal = "cnt";
        c.expected = seq;
        Grounding g;
        g.clauses = {c};
        p.grounding = std::move(g);
        return p;
      });

  add("cnt_hold", QaCategory::Counter, "hold condition",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        auto [first, last] = ctx.bands.at("c");  // clamp "00"
        std::size_t c = first;
        std::uint64_t v = cnt_at(ctx, c);
        QaPair p;
        p.question = "Under which condition does cnt keep its value, and where is that "
                     "visible?";
        p.answer = "cnt holds whenever en=0. For example en=0 in clk cycle " + cyc(c) +
                   ", so cnt stays at " + std::to_string(v) + " in clk cycle " + cyc(c + 1) +
                   ".";
        Grounding g;
        g.clauses = {sig_clause("en", c, "0"), sig_clause("cnt", c, hex_string(v)),
                     sig_clause("cnt", c + 1, hex_string(v))};
        g.primary = 2;
        p.grounding = std::move(g);
        (void)last;
        return p;
      });

  add("cnt_increment", QaCategory::Counter, "increment condition",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        std::uint64_t v0 = cnt_at(ctx, 0), v1 = cnt_at(ctx, 1);
        QaPair p;
        p.question = "Under which condition does cnt increment, and where is that visible?";
        p.answer = "cnt adds 1 at every clk rising edge for which en was 1 in the previous "
                   "cycle. en=1 in clk cycle 1, so cnt goes from " + std::to_string(v0) +
                   " to " + std::to_string(v1) + " at the 2nd edge.";
        Grounding g;
        g.clauses = {sig_clause("en", 0, "1"), sig_clause("cnt", 0, hex_string(v0)),
                     sig_clause("cnt", 1, hex_string(v1))};
        g.primary = 2;
        p.grounding = std::move(g);
        return p;
      });

  add("cnt_max", QaCategory::Counter, "peak value",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        std::size_t arg = 0;
        std::uint64_t best = 0;
        for (std::size_t c = 0; c < ctx.trace.cycles(); ++c)
          if (cnt_at(ctx, c) > best) {
            best = cnt_at(ctx, c);
            arg = c;
          }
        QaPair p;
        p.question = "What is the maximum value cnt reaches in this diagram?";
        p.answer = "cnt peaks at " + std::to_string(best) + ", first reached in clk cycle " +
                   cyc(arg) + ".";
        Grounding g;
        g.clauses = {sig_clause("cnt", arg, hex_string(best))};
        p.grounding = std::move(g);
        return p;
      });

  add("cnt_final", QaCategory::STA, "final reading",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        std::size_t c = ctx.trace.cycles() - 1;
        std::uint64_t v = cnt_at(ctx, c);
        QaPair p;
        p.question = "What is the value of cnt in the last clock cycle?";
        p.answer = "cnt is " + std::to_string(v) + " in clk cycle " + cyc(c) + ".";
        Grounding g;
        g.clauses = {sig_clause("cnt", c, hex_string(v))};
        p.grounding = std::move(g);
        return p;
      });

  add("cnt_en_relation", QaCategory::CTA, "cause-effect between en and cnt",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        std::size_t hi = ctx.bands.at("a").first;       // en clamped 1
        std::size_t lo = ctx.bands.at("c").first;       // en clamped 0
        QaPair p;
        p.question = "How does cnt react to en across clock cycles?";
        p.answer = "cnt is sequential: the value sampled at an edge depends on en in the "
                   "previous cycle. With en=1 in clk cycle " + cyc(hi) + ", cnt increments to " +
                   std::to_string(cnt_at(ctx, hi + 1)) + " in clk cycle " + cyc(hi + 1) +
                   "; with en=0 in clk cycle " + cyc(lo) + ", cnt stays at " +
                   std::to_string(cnt_at(ctx, lo + 1)) + " in clk cycle " + cyc(lo + 1) + ".";
        Grounding g;
        g.clauses = {sig_clause("en", hi, "1"),
                     sig_clause("cnt", hi + 1, hex_string(cnt_at(ctx, hi + 1))),
                     sig_clause("en", lo, "0"),
                     sig_clause("cnt", lo + 1, hex_string(cnt_at(ctx, lo + 1)))};
        g.primary = 1;
        p.grounding = std::move(g);
        return p;
      });

  add("cnt_num_increments", QaCategory::CTA, "counting enabled cycles",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        std::size_t n = 0;
        for (std::size_t c = 0; c + 1 < ctx.trace.cycles(); ++c)
          if (ctx.input_bits.at(c)) ++n;
        std::size_t last = ctx.trace.cycles() - 1;
        QaPair p;
        p.question = "How many times does cnt increment over the whole diagram?";
        p.answer = "cnt increments " + std::to_string(n) + " times: once per clk cycle with "
                   "en=1 (except the last cycle, whose effect is not sampled any more). The "
                   "final value " + std::to_string(cnt_at(ctx, last)) +
                   " is that count modulo 16.";
        Grounding g;
        g.clauses = {sig_clause("en", 0, bit_str(ctx.input_bits.at(0))),
                     sig_clause("cnt", last, hex_string(cnt_at(ctx, last)))};
        g.primary = 1;
        p.grounding = std::move(g);
        return p;
      });

  add("cnt_rst_quiet", QaCategory::Counter, "reset inactive in this trace",
      [](const GenContext& ctx, const TimingDiagram&) {
        QaPair p;
        p.question = "Does rst ever clear cnt in this diagram?";
        p.answer = "No. rst stays low for the whole trace (0 transitions), so cnt is only "
                   "driven by en.";
        Clause c;
        c.kind = Clause::Kind::TransitionCount;
        c.signal = "rst";
        c.expected = "0";
        Grounding g;
        g.clauses = {sig_clause("rst", 0, "0"), c};
        g.primary = 1;
        p.grounding = std::move(g);
        (void)ctx;
        return p;
      });

  add("cnt_first_nonzero", QaCategory::STA, "first activity",
      [cnt_at](const GenContext& ctx, const TimingDiagram&) {
        std::size_t c = 0;
        while (c < ctx.trace.cycles() && cnt_at(ctx, c) == 0) ++c;
        QaPair p;
        p.question = "At which clock cycle does cnt first become nonzero?";
        p.answer = "cnt first becomes nonzero in clk cycle " + cyc(c) + ", one edge after en "
                   "was first high.";
        Grounding g;
        g.clauses = {sig_clause("cnt", c, hex_string(cnt_at(ctx, c)))};
        p.grounding = std::move(g);
        return p;
      });

  return out;
}

}  // namespace rdetail

// Tasks that are declared (Table-style catalog) but ship no templates
// yet; they are extension slots, not errors.
inline const std::vector<std::string>& declared_template_slots() {
  static const std::vector<std::string> slots = {
      "serial_datapath_stop", "serial_datapath_wait", "HDLC_correct", "HDLC_discard",
      "HDLC_error", "motor_timer_success", "motor_timer_failure", "complete_fsm",
      "fancy_timer", "sync_fifo", "async_fifo", "spi_no_clk", "spi_with_clk", "ADC",
      "AXI_AHB_APB"};
  return slots;
}

inline std::vector<ReasoningTemplate> template_registry(const std::string& task) {
  if (is_serial_task(task)) return rdetail::serial_templates(task);
  if (task == "w_counter") return rdetail::counter_templates();
  if (task == "async_fifo") {
    // CDC category exists, but its machine is not implemented; attempting
    // the template raises NotApplicable instead of emitting unverifiable text.
    ReasoningTemplate t;
    t.id = "async_fifo.cdc_placeholder";
    t.task = "async_fifo";
    t.category = QaCategory::CDC;
    t.inspiration = "clock-domain-crossing family, pending the async FIFO machine";
    t.build = [](const GenContext&, const TimingDiagram&) -> QaPair {
      fail(Errc::NotApplicable, "CDC templates need the async FIFO machine");
    };
    return {t};
  }
  for (const std::string& slot : declared_template_slots())
    if (slot == task) return {};
  fail(Errc::UnknownTask, task);
}

inline QaPair instantiate(const ReasoningTemplate& tmpl, const TimingDiagram& td,
                          const GenContext& ctx) {
  if (tmpl.task != ctx.task)
    fail(Errc::NotApplicable, tmpl.id + " targets task " + tmpl.task + ", diagram is " + ctx.task);
  if (!tmpl.applicable.empty() &&
      std::find(tmpl.applicable.begin(), tmpl.applicable.end(), ctx.scenario) ==
          tmpl.applicable.end())
    fail(Errc::NotApplicable, tmpl.id + " does not apply to the " +
                                  scenario_name(ctx.scenario) + " scenario");
  QaPair p = tmpl.build(ctx, td);
  p.category = tmpl.category;
  p.format = QaFormat::Statement;
  p.source_td = ctx.task + "-" + scenario_name(ctx.scenario) + "-" + std::to_string(ctx.seed);
  return p;
}

// ---- reformatting --------------------------------------------------------

namespace rdetail {

// A guaranteed-different display value of the same shape as `expected`.
inline std::vector<std::string> make_distractors(const std::string& expected, Rng& rng) {
  auto is_number = [](const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };

  std::vector<std::string> cand;
  if (expected == "0" || expected == "1" || expected == "x" || expected == "z") {
    for (const char* v : {"0", "1", "x", "z"})
      if (expected != v) cand.push_back(v);
  } else if (expected.size() >= 2 && expected[0] == 'S' && is_number(expected.substr(1))) {
    unsigned long s = std::stoul(expected.substr(1));
    for (unsigned long d : {(s + 1) % 4, (s + 2) % 4, (s + 3) % 4})
      cand.push_back("S" + std::to_string(d));
  } else if (expected.rfind("0x", 0) == 0) {
    std::uint64_t v = std::stoull(expected.substr(2), nullptr, 16);
    for (std::uint64_t d : {v + 1, v + 2, v + 3}) cand.push_back(hex_string(d));
  } else if (is_number(expected)) {
    std::uint64_t v = std::stoull(expected);
    cand.push_back(std::to_string(v + 1));
    cand.push_back(v > 0 ? std::to_string(v - 1) : std::to_string(v + 2));
    cand.push_back(std::to_string(v + 3));
  } else {
    // sequences and anything else: perturb one visible token
    std::string a = expected, b = expected, c = expected;
    auto flip_at = [](std::string s, std::size_t pos) {
      for (std::size_t i = pos; i < s.size(); ++i) {
        if (s[i] == '0') { s[i] = '1'; return s; }
        if (s[i] == '1') { s[i] = '0'; return s; }
      }
      return s + " (sic)";
    };
    a = flip_at(a, 0);
    b = flip_at(b, expected.size() / 2);
    c = flip_at(c, expected.size() / 3);
    for (std::string* s : {&a, &b, &c})
      if (*s == expected) *s += " (reversed)";
    cand = {a, b, c};
  }
  // dedupe, keep 3
  std::vector<std::string> out;
  for (const std::string& s : cand) {
    if (s == expected) continue;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  std::size_t salt = 0;
  while (out.size() < 3) out.push_back(expected + " +" + std::to_string(++salt));
  rng.shuffle(out);
  out.resize(3);
  return out;
}

inline std::string clause_statement(const Clause& c) {
  switch (c.kind) {
    case Clause::Kind::SignalValue:
      return "Signal " + c.signal + " has the value " + c.expected + " at clock cycle " +
             std::to_string(c.cycle + 1) + ".";
    case Clause::Kind::StateValue:
      return "The state is " + c.expected + " at clock cycle " + std::to_string(c.cycle + 1) +
             ".";
    case Clause::Kind::TransitionCount:
      return "Signal " + c.signal + " has " + c.expected + " transitions.";
    case Clause::Kind::RisingEdgeCount:
      return "Signal " + c.signal + " has " + c.expected + " rising edges.";
    case Clause::Kind::FallingEdgeCount:
      return "Signal " + c.signal + " has " + c.expected + " falling edges.";
    case Clause::Kind::ValueSequence:
      return "Signal " + c.signal + " takes the value sequence " + c.expected + ".";
  }
  return "";
}

}  // namespace rdetail

// Recast a grounded pair as True/False (half the items get one grounded
// fact negated) or multiple choice (three perturbed distractors).
inline QaPair reformat(const QaPair& pair, QaFormat target, std::uint64_t seed) {
  if (!pair.grounding) fail(Errc::UngroundedPair, "cannot reformat an ungrounded pair");
  if (target == QaFormat::Statement) return pair;
  Rng rng(seed);
  QaPair out = pair;
  const Clause& primary = pair.grounding->primary_clause();

  if (target == QaFormat::TrueFalse) {
    out.format = QaFormat::TrueFalse;
    bool negate = rng.coin();
    if (!negate) {
      out.question = "True or False: " + rdetail::clause_statement(primary);
      out.answer = "True";
      return out;
    }
    Clause negated = primary;
    negated.expected = rdetail::make_distractors(primary.expected, rng)[0];
    out.question = "True or False: " + rdetail::clause_statement(negated);
    out.answer = "False";
    Grounding g = *pair.grounding;
    g.clauses[g.primary] = negated;
    g.truth = false;
    out.grounding = std::move(g);
    return out;
  }

  // multiple choice
  out.format = QaFormat::MultipleChoice;
  std::vector<std::string> options = rdetail::make_distractors(primary.expected, rng);
  options.push_back(primary.expected);
  rng.shuffle(options);
  std::string q = pair.question + "\nOptions:";
  char key_letter = '?';
  for (std::size_t i = 0; i < options.size(); ++i) {
    char letter = static_cast<char>('A' + i);
    q += "\n" + std::string(1, letter) + ") " + options[i];
    if (options[i] == primary.expected) key_letter = letter;
  }
  out.question = std::move(q);
  out.answer = std::string(1, key_letter) + ") " + primary.expected;
  return out;
}

// The option values of a multiple-choice question, in listed order.
inline std::vector<std::string> multiple_choice_options(const QaPair& pair) {
  std::vector<std::string> out;
  std::size_t pos = pair.question.find("\nOptions:");
  if (pos == std::string::npos) return out;
  std::string rest = pair.question.substr(pos + 9);
  std::size_t start = 0;
  while ((start = rest.find('\n', start)) != std::string::npos) {
    ++start;
    std::size_t end = rest.find('\n', start);
    std::string line = rest.substr(start, end == std::string::npos ? std::string::npos
                                                                   : end - start);
    if (line.size() > 3) out.push_back(line.substr(3));
    if (end == std::string::npos) break;
  }
  return out;
}

}  // namespace tdgen
