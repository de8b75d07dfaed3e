// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each check re-derives expectations with independent
// logic (naive oracles, brute-force recomputation, byte comparison).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tdgen/bands.hpp"
#include "tdgen/caption.hpp"
#include "tdgen/dataset.hpp"
#include "tdgen/fsm.hpp"
#include "tdgen/metrics.hpp"
#include "tdgen/pipeline.hpp"
#include "tdgen/randomtd.hpp"
#include "tdgen/reasoning.hpp"
#include "tdgen/vcd.hpp"
#include "tdgen/wavejson.hpp"

#include "helpers.hpp"

namespace fs = std::filesystem;
using namespace tdgen;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const std::string& name, bool pass, double secs, const std::string& detail = "") {
  std::printf("%s — %s (%.2fs)%s%s\n", pass ? "PASS" : "FAIL", name.c_str(), secs,
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---- 1. VCD round-trip and sampling vs a naive oracle --------------------

void check_vcd_properties() {
  auto start = Clock::now();
  std::size_t cases = 0;
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 1000 && ok; ++seed) {
    VcdDocument doc = testutil::make_random_vcd(seed);
    VcdDocument back = parse_vcd(serialize_vcd(doc));
    if (back.declarations.size() != doc.declarations.size() ||
        back.events.size() != doc.events.size()) {
      ok = false;
      detail = "round-trip shape mismatch at seed " + std::to_string(seed);
      break;
    }
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (int q = 0; q < 10; ++q) {
      std::size_t var = static_cast<std::size_t>(rng.below(doc.declarations.size()));
      std::uint64_t t = rng.below(doc.end_time + 5);
      if (!(value_at_time(back, var, t) == testutil::value_at_time_naive(doc, var, t))) {
        ok = false;
        detail = "value_at_time disagrees with the naive oracle at seed " +
                 std::to_string(seed);
        break;
      }
    }
    ++cases;
  }
  double secs = seconds_since(start);
  if (ok && secs >= 30.0) {
    ok = false;
    detail = "exceeded the 30s budget";
  }
  report("VCD parse/serialize round-trip and sampling oracle on " + std::to_string(cases) +
             " random documents",
         ok, secs, detail);
}

// ---- 2. WaveJSON bijection ------------------------------------------------

void check_wavejson_bijection() {
  auto start = Clock::now();
  bool ok = true;
  std::string detail;
  std::size_t cases = 0;
  for (std::uint64_t seed = 0; seed < 1000 && ok; ++seed) {
    TimingDiagram td = random_td(seed);
    TimingDiagram back = parse_wavejson(wave_to_json(emit_wavejson(td)).dump());
    if (!(back == td)) {
      ok = false;
      detail = "parse(emit(td)) != td at seed " + std::to_string(seed);
    }
    ++cases;
  }
  report("WaveJSON emit/parse bijection on " + std::to_string(cases) + " random diagrams", ok,
         seconds_since(start), detail);
}

// ---- 3. caption answers vs brute-force ------------------------------------

std::string brute_answer(const TimingDiagram& td, const Clause& c) {
  const SignalTrace& s = td.signal(c.signal);
  switch (c.kind) {
    case Clause::Kind::SignalValue:
    case Clause::Kind::StateValue:
      return cycle_value_string(s.samples.at(c.cycle));
    case Clause::Kind::ValueSequence: {
      std::string out;
      for (std::size_t i = 0; i < s.samples.size(); ++i)
        out += (i ? ", " : "") + cycle_value_string(s.samples[i]);
      return out;
    }
    case Clause::Kind::TransitionCount: {
      std::size_t n = 0;
      for (std::size_t i = 1; i < s.samples.size(); ++i)
        if (s.samples[i - 1].defined() && s.samples[i].defined() &&
            s.samples[i - 1].bit != s.samples[i].bit)
          ++n;
      return std::to_string(n);
    }
    case Clause::Kind::RisingEdgeCount: {
      std::size_t n = 0;
      for (std::size_t i = 1; i < s.samples.size(); ++i)
        if (s.samples[i - 1].bit == LogicValue::Bit0 && s.samples[i].bit == LogicValue::Bit1)
          ++n;
      return std::to_string(n);
    }
    case Clause::Kind::FallingEdgeCount: {
      std::size_t n = 0;
      for (std::size_t i = 1; i < s.samples.size(); ++i)
        if (s.samples[i - 1].bit == LogicValue::Bit1 && s.samples[i].bit == LogicValue::Bit0)
          ++n;
      return std::to_string(n);
    }
  }
  return "?";
}

void check_caption_pairs() {
  auto start = Clock::now();
  const std::map<QaCategory, std::size_t> quota = {
      {QaCategory::Value, 2},       {QaCategory::Sequence, 1},
      {QaCategory::Transitions, 1}, {QaCategory::RisingEdges, 1},
      {QaCategory::FallingEdges, 1}};
  std::size_t pairs = 0, mismatches = 0;
  for (std::uint64_t seed = 0; pairs < 10000; ++seed) {
    TimingDiagram td = random_td(seed);
    for (const QaPair& p : generate_caption_qas(td, seed * 31 + 7, quota)) {
      const Clause& c = p.grounding->clauses.at(0);
      if (p.answer != brute_answer(td, c) || !check_clause(td, c)) ++mismatches;
      ++pairs;
    }
  }
  report("10,000 caption answers match brute-force recomputation (" +
             std::to_string(mismatches) + " mismatches)",
         mismatches == 0, seconds_since(start));
}

// ---- 4. exhaustive serial receiver ----------------------------------------

void check_exhaustive_frames() {
  auto start = Clock::now();
  enum { S0, S1, S2, S3 };
  bool ok = true;
  std::string detail;
  for (ReceiverVariant variant : {ReceiverVariant::Stop, ReceiverVariant::Wait}) {
    TaskMachine m = serial_receiver_machine(variant);
    for (std::uint32_t frame = 0; frame < 1024 && ok; ++frame) {
      std::vector<InputMap> schedule;
      std::vector<std::uint64_t> bits = {1, 1, 0};
      for (int i = 0; i < 10; ++i) bits.push_back((frame >> i) & 1);
      bits.push_back(1);
      for (std::uint64_t b : bits) schedule.push_back({{"in", b}});
      auto [trace, td] = simulate(m, schedule, schedule.size());

      int ones = 0;
      for (int i = 0; i < 9; ++i) ones += (frame >> i) & 1;
      bool expect_accept = (ones % 2 == 1) && (((frame >> 9) & 1) == 1);
      bool accepted = trace.steps[13].state == S2;
      std::uint64_t expect_odd = static_cast<std::uint64_t>(ones % 2);
      if (accepted != expect_accept ||
          trace.steps[12].registers.at("out_byte") != (frame & 0xff) ||
          trace.steps[12].registers.at("odd") != expect_odd ||
          trace.steps[13].outputs.at("done") != (accepted ? 1u : 0u) ||
          trace.steps[13].outputs.at("err") != (accepted ? 0u : 1u)) {
        ok = false;
        detail = "frame " + std::to_string(frame) + " disagrees with the parity/stop rule";
      }
    }
  }
  double secs = seconds_since(start);
  if (ok && secs >= 5.0) {
    ok = false;
    detail = "exceeded the 5s budget";
  }
  report("exhaustive 1024-frame serial receiver check, both variants", ok, secs, detail);
}

// ---- 5. conditioned generation --------------------------------------------

void check_conditioned_generation() {
  auto start = Clock::now();
  enum { S0, S1, S2, S3 };
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 1000 && ok; ++seed) {
    for (const char* task : {"serial_parity_stop", "serial_parity_wait", "w_counter"}) {
      for (Scenario sc : {Scenario::Success, Scenario::Failure}) {
        auto [td, ctx] = generate_td(task, sc, seed);
        MotifResult r = check_motifs(td, task, sc);
        if (!r.pass) {
          ok = false;
          detail = std::string(task) + "/" + scenario_name(sc) + " seed " +
                   std::to_string(seed) + ": " + r.first_mismatch;
          break;
        }
        if (is_serial_task(task)) {
          int verdict1 = ctx.state_at(ctx.frames.at(0).verdict_cycle);
          int verdict2 = ctx.state_at(ctx.frames.at(1).verdict_cycle);
          bool parity1 = ctx.reg_at("odd", ctx.frames.at(0).stop_cycle) == 1;
          bool parity2 = ctx.reg_at("odd", ctx.frames.at(1).stop_cycle) == 0;
          bool want_ok = sc == Scenario::Success;
          if (verdict1 != (want_ok ? S2 : S3) || verdict2 != S3 || !parity1 || !parity2) {
            ok = false;
            detail = std::string(task) + "/" + scenario_name(sc) + " seed " +
                     std::to_string(seed) + ": parity chain or verdict broken";
          }
        }
      }
      if (!ok) break;
    }
  }
  report("conditioned generation reproduces motifs over 1000 seeds x tasks x scenarios", ok,
         seconds_since(start), detail);
}

// ---- 6. reasoning grounding and reformatting -------------------------------

void check_reasoning_grounding() {
  auto start = Clock::now();
  bool ok = true;
  std::string detail;
  std::size_t answers = 0;
  for (std::uint64_t seed = 0; answers < 1000 && ok; ++seed) {
    for (const char* task : {"serial_parity_stop", "serial_parity_wait", "w_counter"}) {
      for (Scenario sc : {Scenario::Success, Scenario::Failure}) {
        auto [td, ctx] = generate_td(task, sc, seed);
        for (const ReasoningTemplate& t : template_registry(task)) {
          QaPair pair;
          try {
            pair = instantiate(t, td, ctx);
          } catch (const Error& e) {
            if (e.code() == Errc::NotApplicable) continue;
            throw;
          }
          ++answers;
          bool clause_ok = verify_grounding(td, pair);
          for (const Clause& c : pair.grounding->clauses)
            clause_ok = clause_ok && check_clause(td, c);

          QaPair tf = reformat(pair, QaFormat::TrueFalse, seed * 977 + answers);
          bool tf_ok = tf.answer == "True"
                           ? verify_grounding(td, tf)
                           : !check_clause(td, tf.grounding->primary_clause());

          QaPair mc = reformat(pair, QaFormat::MultipleChoice, seed * 977 + answers);
          bool mc_ok = true;
          std::vector<std::string> options = multiple_choice_options(mc);
          const Clause& primary = pair.grounding->primary_clause();
          mc_ok = options.size() == 4 && mc.answer.size() > 3 &&
                  mc.answer.substr(3) == primary.expected;
          for (const std::string& opt : options) {
            Clause probe = primary;
            probe.expected = opt;
            bool truth = check_clause(td, probe);
            mc_ok = mc_ok && (truth == (opt == primary.expected));
          }

          if (!clause_ok || !tf_ok || !mc_ok) {
            ok = false;
            detail = t.id + " seed " + std::to_string(seed) +
                     (clause_ok ? (tf_ok ? ": distractor not false" : ": true/false key wrong")
                                : ": clause check failed");
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) break;
    }
  }
  report(std::to_string(answers) + " reasoning answers clause-checked with honest "
                                   "true/false and multiple-choice keys",
         ok, seconds_since(start), detail);
}

// ---- 7. metrics sanity -----------------------------------------------------

void check_metrics() {
  auto start = Clock::now();
  bool ok = true;
  std::string detail;
  auto near = [](double a, double b) { return std::fabs(a - b) <= 0.1; };

  std::vector<std::string> same = {"the quick brown fox jumps over the lazy dog"};
  if (!near(bleu4(same, same), 100.0) || !near(rouge_n(same, same, 1).f1, 100.0) ||
      !near(rouge_l(same, same).f1, 100.0)) {
    ok = false;
    detail = "identical corpora do not score 100";
  }
  std::vector<std::string> lhs = {"alpha beta gamma delta"}, rhs = {"one two three four"};
  if (ok && (bleu4(lhs, rhs) != 0.0 || rouge_n(lhs, rhs, 1).f1 != 0.0)) {
    ok = false;
    detail = "disjoint corpora do not score 0";
  }
  std::string cand = "the cat sat on the mat", ref = "the cat is on the mat";
  if (ok && (!near(sentence_bleu4(cand, ref), 48.55) || !near(rouge_n({cand}, {ref}, 1).f1, 83.33) ||
             !near(rouge_n({cand}, {ref}, 2).f1, 60.0) || !near(rouge_l({cand}, {ref}).f1, 83.33) ||
             bleu4({cand}, {ref}) != 0.0)) {
    ok = false;
    detail = "hand-computed pins missed (tolerance 0.1)";
  }
  std::vector<std::string> c3 = {cand, "a b c d e", "signal clk toggles every cycle"};
  std::vector<std::string> r3 = {ref, "a b x d e", "signal clk toggles each cycle"};
  std::vector<std::string> c3p = {c3[2], c3[0], c3[1]}, r3p = {r3[2], r3[0], r3[1]};
  if (ok && (!near(bleu4(c3, r3), bleu4(c3p, r3p)) ||
             !near(rouge_l(c3, r3).f1, rouge_l(c3p, r3p).f1))) {
    ok = false;
    detail = "corpus scores change under pair reordering";
  }
  report("metric sanity: boundary scores, hand-computed pins, permutation invariance", ok,
         seconds_since(start), detail);
}

// ---- 8. full-scale packaging ----------------------------------------------

void check_package_scale() {
  auto start = Clock::now();
  bool ok = true;
  std::string detail;
  fs::path out = fs::temp_directory_path() / "tdgen_accept_full";
  fs::remove_all(out);

  RunConfig cfg;
  cfg.seed = 20260825;
  cfg.out_dir = out.string();
  // defaults: 4942 caption + 5292 reasoning = 10,234 records
  Manifest manifest = run_package(cfg);
  double secs = seconds_since(start);

  std::size_t expected_total = cfg.n_caption + cfg.n_reasoning;
  if (manifest.total != expected_total) {
    ok = false;
    detail = "expected " + std::to_string(expected_total) + " records, packaged " +
             std::to_string(manifest.total);
  }
  if (ok && !verify_package(out).empty()) {
    ok = false;
    detail = "manifest checksums do not match data.jsonl";
  }
  std::size_t images = 0;
  if (ok)
    for (auto it = fs::directory_iterator(out / "images"); it != fs::directory_iterator(); ++it)
      ++images;
  if (ok && images < expected_total) {
    ok = false;
    detail = "only " + std::to_string(images) + " images on disk";
  }
  if (ok && secs >= 600.0) {
    ok = false;
    detail = "exceeded the 10-minute budget";
  }

  // throughput extrapolation: diagrams rendered per second during this
  // run, against a 221,983-diagram production target in 24h
  std::size_t tds_built = pool_size_for(cfg.n_caption, cfg.pool_margin) +
                          pool_size_for(cfg.n_reasoning, cfg.pool_margin);
  double rate = static_cast<double>(tds_built) / std::max(secs, 1e-9);
  double projected_hours = 221983.0 / std::max(rate, 1e-9) / 3600.0;
  if (ok && projected_hours >= 24.0) {
    ok = false;
    detail = "projected " + std::to_string(projected_hours) + "h for 221,983 diagrams";
  }
  fs::remove_all(out);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "packaged %zu records; %.0f diagrams/s projects %.2fh for 221,983 diagrams",
                expected_total, rate, projected_hours);
  report(std::string("full-scale packaging run: ") + buf, ok, secs, detail);
}

// ---- 9. determinism across parallelism ------------------------------------

void check_parallel_determinism() {
  auto start = Clock::now();
  bool ok = true;
  std::string detail;
  fs::path dir1 = fs::temp_directory_path() / "tdgen_accept_p1";
  fs::path dir4 = fs::temp_directory_path() / "tdgen_accept_p4";
  fs::remove_all(dir1);
  fs::remove_all(dir4);

  RunConfig cfg;
  cfg.seed = 7;
  cfg.n_caption = 120;
  cfg.n_reasoning = 120;
  cfg.parallelism = 1;
  cfg.out_dir = dir1.string();
  run_package(cfg);
  cfg.parallelism = 4;
  cfg.out_dir = dir4.string();
  run_package(cfg);

  for (const char* f : {"data.jsonl", "meta.jsonl", "manifest.json"}) {
    if (slurp(dir1 / f) != slurp(dir4 / f)) {
      ok = false;
      detail = std::string(f) + " differs between parallelism 1 and 4";
    }
  }
  if (ok) {
    std::set<std::string> names1, names4;
    for (auto it = fs::directory_iterator(dir1 / "images"); it != fs::directory_iterator(); ++it)
      names1.insert(it->path().filename().string());
    for (auto it = fs::directory_iterator(dir4 / "images"); it != fs::directory_iterator(); ++it)
      names4.insert(it->path().filename().string());
    if (names1 != names4) {
      ok = false;
      detail = "image sets differ";
    } else {
      for (const std::string& name : names1)
        if (slurp(dir1 / "images" / name) != slurp(dir4 / "images" / name)) {
          ok = false;
          detail = "image " + name + " differs";
          break;
        }
    }
  }
  fs::remove_all(dir1);
  fs::remove_all(dir4);
  report("byte-identical packages at parallelism 1 and 4", ok, seconds_since(start), detail);
}

}  // namespace

int main() {
  check_vcd_properties();
  check_wavejson_bijection();
  check_caption_pairs();
  check_exhaustive_frames();
  check_conditioned_generation();
  check_reasoning_grounding();
  check_metrics();
  check_package_scale();
  check_parallel_determinism();
  if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
