#include <doctest.h>

#include <map>

#include "tdgen/bands.hpp"

using namespace tdgen;

TEST_CASE("bands: serial plan layout, frame 1 passes parity, frame 2 fails") {
  for (const char* task : {"serial_parity_stop", "serial_parity_wait"}) {
    for (Scenario sc : {Scenario::Success, Scenario::Failure}) {
      BandPlan plan = build_band_plan(task, sc, 4);
      REQUIRE(plan.bands.size() == 9);
      CHECK(plan.bands[0].label == "a");
      CHECK(plan.bands[0].clamp_bits == std::vector<std::uint8_t>{1, 1, 0});
      CHECK(plan.bands[1].constraint == BandConstraint::ParityEven);
      CHECK(plan.bands[1].random_length == 8);
      CHECK(plan.bands[5].constraint == BandConstraint::ParityOdd);
      CHECK(plan.total_length() == 25 + 4);
      // the stop bits carry the scenario
      std::uint8_t stop = sc == Scenario::Success ? 1 : 0;
      CHECK(plan.bands[3].clamp_bits == std::vector<std::uint8_t>{stop});
      CHECK(plan.bands[7].clamp_bits == std::vector<std::uint8_t>{stop});
    }
  }
  CHECK_THROWS_AS(build_band_plan("nope", Scenario::Success), Error);
}

TEST_CASE("bands: realized inputs honor clamps and parity constraints") {
  BandPlan plan = build_band_plan("serial_parity_stop", Scenario::Success, 3);
  std::map<std::uint8_t, int> last_bit_seen;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    std::vector<std::uint8_t> bits = realize_inputs(plan, seed);
    REQUIRE(bits.size() == plan.total_length());
    std::size_t pos = 0;
    for (const Band& b : plan.bands) {
      int ones = 0;
      for (std::size_t i = 0; i < b.length(); ++i) {
        if (b.clamp) CHECK(bits[pos + i] == b.clamp_bits[i]);
        ones += bits[pos + i];
      }
      if (b.constraint == BandConstraint::ParityEven) CHECK(ones % 2 == 0);
      if (b.constraint == BandConstraint::ParityOdd) CHECK(ones % 2 == 1);
      if (b.label == "b") ++last_bit_seen[bits[pos + b.length() - 1]];
      pos += b.length();
    }
  }
  // the parity-forced last bit is not constant: both values occur
  CHECK(last_bit_seen[0] > 50);
  CHECK(last_bit_seen[1] > 50);
}

TEST_CASE("bands: parity-band bit positions are roughly uniform") {
  BandPlan plan = build_band_plan("serial_parity_stop", Scenario::Success, 2);
  std::size_t b_start = 3;  // after clamp band a
  int ones[8] = {0};
  const int runs = 2000;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    std::vector<std::uint8_t> bits = realize_inputs(plan, seed);
    for (int i = 0; i < 8; ++i) ones[i] += bits[b_start + static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < 8; ++i) {
    CHECK(ones[i] > runs * 2 / 5);
    CHECK(ones[i] < runs * 3 / 5);
  }
}

TEST_CASE("bands: generated diagrams carry band and motif annotations") {
  auto [td, ctx] = generate_td("serial_parity_stop", Scenario::Success, 42);
  for (const char* label : {"a", "b", "c", "d", "gap", "e", "f", "g", "h", "i", "j", "k", "l"})
    CHECK(td.annotations.contains(label));
  REQUIRE(ctx.frames.size() == 2);
  // fixed frame geometry: start bit in cycle 2 (0-indexed), verdicts at 13 and 25
  CHECK(ctx.frames[0].start_cycle == 2);
  CHECK(ctx.frames[0].first_data == 3);
  CHECK(ctx.frames[0].stop_cycle == 12);
  CHECK(ctx.frames[0].verdict_cycle == 13);
  CHECK(ctx.frames[1].stop_cycle == 24);
  CHECK(ctx.frames[1].verdict_cycle == 25);
  CHECK(td.annotations.at("i") == CycleRange{13, 14});
  CHECK(td.annotations.at("l") == CycleRange{24, 25});
}

TEST_CASE("bands: motifs are seed-invariant and scenarios reach their states") {
  enum { S0, S1, S2, S3 };
  for (const char* task : {"serial_parity_stop", "serial_parity_wait"}) {
    for (Scenario sc : {Scenario::Success, Scenario::Failure}) {
      for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto [td, ctx] = generate_td(task, sc, seed);
        MotifResult r = check_motifs(td, task, sc);
        CHECK_MESSAGE(r.pass, task, "/", scenario_name(sc), " seed ", seed, ": ",
                      r.first_mismatch);
        CHECK(ctx.frames[0].accepted == (sc == Scenario::Success));
        CHECK(ctx.state_at(ctx.frames[0].verdict_cycle) == (sc == Scenario::Success ? S2 : S3));
        // frame 2 always fails: its 9 bits have even parity
        CHECK(ctx.frames[1].accepted == false);
        CHECK(ctx.state_at(ctx.frames[1].verdict_cycle) == S3);
      }
    }
  }
}

TEST_CASE("bands: counter task reproduces its motif and tracks en") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto [td, ctx] = generate_td("w_counter", Scenario::Success, seed);
    CHECK(check_motifs(td, "w_counter", Scenario::Success).pass);
    // band a clamps en=1,1 so cnt runs 0,1 and reaches 2 after
    CHECK(ctx.reg_at("cnt", 0) == 0);
    CHECK(ctx.reg_at("cnt", 1) == 1);
    CHECK(ctx.reg_at("cnt", 2) == 2);
  }
}

TEST_CASE("bands: infeasible constraints and unknown tasks error") {
  BandPlan plan;
  plan.task = "serial_parity_stop";
  Band bad;
  bad.label = "b";
  bad.random_length = 0;
  bad.constraint = BandConstraint::ParityOdd;
  plan.bands.push_back(bad);
  CHECK_THROWS_AS(realize_inputs(plan, 1), Error);
  CHECK_THROWS_AS(generate_td("mystery", Scenario::Success, 1), Error);
  CHECK_THROWS_AS(task_machine("mystery"), Error);
}
