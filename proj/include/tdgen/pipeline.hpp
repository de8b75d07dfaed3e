#pragma once

// Batch orchestration: a RunConfig describes the whole generation run
// (pools, counts, tasks, output directory); the functions here build the
// caption and reasoning pools, mix them, and package the dataset. Work
// items receive their ids and RNG streams before dispatch and results
// are assembled in id order, so the parallelism degree never changes a
// single output byte.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tdgen/bands.hpp"
#include "tdgen/caption.hpp"
#include "tdgen/dataset.hpp"
#include "tdgen/errors.hpp"
#include "tdgen/randomtd.hpp"
#include "tdgen/reasoning.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/svg.hpp"
#include "tdgen/wavejson.hpp"

namespace tdgen {

struct TaskWeight {
  std::string name;
  std::uint64_t success_weight = 1;
  std::uint64_t failure_weight = 1;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::size_t n_caption = 4942;
  std::size_t n_reasoning = 5292;
  // extra pool margin above the sampled counts, so the mix draw stays a
  // genuine without-replacement sample
  double pool_margin = 0.05;
  std::vector<TaskWeight> tasks = {{"serial_parity_stop", 1, 1},
                                   {"serial_parity_wait", 1, 1},
                                   {"w_counter", 1, 1}};
  std::size_t hscale = 1;
  std::string endpoint;  // text service, only needed by describe flows
  std::size_t parallelism = 0;  // 0 = hardware_concurrency
};

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  if (c.out_dir.empty()) fail(Errc::BadConfig, "out_dir must be non-empty");
  c.n_caption = j.value("n_caption", c.n_caption);
  c.n_reasoning = j.value("n_reasoning", c.n_reasoning);
  c.pool_margin = j.value("pool_margin", c.pool_margin);
  if (j.contains("tasks")) {
    c.tasks.clear();
    for (const nlohmann::json& t : j.at("tasks")) {
      TaskWeight w;
      w.name = t.at("name").get<std::string>();
      if (!is_known_task(w.name)) fail(Errc::UnknownTask, w.name);
      w.success_weight = t.value("success_weight", std::uint64_t{1});
      w.failure_weight = t.value("failure_weight", std::uint64_t{1});
      c.tasks.push_back(std::move(w));
    }
    if (c.tasks.empty()) fail(Errc::BadConfig, "tasks list is empty");
  }
  c.hscale = j.value("hscale", c.hscale);
  c.endpoint = j.value("endpoint", c.endpoint);
  c.parallelism = j.value("parallelism", c.parallelism);
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoFailure, "cannot open config " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return run_config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::BadConfig, e.what());
  }
}

// Deterministic parallel map: item i's result lands at index i no matter
// which worker computes it or in which order workers finish.
template <typename Fn>
auto parallel_map(std::size_t n, std::size_t degree, Fn fn)
    -> std::vector<decltype(fn(std::size_t{0}))> {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> results(n);
  if (degree == 0) degree = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  degree = std::min(degree, std::max<std::size_t>(1, n));
  if (degree <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < degree; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += degree) results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

namespace pipedetail {

inline std::string zero_pad(std::size_t n, std::size_t width = 6) {
  std::string s = std::to_string(n);
  return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

inline std::pair<std::string, Scenario> pick_task(const RunConfig& cfg, Rng& rng) {
  std::uint64_t total = 0;
  for (const TaskWeight& t : cfg.tasks) total += t.success_weight + t.failure_weight;
  if (total == 0) fail(Errc::BadConfig, "all task weights are zero");
  std::uint64_t roll = rng.below(total);
  for (const TaskWeight& t : cfg.tasks) {
    if (roll < t.success_weight) return {t.name, Scenario::Success};
    roll -= t.success_weight;
    if (roll < t.failure_weight) return {t.name, Scenario::Failure};
    roll -= t.failure_weight;
  }
  fail(Errc::BadConfig, "task weight roll out of range");
}

}  // namespace pipedetail

// One caption-pool item: a random diagram plus one analytic QA, the
// category cycling through the five analytic kinds.
inline DatasetRecord build_caption_item(const RunConfig& cfg, std::size_t index) {
  static const QaCategory kAnalytic[] = {QaCategory::Value, QaCategory::Sequence,
                                         QaCategory::Transitions, QaCategory::RisingEdges,
                                         QaCategory::FallingEdges};
  Rng rng = Rng(cfg.seed).split(hash_str("caption")).split(index);
  std::uint64_t td_seed = rng.next();
  TimingDiagram td = random_td(td_seed);
  QaCategory category = kAnalytic[index % std::size(kAnalytic)];
  std::string id = "cap-" + pipedetail::zero_pad(index);
  std::vector<QaPair> qas =
      generate_caption_qas(td, rng.next(), {{category, 1}}, CaptionTemplates::defaults(), id);

  DatasetRecord r;
  r.id = id;
  r.image = "images/" + id + ".svg";
  r.question = qas[0].question;
  r.answer = qas[0].answer;
  r.category = category;
  r.task = "random_td";
  r.scenario = "none";
  r.seed = td_seed;
  WaveDocument doc = emit_wavejson(td);
  doc.hscale = cfg.hscale;
  r.svg = render_svg(doc);
  return r;
}

// One reasoning-pool item: a conditioned scenario diagram plus one
// instantiated template, reformatted to True/False or multiple choice
// for two items in three.
inline DatasetRecord build_reasoning_item(const RunConfig& cfg, std::size_t index) {
  Rng rng = Rng(cfg.seed).split(hash_str("reasoning")).split(index);
  auto [task, scenario] = pipedetail::pick_task(cfg, rng);
  std::uint64_t td_seed = rng.next();
  auto [td, ctx] = generate_td(task, scenario, td_seed);

  std::vector<ReasoningTemplate> templates = template_registry(task);
  std::size_t start = static_cast<std::size_t>(rng.below(templates.size()));
  QaPair pair;
  bool built = false;
  for (std::size_t k = 0; k < templates.size() && !built; ++k) {
    const ReasoningTemplate& t = templates[(start + k) % templates.size()];
    try {
      pair = instantiate(t, td, ctx);
      built = true;
    } catch (const Error& e) {
      if (e.code() != Errc::NotApplicable) throw;
    }
  }
  if (!built) fail(Errc::NotApplicable, "no template applies to " + task);

  std::uint64_t fmt_roll = rng.below(3);
  std::uint64_t reformat_seed = rng.next();
  if (fmt_roll == 1) pair = reformat(pair, QaFormat::TrueFalse, reformat_seed);
  if (fmt_roll == 2) pair = reformat(pair, QaFormat::MultipleChoice, reformat_seed);

  std::string id = "rsn-" + pipedetail::zero_pad(index);
  DatasetRecord r;
  r.id = id;
  r.image = "images/" + id + ".svg";
  r.question = pair.question;
  r.answer = pair.answer;
  r.category = pair.category;
  r.task = task;
  r.scenario = scenario_name(scenario);
  r.seed = td_seed;
  WaveDocument doc = emit_wavejson(td);
  doc.hscale = cfg.hscale;
  r.svg = render_svg(doc);
  return r;
}

inline std::size_t pool_size_for(std::size_t n, double margin) {
  return n + static_cast<std::size_t>(static_cast<double>(n) * margin);
}

inline std::vector<DatasetRecord> build_caption_pool(const RunConfig& cfg, std::size_t count) {
  return parallel_map(count, cfg.parallelism,
                      [&cfg](std::size_t i) { return build_caption_item(cfg, i); });
}

inline std::vector<DatasetRecord> build_reasoning_pool(const RunConfig& cfg, std::size_t count) {
  return parallel_map(count, cfg.parallelism,
                      [&cfg](std::size_t i) { return build_reasoning_item(cfg, i); });
}

// The full gen-caption + gen-reasoning + mix + package run.
inline Manifest run_package(const RunConfig& cfg) {
  std::vector<DatasetRecord> caption =
      build_caption_pool(cfg, pool_size_for(cfg.n_caption, cfg.pool_margin));
  std::vector<DatasetRecord> reasoning =
      build_reasoning_pool(cfg, pool_size_for(cfg.n_reasoning, cfg.pool_margin));
  std::vector<DatasetRecord> records = sample_mix(caption, reasoning, cfg.n_caption,
                                                  cfg.n_reasoning, Rng(cfg.seed).split(2).next());
  return package(records, cfg.out_dir, cfg.seed);
}

}  // namespace tdgen
