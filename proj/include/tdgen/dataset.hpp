#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdgen/errors.hpp"
#include "tdgen/qa.hpp"
#include "tdgen/rng.hpp"

namespace tdgen {

inline constexpr const char* kToolkitVersion = "0.1.0";

// One exportable (image, single-turn conversation) unit. The rendered
// SVG travels with the record until package() writes it out; it is not
// part of the JSONL serialization.
struct DatasetRecord {
  std::string id;
  std::string image;  // path relative to the package root
  std::string question;
  std::string answer;
  QaCategory category = QaCategory::Value;
  std::string task;
  std::string scenario;
  std::uint64_t seed = 0;
  std::string svg;  // image payload; written to `image` at package time

  bool operator==(const DatasetRecord& o) const {
    return id == o.id && image == o.image && question == o.question && answer == o.answer &&
           category == o.category && task == o.task && scenario == o.scenario && seed == o.seed;
  }
};

struct Manifest {
  std::uint64_t seed = 0;
  std::string version = kToolkitVersion;
  std::size_t total = 0;
  std::map<std::string, std::size_t> category_counts;
  std::map<std::string, std::size_t> task_counts;
  std::map<std::string, std::string> checksums;  // record id -> fnv1a of its data.jsonl line
};

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = hash_str(data);
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

// The visual-instruction-tuning line: image reference plus one
// human/assistant exchange. Meta stays in the parallel meta.jsonl so the
// training file keeps only what the trainer consumes.
inline nlohmann::json record_to_json(const DatasetRecord& r) {
  return {{"id", r.id},
          {"image", r.image},
          {"conversations",
           nlohmann::json::array({{{"from", "human"}, {"value", "<image>\n" + r.question}},
                                  {{"from", "gpt"}, {"value", r.answer}}})}};
}

inline nlohmann::json record_meta_to_json(const DatasetRecord& r) {
  return {{"id", r.id},
          {"category", category_name(r.category)},
          {"task", r.task},
          {"scenario", r.scenario},
          {"seed", r.seed}};
}

inline DatasetRecord record_from_json(const nlohmann::json& data, const nlohmann::json& meta) {
  DatasetRecord r;
  r.id = data.at("id").get<std::string>();
  r.image = data.at("image").get<std::string>();
  const nlohmann::json& conv = data.at("conversations");
  if (!conv.is_array() || conv.size() != 2)
    fail(Errc::ParseFailure, "record " + r.id + " is not single-turn");
  std::string q = conv[0].at("value").get<std::string>();
  const std::string marker = "<image>\n";
  if (q.rfind(marker, 0) == 0) q = q.substr(marker.size());
  r.question = q;
  r.answer = conv[1].at("value").get<std::string>();
  if (meta.value("id", r.id) != r.id)
    fail(Errc::ParseFailure, "meta line out of step at record " + r.id);
  r.category = category_from_name(meta.at("category").get<std::string>());
  r.task = meta.at("task").get<std::string>();
  r.scenario = meta.at("scenario").get<std::string>();
  r.seed = meta.at("seed").get<std::uint64_t>();
  return r;
}

// Uniform without-replacement draw of n_caption + n_reasoning records,
// one QA per picture. Deterministic per seed; pool order does not leak
// into the sample beyond indexing.
inline std::vector<DatasetRecord> sample_mix(const std::vector<DatasetRecord>& caption_pool,
                                             const std::vector<DatasetRecord>& reasoning_pool,
                                             std::size_t n_caption, std::size_t n_reasoning,
                                             std::uint64_t seed) {
  if (caption_pool.size() < n_caption)
    fail(Errc::PoolTooSmall, "caption pool has " + std::to_string(caption_pool.size()) +
                                 " items, need " + std::to_string(n_caption));
  if (reasoning_pool.size() < n_reasoning)
    fail(Errc::PoolTooSmall, "reasoning pool has " + std::to_string(reasoning_pool.size()) +
                                 " items, need " + std::to_string(n_reasoning));
  Rng rng(seed);
  auto draw = [&rng](const std::vector<DatasetRecord>& pool, std::size_t n) {
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    std::vector<DatasetRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(pool[idx[i]]);
    return out;
  };
  std::vector<DatasetRecord> records = draw(caption_pool, n_caption);
  std::vector<DatasetRecord> reasoning = draw(reasoning_pool, n_reasoning);
  records.insert(records.end(), reasoning.begin(), reasoning.end());
  return records;
}

inline nlohmann::json manifest_to_json(const Manifest& m) {
  return {{"seed", m.seed},
          {"version", m.version},
          {"total", m.total},
          {"category_counts", m.category_counts},
          {"task_counts", m.task_counts},
          {"checksums", m.checksums}};
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.version = j.at("version").get<std::string>();
  m.total = j.at("total").get<std::size_t>();
  m.category_counts = j.at("category_counts").get<std::map<std::string, std::size_t>>();
  m.task_counts = j.at("task_counts").get<std::map<std::string, std::size_t>>();
  m.checksums = j.at("checksums").get<std::map<std::string, std::string>>();
  return m;
}

// Write images/, data.jsonl, meta.jsonl and manifest.json under out_dir.
// Output is a pure function of the record list (LF line endings, fixed
// JSON field order), so re-running is byte-identical.
inline Manifest package(const std::vector<DatasetRecord>& records,
                        const std::filesystem::path& out_dir, std::uint64_t seed = 0) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  if (ec) fail(Errc::IoFailure, "cannot create " + (out_dir / "images").string());

  Manifest manifest;
  manifest.seed = seed;
  manifest.total = records.size();

  std::ostringstream data_lines, meta_lines;
  for (const DatasetRecord& r : records) {
    if (r.svg.empty() && !fs::exists(out_dir / r.image))
      fail(Errc::MissingImage, "record " + r.id + " has no image payload and " + r.image +
                                   " does not exist");
    if (!r.svg.empty()) {
      std::ofstream img(out_dir / r.image, std::ios::binary);
      if (!img) fail(Errc::IoFailure, "cannot write " + (out_dir / r.image).string());
      img << r.svg;
    }
    std::string line = record_to_json(r).dump();
    manifest.checksums[r.id] = fnv1a_hex(line);
    ++manifest.category_counts[category_name(r.category)];
    ++manifest.task_counts[r.task.empty() ? "unknown" : r.task];
    data_lines << line << '\n';
    meta_lines << record_meta_to_json(r).dump() << '\n';
  }

  auto write_file = [&](const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) fail(Errc::IoFailure, "cannot write " + p.string());
    f << content;
  };
  write_file(out_dir / "data.jsonl", data_lines.str());
  write_file(out_dir / "meta.jsonl", meta_lines.str());
  write_file(out_dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
  return manifest;
}

// Read a package back; svg payloads are not reloaded.
inline std::vector<DatasetRecord> load_package(const std::filesystem::path& out_dir) {
  std::ifstream data(out_dir / "data.jsonl"), meta(out_dir / "meta.jsonl");
  if (!data || !meta) fail(Errc::IoFailure, "cannot open package at " + out_dir.string());
  std::vector<DatasetRecord> out;
  std::string dline, mline;
  while (std::getline(data, dline)) {
    if (dline.empty()) continue;
    if (!std::getline(meta, mline))
      fail(Errc::ParseFailure, "meta.jsonl shorter than data.jsonl");
    try {
      out.push_back(record_from_json(nlohmann::json::parse(dline), nlohmann::json::parse(mline)));
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ParseFailure, e.what());
    }
  }
  return out;
}

// Re-hash data.jsonl lines against the manifest; returns ids that differ.
inline std::vector<std::string> verify_package(const std::filesystem::path& out_dir) {
  std::ifstream data(out_dir / "data.jsonl"), mf(out_dir / "manifest.json");
  if (!data || !mf) fail(Errc::IoFailure, "cannot open package at " + out_dir.string());
  Manifest manifest;
  try {
    nlohmann::json j;
    mf >> j;
    manifest = manifest_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseFailure, e.what());
  }
  std::vector<std::string> bad;
  std::string line;
  while (std::getline(data, line)) {
    if (line.empty()) continue;
    std::string id;
    try {
      id = nlohmann::json::parse(line).at("id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ParseFailure, e.what());
    }
    auto it = manifest.checksums.find(id);
    if (it == manifest.checksums.end() || it->second != fnv1a_hex(line)) bad.push_back(id);
  }
  return bad;
}

}  // namespace tdgen
