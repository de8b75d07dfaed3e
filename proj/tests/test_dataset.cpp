#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tdgen/dataset.hpp"

using namespace tdgen;
namespace fs = std::filesystem;

namespace {

DatasetRecord make_record(const std::string& id, QaCategory cat, const std::string& task) {
  DatasetRecord r;
  r.id = id;
  r.image = "images/" + id + ".svg";
  r.question = "What is the value of s at clock cycle 3?";
  r.answer = "1";
  r.category = cat;
  r.task = task;
  r.scenario = "none";
  r.seed = 7;
  r.svg = "<svg xmlns=\"http://www.w3.org/2000/svg\"><text>" + id + "</text></svg>";
  return r;
}

std::vector<DatasetRecord> make_pool(const std::string& prefix, std::size_t n, QaCategory cat) {
  std::vector<DatasetRecord> pool;
  for (std::size_t i = 0; i < n; ++i)
    pool.push_back(make_record(prefix + std::to_string(i), cat, "random_td"));
  return pool;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("dataset: record json round-trips through the conversation schema") {
  DatasetRecord r = make_record("cap-000001", QaCategory::Value, "random_td");
  nlohmann::json data = record_to_json(r);
  CHECK(data["conversations"][0]["from"] == "human");
  CHECK(data["conversations"][0]["value"] == "<image>\n" + r.question);
  CHECK(data["conversations"][1]["value"] == r.answer);
  DatasetRecord back = record_from_json(data, record_meta_to_json(r));
  CHECK(back == r);

  nlohmann::json multiturn = data;
  multiturn["conversations"].push_back({{"from", "human"}, {"value", "again?"}});
  CHECK_THROWS_AS(record_from_json(multiturn, record_meta_to_json(r)), Error);
  nlohmann::json wrong_meta = record_meta_to_json(r);
  wrong_meta["id"] = "other";
  CHECK_THROWS_AS(record_from_json(data, wrong_meta), Error);
}

TEST_CASE("dataset: sample_mix draws deterministic, sized, duplicate-free samples") {
  std::vector<DatasetRecord> cap = make_pool("cap-", 50, QaCategory::Value);
  std::vector<DatasetRecord> rsn = make_pool("rsn-", 40, QaCategory::FSM);

  std::vector<DatasetRecord> s1 = sample_mix(cap, rsn, 20, 15, 5);
  REQUIRE(s1.size() == 35);
  std::set<std::string> ids;
  for (const DatasetRecord& r : s1) ids.insert(r.id);
  CHECK(ids.size() == 35);  // without replacement

  std::vector<DatasetRecord> s2 = sample_mix(cap, rsn, 20, 15, 5);
  for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i].id == s2[i].id);
  std::vector<DatasetRecord> s3 = sample_mix(cap, rsn, 20, 15, 6);
  bool differs = false;
  for (std::size_t i = 0; i < s1.size(); ++i) differs = differs || s1[i].id != s3[i].id;
  CHECK(differs);

  CHECK(sample_mix(cap, rsn, 0, 0, 1).empty());
  CHECK_THROWS_AS(sample_mix(cap, rsn, 51, 1, 1), Error);
  CHECK_THROWS_AS(sample_mix(cap, rsn, 1, 41, 1), Error);
}

TEST_CASE("dataset: package writes a complete, verifiable tree") {
  TempDir dir("tdgen_pkg_a");
  std::vector<DatasetRecord> records = make_pool("cap-", 6, QaCategory::Value);
  records.push_back(make_record("rsn-0", QaCategory::FSM, "serial_parity_stop"));
  Manifest m = package(records, dir.path, 99);

  CHECK(m.total == 7);
  CHECK(m.seed == 99);
  CHECK(m.version == kToolkitVersion);
  CHECK(m.category_counts.at("value") == 6);
  CHECK(m.category_counts.at("fsm") == 1);
  CHECK(m.task_counts.at("random_td") == 6);
  std::size_t sum = 0;
  for (const auto& [k, v] : m.category_counts) sum += v;
  CHECK(sum == m.total);

  CHECK(fs::exists(dir.path / "data.jsonl"));
  CHECK(fs::exists(dir.path / "meta.jsonl"));
  CHECK(fs::exists(dir.path / "manifest.json"));
  for (const DatasetRecord& r : records) CHECK(fs::exists(dir.path / r.image));

  std::string data = slurp(dir.path / "data.jsonl");
  CHECK(std::count(data.begin(), data.end(), '\n') == 7);
  CHECK(data.find('\r') == std::string::npos);

  CHECK(verify_package(dir.path).empty());

  std::vector<DatasetRecord> back = load_package(dir.path);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) CHECK(back[i] == records[i]);

  // manifest json round-trip
  Manifest m2 = manifest_from_json(manifest_to_json(m));
  CHECK(m2.checksums == m.checksums);
  CHECK(m2.total == m.total);
}

TEST_CASE("dataset: repackaging the same records is byte-identical") {
  TempDir a("tdgen_pkg_b1"), b("tdgen_pkg_b2");
  std::vector<DatasetRecord> records = make_pool("cap-", 5, QaCategory::Sequence);
  package(records, a.path, 3);
  package(records, b.path, 3);
  for (const char* f : {"data.jsonl", "meta.jsonl", "manifest.json"})
    CHECK(slurp(a.path / f) == slurp(b.path / f));
  CHECK(slurp(a.path / records[2].image) == slurp(b.path / records[2].image));
}

TEST_CASE("dataset: tampering is caught, missing images are rejected") {
  TempDir dir("tdgen_pkg_c");
  std::vector<DatasetRecord> records = make_pool("cap-", 3, QaCategory::Value);
  package(records, dir.path, 1);

  // flip the answer of the second line
  std::string data = slurp(dir.path / "data.jsonl");
  std::size_t pos = data.find("\"1\"");
  REQUIRE(pos != std::string::npos);
  data.replace(pos, 3, "\"2\"");
  std::ofstream(dir.path / "data.jsonl", std::ios::binary) << data;
  std::vector<std::string> bad = verify_package(dir.path);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == "cap-0");

  DatasetRecord ghost = make_record("ghost", QaCategory::Value, "random_td");
  ghost.svg.clear();
  try {
    package({ghost}, dir.path / "sub", 1);
    FAIL("expected MissingImage");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingImage);
  }
}
