#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdgen/errors.hpp"

namespace tdgen {

// Lowercase; maximal alphanumeric runs are tokens, every other printable
// non-space character is its own token.
inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string run;
  auto flush = [&] {
    if (!run.empty()) {
      out.push_back(run);
      run.clear();
    }
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      run.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
      if (!std::isspace(c)) out.push_back(std::string(1, static_cast<char>(c)));
    }
  }
  flush();
  return out;
}

namespace metricdetail {

using Counts = std::map<std::vector<std::string>, std::size_t>;

inline Counts ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
  Counts c;
  if (tokens.size() < n) return c;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++c[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  return c;
}

inline std::size_t clipped_overlap(const Counts& cand, const Counts& ref) {
  std::size_t total = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) total += std::min(count, it->second);
  }
  return total;
}

}  // namespace metricdetail

// Corpus-level BLEU-4 against one reference per candidate, on a 0..100
// scale. Modified n-gram precision with clipping, geometric mean over
// n=1..4, brevity penalty min(1, e^(1-r/c)); no smoothing, so any
// absent n-gram order zeroes the score (matching the common
// single-reference corpus definition).
inline double bleu4(const std::vector<std::string>& candidates,
                    const std::vector<std::string>& references) {
  if (candidates.size() != references.size())
    fail(Errc::LengthMismatch, std::to_string(candidates.size()) + " candidates vs " +
                                   std::to_string(references.size()) + " references");
  if (candidates.empty()) fail(Errc::EmptyCorpus, "no candidate/reference pairs");

  std::size_t match[4] = {0, 0, 0, 0}, total[4] = {0, 0, 0, 0};
  std::size_t cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::string> c = tokenize(candidates[i]);
    std::vector<std::string> r = tokenize(references[i]);
    cand_len += c.size();
    ref_len += r.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      metricdetail::Counts cc = metricdetail::ngram_counts(c, n);
      metricdetail::Counts rc = metricdetail::ngram_counts(r, n);
      match[n - 1] += metricdetail::clipped_overlap(cc, rc);
      total[n - 1] += c.size() >= n ? c.size() - n + 1 : 0;
    }
  }
  if (cand_len == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    if (match[n] == 0 || total[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(match[n]) / static_cast<double>(total[n]));
  }
  double bp = cand_len >= ref_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return 100.0 * bp * std::exp(log_sum / 4.0);
}

// Per-pair BLEU-4 with add-one smoothing for n >= 2 (short sentences
// rarely share a 4-gram; the smoothed form keeps the breakdown finite).
inline double sentence_bleu4(const std::string& candidate, const std::string& reference) {
  std::vector<std::string> c = tokenize(candidate);
  std::vector<std::string> r = tokenize(reference);
  if (c.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    metricdetail::Counts cc = metricdetail::ngram_counts(c, n);
    metricdetail::Counts rc = metricdetail::ngram_counts(r, n);
    double m = static_cast<double>(metricdetail::clipped_overlap(cc, rc));
    double t = static_cast<double>(c.size() >= n ? c.size() - n + 1 : 0);
    if (n >= 2) {
      m += 1.0;
      t += 1.0;
    }
    if (m == 0.0 || t == 0.0) return 0.0;
    log_sum += std::log(m / t);
  }
  double bp = c.size() >= r.size()
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(r.size()) / static_cast<double>(c.size()));
  return 100.0 * bp * std::exp(log_sum / 4.0);
}

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

namespace metricdetail {

inline RougeScore prf(double overlap, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = cand_total > 0 ? 100.0 * overlap / cand_total : 0.0;
  s.recall = ref_total > 0 ? 100.0 * overlap / ref_total : 0.0;
  s.f1 = (s.precision + s.recall) > 0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

}  // namespace metricdetail

// Corpus ROUGE-N: per-pair clipped n-gram overlap P/R/F1, averaged.
inline RougeScore rouge_n(const std::vector<std::string>& candidates,
                          const std::vector<std::string>& references, std::size_t n) {
  if (candidates.size() != references.size())
    fail(Errc::LengthMismatch, "candidate/reference count differs");
  if (candidates.empty()) fail(Errc::EmptyCorpus, "no candidate/reference pairs");
  RougeScore sum;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::string> c = tokenize(candidates[i]);
    std::vector<std::string> r = tokenize(references[i]);
    metricdetail::Counts cc = metricdetail::ngram_counts(c, n);
    metricdetail::Counts rc = metricdetail::ngram_counts(r, n);
    double overlap = static_cast<double>(metricdetail::clipped_overlap(cc, rc));
    double ct = static_cast<double>(c.size() >= n ? c.size() - n + 1 : 0);
    double rt = static_cast<double>(r.size() >= n ? r.size() - n + 1 : 0);
    RougeScore s = metricdetail::prf(overlap, ct, rt);
    sum.precision += s.precision;
    sum.recall += s.recall;
    sum.f1 += s.f1;
  }
  double k = static_cast<double>(candidates.size());
  return {sum.precision / k, sum.recall / k, sum.f1 / k};
}

// Corpus ROUGE-L: token-level longest common subsequence P/R/F1, averaged.
inline RougeScore rouge_l(const std::vector<std::string>& candidates,
                          const std::vector<std::string>& references) {
  if (candidates.size() != references.size())
    fail(Errc::LengthMismatch, "candidate/reference count differs");
  if (candidates.empty()) fail(Errc::EmptyCorpus, "no candidate/reference pairs");
  RougeScore sum;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::string> c = tokenize(candidates[i]);
    std::vector<std::string> r = tokenize(references[i]);
    std::vector<std::size_t> prev(r.size() + 1, 0), cur(r.size() + 1, 0);
    for (std::size_t a = 1; a <= c.size(); ++a) {
      for (std::size_t b = 1; b <= r.size(); ++b) {
        cur[b] = c[a - 1] == r[b - 1] ? prev[b - 1] + 1 : std::max(prev[b], cur[b - 1]);
      }
      std::swap(prev, cur);
    }
    double lcs = static_cast<double>(prev[r.size()]);
    RougeScore s = metricdetail::prf(lcs, static_cast<double>(c.size()),
                                     static_cast<double>(r.size()));
    sum.precision += s.precision;
    sum.recall += s.recall;
    sum.f1 += s.f1;
  }
  double k = static_cast<double>(candidates.size());
  return {sum.precision / k, sum.recall / k, sum.f1 / k};
}

struct ScoreReport {
  std::size_t pairs = 0;
  double bleu4 = 0.0;
  RougeScore rouge1, rouge2, rougel;
  std::vector<std::pair<std::string, double>> sentence_bleu;  // id -> smoothed per-pair BLEU
};

inline nlohmann::json score_report_to_json(const ScoreReport& r, bool with_sentences = false) {
  auto rouge = [](const RougeScore& s) {
    return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  };
  nlohmann::json j{{"pairs", r.pairs},
                   {"bleu4", r.bleu4},
                   {"rouge1", rouge(r.rouge1)},
                   {"rouge2", rouge(r.rouge2)},
                   {"rougeL", rouge(r.rougel)}};
  if (with_sentences) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [id, v] : r.sentence_bleu) s[id] = v;
    j["sentence_bleu4"] = std::move(s);
  }
  return j;
}

// Score candidate texts against references, joined by id. Every
// candidate id must have a reference.
inline ScoreReport evaluate_pairs(const std::vector<std::pair<std::string, std::string>>& cand,
                                  const std::map<std::string, std::string>& refs) {
  if (cand.empty()) fail(Errc::EmptyCorpus, "no candidates");
  std::vector<std::string> c, r;
  ScoreReport report;
  for (const auto& [id, text] : cand) {
    auto it = refs.find(id);
    if (it == refs.end()) fail(Errc::MissingIds, "no reference for id " + id);
    c.push_back(text);
    r.push_back(it->second);
    report.sentence_bleu.emplace_back(id, sentence_bleu4(text, it->second));
  }
  report.pairs = c.size();
  report.bleu4 = bleu4(c, r);
  report.rouge1 = rouge_n(c, r, 1);
  report.rouge2 = rouge_n(c, r, 2);
  report.rougel = rouge_l(c, r);
  return report;
}

}  // namespace tdgen
