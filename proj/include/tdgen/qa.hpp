#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdgen/errors.hpp"
#include "tdgen/trace.hpp"

namespace tdgen {

enum class QaCategory {
  Value,
  Sequence,
  Transitions,
  RisingEdges,
  FallingEdges,
  Description,
  Caption,
  Summary,
  UseCase,
  FSM,
  Counter,
  CDC,
  STA,
  CTA,
};

inline const char* category_name(QaCategory c) {
  switch (c) {
    case QaCategory::Value: return "value";
    case QaCategory::Sequence: return "sequence";
    case QaCategory::Transitions: return "transitions";
    case QaCategory::RisingEdges: return "rising_edges";
    case QaCategory::FallingEdges: return "falling_edges";
    case QaCategory::Description: return "description";
    case QaCategory::Caption: return "caption";
    case QaCategory::Summary: return "summary";
    case QaCategory::UseCase: return "use_case";
    case QaCategory::FSM: return "fsm";
    case QaCategory::Counter: return "counter";
    case QaCategory::CDC: return "cdc";
    case QaCategory::STA: return "sta";
    case QaCategory::CTA: return "cta";
  }
  return "?";
}

inline QaCategory category_from_name(const std::string& s) {
  for (QaCategory c :
       {QaCategory::Value, QaCategory::Sequence, QaCategory::Transitions, QaCategory::RisingEdges,
        QaCategory::FallingEdges, QaCategory::Description, QaCategory::Caption,
        QaCategory::Summary, QaCategory::UseCase, QaCategory::FSM, QaCategory::Counter,
        QaCategory::CDC, QaCategory::STA, QaCategory::CTA})
    if (s == category_name(c)) return c;
  fail(Errc::ParseFailure, "unknown category " + s);
}

enum class QaFormat { Statement, TrueFalse, MultipleChoice };

inline const char* format_name(QaFormat f) {
  switch (f) {
    case QaFormat::Statement: return "statement";
    case QaFormat::TrueFalse: return "true_false";
    case QaFormat::MultipleChoice: return "multiple_choice";
  }
  return "?";
}

inline QaFormat format_from_name(const std::string& s) {
  for (QaFormat f : {QaFormat::Statement, QaFormat::TrueFalse, QaFormat::MultipleChoice})
    if (s == format_name(f)) return f;
  fail(Errc::ParseFailure, "unknown format " + s);
}

// One machine-checkable factual claim made by an answer. Cycles are
// 0-indexed here; rendering adds 1.
struct Clause {
  enum class Kind { SignalValue, StateValue, TransitionCount, RisingEdgeCount, FallingEdgeCount, ValueSequence };

  Kind kind = Kind::SignalValue;
  std::string signal;
  std::size_t cycle = 0;      // value/state kinds
  std::string expected;       // display form ("1", "0x3c", "S1", count, or comma list)

  bool operator==(const Clause&) const = default;
};

inline const char* clause_kind_name(Clause::Kind k) {
  switch (k) {
    case Clause::Kind::SignalValue: return "signal_value";
    case Clause::Kind::StateValue: return "state_value";
    case Clause::Kind::TransitionCount: return "transition_count";
    case Clause::Kind::RisingEdgeCount: return "rising_edge_count";
    case Clause::Kind::FallingEdgeCount: return "falling_edge_count";
    case Clause::Kind::ValueSequence: return "value_sequence";
  }
  return "?";
}

inline Clause::Kind clause_kind_from_name(const std::string& s) {
  for (Clause::Kind k :
       {Clause::Kind::SignalValue, Clause::Kind::StateValue, Clause::Kind::TransitionCount,
        Clause::Kind::RisingEdgeCount, Clause::Kind::FallingEdgeCount,
        Clause::Kind::ValueSequence})
    if (s == clause_kind_name(k)) return k;
  fail(Errc::ParseFailure, "unknown clause kind " + s);
}

inline std::string sequence_string(const std::vector<CycleValue>& samples) {
  std::string out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i) out += ", ";
    out += cycle_value_string(samples[i]);
  }
  return out;
}

// Walks the diagram directly; shares no code with the answer builders.
inline bool check_clause(const TimingDiagram& td, const Clause& clause) {
  switch (clause.kind) {
    case Clause::Kind::SignalValue:
    case Clause::Kind::StateValue: {
      if (!td.has_signal(clause.signal)) return false;
      const SignalTrace& s = td.signal(clause.signal);
      if (clause.cycle >= s.samples.size()) return false;
      return cycle_value_string(s.samples[clause.cycle]) == clause.expected;
    }
    case Clause::Kind::TransitionCount:
      return std::to_string(count_transitions(td, clause.signal)) == clause.expected;
    case Clause::Kind::RisingEdgeCount:
      return std::to_string(count_rising_edges(td, clause.signal)) == clause.expected;
    case Clause::Kind::FallingEdgeCount:
      return std::to_string(count_falling_edges(td, clause.signal)) == clause.expected;
    case Clause::Kind::ValueSequence:
      return sequence_string(td.signal(clause.signal).samples) == clause.expected;
  }
  return false;
}

// Hidden structured record kept beside the natural-language text so the
// answer can be re-verified and distractors built; stripped at export.
struct Grounding {
  std::vector<Clause> clauses;
  std::size_t primary = 0;  // the clause perturbed by reformatting
  bool truth = true;        // false for negated True/False items

  const Clause& primary_clause() const { return clauses.at(primary); }
};

struct QaPair {
  std::string question;
  std::string answer;
  QaCategory category = QaCategory::Value;
  QaFormat format = QaFormat::Statement;
  std::string source_td;
  std::optional<Grounding> grounding;
};

// truth=true items must verify every clause; truth=false items must fail
// the primary (negated) clause.
inline bool verify_grounding(const TimingDiagram& td, const QaPair& pair) {
  if (!pair.grounding) fail(Errc::UngroundedPair, "pair has no grounding record");
  const Grounding& g = *pair.grounding;
  if (g.truth) {
    for (const Clause& c : g.clauses)
      if (!check_clause(td, c)) return false;
    return true;
  }
  return !check_clause(td, g.primary_clause());
}

// ---- JSON ----------------------------------------------------------------

inline nlohmann::json clause_to_json(const Clause& c) {
  return {{"kind", clause_kind_name(c.kind)},
          {"signal", c.signal},
          {"cycle", c.cycle},
          {"expected", c.expected}};
}

inline Clause clause_from_json(const nlohmann::json& j) {
  Clause c;
  c.kind = clause_kind_from_name(j.at("kind").get<std::string>());
  c.signal = j.at("signal").get<std::string>();
  c.cycle = j.at("cycle").get<std::size_t>();
  c.expected = j.at("expected").get<std::string>();
  return c;
}

inline nlohmann::json qa_to_json(const QaPair& p) {
  nlohmann::json j{{"question", p.question},
                   {"answer", p.answer},
                   {"category", category_name(p.category)},
                   {"format", format_name(p.format)},
                   {"source_td", p.source_td}};
  if (p.grounding) {
    nlohmann::json clauses = nlohmann::json::array();
    for (const Clause& c : p.grounding->clauses) clauses.push_back(clause_to_json(c));
    j["grounding"] = {{"clauses", std::move(clauses)},
                      {"primary", p.grounding->primary},
                      {"truth", p.grounding->truth}};
  }
  return j;
}

inline QaPair qa_from_json(const nlohmann::json& j) {
  QaPair p;
  p.question = j.at("question").get<std::string>();
  p.answer = j.at("answer").get<std::string>();
  p.category = category_from_name(j.at("category").get<std::string>());
  p.format = format_from_name(j.at("format").get<std::string>());
  p.source_td = j.value("source_td", "");
  if (j.contains("grounding")) {
    Grounding g;
    for (const nlohmann::json& c : j["grounding"].at("clauses"))
      g.clauses.push_back(clause_from_json(c));
    g.primary = j["grounding"].value("primary", std::size_t{0});
    g.truth = j["grounding"].value("truth", true);
    p.grounding = std::move(g);
  }
  return p;
}

}  // namespace tdgen
