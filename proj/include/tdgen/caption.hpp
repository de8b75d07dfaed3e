#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdgen/errors.hpp"
#include "tdgen/qa.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/trace.hpp"
#include "tdgen/verilog.hpp"

namespace tdgen {

// Surface phrasings per analytic category, with {signal} and {cycle}
// placeholders. Editable via a JSON file; the built-in pool always
// contains the canonical phrasing of each category.
struct CaptionTemplates {
  std::map<QaCategory, std::vector<std::string>> phrasings;

  static CaptionTemplates defaults() {
    CaptionTemplates t;
    t.phrasings[QaCategory::Value] = {
        "What is the value of signal {signal} at clock cycle {cycle}?",
        "At clock cycle {cycle}, what value does signal {signal} hold?",
        "Read the timing diagram: which value does {signal} carry in clock cycle {cycle}?",
    };
    t.phrasings[QaCategory::Sequence] = {
        "What is the sequence of values for the signal {signal}?",
        "List the per-cycle values of signal {signal} in order.",
        "Which sequence of values does signal {signal} take across the diagram?",
    };
    t.phrasings[QaCategory::Transitions] = {
        "How many transitions does the signal {signal} have?",
        "Count the transitions of signal {signal}.",
        "How many times does signal {signal} change its value?",
    };
    t.phrasings[QaCategory::RisingEdges] = {
        "How many rising edges does the signal {signal} have?",
        "Count the rising edges of signal {signal}.",
        "How often does signal {signal} go from low to high?",
    };
    t.phrasings[QaCategory::FallingEdges] = {
        "How many falling edges does the signal {signal} have?",
        "Count the falling edges of signal {signal}.",
        "How often does signal {signal} go from high to low?",
    };
    return t;
  }

  static CaptionTemplates from_json(const nlohmann::json& j) {
    CaptionTemplates t;
    for (auto it = j.begin(); it != j.end(); ++it)
      t.phrasings[category_from_name(it.key())] = it.value().get<std::vector<std::string>>();
    return t;
  }
};

namespace capdetail {

inline std::string fill(std::string text, const std::string& key, const std::string& value) {
  std::size_t pos;
  while ((pos = text.find(key)) != std::string::npos) text.replace(pos, key.size(), value);
  return text;
}

}  // namespace capdetail

// Emit templated analytic QA pairs; every answer comes from trace_model
// queries. Question text is 1-indexed; grounding cycles stay 0-indexed.
inline std::vector<QaPair> generate_caption_qas(
    const TimingDiagram& td, std::uint64_t seed, const std::map<QaCategory, std::size_t>& quota,
    const CaptionTemplates& templates = CaptionTemplates::defaults(),
    const std::string& source_td = "") {
  Rng rng(seed);

  std::vector<std::string> any_signals, scalar_signals;
  for (const SignalTrace& s : td.signals) {
    if (s.name == td.clock_name) continue;  // the clock lane is presentation, not content
    any_signals.push_back(s.name);
    if (s.width == 1) scalar_signals.push_back(s.name);
  }

  std::vector<QaPair> out;
  for (const auto& [category, count] : quota) {
    if (count == 0) continue;
    const bool needs_scalar = category == QaCategory::Transitions ||
                              category == QaCategory::RisingEdges ||
                              category == QaCategory::FallingEdges;
    const std::vector<std::string>& pool = needs_scalar ? scalar_signals : any_signals;
    if (pool.empty())
      fail(Errc::QuotaInfeasible, std::string(category_name(category)) +
                                      " question needs a " +
                                      (needs_scalar ? "scalar signal" : "signal") +
                                      " but the diagram has none");
    auto tmpl_it = templates.phrasings.find(category);
    if (tmpl_it == templates.phrasings.end() || tmpl_it->second.empty())
      fail(Errc::QuotaInfeasible, std::string("no templates for ") + category_name(category));

    for (std::size_t i = 0; i < count; ++i) {
      const std::string& signal = pool[rng.below(pool.size())];
      std::size_t cycle = static_cast<std::size_t>(rng.below(td.num_cycles));
      std::string question = tmpl_it->second[rng.below(tmpl_it->second.size())];
      question = capdetail::fill(question, "{signal}", signal);
      question = capdetail::fill(question, "{cycle}", std::to_string(cycle + 1));

      QaPair pair;
      pair.category = category;
      pair.format = QaFormat::Statement;
      pair.question = question;
      pair.source_td = source_td;
      Clause clause;
      clause.signal = signal;
      switch (category) {
        case QaCategory::Value:
          clause.kind = Clause::Kind::SignalValue;
          clause.cycle = cycle;
          clause.expected = cycle_value_string(value_at_cycle(td, signal, cycle));
          pair.answer = clause.expected;
          break;
        case QaCategory::Sequence:
          clause.kind = Clause::Kind::ValueSequence;
          clause.expected = sequence_string(value_sequence(td, signal));
          pair.answer = clause.expected;
          break;
        case QaCategory::Transitions:
          clause.kind = Clause::Kind::TransitionCount;
          clause.expected = std::to_string(count_transitions(td, signal));
          pair.answer = clause.expected;
          break;
        case QaCategory::RisingEdges:
          clause.kind = Clause::Kind::RisingEdgeCount;
          clause.expected = std::to_string(count_rising_edges(td, signal));
          pair.answer = clause.expected;
          break;
        case QaCategory::FallingEdges:
          clause.kind = Clause::Kind::FallingEdgeCount;
          clause.expected = std::to_string(count_falling_edges(td, signal));
          pair.answer = clause.expected;
          break;
        default:
          fail(Errc::QuotaInfeasible, std::string(category_name(category)) +
                                          " is not an analytic caption category");
      }
      Grounding g;
      g.clauses.push_back(std::move(clause));
      pair.grounding = std::move(g);
      out.push_back(std::move(pair));
    }
  }
  return out;
}

// The four description-family pairs for a module whose name was
// descriptive enough to caption.
inline std::vector<QaPair> generate_description_qas(const TimingDiagram&,
                                                    const DescriptionBundle& bundle,
                                                    const std::string& source_td = "") {
  if (bundle.description.empty() || bundle.caption.empty() || bundle.summary.empty() ||
      bundle.use_cases.empty())
    fail(Errc::EmptyResponse, "description bundle has empty fields");
  auto make = [&](QaCategory cat, const std::string& q, const std::string& a) {
    QaPair p;
    p.category = cat;
    p.format = QaFormat::Statement;
    p.question = q;
    p.answer = a;
    p.source_td = source_td;
    return p;
  };
  return {
      make(QaCategory::Description, "Provide a description of what you see in this TD.",
           bundle.description),
      make(QaCategory::Caption, "Provide a caption for this TD.", bundle.caption),
      make(QaCategory::Summary, "Provide a summary of this TD.", bundle.summary),
      make(QaCategory::UseCase, "Provide a list of use cases for the module shown in this TD.",
           bundle.use_cases),
  };
}

}  // namespace tdgen
