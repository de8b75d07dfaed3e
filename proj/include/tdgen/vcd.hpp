#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tdgen/errors.hpp"
#include "tdgen/logic.hpp"

namespace tdgen {

struct VarDecl {
  std::string id_code;         // short token, e.g. "!"
  std::string reference_name;  // hierarchical, e.g. "tb.dut.clk"
  std::size_t width = 1;
  std::string kind = "wire";  // wire | reg
};

struct VcdEvent {
  std::uint64_t time = 0;
  std::size_t var = 0;  // index into declarations
  LogicVector value;    // width-length, MSB first
};

struct VcdDocument {
  std::uint64_t timescale_magnitude = 1;
  std::string timescale_unit = "ns";
  std::vector<VarDecl> declarations;
  std::vector<VcdEvent> events;  // time-ordered
  std::uint64_t end_time = 0;

  std::size_t var_index(const std::string& id_code) const {
    for (std::size_t i = 0; i < declarations.size(); ++i)
      if (declarations[i].id_code == id_code) return i;
    fail(Errc::UnknownVarId, id_code);
  }

  // Exact hierarchical match first; otherwise a leaf name ("clk" for
  // "top.clk") works as long as it is unambiguous.
  std::size_t var_index_by_name(const std::string& name) const {
    for (std::size_t i = 0; i < declarations.size(); ++i)
      if (declarations[i].reference_name == name) return i;
    std::size_t found = declarations.size();
    for (std::size_t i = 0; i < declarations.size(); ++i) {
      const std::string& ref = declarations[i].reference_name;
      if (ref.size() > name.size() + 1 && ref.compare(ref.size() - name.size(), name.size(), name) == 0 &&
          ref[ref.size() - name.size() - 1] == '.') {
        if (found != declarations.size())
          fail(Errc::UnknownSignal, name + " is ambiguous in this dump");
        found = i;
      }
    }
    if (found == declarations.size()) fail(Errc::UnknownSignal, name);
    return found;
  }
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

class VcdTokens {
 public:
  explicit VcdTokens(const std::string& text) : text_(text) {}

  bool next(std::string& tok) {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    if (pos_ >= text_.size()) return false;
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    tok.assign(text_, start, pos_ - start);
    return true;
  }

  std::string expect(const char* what) {
    std::string tok;
    if (!next(tok)) fail(Errc::MalformedHeader, std::string("unexpected end of file, expected ") + what);
    return tok;
  }

  // Consume tokens up to and including $end, returning them joined by spaces.
  std::string until_end(const char* section) {
    std::string out, tok;
    while (next(tok)) {
      if (tok == "$end") return out;
      if (!out.empty()) out.push_back(' ');
      out += tok;
    }
    fail(Errc::MalformedHeader, std::string(section) + " not closed by $end");
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

inline void parse_timescale(const std::string& body, VcdDocument& doc) {
  // forms: "1ns" or "1 ns"
  std::size_t i = 0;
  while (i < body.size() && is_space(body[i])) ++i;
  std::size_t d0 = i;
  while (i < body.size() && body[i] >= '0' && body[i] <= '9') ++i;
  if (d0 == i) fail(Errc::MalformedHeader, "bad $timescale: " + body);
  doc.timescale_magnitude = std::stoull(body.substr(d0, i - d0));
  while (i < body.size() && is_space(body[i])) ++i;
  std::string unit = body.substr(i);
  if (unit.empty()) fail(Errc::MalformedHeader, "missing $timescale unit");
  doc.timescale_unit = unit;
}

}  // namespace detail

// Parse the supported VCD subset: $timescale, $scope/$upscope (flattened
// into dotted hierarchical names), $var wire|reg, $dumpvars, scalar and
// vector value changes with x/z. Anything else errors loudly.
inline VcdDocument parse_vcd(const std::string& text) {
  VcdDocument doc;
  detail::VcdTokens toks(text);
  std::vector<std::string> scope;
  std::string tok;
  bool defs_done = false;

  while (toks.next(tok)) {
    if (tok == "$timescale") {
      detail::parse_timescale(toks.until_end("$timescale"), doc);
    } else if (tok == "$date" || tok == "$version" || tok == "$comment") {
      toks.until_end(tok.c_str());
    } else if (tok == "$scope") {
      std::string body = toks.until_end("$scope");  // "module name"
      std::size_t sp = body.find(' ');
      scope.push_back(sp == std::string::npos ? body : body.substr(sp + 1));
    } else if (tok == "$upscope") {
      toks.until_end("$upscope");
      if (!scope.empty()) scope.pop_back();
    } else if (tok == "$var") {
      VarDecl v;
      v.kind = toks.expect("$var kind");
      if (v.kind != "wire" && v.kind != "reg")
        fail(Errc::MalformedHeader, "unsupported $var kind: " + v.kind);
      std::string w = toks.expect("$var width");
      v.width = std::stoull(w);
      if (v.width == 0) fail(Errc::MalformedHeader, "zero-width $var");
      v.id_code = toks.expect("$var id");
      std::string rest = toks.until_end("$var");  // "name" or "name [7:0]"
      std::size_t sp = rest.find(' ');
      std::string name = sp == std::string::npos ? rest : rest.substr(0, sp);
      std::string prefix;
      for (const std::string& s : scope) prefix += s + ".";
      v.reference_name = prefix + name;
      for (const VarDecl& d : doc.declarations)
        if (d.id_code == v.id_code)
          fail(Errc::MalformedHeader, "duplicate $var id: " + v.id_code);
      doc.declarations.push_back(std::move(v));
    } else if (tok == "$enddefinitions") {
      toks.until_end("$enddefinitions");
      defs_done = true;
      break;
    } else {
      fail(Errc::MalformedHeader, "unsupported header token: " + tok);
    }
  }
  if (!defs_done) fail(Errc::MalformedHeader, "missing $enddefinitions");

  std::uint64_t now = 0;
  bool saw_time = false;
  while (toks.next(tok)) {
    if (tok == "$dumpvars" || tok == "$end") continue;  // initial block markers
    if (tok[0] == '#') {
      std::uint64_t t = std::stoull(tok.substr(1));
      if (saw_time && t < now) fail(Errc::ParseFailure, "timestamps decrease at #" + tok.substr(1));
      now = t;
      saw_time = true;
      doc.end_time = std::max(doc.end_time, now);
      continue;
    }
    if (tok[0] == 'b' || tok[0] == 'B') {
      LogicVector bits;
      for (std::size_t i = 1; i < tok.size(); ++i) bits.push_back(logic_from_char(tok[i]));
      std::string id = toks.expect("vector change id");
      std::size_t vi = doc.var_index(id);
      doc.events.push_back({now, vi, extend_vector(std::move(bits), doc.declarations[vi].width)});
      continue;
    }
    // scalar change: value char glued to the id code
    char c = tok[0];
    if (c == '0' || c == '1' || c == 'x' || c == 'X' || c == 'z' || c == 'Z') {
      if (tok.size() < 2) fail(Errc::ParseFailure, "scalar change without id: " + tok);
      std::size_t vi = doc.var_index(tok.substr(1));
      if (doc.declarations[vi].width != 1)
        fail(Errc::WidthMismatch, "scalar change on vector var " + doc.declarations[vi].reference_name);
      doc.events.push_back({now, vi, {logic_from_char(c)}});
      continue;
    }
    fail(Errc::ParseFailure, "unsupported value change token: " + tok);
  }
  return doc;
}

// Inverse of parse_vcd on the supported subset (flat scope).
inline std::string serialize_vcd(const VcdDocument& doc) {
  std::ostringstream os;
  os << "$timescale " << doc.timescale_magnitude << doc.timescale_unit << " $end\n";
  for (const VarDecl& v : doc.declarations)
    os << "$var " << v.kind << " " << v.width << " " << v.id_code << " " << v.reference_name
       << " $end\n";
  os << "$enddefinitions $end\n";
  bool have_time = false;
  std::uint64_t cur = 0;
  for (const VcdEvent& e : doc.events) {
    if (!have_time || e.time != cur) {
      os << "#" << e.time << "\n";
      cur = e.time;
      have_time = true;
    }
    const VarDecl& v = doc.declarations[e.var];
    if (v.width == 1)
      os << logic_char(e.value[0]) << v.id_code << "\n";
    else
      os << "b" << logic_vector_string(e.value) << " " << v.id_code << "\n";
  }
  if (!have_time || cur != doc.end_time) os << "#" << doc.end_time << "\n";
  return os.str();
}

// Value of var `var_idx` at time t: most recent event at or before t;
// Unknown before the first event. Total in t (the declared end_time is
// advisory; later times return the final value).
inline CycleValue value_at_time(const VcdDocument& doc, std::size_t var_idx, std::uint64_t t) {
  if (var_idx >= doc.declarations.size()) fail(Errc::UnknownVarId, "var index out of range");
  auto it = std::upper_bound(doc.events.begin(), doc.events.end(), t,
                             [](std::uint64_t tt, const VcdEvent& e) { return tt < e.time; });
  const LogicVector* last = nullptr;
  while (it != doc.events.begin()) {
    --it;
    if (it->var == var_idx) {
      last = &it->value;
      break;
    }
  }
  if (last == nullptr) {
    if (doc.declarations[var_idx].width == 1) return CycleValue::make_bit(LogicValue::Unknown);
    return CycleValue::word_unknown();
  }
  return CycleValue::from_bits(*last);
}

inline CycleValue value_at_time(const VcdDocument& doc, const std::string& id_code,
                                std::uint64_t t) {
  return value_at_time(doc, doc.var_index(id_code), t);
}

}  // namespace tdgen
