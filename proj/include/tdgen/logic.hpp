#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdgen/errors.hpp"

namespace tdgen {

enum class LogicValue : std::uint8_t { Bit0, Bit1, Unknown, HighZ };

inline char logic_char(LogicValue v) {
  switch (v) {
    case LogicValue::Bit0: return '0';
    case LogicValue::Bit1: return '1';
    case LogicValue::Unknown: return 'x';
    case LogicValue::HighZ: return 'z';
  }
  return 'x';
}

inline LogicValue logic_from_char(char c) {
  switch (c) {
    case '0': return LogicValue::Bit0;
    case '1': return LogicValue::Bit1;
    case 'x':
    case 'X': return LogicValue::Unknown;
    case 'z':
    case 'Z': return LogicValue::HighZ;
  }
  fail(Errc::ParseFailure, std::string("not a logic value: '") + c + "'");
}

// Vector value, index 0 = MSB (VCD text order).
using LogicVector = std::vector<LogicValue>;

inline std::string logic_vector_string(const LogicVector& v) {
  std::string s;
  s.reserve(v.size());
  for (LogicValue b : v) s.push_back(logic_char(b));
  return s;
}

// Left-extend to `width` per VCD rules: pad with 0, except x/z extend themselves.
inline LogicVector extend_vector(LogicVector v, std::size_t width) {
  if (v.size() > width) fail(Errc::WidthMismatch, "vector wider than declaration");
  if (v.size() < width) {
    LogicValue msb = v.empty() ? LogicValue::Unknown : v.front();
    LogicValue pad =
        (msb == LogicValue::Unknown || msb == LogicValue::HighZ) ? msb : LogicValue::Bit0;
    LogicVector out(width - v.size(), pad);
    out.insert(out.end(), v.begin(), v.end());
    return out;
  }
  return v;
}

// One sampled value of one signal in one clock cycle.
// Scalar signals hold a Bit; buses hold a numeric Word, or Unknown/HighZ
// when the underlying bits are not fully defined. A Word may carry a
// display label (used for FSM state lanes).
struct CycleValue {
  enum class Kind : std::uint8_t { Bit, Word, WordUnknown, WordHighZ };

  Kind kind = Kind::Bit;
  LogicValue bit = LogicValue::Unknown;
  std::uint64_t word = 0;
  std::optional<std::string> label;

  static CycleValue make_bit(LogicValue v) {
    CycleValue c;
    c.kind = Kind::Bit;
    c.bit = v;
    return c;
  }
  static CycleValue make_word(std::uint64_t w, std::optional<std::string> lbl = std::nullopt) {
    CycleValue c;
    c.kind = Kind::Word;
    c.word = w;
    c.label = std::move(lbl);
    return c;
  }
  static CycleValue word_unknown() {
    CycleValue c;
    c.kind = Kind::WordUnknown;
    return c;
  }
  static CycleValue word_highz() {
    CycleValue c;
    c.kind = Kind::WordHighZ;
    return c;
  }

  static CycleValue from_bits(const LogicVector& bits) {
    if (bits.size() == 1) return make_bit(bits[0]);
    bool any_x = false, all_z = true;
    for (LogicValue b : bits) {
      if (b == LogicValue::Unknown) any_x = true;
      if (b != LogicValue::HighZ) all_z = false;
    }
    if (all_z && !bits.empty()) return word_highz();
    if (any_x) return word_unknown();
    std::uint64_t w = 0;
    for (LogicValue b : bits) {
      w <<= 1;
      if (b == LogicValue::HighZ) return word_unknown();  // mixed z
      if (b == LogicValue::Bit1) w |= 1;
    }
    return make_word(w);
  }

  bool is_bit() const { return kind == Kind::Bit; }
  bool defined() const {
    if (kind == Kind::Bit) return bit == LogicValue::Bit0 || bit == LogicValue::Bit1;
    return kind == Kind::Word;
  }

  bool operator==(const CycleValue& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Bit) return bit == o.bit;
    if (kind == Kind::Word) return word == o.word && label == o.label;
    return true;
  }
};

inline std::string hex_string(std::uint64_t w) {
  static const char* digits = "0123456789abcdef";
  if (w == 0) return "0x0";
  std::string s;
  while (w != 0) {
    s.push_back(digits[w & 0xf]);
    w >>= 4;
  }
  s += "x0";
  return std::string(s.rbegin(), s.rend());
}

// Display form: bit as 0/1/x/z, word as label or 0x-hex.
inline std::string cycle_value_string(const CycleValue& v) {
  switch (v.kind) {
    case CycleValue::Kind::Bit: return std::string(1, logic_char(v.bit));
    case CycleValue::Kind::Word: return v.label ? *v.label : hex_string(v.word);
    case CycleValue::Kind::WordUnknown: return "x";
    case CycleValue::Kind::WordHighZ: return "z";
  }
  return "x";
}

}  // namespace tdgen
