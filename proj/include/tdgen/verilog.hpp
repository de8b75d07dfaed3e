#pragma once

#include <cstdint>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "tdgen/errors.hpp"
#include "tdgen/rng.hpp"
#include "tdgen/textgen.hpp"

namespace tdgen {

enum class PortDirection { Input, Output, Inout };

inline const char* direction_name(PortDirection d) {
  switch (d) {
    case PortDirection::Input: return "input";
    case PortDirection::Output: return "output";
    case PortDirection::Inout: return "inout";
  }
  return "?";
}

struct Port {
  std::string name;
  PortDirection direction = PortDirection::Input;
  std::size_t width = 1;
};

struct ModuleInfo {
  std::string name;
  std::vector<Port> ports;
  std::vector<std::string> name_parts;  // name split on '_'

  std::vector<Port> inputs() const {
    std::vector<Port> out;
    for (const Port& p : ports)
      if (p.direction == PortDirection::Input) out.push_back(p);
    return out;
  }
  std::vector<Port> outputs() const {
    std::vector<Port> out;
    for (const Port& p : ports)
      if (p.direction == PortDirection::Output) out.push_back(p);
    return out;
  }
};

struct DescriptionBundle {
  std::string description;
  std::string caption;
  std::string summary;
  std::string use_cases;
};

namespace vdetail {

inline std::string strip_comments(const std::string& src) {
  std::string out;
  out.reserve(src.size());
  std::size_t i = 0;
  while (i < src.size()) {
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (src.compare(i, 2, "/*") == 0) {
      i += 2;
      while (i + 1 < src.size() && src.compare(i, 2, "*/") != 0) ++i;
      i = std::min(i + 2, src.size());
      out.push_back(' ');
    } else {
      out.push_back(src[i++]);
    }
  }
  return out;
}

inline std::vector<std::string> split_parts(const std::string& name) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : name) {
    if (c == '_') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

inline std::size_t range_width(const std::string& msb, const std::string& lsb) {
  long a = std::stol(msb), b = std::stol(lsb);
  return static_cast<std::size_t>(a > b ? a - b : b - a) + 1;
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace vdetail

// Extract the interface of the single top-level module in `source`.
// Handles ANSI and non-ANSI port declarations; the body is otherwise
// ignored. No elaboration, no expression evaluation in ranges.
inline ModuleInfo parse_module_header(const std::string& source) {
  std::string src = vdetail::strip_comments(source);

  static const std::regex module_re(R"(\bmodule\s+([A-Za-z_][A-Za-z0-9_$]*))");
  auto begin = std::sregex_iterator(src.begin(), src.end(), module_re);
  auto end = std::sregex_iterator();
  std::size_t count = static_cast<std::size_t>(std::distance(begin, end));
  if (count == 0) fail(Errc::NoModuleFound, "no module declaration in source");
  if (count > 1) fail(Errc::MultipleModules, "expected exactly one module, found " +
                                             std::to_string(count));

  std::smatch m = *begin;
  ModuleInfo info;
  info.name = m[1].str();
  info.name_parts = vdetail::split_parts(info.name);

  std::size_t header_start = static_cast<std::size_t>(m.position(0));
  std::size_t semi = src.find(';', header_start);
  if (semi == std::string::npos) fail(Errc::UnparsablePortList, "module header not terminated");
  std::string header = src.substr(header_start, semi - header_start);

  std::size_t lp = header.find('(');
  if (lp == std::string::npos) return info;  // portless module
  std::size_t rp = header.rfind(')');
  if (rp == std::string::npos || rp < lp)
    fail(Errc::UnparsablePortList, "unbalanced port list parentheses");
  std::string plist = header.substr(lp + 1, rp - lp - 1);
  if (vdetail::trim(plist).empty()) return info;

  // split on commas; direction and range stick until the next direction
  static const std::regex entry_re(
      R"(^\s*(input|output|inout)?\s*(?:wire|reg|logic)?\s*(?:\[\s*(-?\d+)\s*:\s*(-?\d+)\s*\])?\s*([A-Za-z_][A-Za-z0-9_$]*)\s*$)");
  std::vector<std::string> entries;
  {
    std::string cur;
    for (char c : plist) {
      if (c == ',') {
        entries.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    entries.push_back(cur);
  }

  bool ansi = plist.find("input") != std::string::npos ||
              plist.find("output") != std::string::npos ||
              plist.find("inout") != std::string::npos;

  if (ansi) {
    PortDirection dir = PortDirection::Input;
    std::size_t width = 1;
    for (const std::string& raw : entries) {
      std::smatch em;
      if (!std::regex_match(raw, em, entry_re))
        fail(Errc::UnparsablePortList, "cannot parse port entry '" + vdetail::trim(raw) + "'");
      if (em[1].matched) {
        std::string d = em[1].str();
        dir = d == "input" ? PortDirection::Input
                           : (d == "output" ? PortDirection::Output : PortDirection::Inout);
        width = 1;  // a new direction resets the sticky range
      }
      if (em[2].matched) width = vdetail::range_width(em[2].str(), em[3].str());
      info.ports.push_back({em[4].str(), dir, width});
    }
  } else {
    // non-ANSI: names in the header, directions declared in the body
    std::string body = src.substr(semi + 1);
    static const std::regex decl_re(
        R"((input|output|inout)\s*(?:wire|reg|logic)?\s*(?:\[\s*(-?\d+)\s*:\s*(-?\d+)\s*\])?\s*([A-Za-z_][A-Za-z0-9_$]*(?:\s*,\s*[A-Za-z_][A-Za-z0-9_$]*)*)\s*;)");
    for (auto it = std::sregex_iterator(body.begin(), body.end(), decl_re);
         it != std::sregex_iterator(); ++it) {
      std::smatch dm = *it;
      std::string d = dm[1].str();
      PortDirection dir = d == "input" ? PortDirection::Input
                                       : (d == "output" ? PortDirection::Output
                                                        : PortDirection::Inout);
      std::size_t width = dm[2].matched ? vdetail::range_width(dm[2].str(), dm[3].str()) : 1;
      static const std::regex name_re(R"([A-Za-z_][A-Za-z0-9_$]*)");
      std::string names = dm[4].str();
      for (auto nit = std::sregex_iterator(names.begin(), names.end(), name_re);
           nit != std::sregex_iterator(); ++nit)
        info.ports.push_back({nit->str(), dir, width});
    }
    // keep header order
    std::vector<Port> ordered;
    for (const std::string& raw : entries) {
      std::string want = vdetail::trim(raw);
      bool found = false;
      for (const Port& p : info.ports)
        if (p.name == want) {
          ordered.push_back(p);
          found = true;
          break;
        }
      if (!found)
        fail(Errc::UnparsablePortList, "port '" + want + "' has no direction declaration");
    }
    info.ports = std::move(ordered);
  }

  for (std::size_t i = 0; i < info.ports.size(); ++i)
    for (std::size_t j = i + 1; j < info.ports.size(); ++j)
      if (info.ports[i].name == info.ports[j].name)
        fail(Errc::UnparsablePortList, "duplicate port name " + info.ports[i].name);
  return info;
}

// Re-serialize a ModuleInfo as a minimal ANSI header (used by tests and
// the idempotency property).
inline std::string module_header_source(const ModuleInfo& m) {
  std::ostringstream os;
  os << "module " << m.name << " (";
  for (std::size_t i = 0; i < m.ports.size(); ++i) {
    const Port& p = m.ports[i];
    if (i) os << ", ";
    os << direction_name(p.direction);
    if (p.width > 1) os << " [" << p.width - 1 << ":0]";
    os << " " << p.name;
  }
  os << ");\nendmodule\n";
  return os.str();
}

namespace vdetail {
inline std::string hex_literal(std::uint64_t v, std::size_t width) {
  std::ostringstream os;
  os << width << "'h" << std::hex << v;
  return os.str();
}
}  // namespace vdetail

// Emit a self-checking-free random-stimulus testbench. Inputs are driven
// on falling edges so posedge samples are stable; all random values are
// baked into the text, so one seed fixes the whole simulation.
inline std::string generate_testbench(const ModuleInfo& m, std::uint64_t seed,
                                      std::size_t num_cycles,
                                      std::uint64_t clock_period_ticks = 10) {
  if (num_cycles < 1) fail(Errc::BadConfig, "num_cycles must be >= 1");
  if (clock_period_ticks < 2 || clock_period_ticks % 2 != 0)
    fail(Errc::BadConfig, "clock_period_ticks must be a positive even number");
  Rng rng(seed);
  std::vector<Port> ins = m.inputs();

  std::ostringstream os;
  os << "`timescale 1ns/1ns\n";
  os << "module tb_" << m.name << ";\n";
  os << "  reg clk;\n";
  for (const Port& p : m.ports) {
    if (p.direction == PortDirection::Input) {
      os << "  reg ";
    } else {
      os << "  wire ";
    }
    if (p.width > 1) os << "[" << p.width - 1 << ":0] ";
    os << p.name << ";\n";
  }
  os << "  " << m.name << " dut (";
  for (std::size_t i = 0; i < m.ports.size(); ++i) {
    if (i) os << ", ";
    os << "." << m.ports[i].name << "(" << m.ports[i].name << ")";
  }
  os << ");\n";
  os << "  always #" << clock_period_ticks / 2 << " clk = ~clk;\n";
  os << "  initial begin\n";
  os << "    $dumpfile(\"tb_" << m.name << ".vcd\");\n";
  os << "    $dumpvars(0, tb_" << m.name << ");\n";
  os << "    clk = 0;\n";

  auto drive = [&](std::size_t cycle) {
    for (const Port& p : ins) {
      std::uint64_t mask = p.width >= 64 ? ~std::uint64_t{0}
                                         : ((std::uint64_t{1} << p.width) - 1);
      std::uint64_t v = rng.next() & mask;
      os << "    " << p.name << " = " << vdetail::hex_literal(v, p.width) << ";"
         << " // cycle " << cycle + 1 << "\n";
    }
  };

  if (!ins.empty()) {
    drive(0);
    for (std::size_t c = 1; c < num_cycles; ++c) {
      os << "    @(negedge clk);\n";
      drive(c);
    }
    os << "    @(negedge clk);\n";
    os << "    @(posedge clk);\n";
  } else {
    os << "    repeat (" << num_cycles << ") @(posedge clk);\n";
  }
  os << "    #1 $finish;\n";
  os << "  end\n";
  os << "endmodule\n";
  return os.str();
}

// The chain-of-thought description prompt, followed by the module facts.
inline std::string build_description_prompt(const ModuleInfo& m) {
  std::ostringstream os;
  os << "You are tasked with providing brief descriptions of various digital components "
        "based on limited data. For each one, provide a description of the component. "
        "To do this perform the following steps: "
        "1. Assume it is a Verilog module. "
        "2. Split the module's name by the '_' character. "
        "3. List and analyse each individual part of the module name. "
        "4. List and count the input and output ports. "
        "5. Analyse the names of the input and output ports. "
        "6. Determine the possible functionality of each of the ports. "
        "7. Determine the functionality of the module based on the individual parts of the "
        "name, and the I/O ports.\n\n";
  os << "Module name: " << m.name << "\n";
  os << "Name parts:";
  if (m.name_parts.empty()) os << " none";
  for (std::size_t i = 0; i < m.name_parts.size(); ++i)
    os << (i ? ", " : " ") << m.name_parts[i];
  os << "\nPorts:";
  if (m.ports.empty()) {
    os << " none\n";
  } else {
    os << "\n";
    for (const Port& p : m.ports)
      os << "  " << direction_name(p.direction) << " " << p.name << " (" << p.width
         << (p.width == 1 ? " bit)" : " bits)") << "\n";
  }
  return os.str();
}

// Follow-up wordings are this toolkit's choice (kept here, in one place).
inline constexpr const char* kDescriptionFollowUp =
    "Based on the analysis above, provide a detailed description of the module.";
inline constexpr const char* kCaptionFollowUp =
    "Based on the analysis above, provide a fitting caption for a timing diagram of this module.";
inline constexpr const char* kSummaryFollowUp =
    "Based on the analysis above, provide a brief summary of the timing diagram.";
inline constexpr const char* kUseCasesFollowUp =
    "Based on the analysis above, provide a list of use cases of the module.";

inline DescriptionBundle describe_module(const ModuleInfo& m, TextService& client) {
  std::string base = build_description_prompt(m);
  std::string analysis = client.complete(base);
  if (analysis.empty()) fail(Errc::EmptyResponse, "empty analysis for module " + m.name);

  auto follow = [&](const char* question) {
    std::string text = client.complete(base + "\nAnalysis:\n" + analysis + "\n\n" + question);
    if (text.empty()) fail(Errc::EmptyResponse, std::string("empty response to: ") + question);
    return text;
  };

  DescriptionBundle bundle;
  bundle.description = follow(kDescriptionFollowUp);
  bundle.caption = follow(kCaptionFollowUp);
  bundle.summary = follow(kSummaryFollowUp);
  bundle.use_cases = follow(kUseCasesFollowUp);
  return bundle;
}

}  // namespace tdgen
