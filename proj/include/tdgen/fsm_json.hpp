#pragma once

// Data-driven task machines: states, transition rows and register
// updates described in JSON, with guards and values in a small
// expression grammar (comparisons, boolean connectives, + and -,
// parity(x)). New tasks can be registered without recompiling.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdgen/errors.hpp"
#include "tdgen/fsm.hpp"

namespace tdgen {

namespace expr {

using Env = std::function<std::uint64_t(const std::string&)>;

struct Node {
  virtual ~Node() = default;
  virtual std::uint64_t eval(const Env& env) const = 0;
};

using NodePtr = std::shared_ptr<const Node>;

struct Literal : Node {
  std::uint64_t value;
  explicit Literal(std::uint64_t v) : value(v) {}
  std::uint64_t eval(const Env&) const override { return value; }
};

struct Ident : Node {
  std::string name;
  explicit Ident(std::string n) : name(std::move(n)) {}
  std::uint64_t eval(const Env& env) const override { return env(name); }
};

struct Unary : Node {
  char op;  // '!' or '-'
  NodePtr arg;
  Unary(char o, NodePtr a) : op(o), arg(std::move(a)) {}
  std::uint64_t eval(const Env& env) const override {
    std::uint64_t v = arg->eval(env);
    return op == '!' ? (v == 0 ? 1 : 0) : (0 - v);
  }
};

struct Parity : Node {
  NodePtr arg;
  explicit Parity(NodePtr a) : arg(std::move(a)) {}
  std::uint64_t eval(const Env& env) const override {
    return static_cast<std::uint64_t>(__builtin_popcountll(arg->eval(env)) & 1);
  }
};

struct Binary : Node {
  std::string op;
  NodePtr lhs, rhs;
  Binary(std::string o, NodePtr l, NodePtr r) : op(std::move(o)), lhs(std::move(l)), rhs(std::move(r)) {}
  std::uint64_t eval(const Env& env) const override {
    std::uint64_t a = lhs->eval(env);
    if (op == "&&") return a != 0 && rhs->eval(env) != 0;
    if (op == "||") return a != 0 || rhs->eval(env) != 0;
    std::uint64_t b = rhs->eval(env);
    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    if (op == ">=") return a >= b;
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    fail(Errc::BadMachineDefinition, "unknown operator " + op);
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = parse_or();
    skip_ws();
    if (pos_ != text_.size())
      fail(Errc::BadMachineDefinition, "trailing input in expression: " + text_.substr(pos_));
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool eat(const char* tok) {
    skip_ws();
    std::size_t n = std::string(tok).size();
    if (text_.compare(pos_, n, tok) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  NodePtr parse_or() {
    NodePtr lhs = parse_and();
    while (eat("||")) lhs = std::make_shared<Binary>("||", lhs, parse_and());
    return lhs;
  }

  NodePtr parse_and() {
    NodePtr lhs = parse_cmp();
    while (eat("&&")) lhs = std::make_shared<Binary>("&&", lhs, parse_cmp());
    return lhs;
  }

  NodePtr parse_cmp() {
    NodePtr lhs = parse_add();
    for (const char* op : {"==", "!=", "<=", ">=", "<", ">"})
      if (eat(op)) return std::make_shared<Binary>(op, lhs, parse_add());
    return lhs;
  }

  NodePtr parse_add() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat("+")) lhs = std::make_shared<Binary>("+", lhs, parse_unary());
      else if (eat("-")) lhs = std::make_shared<Binary>("-", lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat("!")) return std::make_shared<Unary>('!', parse_unary());
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail(Errc::BadMachineDefinition, "unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_or();
      if (!eat(")")) fail(Errc::BadMachineDefinition, "missing ')'");
      return e;
    }
    if (c >= '0' && c <= '9') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      return std::make_shared<Literal>(std::stoull(text_.substr(start, pos_ - start)));
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "parity") {
        if (!eat("(")) fail(Errc::BadMachineDefinition, "parity needs '('");
        NodePtr e = parse_or();
        if (!eat(")")) fail(Errc::BadMachineDefinition, "missing ')' after parity");
        return std::make_shared<Parity>(e);
      }
      return std::make_shared<Ident>(name);
    }
    fail(Errc::BadMachineDefinition, std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

inline NodePtr parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace expr

// Build a TaskMachine from its JSON description. Transition rows are
// tried in order, first true guard wins, no match means stay; register
// updates likewise, unmatched registers hold. Identifiers resolve to
// inputs, registers, `state`, and state names (as their indices).
inline TaskMachine machine_from_json(const nlohmann::json& j) {
  TaskMachine m;
  try {
    m.name = j.at("name").get<std::string>();
    m.state_names = j.at("states").get<std::vector<std::string>>();
    if (m.state_names.empty()) fail(Errc::BadMachineDefinition, "no states");

    auto state_index = [&m](const std::string& s) -> int {
      for (std::size_t i = 0; i < m.state_names.size(); ++i)
        if (m.state_names[i] == s) return static_cast<int>(i);
      fail(Errc::BadMachineDefinition, "unknown state " + s);
    };
    m.initial_state = state_index(j.at("initial").get<std::string>());
    if (j.contains("inputs")) m.inputs = j.at("inputs").get<std::vector<std::string>>();
    if (j.contains("registers"))
      for (const nlohmann::json& r : j.at("registers"))
        m.registers.push_back({r.at("name").get<std::string>(),
                               r.value("width", std::size_t{1}),
                               r.value("reset", std::uint64_t{0})});

    struct Transition {
      int from;
      expr::NodePtr guard;  // null = always
      int to;
    };
    auto transitions = std::make_shared<std::vector<Transition>>();
    if (j.contains("transitions"))
      for (const nlohmann::json& t : j.at("transitions")) {
        Transition tr;
        tr.from = state_index(t.at("from").get<std::string>());
        tr.to = state_index(t.at("to").get<std::string>());
        if (t.contains("guard")) tr.guard = expr::parse(t.at("guard").get<std::string>());
        transitions->push_back(std::move(tr));
      }

    struct Update {
      std::string reg;
      expr::NodePtr when;  // null = always
      expr::NodePtr value;
    };
    auto updates = std::make_shared<std::vector<Update>>();
    if (j.contains("updates"))
      for (const nlohmann::json& u : j.at("updates")) {
        Update up;
        up.reg = u.at("register").get<std::string>();
        if (u.contains("when")) up.when = expr::parse(u.at("when").get<std::string>());
        up.value = expr::parse(u.at("value").get<std::string>());
        bool declared = false;
        for (const RegisterSpec& rs : m.registers) declared |= rs.name == up.reg;
        if (!declared) fail(Errc::BadMachineDefinition, "update for undeclared register " + up.reg);
        updates->push_back(std::move(up));
      }

    std::vector<std::pair<std::string, std::vector<int>>> moore;
    if (j.contains("moore_outputs"))
      for (const nlohmann::json& o : j.at("moore_outputs")) {
        std::vector<int> high;
        for (const nlohmann::json& s : o.at("high_in"))
          high.push_back(state_index(s.get<std::string>()));
        std::string name = o.at("name").get<std::string>();
        m.moore_output_specs.push_back({name, 1});
        moore.emplace_back(std::move(name), std::move(high));
      }

    auto state_names = m.state_names;
    m.moore_outputs = [moore](int state) {
      RegFile out;
      for (const auto& [name, high] : moore) {
        std::uint64_t v = 0;
        for (int s : high)
          if (s == state) v = 1;
        out[name] = v;
      }
      return out;
    };

    std::vector<std::pair<std::string, std::uint64_t>> reg_masks;
    for (const RegisterSpec& rs : m.registers)
      reg_masks.emplace_back(rs.name, rs.width >= 64 ? ~std::uint64_t{0}
                                                     : ((std::uint64_t{1} << rs.width) - 1));

    m.next = [transitions, updates, state_names, reg_masks](
                 int state, const RegFile& regs, const InputMap& in) -> std::pair<int, RegFile> {
      expr::Env env = [&](const std::string& name) -> std::uint64_t {
        if (name == "state") return static_cast<std::uint64_t>(state);
        if (auto it = regs.find(name); it != regs.end()) return it->second;
        if (auto it = in.find(name); it != in.end()) return it->second;
        for (std::size_t i = 0; i < state_names.size(); ++i)
          if (state_names[i] == name) return i;
        fail(Errc::BadMachineDefinition, "unknown identifier " + name);
      };

      int next_state = state;
      for (const auto& t : *transitions) {
        if (t.from != state) continue;
        if (!t.guard || t.guard->eval(env) != 0) {
          next_state = t.to;
          break;
        }
      }
      RegFile next_regs = regs;
      std::vector<std::string> written;
      for (const auto& u : *updates) {
        bool done = false;
        for (const std::string& w : written) done |= w == u.reg;
        if (done) continue;
        if (!u.when || u.when->eval(env) != 0) {
          std::uint64_t mask = ~std::uint64_t{0};
          for (const auto& [rn, rm] : reg_masks)
            if (rn == u.reg) mask = rm;
          next_regs[u.reg] = u.value->eval(env) & mask;
          written.push_back(u.reg);
        }
      }
      return {next_state, next_regs};
    };
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::BadMachineDefinition, e.what());
  }
  return m;
}

inline TaskMachine machine_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::BadMachineDefinition, e.what());
  }
  return machine_from_json(j);
}

}  // namespace tdgen
