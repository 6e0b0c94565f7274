#include "pftpha/pft_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pftpha/error.h"
#include "pftpha/format.h"

namespace pftpha {

// ---------------------------------------------------------------------------
// Model queries

const ParamType* PftModel::find_type(std::string_view type_name) const {
  for (const auto& t : types)
    if (t.name == type_name) return &t;
  return nullptr;
}

const EventNode* PftModel::find_event(std::string_view event_name) const {
  for (const auto& e : events)
    if (e.name == event_name) return &e;
  return nullptr;
}

const Gate* PftModel::gate_for(std::string_view event_name) const {
  for (const auto& g : gates)
    if (g.output == event_name) return &g;
  return nullptr;
}

std::optional<double> PftModel::rate_of(std::string_view event_class) const {
  for (const auto& r : rates)
    if (r.event_class == event_class) return r.lambda;
  return std::nullopt;
}

const EventNode* PftModel::top() const {
  const EventNode* found = nullptr;
  for (const auto& e : events) {
    if (!e.is_top()) continue;
    if (found) return nullptr;
    found = &e;
  }
  return found;
}

std::vector<Parameter> PftModel::parameters() const {
  std::vector<Parameter> out;
  auto slot = [&](const FormalParam& p) -> Parameter& {
    for (auto& q : out)
      if (q.name == p.name) return q;
    out.push_back({p.name, p.type, {}});
    return out.back();
  };
  for (const auto& e : events)
    for (const auto& p : e.params) slot(p);
  for (const auto& g : gates) {
    for (const auto& in : g.inputs) {
      for (const auto& p : in.declared) {
        auto& param = slot(p);
        auto& sites = param.declared_at;
        if (std::find(sites.begin(), sites.end(), in.ref.event) == sites.end())
          sites.push_back(in.ref.event);
      }
    }
  }
  return out;
}

std::vector<FormalParam> PftModel::declared_at(
    std::string_view event_name) const {
  std::vector<FormalParam> out;
  for (const auto& g : gates) {
    for (const auto& in : g.inputs) {
      if (in.ref.event != event_name) continue;
      for (const auto& p : in.declared) {
        bool seen = std::any_of(out.begin(), out.end(),
                                [&](const auto& q) { return q.name == p.name; });
        if (!seen) out.push_back(p);
      }
    }
  }
  return out;
}

bool PftModel::is_replicator(std::string_view event_name) const {
  return !declared_at(event_name).empty();
}

std::vector<std::vector<int>> PftModel::tuples(
    const std::vector<FormalParam>& params) const {
  std::vector<std::vector<int>> out{{}};
  for (const auto& p : params) {
    const ParamType* type = find_type(p.type);
    if (!type) throw ValidationError("unknown type " + p.type);
    std::vector<std::vector<int>> next;
    next.reserve(out.size() * type->values.size());
    for (const auto& prefix : out) {
      for (int v : type->values) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Naming

std::string predicate_name(std::string_view event_class) {
  std::string out(event_class);
  for (auto& c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

std::string variable_name(std::string_view param) {
  std::string out(param);
  for (auto& c : out) c = static_cast<char>(std::toupper(c));
  return out;
}

std::string ground_label(std::string_view event_class,
                         const std::vector<int>& args) {
  std::string out(event_class);
  if (args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(args[i]);
  }
  out += ')';
  return out;
}

double failure_probability(double lambda, double t_hours) {
  if (!(lambda >= 0.0)) throw DomainError("failure rate must be nonnegative");
  if (!(t_hours >= 0.0)) throw DomainError("time must be nonnegative");
  return -std::expm1(-lambda * t_hours);
}

// ---------------------------------------------------------------------------
// DSL lexer

namespace {

enum class Tok { ident, number, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 0;
  int column = 0;
};

std::vector<Token> lex_line(const std::string& line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return k < line.size() ? line[k] : '\0'; };
  while (i < line.size()) {
    char c = line[i];
    int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '-' && at(i + 1) == '-') {
      break;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      out.push_back({Tok::ident, line.substr(i, j - i), line_no, col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
               ((c == '-' || c == '+') &&
                (std::isdigit(static_cast<unsigned char>(at(i + 1))) ||
                 at(i + 1) == '.'))) {
      std::size_t j = i + 1;
      while (j < line.size()) {
        char d = line[j];
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.') {
          ++j;
        } else if ((d == 'e' || d == 'E') &&
                   (std::isdigit(static_cast<unsigned char>(at(j + 1))) ||
                    ((at(j + 1) == '-' || at(j + 1) == '+') &&
                     std::isdigit(static_cast<unsigned char>(at(j + 2)))))) {
          j += 2;
        } else {
          break;
        }
      }
      out.push_back({Tok::number, line.substr(i, j - i), line_no, col});
      i = j;
    } else if (std::string_view("(),:={}").find(c) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, c), line_no, col});
      ++i;
    } else {
      throw ParseError(line_no, col, std::string("unexpected character '") + c +
                                         "'");
    }
  }
  out.push_back({Tok::end, "", line_no, static_cast<int>(line.size()) + 1});
  return out;
}

bool parse_int(const std::string& text, int& out) {
  if (text.empty()) return false;
  std::size_t pos = 0;
  try {
    long v = std::stol(text, &pos);
    if (pos != text.size()) return false;
    out = static_cast<int>(v);
    return true;
  } catch (...) {
    return false;
  }
}

// Parses one statement line into the model under construction.
class LineParser {
 public:
  LineParser(std::vector<Token> tokens, PftModel& model)
      : toks_(std::move(tokens)), model_(model) {}

  void statement() {
    const Token& kw = expect_ident();
    if (kw.text == "model") {
      model_.name = expect_ident().text;
    } else if (kw.text == "type") {
      type_decl();
    } else if (kw.text == "basic") {
      basic_decl();
    } else if (kw.text == "event") {
      gate_decl(EventKind::internal);
    } else if (kw.text == "top") {
      gate_decl(EventKind::top);
    } else {
      fail(kw, "unknown statement '" + kw.text + "'");
    }
    if (peek().kind != Tok::end) fail(peek(), "unexpected '" + peek().text + "'");
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, msg);
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::end) ++pos_;
    return t;
  }
  bool accept(const char* punct) {
    if (peek().kind == Tok::punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* punct) {
    if (!accept(punct)) {
      const Token& t = peek();
      fail(t, std::string("expected '") + punct + "' but found " +
                  (t.kind == Tok::end ? "end of line" : "'" + t.text + "'"));
    }
  }
  const Token& expect_ident() {
    const Token& t = peek();
    if (t.kind != Tok::ident)
      fail(t, "expected identifier but found " +
                  (t.kind == Tok::end ? std::string("end of line")
                                      : "'" + t.text + "'"));
    return next();
  }
  int expect_int() {
    const Token& t = peek();
    int v = 0;
    if (t.kind != Tok::number || !parse_int(t.text, v))
      fail(t, "expected integer but found " +
                  (t.kind == Tok::end ? std::string("end of line")
                                      : "'" + t.text + "'"));
    next();
    return v;
  }

  void type_decl() {
    const Token& name = expect_ident();
    ParamType type{name.text, {}, {name.line, name.column}};
    expect("=");
    expect("{");
    if (!accept("}")) {
      do {
        const Token& vt = peek();
        int v = expect_int();
        if (std::find(type.values.begin(), type.values.end(), v) !=
            type.values.end())
          fail(vt, "duplicate value " + std::to_string(v) + " in type " +
                       type.name);
        type.values.push_back(v);
      } while (accept(","));
      expect("}");
    }
    if (model_.find_type(type.name))
      fail(name, "duplicate declaration of type " + type.name);
    model_.types.push_back(std::move(type));
  }

  std::vector<FormalParam> formal_list() {
    std::vector<FormalParam> params;
    if (!accept("(")) return params;
    do {
      FormalParam p;
      p.name = expect_ident().text;
      expect(":");
      p.type = expect_ident().text;
      params.push_back(std::move(p));
    } while (accept(","));
    expect(")");
    return params;
  }

  EventNode event_header(EventKind kind) {
    const Token& name = expect_ident();
    EventNode node{name.text, formal_list(), kind, {name.line, name.column}};
    if (model_.find_event(node.name))
      fail(name, "duplicate declaration of event " + node.name);
    return node;
  }

  void basic_decl() {
    EventNode node = event_header(EventKind::basic);
    const Token& t = peek();
    if (t.kind == Tok::end)
      fail(t, "missing failure rate for " + node.name);
    const Token& kw = expect_ident();
    if (kw.text != "rate") fail(kw, "expected 'rate'");
    const Token& num = peek();
    double lambda = 0.0;
    if (num.kind != Tok::number || !parse_double(num.text, lambda))
      fail(num, "expected failure rate");
    next();
    model_.rates.push_back({node.name, lambda});
    model_.events.push_back(std::move(node));
  }

  EventRef ref() {
    const Token& name = expect_ident();
    EventRef r{name.text, {}, {name.line, name.column}};
    if (accept("(")) {
      do {
        const Token& t = peek();
        if (t.kind == Tok::ident) {
          r.args.push_back(RefArg::parameter(next().text));
        } else {
          r.args.push_back(RefArg::constant(expect_int()));
        }
      } while (accept(","));
      expect(")");
    }
    return r;
  }

  GateInput item() {
    GateInput in;
    if (peek().kind == Tok::ident && peek().text == "forall") {
      next();
      in.declared = formal_list();
      if (in.declared.empty()) fail(peek(), "forall needs at least one parameter");
    }
    in.ref = ref();
    return in;
  }

  void inputs(Gate& g) {
    if (peek().kind == Tok::ident && peek().text == "forall") {
      g.inputs.push_back(item());
      return;
    }
    expect("(");
    do {
      g.inputs.push_back(item());
    } while (accept(","));
    expect(")");
  }

  void gate_decl(EventKind kind) {
    EventNode node = event_header(kind);
    expect("=");
    const Token& op = expect_ident();
    Gate g;
    g.output = node.name;
    g.pos = {op.line, op.column};
    if (op.text == "and") {
      g.kind = GateKind::and_gate;
    } else if (op.text == "or") {
      g.kind = GateKind::or_gate;
    } else if (op.text == "vote") {
      g.kind = GateKind::k_of_n;
      expect("(");
      g.k = expect_int();
      expect(":");
      g.n = expect_int();
      expect(")");
    } else {
      fail(op, "unknown gate '" + op.text + "'");
    }
    inputs(g);
    model_.events.push_back(std::move(node));
    model_.gates.push_back(std::move(g));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  PftModel& model_;
};

// Name resolution and typing over the complete document.
void resolve(PftModel& model) {
  std::map<std::string, std::string> param_types;
  auto bind_param = [&](const std::string& name, const std::string& type,
                        SourcePos pos) {
    if (!model.find_type(type))
      throw ParseError(pos.line, pos.column, "unknown type " + type);
    auto [it, inserted] = param_types.emplace(name, type);
    if (!inserted && it->second != type)
      throw ParseError(pos.line, pos.column,
                       "type mismatch: parameter " + name + " has type " +
                           it->second + " but is used with type " + type);
  };
  for (const auto& e : model.events)
    for (const auto& p : e.params) bind_param(p.name, p.type, e.pos);

  for (auto& g : model.gates) {
    const EventNode* out = model.find_event(g.output);
    for (auto& in : g.inputs) {
      const SourcePos pos = in.ref.pos;
      for (const auto& p : in.declared) bind_param(p.name, p.type, pos);
      const EventNode* target = model.find_event(in.ref.event);
      if (!target)
        throw ParseError(pos.line, pos.column, "unknown event " + in.ref.event);
      if (target->params.size() != in.ref.args.size())
        throw ParseError(pos.line, pos.column,
                         in.ref.event + " expects " +
                             std::to_string(target->params.size()) +
                             " arguments, got " +
                             std::to_string(in.ref.args.size()));
      for (std::size_t k = 0; k < in.ref.args.size(); ++k) {
        const RefArg& arg = in.ref.args[k];
        const FormalParam& formal = target->params[k];
        if (arg.is_param()) {
          auto it = param_types.find(*arg.param);
          if (it == param_types.end())
            throw ParseError(pos.line, pos.column,
                             "unknown parameter " + *arg.param);
          if (it->second != formal.type)
            throw ParseError(pos.line, pos.column,
                             "type mismatch: parameter " + *arg.param +
                                 " has type " + it->second + " but " +
                                 in.ref.event + " expects " + formal.type);
        } else {
          const ParamType* type = model.find_type(formal.type);
          if (std::find(type->values.begin(), type->values.end(), arg.value) ==
              type->values.end())
            throw ParseError(pos.line, pos.column,
                             "type mismatch: value " +
                                 std::to_string(arg.value) +
                                 " is not in type " + formal.type);
        }
      }
      // A parametric reference inside an OR gate whose parameter is not bound
      // by the output event folds the replicas into the disjunction.
      if (g.kind == GateKind::or_gate && !in.is_replicated() && out) {
        for (std::size_t k = 0; k < in.ref.args.size(); ++k) {
          const RefArg& arg = in.ref.args[k];
          if (!arg.is_param()) continue;
          bool bound = std::any_of(
              out->params.begin(), out->params.end(),
              [&](const FormalParam& f) { return f.name == *arg.param; });
          if (!bound)
            in.declared.push_back({*arg.param, param_types.at(*arg.param)});
        }
      }
    }
  }
}

}  // namespace

PftModel parse_model(std::string_view text) {
  PftModel model;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = lex_line(line, line_no);
    if (tokens.front().kind == Tok::end) continue;
    LineParser(std::move(tokens), model).statement();
  }
  resolve(model);
  return model;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string formal_text(const std::vector<FormalParam>& params) {
  if (params.empty()) return "";
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].name + ":" + params[i].type;
  }
  return out + ")";
}

std::string ref_text(const EventRef& r) {
  std::string out = r.event;
  if (r.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < r.args.size(); ++i) {
    if (i) out += ',';
    out += r.args[i].is_param() ? *r.args[i].param
                                : std::to_string(r.args[i].value);
  }
  return out + ')';
}

std::string item_text(const Gate& g, const GateInput& in) {
  // OR-folded replicators are written as plain parametric references.
  if (!in.is_replicated() || g.kind == GateKind::or_gate) return ref_text(in.ref);
  return "forall" + formal_text(in.declared) + " " + ref_text(in.ref);
}

std::string gate_text(const Gate& g) {
  std::string op;
  switch (g.kind) {
    case GateKind::and_gate: op = "and"; break;
    case GateKind::or_gate: op = "or"; break;
    case GateKind::k_of_n:
      op = "vote(" + std::to_string(g.k) + ":" + std::to_string(g.n) + ")";
      break;
  }
  if (g.inputs.size() == 1 && g.inputs[0].is_replicated() &&
      g.kind != GateKind::or_gate)
    return op + " " + item_text(g, g.inputs[0]);
  std::string out = op + "(";
  for (std::size_t i = 0; i < g.inputs.size(); ++i) {
    if (i) out += ", ";
    out += item_text(g, g.inputs[i]);
  }
  return out + ")";
}

}  // namespace

std::string serialize_model(const PftModel& model) {
  std::ostringstream out;
  if (!model.name.empty()) out << "model " << model.name << "\n";
  for (const auto& t : model.types) {
    out << "type " << t.name << " = {";
    for (std::size_t i = 0; i < t.values.size(); ++i)
      out << (i ? ", " : "") << t.values[i];
    out << "}\n";
  }
  for (const auto& e : model.events) {
    if (e.is_basic()) {
      out << "basic " << e.name << formal_text(e.params);
      if (auto rate = model.rate_of(e.name))
        out << " rate " << format_roundtrip(*rate);
      out << "\n";
      continue;
    }
    out << (e.is_top() ? "top " : "event ") << e.name << formal_text(e.params);
    if (const Gate* g = model.gate_for(e.name)) out << " = " << gate_text(*g);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> validate(const PftModel& model) {
  std::vector<std::string> v;

  // Types.
  for (const auto& t : model.types) {
    if (t.values.empty()) v.push_back("type " + t.name + " has no values");
    std::set<int> seen;
    for (int x : t.values)
      if (!seen.insert(x).second)
        v.push_back("type " + t.name + " has duplicate value " +
                    std::to_string(x));
  }
  for (const auto& e : model.events)
    for (const auto& p : e.params)
      if (!model.find_type(p.type))
        v.push_back("event " + e.name + " uses unknown type " + p.type);

  // Top event.
  std::vector<std::string> tops;
  for (const auto& e : model.events)
    if (e.is_top()) tops.push_back(e.name);
  if (tops.empty()) {
    v.push_back("model has no top event");
  } else if (tops.size() > 1) {
    std::string list;
    for (const auto& t : tops) list += (list.empty() ? "" : ", ") + t;
    v.push_back("model has multiple top events: " + list);
  }
  for (const auto& e : model.events)
    if (e.is_top() && !e.params.empty())
      v.push_back("top event " + e.name + " must not have parameters");

  // Predicate and variable naming must stay injective.
  {
    std::map<std::string, std::string> preds;
    for (const auto& e : model.events) {
      auto [it, ok] = preds.emplace(predicate_name(e.name), e.name);
      if (!ok && it->second != e.name)
        v.push_back("event classes " + it->second + " and " + e.name +
                    " map to the same predicate");
    }
    std::map<std::string, std::string> vars;
    for (const auto& p : model.parameters()) {
      auto [it, ok] = vars.emplace(variable_name(p.name), p.name);
      if (!ok && it->second != p.name)
        v.push_back("parameters " + it->second + " and " + p.name +
                    " map to the same variable");
    }
  }

  // Gates: one per non-basic event, none on basic events.
  std::map<std::string, int> gate_count;
  for (const auto& g : model.gates) {
    const EventNode* out = model.find_event(g.output);
    if (!out) {
      v.push_back("gate output " + g.output + " is not a declared event");
      continue;
    }
    if (out->is_basic())
      v.push_back("basic event " + g.output + " is the output of a gate");
    if (++gate_count[g.output] == 2)
      v.push_back("event " + g.output + " is the output of more than one gate");
  }
  for (const auto& e : model.events)
    if (!e.is_basic() && gate_count[e.name] == 0)
      v.push_back("event " + e.name + " has no gate");

  // Gate inputs.
  for (const auto& g : model.gates) {
    const EventNode* out = model.find_event(g.output);
    if (g.kind != GateKind::k_of_n && g.inputs.empty())
      v.push_back("gate " + g.output + " has no inputs");
    if (g.kind == GateKind::k_of_n) {
      if (g.inputs.size() != 1 || !g.inputs[0].is_replicated()) {
        v.push_back("KofN gate " + g.output +
                    " must have exactly one replicator input");
      } else {
        std::size_t replicas = 1;
        bool known = true;
        for (const auto& p : g.inputs[0].declared) {
          const ParamType* t = model.find_type(p.type);
          if (!t) known = false;
          else replicas *= t->values.size();
        }
        if (known) {
          if (g.k < 1 || static_cast<std::size_t>(g.k) > replicas)
            v.push_back("KofN gate " + g.output + " has k=" +
                        std::to_string(g.k) + " outside 1.." +
                        std::to_string(replicas));
          if (static_cast<std::size_t>(g.n) != replicas)
            v.push_back("KofN gate " + g.output + " declares n=" +
                        std::to_string(g.n) + " but its replicator has " +
                        std::to_string(replicas) + " replicas");
        }
      }
    }
    for (const auto& in : g.inputs) {
      const EventNode* target = model.find_event(in.ref.event);
      if (!target) {
        v.push_back("gate " + g.output + " references unknown event " +
                    in.ref.event);
        continue;
      }
      if (target->is_top())
        v.push_back("top event " + target->name + " is an input to gate " +
                    g.output);
      if (target->params.size() != in.ref.args.size()) {
        v.push_back("reference to " + target->name + " in gate " + g.output +
                    " has " + std::to_string(in.ref.args.size()) +
                    " arguments, expected " +
                    std::to_string(target->params.size()));
        continue;
      }
      for (std::size_t k = 0; k < in.ref.args.size(); ++k) {
        const RefArg& arg = in.ref.args[k];
        const FormalParam& formal = target->params[k];
        if (!arg.is_param()) {
          const ParamType* t = model.find_type(formal.type);
          if (t && std::find(t->values.begin(), t->values.end(), arg.value) ==
                       t->values.end())
            v.push_back("value " + std::to_string(arg.value) + " given to " +
                        target->name + " is not in type " + formal.type);
          continue;
        }
        const std::string& name = *arg.param;
        if (name != formal.name)
          v.push_back("argument " + name + " of " + target->name +
                      " does not match its parameter " + formal.name);
        bool in_output = out && std::any_of(out->params.begin(),
                                            out->params.end(),
                                            [&](const FormalParam& f) {
                                              return f.name == name;
                                            });
        bool declared = std::any_of(
            in.declared.begin(), in.declared.end(),
            [&](const FormalParam& f) { return f.name == name; });
        if (!in_output && !declared)
          v.push_back("parameter " + name + " used outside its scope in gate " +
                      g.output);
      }
      for (const auto& d : in.declared) {
        bool used = std::any_of(in.ref.args.begin(), in.ref.args.end(),
                                [&](const RefArg& a) {
                                  return a.is_param() && *a.param == d.name;
                                });
        if (!used)
          v.push_back("parameter " + d.name + " declared at " + in.ref.event +
                      " is not an argument of " + in.ref.event);
        bool shadows = out && std::any_of(out->params.begin(),
                                          out->params.end(),
                                          [&](const FormalParam& f) {
                                            return f.name == d.name;
                                          });
        if (shadows)
          v.push_back("parameter " + d.name + " declared at " + in.ref.event +
                      " shadows a parameter of " + g.output);
        const ParamType* t = model.find_type(d.type);
        if (!t) v.push_back("parameter " + d.name + " uses unknown type " + d.type);
      }
    }
  }

  // Parameters: declared in exactly one event node, one type each.
  for (const auto& p : model.parameters()) {
    if (p.declared_at.empty()) {
      v.push_back("parameter " + p.name + " is not declared in any event node");
    } else if (p.declared_at.size() > 1) {
      std::string list;
      for (const auto& s : p.declared_at) list += (list.empty() ? "" : ", ") + s;
      v.push_back("parameter " + p.name +
                  " is declared in more than one event node (" + list + ")");
    }
  }
  {
    std::map<std::string, std::string> types;
    auto check = [&](const FormalParam& f) {
      auto [it, ok] = types.emplace(f.name, f.type);
      if (!ok && it->second != f.type)
        v.push_back("parameter " + f.name + " is used with types " +
                    it->second + " and " + f.type);
    };
    for (const auto& e : model.events)
      for (const auto& p : e.params) check(p);
    for (const auto& g : model.gates)
      for (const auto& in : g.inputs)
        for (const auto& p : in.declared) check(p);
  }

  // Failure rates.
  std::map<std::string, int> rate_count;
  for (const auto& r : model.rates) {
    const EventNode* e = model.find_event(r.event_class);
    if (!e || !e->is_basic())
      v.push_back("failure rate given for non-basic event " + r.event_class);
    if (!(r.lambda >= 0.0) || !std::isfinite(r.lambda))
      v.push_back("invalid failure rate for " + r.event_class);
    if (++rate_count[r.event_class] == 2)
      v.push_back("more than one failure rate for " + r.event_class);
  }
  for (const auto& e : model.events)
    if (e.is_basic() && rate_count[e.name] == 0)
      v.push_back("missing failure rate for " + e.name);

  // Acyclicity of the event graph.
  {
    std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
    bool cyclic = false;
    std::function<void(const std::string&)> visit = [&](const std::string& e) {
      int& c = color[e];
      if (c == 1) {
        cyclic = true;
        return;
      }
      if (c == 2) return;
      c = 1;
      for (const auto& g : model.gates)
        if (g.output == e)
          for (const auto& in : g.inputs)
            if (model.find_event(in.ref.event)) visit(in.ref.event);
      color[e] = 2;
    };
    for (const auto& e : model.events) visit(e.name);
    if (cyclic) v.push_back("event graph contains a cycle");
  }
  return v;
}

void require_valid(const PftModel& model) {
  auto violations = validate(model);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& s : violations) msg += "\n  " + s;
  throw ValidationError(msg);
}

// ---------------------------------------------------------------------------

bool same_structure(const PftModel& a, const PftModel& b) {
  auto same_formals = [](const std::vector<FormalParam>& x,
                         const std::vector<FormalParam>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const FormalParam& p, const FormalParam& q) {
                        return p.name == q.name && p.type == q.type;
                      });
  };
  auto same_ref = [](const EventRef& x, const EventRef& y) {
    return x.event == y.event &&
           std::equal(x.args.begin(), x.args.end(), y.args.begin(),
                      y.args.end(), [](const RefArg& p, const RefArg& q) {
                        return p.param == q.param &&
                               (p.is_param() || p.value == q.value);
                      });
  };
  if (a.name != b.name) return false;
  if (!std::equal(a.types.begin(), a.types.end(), b.types.begin(),
                  b.types.end(), [](const ParamType& x, const ParamType& y) {
                    return x.name == y.name && x.values == y.values;
                  }))
    return false;
  if (!std::equal(a.events.begin(), a.events.end(), b.events.begin(),
                  b.events.end(), [&](const EventNode& x, const EventNode& y) {
                    return x.name == y.name && x.kind == y.kind &&
                           same_formals(x.params, y.params);
                  }))
    return false;
  if (!std::equal(a.gates.begin(), a.gates.end(), b.gates.begin(),
                  b.gates.end(), [&](const Gate& x, const Gate& y) {
                    return x.kind == y.kind && x.k == y.k && x.n == y.n &&
                           x.output == y.output &&
                           std::equal(x.inputs.begin(), x.inputs.end(),
                                      y.inputs.begin(), y.inputs.end(),
                                      [&](const GateInput& p,
                                          const GateInput& q) {
                                        return same_ref(p.ref, q.ref) &&
                                               same_formals(p.declared,
                                                            q.declared);
                                      });
                  }))
    return false;
  return std::equal(a.rates.begin(), a.rates.end(), b.rates.begin(),
                    b.rates.end(), [](const FailureRate& x, const FailureRate& y) {
                      return x.event_class == y.event_class &&
                             x.lambda == y.lambda;
                    });
}

}  // namespace pftpha
