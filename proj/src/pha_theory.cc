#include "pftpha/pha_theory.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pftpha/error.h"
#include "pftpha/format.h"

namespace pftpha {

// ---------------------------------------------------------------------------
// Atoms and clauses

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(),
                      [](const Term& t) { return t.is_variable(); });
}

std::string Atom::to_string() const {
  std::string out = predicate;
  if (args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].name;
  }
  return out + ')';
}

std::string Clause::to_string() const {
  std::string out = head.to_string();
  if (body.empty()) return out;
  out += " :- ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += body[i].to_string();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theory construction

PhaTheory::PhaTheory(std::vector<Clause> clauses,
                     std::vector<DisjointDeclaration> declarations, Stage stage)
    : clauses_(std::move(clauses)),
      declarations_(std::move(declarations)),
      stage_(stage) {
  std::unordered_map<std::string, std::size_t> arity;
  auto check_arity = [&](const Atom& a) {
    auto [it, ok] = arity.emplace(a.predicate, a.args.size());
    if (!ok && it->second != a.args.size())
      throw ValidationError("predicate " + a.predicate + " used with arities " +
                            std::to_string(it->second) + " and " +
                            std::to_string(a.args.size()));
  };

  for (std::size_t d = 0; d < declarations_.size(); ++d) {
    const auto& alts = declarations_[d].alternatives;
    if (alts.empty()) throw ValidationError("empty disjoint declaration");
    double sum = 0.0;
    for (std::size_t a = 0; a < alts.size(); ++a) {
      const Alternative& alt = alts[a];
      check_arity(alt.atom);
      if (!alt.atom.is_ground())
        throw ValidationError("hypothesis " + alt.atom.to_string() +
                              " is not ground");
      if (!(alt.probability >= 0.0 && alt.probability <= 1.0))
        throw ValidationError("probability of " + alt.atom.to_string() +
                              " is outside [0,1]");
      sum += alt.probability;
      auto [it, ok] = by_atom_.emplace(alt.atom.to_string(), HypothesisRef{d, a});
      if (!ok)
        throw ValidationError("hypothesis " + alt.atom.to_string() +
                              " appears more than once");
      by_predicate_[alt.atom.predicate].push_back({d, a});
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
      throw ValidationError("probabilities sum to " + format_significant(sum, 10));
  }
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    check_arity(clauses_[i].head);
    for (const auto& b : clauses_[i].body) check_arity(b);
    clause_index_[clauses_[i].head.predicate].push_back(i);
  }
  for (const auto& c : clauses_)
    for (const auto& b : c.body)
      if (!defines(b.predicate))
        throw ValidationError("predicate " + b.predicate +
                              " is used but never defined");
}

std::optional<HypothesisRef> PhaTheory::find_hypothesis(const Atom& ground) const {
  auto it = by_atom_.find(ground.to_string());
  if (it == by_atom_.end()) return std::nullopt;
  return it->second;
}

const std::vector<HypothesisRef>& PhaTheory::hypotheses_for(
    const std::string& predicate) const {
  static const std::vector<HypothesisRef> kNone;
  auto it = by_predicate_.find(predicate);
  return it == by_predicate_.end() ? kNone : it->second;
}

const std::vector<std::size_t>& PhaTheory::clauses_for(
    const std::string& predicate) const {
  static const std::vector<std::size_t> kNone;
  auto it = clause_index_.find(predicate);
  return it == clause_index_.end() ? kNone : it->second;
}

bool PhaTheory::defines(const std::string& predicate) const {
  return clause_index_.count(predicate) || by_predicate_.count(predicate);
}

// ---------------------------------------------------------------------------
// Unification

Term resolve(const Term& t, const Substitution& s) {
  const Term* cur = &t;
  while (cur->is_variable()) {
    auto it = s.find(cur->name);
    if (it == s.end()) break;
    cur = &it->second;
  }
  return *cur;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b, Substitution s) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size())
    return std::nullopt;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    Term x = resolve(a.args[i], s);
    Term y = resolve(b.args[i], s);
    if (x == y) continue;
    if (x.is_variable()) {
      s[x.name] = y;
    } else if (y.is_variable()) {
      s[y.name] = x;
    } else {
      return std::nullopt;
    }
  }
  return s;
}

Atom apply_substitution(const Atom& a, const Substitution& s) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args)
    out.args.push_back(t.is_variable() ? resolve(t, s) : t);
  return out;
}

Clause rename_apart(const Clause& c, std::uint64_t suffix) {
  const std::string tag = "#" + std::to_string(suffix);
  auto rename = [&](Atom a) {
    for (auto& t : a.args)
      if (t.is_variable()) t.name += tag;
    return a;
  };
  Clause out{rename(c.head), {}};
  out.body.reserve(c.body.size());
  for (const auto& b : c.body) out.body.push_back(rename(b));
  return out;
}

// ---------------------------------------------------------------------------
// Text format

std::string serialize(const PhaTheory& theory, const SerializeOptions& opts) {
  std::ostringstream out;
  if (theory.stage() == Stage::f1) out << "% stage: F1\n";
  if (theory.stage() == Stage::f2) out << "% stage: F2\n";
  for (const auto& d : theory.declarations()) {
    out << "disjoint([";
    for (std::size_t i = 0; i < d.alternatives.size(); ++i) {
      const auto& alt = d.alternatives[i];
      out << (i ? "," : "") << alt.atom.to_string() << ':'
          << (opts.probability_decimals
                  ? format_fixed(alt.probability, *opts.probability_decimals)
                  : format_roundtrip(alt.probability));
    }
    out << "]).\n";
  }
  for (const auto& c : theory.clauses()) out << c.to_string() << ".\n";
  return out.str();
}

namespace {

enum class TTok { symbol, variable, number, punct, end };

struct TToken {
  TTok kind = TTok::end;
  std::string text;
  int line = 0;
  int column = 0;
};

std::vector<TToken> lex_theory_line(const std::string& line, int line_no) {
  std::vector<TToken> out;
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return k < line.size() ? line[k] : '\0'; };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)); };
  while (i < line.size()) {
    char c = line[i];
    int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '%') {
      break;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
        ++j;
      bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      out.push_back({var ? TTok::variable : TTok::symbol, line.substr(i, j - i),
                     line_no, col});
      i = j;
    } else if (digit(c) || ((c == '-' || c == '+' || c == '.') && digit(at(i + 1)))) {
      std::size_t j = i + 1;
      while (j < line.size()) {
        char d = line[j];
        if (digit(d) || (d == '.' && digit(at(j + 1)))) {
          ++j;
        } else if ((d == 'e' || d == 'E') &&
                   (digit(at(j + 1)) ||
                    ((at(j + 1) == '-' || at(j + 1) == '+') && digit(at(j + 2))))) {
          j += 2;
        } else {
          break;
        }
      }
      out.push_back({TTok::number, line.substr(i, j - i), line_no, col});
      i = j;
    } else if (c == ':' && at(i + 1) == '-') {
      out.push_back({TTok::punct, ":-", line_no, col});
      i += 2;
    } else if (std::string_view("()[],:.").find(c) != std::string_view::npos) {
      out.push_back({TTok::punct, std::string(1, c), line_no, col});
      ++i;
    } else {
      throw ParseError(line_no, col,
                       std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({TTok::end, "", line_no, static_cast<int>(line.size()) + 1});
  return out;
}

class TheoryLineParser {
 public:
  explicit TheoryLineParser(std::vector<TToken> toks) : toks_(std::move(toks)) {}

  bool at_end() const { return peek().kind == TTok::end; }

  // Returns true when the item was a declaration.
  bool item(std::vector<Clause>& clauses,
            std::vector<DisjointDeclaration>& decls) {
    const TToken& first = peek();
    if (first.kind == TTok::symbol && first.text == "disjoint" &&
        peek(1).kind == TTok::punct && peek(1).text == "(") {
      decls.push_back(declaration());
      finish();
      return true;
    }
    Clause c;
    c.head = atom();
    if (accept(":-")) c.body = conjunction();
    clauses.push_back(std::move(c));
    finish();
    return false;
  }

  std::vector<Atom> conjunction() {
    std::vector<Atom> out;
    do {
      out.push_back(atom());
    } while (accept(","));
    return out;
  }

  void finish() {
    accept(".");
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "'");
  }

 private:
  [[noreturn]] void fail(const TToken& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, msg);
  }
  const TToken& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const TToken& next() {
    const TToken& t = toks_[pos_];
    if (t.kind != TTok::end) ++pos_;
    return t;
  }
  bool accept(const char* p) {
    if (peek().kind == TTok::punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const char* p) {
    if (!accept(p))
      fail(peek(), std::string("expected '") + p + "' but found " +
                       (at_end() ? std::string("end of line")
                                 : "'" + peek().text + "'"));
  }

  Term term() {
    const TToken& t = peek();
    if (t.kind == TTok::variable) return Term::var(next().text);
    if (t.kind == TTok::symbol) return Term::constant(next().text);
    if (t.kind == TTok::number) {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(t.text, &used);
        if (used != t.text.size()) fail(t, "expected an integer constant");
      } catch (const std::logic_error&) {
        fail(t, "expected an integer constant");
      }
      next();
      return Term::constant(v);
    }
    fail(t, "expected a term");
  }

  Atom atom() {
    const TToken& t = peek();
    if (t.kind != TTok::symbol)
      fail(t, "expected a predicate but found " +
                  (at_end() ? std::string("end of line") : "'" + t.text + "'"));
    Atom a{next().text, {}};
    if (accept("(")) {
      do {
        a.args.push_back(term());
      } while (accept(","));
      expect(")");
    }
    return a;
  }

  DisjointDeclaration declaration() {
    const TToken& start = next();  // disjoint
    expect("(");
    expect("[");
    DisjointDeclaration d;
    double sum = 0.0;
    do {
      Alternative alt;
      alt.atom = atom();
      expect(":");
      const TToken& num = peek();
      if (num.kind != TTok::number || !parse_double(num.text, alt.probability))
        fail(num, "expected a probability");
      next();
      sum += alt.probability;
      d.alternatives.push_back(std::move(alt));
    } while (accept(","));
    expect("]");
    expect(")");
    if (std::abs(sum - 1.0) > PhaTheory::kNormalizationTolerance)
      fail(start, "probabilities sum to " + format_significant(sum, 10));
    return d;
  }

  std::vector<TToken> toks_;
  std::size_t pos_ = 0;
};

// Blanks out /* */ comments while keeping line structure.
std::string strip_block_comments(std::string_view text) {
  std::string out(text);
  std::size_t i = 0;
  while ((i = out.find("/*", i)) != std::string::npos) {
    std::size_t end = out.find("*/", i + 2);
    std::size_t stop = end == std::string::npos ? out.size() : end + 2;
    for (std::size_t k = i; k < stop; ++k)
      if (out[k] != '\n') out[k] = ' ';
    i = stop;
  }
  return out;
}

}  // namespace

PhaTheory parse_theory(std::string_view text) {
  std::vector<Clause> clauses;
  std::vector<DisjointDeclaration> decls;
  Stage stage = Stage::unspecified;
  std::istringstream in(strip_block_comments(text));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '%') {
      std::string_view rest(line);
      rest.remove_prefix(first);
      if (rest.rfind("% stage: F1", 0) == 0) stage = Stage::f1;
      if (rest.rfind("% stage: F2", 0) == 0) stage = Stage::f2;
      continue;
    }
    TheoryLineParser p(lex_theory_line(line, line_no));
    if (p.at_end()) continue;
    p.item(clauses, decls);
  }
  return PhaTheory(std::move(clauses), std::move(decls), stage);
}

std::vector<Atom> parse_goal(std::string_view text) {
  TheoryLineParser p(lex_theory_line(std::string(text), 1));
  if (p.at_end()) throw ParseError(1, 1, "empty goal");
  auto goal = p.conjunction();
  p.finish();
  return goal;
}

// ---------------------------------------------------------------------------
// Assumption checks

namespace {

using FactIndex = std::unordered_map<std::string, std::vector<Atom>>;

void match_body(const std::vector<Atom>& body, std::size_t i,
                const Substitution& s, const FactIndex& facts,
                const std::function<void(const Substitution&)>& emit) {
  if (i == body.size()) {
    emit(s);
    return;
  }
  Atom goal = apply_substitution(body[i], s);
  auto it = facts.find(goal.predicate);
  if (it == facts.end()) return;
  for (const auto& f : it->second)
    if (auto s2 = unify(goal, f, s)) match_body(body, i + 1, *s2, facts, emit);
}

// Clause evaluation order with body predicates before heads where possible.
std::vector<std::size_t> evaluation_order(const PhaTheory& theory) {
  const auto& clauses = theory.clauses();
  std::unordered_map<std::string, int> rank;
  std::function<int(const std::string&, int)> depth =
      [&](const std::string& pred, int guard) -> int {
    auto it = rank.find(pred);
    if (it != rank.end()) return it->second;
    if (guard > static_cast<int>(clauses.size()) + 1) return 0;  // recursive
    int r = 0;
    for (std::size_t ci : theory.clauses_for(pred))
      for (const auto& b : clauses[ci].body)
        if (b.predicate != pred) r = std::max(r, depth(b.predicate, guard + 1) + 1);
    rank[pred] = r;
    return r;
  };
  std::vector<std::size_t> order(clauses.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depth(clauses[a].head.predicate, 0) < depth(clauses[b].head.predicate, 0);
  });
  return order;
}

}  // namespace

AssumptionReport check_assumptions(const PhaTheory& theory,
                                   std::uint64_t max_joint_states) {
  AssumptionReport report;
  const auto& clauses = theory.clauses();
  const auto& decls = theory.declarations();

  report.assumption1 = true;
  for (std::size_t i = 0; i < clauses.size() && report.assumption1; ++i) {
    Atom head = rename_apart(clauses[i], 0).head;
    for (const auto& h : theory.hypotheses_for(head.predicate)) {
      if (unify(head, theory.hypothesis(h).atom)) {
        report.assumption1 = false;
        break;
      }
    }
  }

  std::uint64_t states = 1;
  for (const auto& d : decls) {
    states *= d.alternatives.size();
    if (states > max_joint_states) return report;
  }

  // Head variables left unbound by the body range over every constant of
  // the hypotheses.
  std::set<Term> constants;
  for (const auto& d : decls)
    for (const auto& alt : d.alternatives)
      for (const auto& t : alt.atom.args) constants.insert(t);
  const std::vector<Term> universe(constants.begin(), constants.end());
  auto ground_heads = [&](const Atom& head, const Substitution& s,
                          const std::function<void(Atom)>& emit) {
    const Atom partial = apply_substitution(head, s);
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < partial.args.size(); ++i)
      if (partial.args[i].is_variable()) open.push_back(i);
    if (open.empty()) return emit(partial);
    std::set<std::string> names;
    for (std::size_t i : open) names.insert(partial.args[i].name);
    const std::vector<std::string> vars(names.begin(), names.end());
    std::vector<std::size_t> pick(vars.size(), 0);
    while (!universe.empty()) {
      Substitution bind;
      for (std::size_t v = 0; v < vars.size(); ++v) bind[vars[v]] = universe[pick[v]];
      emit(apply_substitution(partial, bind));
      std::size_t v = 0;
      while (v < pick.size() && ++pick[v] == universe.size()) pick[v++] = 0;
      if (v == pick.size()) break;
    }
  };

  const auto order = evaluation_order(theory);
  std::vector<std::size_t> choice(decls.size(), 0);
  for (std::uint64_t w = 0; w < states; ++w) {
    // Mixed-radix decoding of the world index.
    std::uint64_t rest = w;
    for (std::size_t d = 0; d < decls.size(); ++d) {
      choice[d] = rest % decls[d].alternatives.size();
      rest /= decls[d].alternatives.size();
    }
    FactIndex facts;
    std::unordered_set<std::string> known;
    for (std::size_t d = 0; d < decls.size(); ++d) {
      const Atom& a = decls[d].alternatives[choice[d]].atom;
      known.insert(a.to_string());
      facts[a.predicate].push_back(a);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t ci : order) {
        std::vector<Atom> derived;
        match_body(clauses[ci].body, 0, {}, facts, [&](const Substitution& s) {
          ground_heads(clauses[ci].head, s, [&](Atom h) { derived.push_back(std::move(h)); });
        });
        for (auto& h : derived) {
          if (known.insert(h.to_string()).second) {
            facts[h.predicate].push_back(std::move(h));
            changed = true;
          }
        }
      }
    }
    std::unordered_map<std::string, int> satisfied;
    for (const auto& c : clauses) {
      bool clash = false;
      match_body(c.body, 0, {}, facts, [&](const Substitution& s) {
        ground_heads(c.head, s, [&](const Atom& h) {
          if (++satisfied[h.to_string()] > 1) clash = true;
        });
      });
      if (clash) {
        report.assumption2 = false;
        return report;
      }
    }
  }
  report.assumption2 = true;
  return report;
}

}  // namespace pftpha
