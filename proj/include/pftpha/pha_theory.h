#ifndef PFTPHA_PHA_THEORY_H_
#define PFTPHA_PHA_THEORY_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pftpha {

/// A variable (uppercase name) or a constant (integer or lowercase symbol).
struct Term {
  enum class Kind : std::uint8_t { variable, constant };

  Kind kind = Kind::constant;
  std::string name;

  static Term var(std::string n) { return {Kind::variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::constant, std::move(n)}; }
  static Term constant(int v) { return {Kind::constant, std::to_string(v)}; }

  bool is_variable() const { return kind == Kind::variable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool is_ground() const;
  /// `p(a,B,f)`, or just `p` for arity zero.
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Definite clause `head :- body`. An empty body is a fact.
struct Clause {
  Atom head;
  std::vector<Atom> body;

  std::string to_string() const;
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Alternative {
  Atom atom;
  double probability = 0.0;
};

/// `disjoint([h1:p1, ..., hn:pn])`: mutually exclusive, exhaustive hypotheses.
struct DisjointDeclaration {
  std::vector<Alternative> alternatives;
};

enum class Stage { unspecified, f1, f2 };

/// Index of one hypothesis: declaration and alternative within it.
struct HypothesisRef {
  std::size_t declaration = 0;
  std::size_t alternative = 0;

  friend bool operator==(const HypothesisRef&, const HypothesisRef&) = default;
  friend auto operator<=>(const HypothesisRef&, const HypothesisRef&) = default;
};

/// Definite clauses plus disjoint declarations. Construction validates the
/// declaration invariants, arity consistency and that every body predicate is
/// defined; violations throw ValidationError.
class PhaTheory {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;

  PhaTheory() = default;
  PhaTheory(std::vector<Clause> clauses,
            std::vector<DisjointDeclaration> declarations,
            Stage stage = Stage::unspecified);

  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<DisjointDeclaration>& declarations() const {
    return declarations_;
  }
  Stage stage() const { return stage_; }

  const Alternative& hypothesis(HypothesisRef h) const {
    return declarations_[h.declaration].alternatives[h.alternative];
  }
  /// The declaration alternative equal to a ground atom, if any.
  std::optional<HypothesisRef> find_hypothesis(const Atom& ground) const;
  /// All hypotheses with the given predicate.
  const std::vector<HypothesisRef>& hypotheses_for(
      const std::string& predicate) const;
  /// Indices of clauses whose head has the given predicate.
  const std::vector<std::size_t>& clauses_for(
      const std::string& predicate) const;
  bool defines(const std::string& predicate) const;

 private:
  std::vector<Clause> clauses_;
  std::vector<DisjointDeclaration> declarations_;
  Stage stage_ = Stage::unspecified;
  std::unordered_map<std::string, HypothesisRef> by_atom_;
  std::unordered_map<std::string, std::vector<HypothesisRef>> by_predicate_;
  std::unordered_map<std::string, std::vector<std::size_t>> clause_index_;
};

/// Variable bindings. Bindings may chain (X -> Y -> 3); use resolve/apply.
using Substitution = std::map<std::string, Term>;

/// Follows variable bindings until an unbound variable or a constant.
Term resolve(const Term& t, const Substitution& s);

/// Most general unifier of two atoms extending `s`, or nullopt on clash.
std::optional<Substitution> unify(const Atom& a, const Atom& b,
                                  Substitution s = {});

Atom apply_substitution(const Atom& a, const Substitution& s);

/// Renames every variable of the clause by appending `#suffix`.
Clause rename_apart(const Clause& c, std::uint64_t suffix);

struct SerializeOptions {
  /// Fixed number of decimals for probabilities; shortest round-trip text
  /// when unset.
  std::optional<int> probability_decimals;
};

/// One declaration or clause per line, each terminated by a period.
std::string serialize(const PhaTheory& theory, const SerializeOptions& = {});

/// Parses theory text. `%` and `/* */` comments are ignored except a leading
/// `% stage: F1|F2` marker. The terminating period is optional.
PhaTheory parse_theory(std::string_view text);

/// Parses a conjunction such as `te, d(1,1,f)`.
std::vector<Atom> parse_goal(std::string_view text);

struct AssumptionReport {
  /// No clause head unifies with a hypothesis.
  bool assumption1 = false;
  /// Same-head ground clause bodies are mutually exclusive; nullopt when the
  /// joint hypothesis space is too large to enumerate.
  std::optional<bool> assumption2;
};

AssumptionReport check_assumptions(const PhaTheory& theory,
                                   std::uint64_t max_joint_states = 1u << 20);

}  // namespace pftpha

#endif  // PFTPHA_PHA_THEORY_H_
