#ifndef PFTPHA_ABDUCTION_H_
#define PFTPHA_ABDUCTION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pftpha/pha_theory.h"

namespace pftpha {

/// A consistent set of ground hypotheses that, with the theory's clauses,
/// entails the goal.
struct Explanation {
  /// Sorted by declaration index; at most one alternative per declaration.
  std::vector<HypothesisRef> hypotheses;
  double probability = 1.0;

  /// Hypothesis atoms in the same order as `hypotheses`.
  std::vector<Atom> atoms(const PhaTheory& theory) const;
  /// Canonical identity, e.g. `{d(1,1,f), p(2,f)}`.
  std::string key(const PhaTheory& theory) const;
  bool contains(const Explanation& other) const;
};

struct ProbabilityBounds {
  double lower = 0.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
};

struct StopCriteria {
  std::optional<std::size_t> max_explanations;
  std::optional<double> epsilon;
  bool exhaustive = false;

  static StopCriteria run_to_exhaustion() { return {std::nullopt, std::nullopt, true}; }
  /// Throws std::invalid_argument unless at least one criterion is set.
  void check() const;
};

struct SearchOptions {
  std::size_t max_frontier = 1'000'000;
  std::uint64_t max_expansions = 100'000'000;
  /// Assuming a hypothesis of probability 1 raises an AnalysisError. Needed
  /// when best-first order must imply minimality.
  bool reject_certain_hypotheses = false;
};

/// Top-down best-first abductive search. Explanations come out one at a time
/// in nonincreasing probability order; identical hypothesis sets are reported
/// once. Ties are broken first-in first-out.
class AbductiveSearch {
 public:
  /// Throws AnalysisError if a goal predicate is unknown to the theory. The
  /// theory must outlive the search.
  AbductiveSearch(const PhaTheory& theory, std::vector<Atom> goal,
                  SearchOptions options = {});

  /// The next distinct explanation, or nullopt once the frontier is empty.
  std::optional<Explanation> next();

  /// lower = mass of emitted explanations; upper = lower + frontier mass.
  ProbabilityBounds bounds() const;
  bool exhausted() const { return frontier_.empty(); }
  std::uint64_t expansions() const { return expansions_; }
  std::size_t frontier_size() const { return frontier_.size(); }

 private:
  struct State {
    std::vector<Atom> goals;
    std::vector<HypothesisRef> assumed;  // sorted by declaration
    double priority = 1.0;
    std::uint64_t seq = 0;
  };
  struct Order {
    bool operator()(const State& a, const State& b) const {
      if (a.priority != b.priority) return a.priority < b.priority;
      return a.seq > b.seq;
    }
  };

  void push(State s);
  State pop();
  void expand(State s);

  const PhaTheory& theory_;
  SearchOptions options_;
  std::vector<State> frontier_;  // binary heap under Order
  double frontier_mass_ = 0.0;
  double emitted_mass_ = 0.0;
  std::uint64_t seq_ = 0;
  std::uint64_t rename_ = 0;
  std::uint64_t expansions_ = 0;
  std::unordered_set<std::string> seen_;
};

struct ExplainResult {
  std::vector<Explanation> explanations;
  ProbabilityBounds bounds;
  bool exhausted = false;
  /// False for stage-F1 theories, whose bounds are not probability bounds.
  bool bounds_are_probabilistic = false;
};

/// Runs the search until a stop criterion holds or the frontier is empty.
ExplainResult explain(const PhaTheory& theory, const std::vector<Atom>& goal,
                      const StopCriteria& stop, SearchOptions options = {});

/// Filters the explanation stream down to minimal explanations: one is
/// dropped when an earlier one is a subset of it. Requires every assumed
/// hypothesis to have probability below 1.
ExplainResult minimal_explanations(const PhaTheory& theory,
                                   const std::vector<Atom>& goal,
                                   const StopCriteria& stop,
                                   SearchOptions options = {});

/// Probability of a goal conjunction as the sum of its explanations. Only
/// sound for theories with mutually exclusive bodies, so stage F1 theories
/// are rejected.
ProbabilityBounds probability(const PhaTheory& theory,
                              const std::vector<Atom>& goal,
                              const StopCriteria& stop,
                              SearchOptions options = {});

}  // namespace pftpha

#endif  // PFTPHA_ABDUCTION_H_
