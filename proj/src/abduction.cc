#include "pftpha/abduction.h"

#include <algorithm>
#include <stdexcept>

#include "pftpha/error.h"

namespace pftpha {

std::vector<Atom> Explanation::atoms(const PhaTheory& theory) const {
  std::vector<Atom> out;
  out.reserve(hypotheses.size());
  for (const auto& h : hypotheses) out.push_back(theory.hypothesis(h).atom);
  return out;
}

std::string Explanation::key(const PhaTheory& theory) const {
  std::string out = "{";
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    if (i) out += ", ";
    out += theory.hypothesis(hypotheses[i]).atom.to_string();
  }
  return out + "}";
}

bool Explanation::contains(const Explanation& other) const {
  return std::includes(hypotheses.begin(), hypotheses.end(),
                       other.hypotheses.begin(), other.hypotheses.end());
}

void StopCriteria::check() const {
  if (!max_explanations && !epsilon && !exhaustive)
    throw std::invalid_argument("no stopping criterion set");
  if (epsilon && !(*epsilon >= 0.0))
    throw std::invalid_argument("epsilon must be nonnegative");
}

// ---------------------------------------------------------------------------

AbductiveSearch::AbductiveSearch(const PhaTheory& theory, std::vector<Atom> goal,
                                 SearchOptions options)
    : theory_(theory), options_(options) {
  for (const auto& g : goal)
    if (!theory_.defines(g.predicate))
      throw AnalysisError("unknown predicate in goal: " + g.predicate);
  push(State{std::move(goal), {}, 1.0, 0});
}

void AbductiveSearch::push(State s) {
  if (frontier_.size() >= options_.max_frontier)
    throw BudgetExceeded("search frontier exceeded " +
                         std::to_string(options_.max_frontier) + " states");
  s.seq = seq_++;
  frontier_mass_ += s.priority;
  frontier_.push_back(std::move(s));
  std::push_heap(frontier_.begin(), frontier_.end(), Order{});
}

AbductiveSearch::State AbductiveSearch::pop() {
  std::pop_heap(frontier_.begin(), frontier_.end(), Order{});
  State s = std::move(frontier_.back());
  frontier_.pop_back();
  frontier_mass_ = frontier_.empty() ? 0.0 : frontier_mass_ - s.priority;
  return s;
}

ProbabilityBounds AbductiveSearch::bounds() const {
  double upper = std::min(1.0, emitted_mass_ + std::max(0.0, frontier_mass_));
  return {emitted_mass_, std::max(upper, emitted_mass_)};
}

std::optional<Explanation> AbductiveSearch::next() {
  while (!frontier_.empty()) {
    State s = pop();
    if (!s.goals.empty()) {
      expand(std::move(s));
      continue;
    }
    Explanation e{std::move(s.assumed), s.priority};
    if (!seen_.insert(e.key(theory_)).second) continue;
    emitted_mass_ += e.probability;
    return e;
  }
  return std::nullopt;
}

void AbductiveSearch::expand(State s) {
  if (++expansions_ > options_.max_expansions)
    throw BudgetExceeded("search exceeded " +
                         std::to_string(options_.max_expansions) + " expansions");
  const Atom goal = s.goals.front();
  auto rest_under = [&](const Substitution& sub) {
    std::vector<Atom> out;
    out.reserve(s.goals.size());
    for (std::size_t i = 1; i < s.goals.size(); ++i)
      out.push_back(apply_substitution(s.goals[i], sub));
    return out;
  };

  // Resolution against clause heads.
  for (std::size_t ci : theory_.clauses_for(goal.predicate)) {
    const Clause& original = theory_.clauses()[ci];
    Clause c = original;
    bool has_vars = !c.head.is_ground() ||
                    std::any_of(c.body.begin(), c.body.end(),
                                [](const Atom& a) { return !a.is_ground(); });
    if (has_vars) c = rename_apart(original, ++rename_);
    auto sub = unify(goal, c.head);
    if (!sub) continue;
    State child{{}, s.assumed, s.priority, 0};
    child.goals.reserve(c.body.size() + s.goals.size() - 1);
    for (const auto& b : c.body) child.goals.push_back(apply_substitution(b, *sub));
    for (auto& a : rest_under(*sub)) child.goals.push_back(std::move(a));
    push(std::move(child));
  }

  // Assumption of a matching hypothesis.
  auto assume = [&](HypothesisRef h, const Substitution& sub) {
    const double p = theory_.hypothesis(h).probability;
    auto pos = std::lower_bound(
        s.assumed.begin(), s.assumed.end(), h,
        [](const HypothesisRef& a, const HypothesisRef& b) {
          return a.declaration < b.declaration;
        });
    State child{rest_under(sub), s.assumed, s.priority, 0};
    if (pos != s.assumed.end() && pos->declaration == h.declaration) {
      if (pos->alternative != h.alternative) return;  // inconsistent
    } else {
      if (options_.reject_certain_hypotheses && p >= 1.0)
        throw AnalysisError("hypothesis " + theory_.hypothesis(h).atom.to_string() +
                            " has probability 1; minimality cannot be ensured");
      child.assumed.insert(child.assumed.begin() + (pos - s.assumed.begin()), h);
      child.priority *= p;
    }
    push(std::move(child));
  };
  if (goal.is_ground()) {
    if (auto h = theory_.find_hypothesis(goal)) assume(*h, {});
  } else {
    for (const auto& h : theory_.hypotheses_for(goal.predicate))
      if (auto sub = unify(goal, theory_.hypothesis(h).atom)) assume(h, *sub);
  }
}

// ---------------------------------------------------------------------------

namespace {

bool should_stop(const StopCriteria& stop, std::size_t emitted,
                 const ProbabilityBounds& b) {
  if (stop.max_explanations && emitted >= *stop.max_explanations) return true;
  if (stop.epsilon && b.width() <= *stop.epsilon) return true;
  return false;
}

}  // namespace

ExplainResult explain(const PhaTheory& theory, const std::vector<Atom>& goal,
                      const StopCriteria& stop, SearchOptions options) {
  stop.check();
  AbductiveSearch search(theory, goal, options);
  ExplainResult out;
  out.bounds_are_probabilistic = theory.stage() != Stage::f1;
  while (!should_stop(stop, out.explanations.size(), search.bounds())) {
    auto e = search.next();
    if (!e) break;
    out.explanations.push_back(std::move(*e));
  }
  out.bounds = search.bounds();
  out.exhausted = search.exhausted();
  return out;
}

ExplainResult minimal_explanations(const PhaTheory& theory,
                                   const std::vector<Atom>& goal,
                                   const StopCriteria& stop,
                                   SearchOptions options) {
  stop.check();
  options.reject_certain_hypotheses = true;
  AbductiveSearch search(theory, goal, options);
  ExplainResult out;
  out.bounds_are_probabilistic = theory.stage() != Stage::f1;
  while (!should_stop(stop, out.explanations.size(), search.bounds())) {
    auto e = search.next();
    if (!e) break;
    bool subsumed = std::any_of(
        out.explanations.begin(), out.explanations.end(),
        [&](const Explanation& kept) { return e->contains(kept); });
    if (!subsumed) out.explanations.push_back(std::move(*e));
  }
  // Zero-probability ties can emit a superset before its subset.
  const auto& all = out.explanations;
  std::vector<bool> keep(all.size(), true);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size() && keep[i]; ++j)
      if (all[j].hypotheses.size() < all[i].hypotheses.size() && all[i].contains(all[j]))
        keep[i] = false;
  std::vector<Explanation> minimal;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (keep[i]) minimal.push_back(std::move(out.explanations[i]));
  out.explanations = std::move(minimal);
  out.bounds = search.bounds();
  out.exhausted = search.exhausted();
  return out;
}

ProbabilityBounds probability(const PhaTheory& theory,
                              const std::vector<Atom>& goal,
                              const StopCriteria& stop, SearchOptions options) {
  if (theory.stage() == Stage::f1)
    throw AnalysisError(
        "probability needs mutually exclusive clause bodies; compile with "
        "conversion 2");
  return explain(theory, goal, stop, options).bounds;
}

}  // namespace pftpha
