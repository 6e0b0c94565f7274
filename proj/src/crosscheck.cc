#include "pftpha/crosscheck.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "pftpha/ground_tree.h"

namespace pftpha {

double Comparison::deviation() const { return std::abs(engine - oracle); }

double CrossCheck::max_deviation() const {
  double m = 0.0;
  for (const auto& c : comparisons) m = std::max(m, c.deviation());
  return m;
}

CrossCheck cross_check(const PftModel& model, double t_hours,
                       const AnalysisOptions& options) {
  const GroundFaultTree tree = unfold(model, t_hours);
  // Refuse up front rather than after the engine work.
  if (tree.basic_events().size() > GroundFaultTree::kDefaultMaxBasicEvents)
    exact_probability(tree, {});

  CrossCheck out;
  out.basic_events = tree.basic_events().size();
  Analysis analysis(model, t_hours, options);
  auto ref = [&](const BasicEventId& be) {
    return *tree.find(be.label());
  };

  const double top = exact_probability(tree, {{tree.top(), true}});
  out.comparisons.push_back({"P(TE)", analysis.system_unreliability().lower, top});

  if (t_hours > 0.0) {
    auto cut_sets = analysis.minimal_cut_sets();
    const auto implicants = prime_implicants(tree);
    std::set<std::vector<std::string>> engine_sets, oracle_sets;
    for (const auto& cs : cut_sets) {
      std::vector<std::string> labels;
      for (const auto& be : cs.events) labels.push_back(be.label());
      std::sort(labels.begin(), labels.end());
      engine_sets.insert(labels);
    }
    for (const auto& pi : implicants) {
      std::vector<std::string> labels;
      for (std::size_t i : pi) labels.push_back(tree.basic_events()[i].label());
      std::sort(labels.begin(), labels.end());
      oracle_sets.insert(labels);
    }
    out.engine_cut_sets = cut_sets.size();
    out.oracle_cut_sets = implicants.size();
    out.cut_sets_equal = engine_sets == oracle_sets && cut_sets.size() == implicants.size();

    if (top > 0.0) {
      analysis.attach_posteriors(cut_sets);
      for (const auto& cs : cut_sets) {
        std::vector<StateCondition> members;
        for (const auto& be : cs.events) members.push_back({ref(be), true});
        out.comparisons.push_back(
            {"P(" + cs.render() + ")", cs.prior, exact_probability(tree, members)});
        out.comparisons.push_back({"P(" + cs.render() + " | TE)", *cs.posterior,
                                   conditional_probability(tree, members,
                                                           {{tree.top(), true}})});
      }
      for (const auto& p : analysis.basic_event_posteriors())
        out.comparisons.push_back(
            {"P(" + p.event.label() + " | TE)", p.posterior,
             conditional_probability(tree, {{ref(p.event), true}},
                                     {{tree.top(), true}})});
    }
  } else {
    out.cut_sets_equal = true;
  }
  return out;
}

}  // namespace pftpha
