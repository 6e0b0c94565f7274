#ifndef PFTPHA_GROUND_TREE_H_
#define PFTPHA_GROUND_TREE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pftpha/pft_model.h"

namespace pftpha {

/// Brute-force reference semantics: the unfolded propositional fault tree,
/// evaluated by enumerating every basic-event state assignment.

struct GroundBasicEvent {
  std::string event_class;
  std::vector<int> args;
  double lambda = 0.0;
  double probability = 0.0;  // failure probability at the tree's time

  std::string label() const { return ground_label(event_class, args); }
};

/// Reference to a basic event or a gate node of a ground tree.
struct GroundRef {
  enum class Kind { basic, node };
  Kind kind = Kind::basic;
  std::size_t index = 0;

  static GroundRef basic(std::size_t i) { return {Kind::basic, i}; }
  static GroundRef node(std::size_t i) { return {Kind::node, i}; }
  bool is_basic() const { return kind == Kind::basic; }
};

struct GroundNode {
  enum class Op { and_op, or_op };
  Op op = Op::or_op;
  /// Ground event label, or empty for nodes introduced by KofN expansion.
  std::string label;
  std::vector<GroundRef> inputs;
};

/// Nodes are stored children-first, so a forward pass evaluates the tree.
class GroundFaultTree {
 public:
  static constexpr std::size_t kDefaultMaxBasicEvents = 24;

  const std::vector<GroundBasicEvent>& basic_events() const { return basic_; }
  const std::vector<GroundNode>& nodes() const { return nodes_; }
  GroundRef top() const { return GroundRef::node(top_); }
  double time_hours() const { return time_; }

  /// Recomputes every basic-event probability for time t.
  GroundFaultTree at_time(double t_hours) const;

  std::optional<GroundRef> find(std::string_view label) const;

 private:
  friend GroundFaultTree unfold(const PftModel& model, double t_hours);

  std::vector<GroundBasicEvent> basic_;
  std::vector<GroundNode> nodes_;
  std::size_t top_ = 0;
  double time_ = 0.0;
};

/// Instantiates every parametric event for each tuple of parameter values,
/// expanding replicated inputs and KofN gates. All ground instances of every
/// basic class are included, in declaration then tuple order.
GroundFaultTree unfold(const PftModel& model, double t_hours = 0.0);

/// Failed (true) or working state of every node for a total assignment of
/// basic-event states (true = failed).
std::vector<bool> evaluate(const GroundFaultTree& tree,
                           const std::vector<bool>& failed_basic);

struct StateCondition {
  GroundRef ref;
  bool failed = true;
};

/// Sum over all assignments meeting every condition of the product of
/// per-event probabilities. Throws AnalysisError above `max_basic` events.
double exact_probability(
    const GroundFaultTree& tree, const std::vector<StateCondition>& condition,
    std::size_t max_basic = GroundFaultTree::kDefaultMaxBasicEvents);

/// P(event | given) as a ratio of two enumerations. Throws AnalysisError if
/// P(given) is zero.
double conditional_probability(
    const GroundFaultTree& tree, const std::vector<StateCondition>& event,
    const std::vector<StateCondition>& given,
    std::size_t max_basic = GroundFaultTree::kDefaultMaxBasicEvents);

/// Minimal cut sets as sorted basic-event index sets, ordered by size then
/// lexicographically.
std::vector<std::vector<std::size_t>> prime_implicants(
    const GroundFaultTree& tree,
    std::size_t max_basic = GroundFaultTree::kDefaultMaxBasicEvents);

}  // namespace pftpha

#endif  // PFTPHA_GROUND_TREE_H_
