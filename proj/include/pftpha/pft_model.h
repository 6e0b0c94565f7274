#ifndef PFTPHA_PFT_MODEL_H_
#define PFTPHA_PFT_MODEL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pftpha {

struct SourcePos {
  int line = 0;
  int column = 0;
};

/// A finite, ordered set of integer values. Value sets of distinct types are
/// disjoint in a valid model.
struct ParamType {
  std::string name;
  std::vector<int> values;
  SourcePos pos;
};

/// A typed parameter slot of an event class, e.g. `j:T2` in `D(i:T1, j:T2)`.
struct FormalParam {
  std::string name;
  std::string type;
};

enum class EventKind { basic, internal, top };

/// An event class. Ground events are obtained by instantiating the formal
/// parameters with values of their types.
struct EventNode {
  std::string name;
  std::vector<FormalParam> params;
  EventKind kind = EventKind::internal;
  SourcePos pos;

  bool is_basic() const { return kind == EventKind::basic; }
  bool is_top() const { return kind == EventKind::top; }
};

/// One argument of an event reference: a parameter name or a constant.
struct RefArg {
  std::optional<std::string> param;
  int value = 0;

  static RefArg parameter(std::string name) { return {std::move(name), 0}; }
  static RefArg constant(int v) { return {std::nullopt, v}; }
  bool is_param() const { return param.has_value(); }
};

struct EventRef {
  std::string event;
  std::vector<RefArg> args;
  SourcePos pos;
};

/// A gate input. A non-empty `declared` list makes the referenced event a
/// replicator for those parameters: the input stands for one replica per
/// tuple of declared values.
struct GateInput {
  EventRef ref;
  std::vector<FormalParam> declared;

  bool is_replicated() const { return !declared.empty(); }
};

enum class GateKind { and_gate, or_gate, k_of_n };

struct Gate {
  GateKind kind = GateKind::or_gate;
  int k = 0;  // k_of_n only: at least k of n replicas must work
  int n = 0;
  std::string output;
  std::vector<GateInput> inputs;
  SourcePos pos;
};

struct FailureRate {
  std::string event_class;
  double lambda = 0.0;  // faults per hour
};

/// Where and how a parameter is introduced.
struct Parameter {
  std::string name;
  std::string type;
  std::vector<std::string> declared_at;  // distinct replicator event classes
};

/// A Parametric Fault Tree: types, event classes, gates and failure rates.
/// Treated as an immutable value once built.
struct PftModel {
  std::string name;
  std::vector<ParamType> types;
  std::vector<EventNode> events;  // declaration order
  std::vector<Gate> gates;        // one per non-basic event
  std::vector<FailureRate> rates;

  const ParamType* find_type(std::string_view type_name) const;
  const EventNode* find_event(std::string_view event_name) const;
  const Gate* gate_for(std::string_view event_name) const;
  std::optional<double> rate_of(std::string_view event_class) const;
  /// Nullptr unless exactly one top event exists.
  const EventNode* top() const;

  /// Every parameter mentioned in a formal list or a declaration, in order of
  /// first appearance, with the replicators that declare it.
  std::vector<Parameter> parameters() const;
  /// Parameters declared at `event_name` by some gate input.
  std::vector<FormalParam> declared_at(std::string_view event_name) const;
  bool is_replicator(std::string_view event_name) const;

  /// All value tuples of the given formal list, in lexicographic order of
  /// the declared type orders. The empty list yields one empty tuple.
  std::vector<std::vector<int>> tuples(
      const std::vector<FormalParam>& params) const;
};

/// Parses the model DSL. Throws ParseError on syntax, naming or typing errors.
PftModel parse_model(std::string_view text);

/// Emits DSL text that parses back to an equal model.
std::string serialize_model(const PftModel& model);

/// Every violated structural rule as a human-readable message; empty when the
/// model is valid.
std::vector<std::string> validate(const PftModel& model);

/// Throws ValidationError listing all violations if the model is invalid.
void require_valid(const PftModel& model);

/// 1 - exp(-lambda * t) for a constant failure rate. Throws DomainError on a
/// negative rate or time.
double failure_probability(double lambda, double t_hours);

/// Theory predicate naming for an event class (lowercase).
std::string predicate_name(std::string_view event_class);
/// Theory variable naming for a parameter (uppercase).
std::string variable_name(std::string_view param);

/// Renders a ground event like `D(1,2)` or `B`.
std::string ground_label(std::string_view event_class,
                         const std::vector<int>& args);

/// Structural equality, ignoring source positions.
bool same_structure(const PftModel& a, const PftModel& b);

}  // namespace pftpha

#endif  // PFTPHA_PFT_MODEL_H_
