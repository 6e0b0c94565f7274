#ifndef PFTPHA_MEASURES_H_
#define PFTPHA_MEASURES_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pftpha/abduction.h"
#include "pftpha/compile.h"
#include "pftpha/pft_model.h"
#include "pftpha/pha_theory.h"

namespace pftpha {

/// A ground basic event, e.g. D(1,2).
struct BasicEventId {
  std::string event_class;
  std::vector<int> args;

  std::string label() const { return ground_label(event_class, args); }
  friend bool operator==(const BasicEventId&, const BasicEventId&) = default;
  friend auto operator<=>(const BasicEventId&, const BasicEventId&) = default;
};

/// Parses `D(1,2)` or `B`.
BasicEventId parse_basic_event(const std::string& label);

struct CutSet {
  std::vector<BasicEventId> events;  // sorted
  double prior = 0.0;
  std::optional<double> posterior;

  /// `{D(1,1), D(1,2), P(2)}`.
  std::string render() const;
};

struct UnreliabilityPoint {
  double time_hours = 0.0;
  ProbabilityBounds bounds;
};

struct BasicEventPosterior {
  BasicEventId event;
  double posterior = 0.0;
};

struct AnalysisOptions {
  CompileOptions compile;
  SearchOptions search;
  /// Used for every quantitative measure, including the memoized P(TE).
  StopCriteria stop = StopCriteria::run_to_exhaustion();
};

/// Measures of one model at one analysis time. Compiles each theory once and
/// memoizes P(TE), the shared posterior denominator. Safe to share between
/// threads.
class Analysis {
 public:
  Analysis(PftModel model, double t_hours, AnalysisOptions options = {});

  const PftModel& model() const { return model_; }
  double time_hours() const { return t_; }
  const PhaTheory& theory_f1() const;
  const PhaTheory& theory_f2() const;

  /// Ranked by prior, ties ordered by rendered event list.
  std::vector<CutSet> minimal_cut_sets(
      const StopCriteria& stop = StopCriteria::run_to_exhaustion()) const;
  ProbabilityBounds system_unreliability() const;
  double mcs_posterior(const CutSet& cs) const;
  double basic_event_posterior(const BasicEventId& be) const;
  std::vector<BasicEventPosterior> basic_event_posteriors() const;
  /// Fills in the posterior of every cut set.
  void attach_posteriors(std::vector<CutSet>& cut_sets) const;

 private:
  const ProbabilityBounds& top_bounds() const;
  double joint_with_top(std::vector<Atom> atoms) const;
  Atom failure_atom(const BasicEventId& be) const;

  PftModel model_;
  double t_;
  AnalysisOptions options_;
  mutable std::once_flag f1_once_, f2_once_, top_once_;
  mutable std::unique_ptr<PhaTheory> f1_, f2_;
  mutable ProbabilityBounds top_;
};

/// Convenience wrappers, one analysis per call.
std::vector<CutSet> minimal_cut_sets(const PftModel& model, double t_hours);
ProbabilityBounds system_unreliability(
    const PftModel& model, double t_hours,
    const StopCriteria& stop = StopCriteria::run_to_exhaustion());
/// One point per time in [t_start, t_end] spaced by `step`, each compiled
/// and searched independently.
std::vector<UnreliabilityPoint> unreliability_curve(
    const PftModel& model, double t_start, double t_end, double step,
    const StopCriteria& stop = StopCriteria::run_to_exhaustion());
double mcs_posterior(
    const PftModel& model, const CutSet& cs, double t_hours,
    const StopCriteria& stop = StopCriteria::run_to_exhaustion());
double basic_event_posterior(
    const PftModel& model, const BasicEventId& be, double t_hours,
    const StopCriteria& stop = StopCriteria::run_to_exhaustion());

struct MeasureReport {
  std::string model_name;
  double time_hours = 0.0;
  std::vector<CutSet> cut_sets;
  std::vector<UnreliabilityPoint> curve;
  std::vector<BasicEventPosterior> posteriors;
};

struct ReportRequest {
  bool cut_sets = true;
  bool posteriors = false;  // cut-set and basic-event posteriors
  std::optional<double> curve_start, curve_end, curve_step;
};

MeasureReport build_report(const PftModel& model, double t_hours,
                           const ReportRequest& request,
                           const AnalysisOptions& options = {});

}  // namespace pftpha

#endif  // PFTPHA_MEASURES_H_
