#ifndef PFTPHA_CROSSCHECK_H_
#define PFTPHA_CROSSCHECK_H_

#include <string>
#include <vector>

#include "pftpha/measures.h"

namespace pftpha {

/// One compared quantity: engine value against exhaustive enumeration.
struct Comparison {
  std::string quantity;  // e.g. "P(TE)", "P({B} | TE)", "P(D(1,1) | TE)"
  double engine = 0.0;
  double oracle = 0.0;
  double deviation() const;
};

struct CrossCheck {
  std::size_t basic_events = 0;
  std::size_t engine_cut_sets = 0;
  std::size_t oracle_cut_sets = 0;
  bool cut_sets_equal = false;
  std::vector<Comparison> comparisons;

  double max_deviation() const;
  bool passed(double tolerance) const {
    return cut_sets_equal && max_deviation() <= tolerance;
  }
};

/// Compares P(TE), every cut-set prior and posterior, and every basic-event
/// posterior with the ground oracle, and the cut sets with its prime
/// implicants. Cut sets and posteriors are skipped at t = 0. Throws
/// AnalysisError when the model has too many basic events to enumerate.
CrossCheck cross_check(const PftModel& model, double t_hours,
                       const AnalysisOptions& options = {});

}  // namespace pftpha

#endif  // PFTPHA_CROSSCHECK_H_
