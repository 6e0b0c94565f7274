#ifndef PFTPHA_COMPILE_H_
#define PFTPHA_COMPILE_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pftpha/pft_model.h"
#include "pftpha/pha_theory.h"

namespace pftpha {

struct CompileOptions {
  double time_hours = 0.0;
  /// Per gate (keyed by output event class), a permutation of the input event
  /// class names. Gates not listed keep their declaration order.
  std::map<std::string, std::vector<std::string>> input_order;
};

/// A k-out-of-n voting gate rewritten as an OR of ANDs. The gate fails iff at
/// least n-k+1 replicas fail, so each AND term is one such minimal subset.
struct KofnExpansion {
  /// Replica tuples of the declared parameters, in lexicographic order.
  std::vector<std::vector<int>> replicas;
  /// Indices into `replicas`, one vector per AND term, lexicographic order.
  std::vector<std::vector<std::size_t>> and_terms;
};

/// All subsets of {0..n-1} of size n-k+1, in lexicographic order.
std::vector<std::vector<std::size_t>> kofn_failure_combinations(std::size_t n,
                                                                std::size_t k);

/// Expands a KofN gate of a valid model.
KofnExpansion expand_kofn(const PftModel& model, const Gate& gate);

/// Conversion 1: one disjoint declaration per ground basic event and a
/// direct rewriting of every gate as definite clauses. Suitable for minimal
/// cut-set search, not for probability computation.
PhaTheory conversion1(const PftModel& model, const CompileOptions& opts);

/// Conversion 2: same declarations; every internal event gets explicit
/// working/failed predicates whose same-head clause bodies are mutually
/// exclusive and exhaustive (ordered Shannon expansion).
PhaTheory conversion2(const PftModel& model, const CompileOptions& opts);

}  // namespace pftpha

#endif  // PFTPHA_COMPILE_H_
