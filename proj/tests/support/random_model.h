#ifndef PFTPHA_TESTS_RANDOM_MODEL_H_
#define PFTPHA_TESTS_RANDOM_MODEL_H_

#include <cstdint>
#include <string>

namespace pftpha::testing {

struct RandomModelLimits {
  int max_ground_basic = 12;
  int max_gate_levels = 4;
};

/// DSL text of a valid random model: AND/OR/KofN gates, replicators folded
/// into AND and vote gates, OR gates folding a free parameter, basic events
/// shared between gates. Same seed, same text.
std::string random_model_text(std::uint64_t seed, const RandomModelLimits& limits = {});

}  // namespace pftpha::testing

#endif  // PFTPHA_TESTS_RANDOM_MODEL_H_
