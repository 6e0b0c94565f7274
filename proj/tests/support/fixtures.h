#ifndef PFTPHA_TESTS_FIXTURES_H_
#define PFTPHA_TESTS_FIXTURES_H_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pftpha/pft_model.h"

namespace pftpha::testing {

inline std::string source_path(const std::string& relative) {
  return std::string(PFTPHA_SOURCE_DIR) + "/" + relative;
}

inline std::string read_text(const std::string& relative) {
  std::ifstream in(source_path(relative), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + relative);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PftModel multiprocessor() {
  return parse_model(read_text("models/multiprocessor.pft"));
}

inline constexpr double kMissionTime = 1e4;

}  // namespace pftpha::testing

#endif  // PFTPHA_TESTS_FIXTURES_H_
