#pragma once

// Regression table of the headline numbers: single-hop KLM probabilities, six-hop
// tent-family chain probabilities, and the sweep optimum.

#include <string>
#include <vector>

namespace klmchain {

struct ReproRow {
  int group;  // 1 single hop, 2 six-hop chain numbers, 3 sweep optimum
  std::string name;
  double expected;
  double actual;
  double tolerance;
  bool pass;
};

std::vector<ReproRow> run_repro();

}  // namespace klmchain
