#pragma once

#include <vector>

namespace gibbs {

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

// Mean and standard error, reduced in index order.
McEstimate summarize(const std::vector<double>& values);

}  // namespace gibbs
