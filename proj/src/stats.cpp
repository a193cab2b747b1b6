#include "gibbs/stats.hpp"

#include <cmath>

namespace gibbs {

McEstimate summarize(const std::vector<double>& v) {
  McEstimate out;
  out.trials = static_cast<long>(v.size());
  if (v.empty()) return out;
  double s = 0.0;
  for (double x : v) s += x;
  double m = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  double var = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
  out.estimate = m;
  out.std_error = std::sqrt(var / static_cast<double>(v.size()));
  return out;
}

}  // namespace gibbs
