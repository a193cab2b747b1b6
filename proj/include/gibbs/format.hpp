#pragma once

#include <string>
#include <vector>

namespace gibbs {

// 12 significant digits for CSV cells.
std::string csv_num(double v);
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace gibbs
