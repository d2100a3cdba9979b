#pragma once

#include <vector>

namespace em0 {

/// Lawson-Hanson active-set solver for min ||X b - y||_2 s.t. b >= 0.
/// X is row-major, rows x cols. Terminates at the exact KKT point.
std::vector<double> nnls(const std::vector<std::vector<double>>& X,
                         const std::vector<double>& y,
                         double tolerance = -1.0);

} // namespace em0
