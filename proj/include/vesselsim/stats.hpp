#pragma once

#include <cstdint>
#include <span>

namespace vesselsim {

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against expected probabilities.
/// Cells with zero expected probability are dropped from the statistic and the
/// degrees of freedom; an observation in such a cell gives p = 0.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities);

}  // namespace vesselsim
