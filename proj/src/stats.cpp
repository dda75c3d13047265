#include "vesselsim/stats.hpp"

#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "vesselsim/error.hpp"

namespace vesselsim {

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw InvalidArgument("chi-square: observed and expected must have the same non-zero length");
  }
  std::uint64_t n = 0;
  for (auto c : observed) n += c;
  if (n == 0) throw InvalidArgument("chi-square: no observations");

  ChiSquareResult result;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probabilities[i] <= 0.0) {
      if (observed[i] != 0) {
        result.statistic = std::numeric_limits<double>::infinity();
        result.p_value = 0.0;
        result.degrees_of_freedom = static_cast<int>(observed.size()) - 1;
        return result;
      }
      continue;
    }
    const double expected = probabilities[i] * static_cast<double>(n);
    const double diff = static_cast<double>(observed[i]) - expected;
    result.statistic += diff * diff / expected;
    ++cells;
  }
  result.degrees_of_freedom = cells - 1;
  if (result.degrees_of_freedom <= 0) {
    result.p_value = 1.0;
  } else {
    result.p_value =
        boost::math::gamma_q(0.5 * result.degrees_of_freedom, 0.5 * result.statistic);
  }
  return result;
}

}  // namespace vesselsim
