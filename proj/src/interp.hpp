#ifndef FPIF_SRC_INTERP_HPP
#define FPIF_SRC_INTERP_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace fpif::detail {

/**
 * Natural cubic spline through (xs, ys) evaluated at 0..n-1, held constant
 * outside [xs.front(), xs.back()]. Two knots give linear interpolation, one
 * knot a constant. xs must be strictly increasing.
 */
std::vector<double> spline_on_grid(std::span<const double> xs, std::span<const double> ys, std::size_t first,
                                   std::size_t last);

}  // namespace fpif::detail

#endif
