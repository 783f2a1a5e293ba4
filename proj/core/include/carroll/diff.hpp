#pragma once

#include <functional>
#include <span>

#include "carroll/grid.hpp"

namespace carroll {

// Centered differences of f against df on interior points (max norm).
// Throws ShapeError when sample counts do not match the grid.
bool finite_diff_check(const TemporalGrid& g, std::span<const double> f,
                       std::span<const double> df, double tol);

// Fourth-order central difference of a scalar function.
double central_diff4(const std::function<double(double)>& f, double x, double h);

// Sixth-order central stencils on uniform samples around index i.
double fd1_6(std::span<const double> y, std::size_t i, double h);
double fd2_6(std::span<const double> y, std::size_t i, double h);
double fd3_6(std::span<const double> y, std::size_t i, double h);

}  // namespace carroll
