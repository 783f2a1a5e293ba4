#include "carroll/diff.hpp"

#include <cmath>

#include "carroll/errors.hpp"

namespace carroll {

bool finite_diff_check(const TemporalGrid& g, std::span<const double> f,
                       std::span<const double> df, double tol) {
  if (f.size() != g.size() || df.size() != g.size())
    throw ShapeError("finite_diff_check: samples do not match grid");
  const double h = g.dt();
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double d = (f[i + 1] - f[i - 1]) / (2.0 * h);
    if (!(std::abs(d - df[i]) <= tol)) return false;
  }
  return true;
}

double central_diff4(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fd1_6(std::span<const double> y, std::size_t i, double h) {
  return (-y[i - 3] + 9 * y[i - 2] - 45 * y[i - 1] + 45 * y[i + 1] - 9 * y[i + 2] + y[i + 3]) /
         (60 * h);
}

double fd2_6(std::span<const double> y, std::size_t i, double h) {
  return (2 * y[i - 3] - 27 * y[i - 2] + 270 * y[i - 1] - 490 * y[i] + 270 * y[i + 1] -
          27 * y[i + 2] + 2 * y[i + 3]) /
         (180 * h * h);
}

double fd3_6(std::span<const double> y, std::size_t i, double h) {
  return (7 * (y[i + 4] - y[i - 4]) - 72 * (y[i + 3] - y[i - 3]) + 338 * (y[i + 2] - y[i - 2]) -
          488 * (y[i + 1] - y[i - 1])) /
         (240 * h * h * h);
}

}  // namespace carroll
