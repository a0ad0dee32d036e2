#pragma once

#include <cmath>
#include <functional>

#include "heraldshape/grid.hpp"

namespace heraldshape::testing {

inline Field1D sample(const TimeGrid& g, const std::function<Complex(double)>& fn) {
  VectorXcd v(g.n);
  for (Index k = 0; k < g.n; ++k) v(k) = fn(g.t(k));
  return Field1D(g, std::move(v));
}

inline Field1D gaussian_field(const TimeGrid& g, double center, double width) {
  return sample(g, [=](double t) {
    const double d = t - center;
    return Complex(std::exp(-d * d / (2.0 * width * width)), 0.0);
  });
}

inline Field2D sample2d(const TimeGrid& gs, const TimeGrid& gi,
                        const std::function<Complex(double, double)>& fn) {
  MatrixXcd m(gs.n, gi.n);
  for (Index j = 0; j < gs.n; ++j)
    for (Index k = 0; k < gi.n; ++k) m(j, k) = fn(gs.t(j), gi.t(k));
  return Field2D(gs, gi, std::move(m));
}

}  // namespace heraldshape::testing
