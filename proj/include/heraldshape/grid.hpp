#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace heraldshape {

using Complex = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;
using Eigen::Index;

/// Thrown when a heralding outcome has (numerically) zero probability.
struct HeraldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical invariant (finiteness, resolution, positivity) fails.
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform time grid t_k = t_start + k*dt, k in [0, n).
struct TimeGrid {
  double t_start = 0.0;
  double dt = 1.0;
  Index n = 0;

  TimeGrid() = default;
  TimeGrid(double start, double step, Index count) : t_start(start), dt(step), n(count) {
    if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
    if (n < 8) throw std::invalid_argument("TimeGrid: n must be >= 8");
  }

  double t(Index k) const { return t_start + static_cast<double>(k) * dt; }
  double t_end() const { return t(n - 1); }
  double span() const { return dt * static_cast<double>(n - 1); }

  /// Conjugate angular-frequency step 2*pi/(n*dt).
  double domega() const { return 2.0 * M_PI / (static_cast<double>(n) * dt); }
  double nyquist() const { return M_PI / dt; }

  Eigen::VectorXd times() const {
    return Eigen::VectorXd::LinSpaced(n, t_start, t_end());
  }

  bool operator==(const TimeGrid& o) const {
    return t_start == o.t_start && dt == o.dt && n == o.n;
  }

  /// Same layout within floating tolerance (used for cross-module compatibility checks).
  bool compatible(const TimeGrid& o, double rel = 1e-12) const {
    return n == o.n && std::abs(dt - o.dt) <= rel * dt &&
           std::abs(t_start - o.t_start) <= rel * (std::abs(t_start) + dt);
  }

  /// Index of the grid point closest to time x; throws if x is off-grid.
  Index index_of(double x) const {
    double u = (x - t_start) / dt;
    Index k = static_cast<Index>(std::llround(u));
    if (k < 0 || k >= n || std::abs(u - static_cast<double>(k)) > 1e-6)
      throw std::invalid_argument("TimeGrid: time not on grid");
    return k;
  }
};

/// Sampled complex function of one time variable.
struct Field1D {
  TimeGrid grid;
  VectorXcd values;

  Field1D() = default;
  Field1D(TimeGrid g, VectorXcd v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
      throw std::invalid_argument("Field1D: value count does not match grid");
  }

  /// Riemann norm^2: sum |f_k|^2 * dt.
  double norm2() const { return values.squaredNorm() * grid.dt; }

  bool finite() const { return values.allFinite(); }
};

/// Sampled complex function of (t_signal, t_idler); rows = signal, cols = idler.
struct Field2D {
  TimeGrid grid_s;
  TimeGrid grid_i;
  MatrixXcd values;

  Field2D() = default;
  Field2D(TimeGrid gs, TimeGrid gi, MatrixXcd v)
      : grid_s(gs), grid_i(gi), values(std::move(v)) {
    if (values.rows() != grid_s.n || values.cols() != grid_i.n)
      throw std::invalid_argument("Field2D: value shape does not match grids");
  }

  double norm2() const { return values.squaredNorm() * grid_s.dt * grid_i.dt; }

  bool finite() const { return values.allFinite(); }
};

}  // namespace heraldshape
