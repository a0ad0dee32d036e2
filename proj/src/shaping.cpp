#include "heraldshape/shaping.hpp"

#include <sstream>

namespace heraldshape {

std::pair<double, double> Modulator::support(double threshold) const {
  const Index n = transmission.grid.n;
  Index first = -1, last = -1;
  for (Index k = 0; k < n; ++k) {
    if (std::abs(transmission.values(k)) > threshold) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) return {0.0, 0.0};
  return {transmission.grid.t(first), transmission.grid.t(last)};
}

Modulator gaussian_modulator(double t_m, const TimeGrid& grid) {
  if (!(t_m > 0.0)) throw std::invalid_argument("gaussian_modulator: t_m must be positive");
  if (t_m < 3.0 * grid.dt) throw std::invalid_argument("modulation unresolved");
  VectorXcd values(grid.n);
  const double cutoff = std::exp(-8.0);
  for (Index k = 0; k < grid.n; ++k) {
    const double t = grid.t(k);
    const double a = std::exp(-t * t / (2.0 * t_m * t_m));
    values(k) = (a < cutoff) ? 0.0 : a;
  }
  return Modulator{Field1D(grid, std::move(values)), t_m, "gaussian"};
}

Modulator rect_modulator(double t_on, double t_off, Complex amplitude,
                         const TimeGrid& grid) {
  if (!(t_on < t_off)) throw std::invalid_argument("rect_modulator: t_on must precede t_off");
  if (std::abs(amplitude) > 1.0 + 1e-12)
    throw std::invalid_argument("transmission exceeds unity");
  VectorXcd values = VectorXcd::Zero(grid.n);
  for (Index k = 0; k < grid.n; ++k) {
    const double t = grid.t(k);
    if (t >= t_on && t <= t_off) values(k) = amplitude;
  }
  return Modulator{Field1D(grid, std::move(values)), t_off - t_on, "rect"};
}

Modulator tabulated_modulator(const Field1D& values, std::string label) {
  if (!values.finite()) throw NumericsError("non-finite field");
  std::vector<Index> bad;
  for (Index k = 0; k < values.grid.n; ++k)
    if (std::abs(values.values(k)) > 1.0 + 1e-12) bad.push_back(k);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "transmission exceeds unity at sample(s)";
    for (size_t i = 0; i < bad.size() && i < 16; ++i) msg << ' ' << bad[i];
    if (bad.size() > 16) msg << " ...";
    throw std::invalid_argument(msg.str());
  }

  // Smallest centered-on-energy window holding 99.9% of the |A|^2 energy.
  const Index n = values.grid.n;
  Eigen::VectorXd energy = values.values.array().abs2();
  const double total = energy.sum();
  double width = values.grid.span();
  if (total > 0.0) {
    Index lo = 0, hi = n - 1;
    double kept = total;
    while (lo < hi) {
      const double next_lo = kept - energy(lo);
      const double next_hi = kept - energy(hi);
      const double best = std::max(next_lo, next_hi);
      if (best < 0.999 * total) break;
      if (next_lo >= next_hi) { kept = next_lo; ++lo; }
      else { kept = next_hi; --hi; }
    }
    width = values.grid.dt * static_cast<double>(hi - lo);
  }
  return Modulator{values, width, std::move(label)};
}

ModulatedState apply_modulator(const Field2D& field, const Modulator& mod) {
  if (!field.grid_i.compatible(mod.transmission.grid))
    throw std::invalid_argument("apply_modulator: idler grid mismatch");
  const double in2 = field.values.squaredNorm();
  Field2D out = field;
  out.values = out.values * mod.transmission.values.asDiagonal();
  const double out2 = out.values.squaredNorm();
  const double fraction = in2 > 0.0 ? out2 / in2 : 0.0;
  return ModulatedState{std::move(out), fraction};
}

ModulatedState apply_modulator(const JointAmplitude& state, const Modulator& mod) {
  return apply_modulator(state.amplitude, mod);
}

}  // namespace heraldshape
