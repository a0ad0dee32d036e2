#include "heraldshape/heralding.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace heraldshape {

namespace {

constexpr double kZeroWeight = 1e-300;

// Unnormalized projection of every signal row against a kernel on the idler
// grid, with trapezoid end weights. Explicit loop in fixed index order so the
// omega = 0 case matches fourier_kernel_project sample-for-sample.
VectorXcd project_rows(const Field2D& field, const VectorXcd& kernel) {
  const Index ns = field.grid_s.n;
  const Index ni = field.grid_i.n;
  const double dt = field.grid_i.dt;
  VectorXcd out(ns);
  for (Index j = 0; j < ns; ++j) {
    Complex acc(0.0, 0.0);
    for (Index k = 0; k < ni; ++k) {
      double w = (k == 0 || k == ni - 1) ? 0.5 : 1.0;
      acc += w * field.values(j, k) * kernel(k);
    }
    out(j) = acc * dt;
  }
  return out;
}

VectorXcd frequency_kernel(const TimeGrid& grid, double omega) {
  if (std::abs(omega) > grid.nyquist())
    throw std::invalid_argument("frequency exceeds grid resolution");
  VectorXcd kernel(grid.n);
  for (Index k = 0; k < grid.n; ++k)
    kernel(k) = std::exp(Complex(0.0, omega * grid.t(k)));
  return kernel;
}

HeraldedShape normalize_shape(const TimeGrid& grid, VectorXcd raw, std::string descriptor) {
  const double weight = raw.squaredNorm() * grid.dt;
  if (!std::isfinite(weight)) throw NumericsError("non-finite heralded amplitude");
  if (weight < kZeroWeight) throw HeraldError("herald impossible: zero amplitude");
  raw /= std::sqrt(weight);
  return HeraldedShape{Field1D(grid, std::move(raw)), weight, std::move(descriptor)};
}

}  // namespace

double SignalDensityMatrix::trace() const {
  return matrix.values.diagonal().real().sum() * matrix.grid_s.dt;
}

double SignalDensityMatrix::hermiticity_defect() const {
  return (matrix.values - matrix.values.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd SignalDensityMatrix::eigenvalues() const {
  MatrixXcd sym = 0.5 * (matrix.values + matrix.values.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

void SignalDensityMatrix::validate() const {
  if (!matrix.finite()) throw NumericsError("density matrix: non-finite entries");
  if (hermiticity_defect() > 1e-9)
    throw NumericsError("density matrix: not Hermitian");
  if (std::abs(trace() - 1.0) > 1e-9)
    throw NumericsError("density matrix: trace differs from 1");
  Eigen::VectorXd ev = eigenvalues();
  const double top = ev(ev.size() - 1);
  if (ev(0) < -1e-8 * top)
    throw NumericsError("density matrix: not positive semidefinite");
}

HeraldedShape herald_frequency_resolved(const Field2D& modulated, double omega) {
  if (!modulated.finite()) throw NumericsError("non-finite field");
  VectorXcd kernel = frequency_kernel(modulated.grid_i, omega);
  VectorXcd raw = project_rows(modulated, kernel);
  std::ostringstream tag;
  tag << "frequency-resolved omega=" << omega;
  return normalize_shape(modulated.grid_s, std::move(raw), tag.str());
}

HeraldedShape herald_time_resolved(const Field2D& modulated, double t_idler) {
  if (!modulated.finite()) throw NumericsError("non-finite field");
  const Index k = modulated.grid_i.index_of(t_idler);
  VectorXcd raw = modulated.values.col(k);
  std::ostringstream tag;
  tag << "time-resolved t'=" << t_idler;
  return normalize_shape(modulated.grid_s, std::move(raw), tag.str());
}

HeraldedShape herald_filtered(const Field2D& modulated, const SpectralFilter& filter,
                              double t_click) {
  if (!modulated.finite()) throw NumericsError("non-finite field");
  const TimeGrid& gi = modulated.grid_i;
  if (1.0 / filter.bandwidth < 3.0 * gi.dt)
    throw std::invalid_argument("filter bandwidth unresolved by idler grid");

  if (filter.causal()) {
    // The kernel vanishes for tau > t_click; a click before any populated
    // idler sample cannot be produced by this filter.
    Index first = -1;
    for (Index k = 0; k < gi.n && first < 0; ++k)
      if (modulated.values.col(k).squaredNorm() > 0.0) first = k;
    if (first >= 0 && t_click < gi.t(first)) throw HeraldError("acausal click");
  }

  VectorXcd kernel(gi.n);
  for (Index k = 0; k < gi.n; ++k) {
    const double tau = t_click - gi.t(k);
    kernel(k) = filter.envelope(tau) * std::exp(Complex(0.0, -filter.center * tau));
  }
  VectorXcd raw = project_rows(modulated, kernel);
  std::ostringstream tag;
  tag << "filtered omega'=" << filter.center << " t_click=" << t_click;
  return normalize_shape(modulated.grid_s, std::move(raw), tag.str());
}

SignalDensityMatrix heralded_density_matrix(const Field2D& modulated, double omega0,
                                            const DetectorSpectralResponse& detector,
                                            const FrequencyQuadrature& quad) {
  if (!modulated.finite()) throw NumericsError("non-finite field");
  const double omega_d = detector.uncertainty;
  const TimeGrid& gs = modulated.grid_s;

  MatrixXcd rho = MatrixXcd::Zero(gs.n, gs.n);
  if (omega_d == 0.0) {
    VectorXcd psi = project_rows(modulated, frequency_kernel(modulated.grid_i, omega0));
    rho.noalias() = psi * psi.adjoint();
  } else {
    if (quad.nodes < 33 || quad.nodes % 2 == 0)
      throw std::invalid_argument("frequency quadrature needs an odd node count >= 33");
    const int n = quad.nodes;
    const double half = quad.span_sigmas * omega_d;
    const double dw = 2.0 * half / static_cast<double>(n - 1);
    const double gamma_norm = 1.0 / (std::sqrt(M_PI) * omega_d);
    // Fixed node order keeps the accumulation deterministic.
    for (int m = 0; m < n; ++m) {
      const double omega = omega0 - half + dw * static_cast<double>(m);
      const double trap = (m == 0 || m == n - 1) ? 0.5 : 1.0;
      const double x = (omega - omega0) / omega_d;
      const double gamma = gamma_norm * std::exp(-x * x);
      VectorXcd psi = project_rows(modulated, frequency_kernel(modulated.grid_i, omega));
      rho.noalias() += (trap * gamma * dw) * (psi * psi.adjoint());
    }
  }

  SignalDensityMatrix out{Field2D(gs, gs, std::move(rho))};
  const double tr = out.trace();
  if (!(tr > kZeroWeight)) throw HeraldError("herald impossible: zero amplitude");
  out.matrix.values /= tr;
  return out;
}

SignalDensityMatrix herald_mixture(const ClassicalMixture& mixture, const Modulator& mod,
                                   double omega) {
  mixture.validate();
  const TimeGrid& gs = mixture.components.front().second.amplitude.grid_s;
  MatrixXcd rho = MatrixXcd::Zero(gs.n, gs.n);
  for (const auto& [p, component] : mixture.components) {
    if (p == 0.0) continue;
    if (!component.amplitude.grid_s.compatible(gs))
      throw std::invalid_argument("herald_mixture: signal grids differ across components");
    ModulatedState modded = apply_modulator(component, mod);
    VectorXcd psi =
        project_rows(modded.field, frequency_kernel(modded.field.grid_i, omega));
    rho.noalias() += p * (psi * psi.adjoint());
  }
  SignalDensityMatrix out{Field2D(gs, gs, std::move(rho))};
  const double tr = out.trace();
  if (!(tr > kZeroWeight)) throw HeraldError("herald impossible: zero amplitude");
  out.matrix.values /= tr;
  return out;
}

}  // namespace heraldshape
