#include "heraldshape/states.hpp"

#include <Eigen/SVD>

namespace heraldshape {

void ClassicalMixture::validate() const {
  if (components.empty())
    throw std::invalid_argument("ClassicalMixture: empty mixture");
  double total = 0.0;
  for (const auto& [w, state] : components) {
    if (w < 0.0) throw std::invalid_argument("ClassicalMixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("ClassicalMixture: weights must sum to 1");
}

JointAmplitude make_gaussian_joint(const GaussianBiphotonParams& params,
                                   const TimeGrid& grid_s, const TimeGrid& grid_i) {
  if (grid_s.dt > params.t_c || grid_i.dt > params.t_c)
    throw std::invalid_argument("correlation time unresolved");

  const double tc2 = params.t_c * params.t_c;
  const double tu2 = params.t_u * params.t_u;
  const double prefactor = std::sqrt(2.0 / (M_PI * params.t_c * params.t_u));

  MatrixXcd values(grid_s.n, grid_i.n);
  for (Index k = 0; k < grid_i.n; ++k) {
    const double ti = grid_i.t(k);
    for (Index j = 0; j < grid_s.n; ++j) {
      const double ts = grid_s.t(j);
      const double dm = ts - ti;
      const double dp = ts + ti;
      values(j, k) = prefactor * std::exp(-dm * dm / (2.0 * tc2) - dp * dp / (2.0 * tu2));
    }
  }

  Field2D field(grid_s, grid_i, std::move(values));
  const double n2 = field.norm2();
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw NumericsError("make_gaussian_joint: degenerate norm");
  field.values /= std::sqrt(n2);
  return JointAmplitude{std::move(field), "gaussian", n2};
}

JointAmplitude make_separable(const Field1D& f_signal, const Field1D& g_idler) {
  const double nf = f_signal.norm2();
  const double ng = g_idler.norm2();
  if (!(nf > 0.0) || !(ng > 0.0))
    throw std::invalid_argument("make_separable: zero factor");
  MatrixXcd values = (f_signal.values / std::sqrt(nf)) *
                     (g_idler.values / std::sqrt(ng)).transpose();
  return JointAmplitude{Field2D(f_signal.grid, g_idler.grid, std::move(values)),
                        "separable", nf * ng};
}

JointAmplitude make_tabulated(const Field2D& values, std::string label) {
  if (!values.finite()) throw NumericsError("non-finite field");
  const double n2 = values.norm2();
  if (!(n2 > 0.0)) throw std::invalid_argument("make_tabulated: zero norm");
  Field2D field = values;
  field.values /= std::sqrt(n2);
  return JointAmplitude{std::move(field), std::move(label), n2};
}

double entanglement_proxy(const JointAmplitude& state) {
  Eigen::BDCSVD<MatrixXcd> svd(state.amplitude.values);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double s2 = sigma.squaredNorm();
  const double s4 = sigma.array().square().square().sum();
  return s4 / (s2 * s2);
}

}  // namespace heraldshape
