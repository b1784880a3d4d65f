// Backward RK4 for the coefficient ODEs. The right-hand sides are written
// out from the Riccati system; only the comparison calls closed_form.

#include <algorithm>
#include <array>
#include <cmath>

#include "infoprice/closed_form.hpp"
#include "infoprice/oracles.hpp"

namespace infoprice {

double OdeOracleResult::max() const {
  return std::max({a_informed, b_informed, a_uninformed, b_uninformed});
}

namespace {

using State = std::array<double, 4>;  // A_I, B_I, A_UI, B_UI

State rhs(const ModelParams& p, double t, const State& s) {
  const double sy2 = p.sigma_y * p.sigma_y;
  const double half_inv_sz2 = 0.5 / (p.sigma_z * p.sigma_z);
  const double h = std::tanh(p.sigma_y * t / p.sigma_z);
  return {
      half_inv_sz2 - 2.0 * sy2 * s[0] * s[0],
      -sy2 * s[0],
      half_inv_sz2 + 2.0 * (p.sigma_y / p.sigma_z) * h * s[2],
      -sy2 * h * h * s[2],
  };
}

State axpy(const State& s, double c, const State& d) {
  return {s[0] + c * d[0], s[1] + c * d[1], s[2] + c * d[2], s[3] + c * d[3]};
}

}  // namespace

OdeOracleResult ode_oracle(const ModelParams& params, const TimeGrid& grid) {
  const ModelParams p = validate(params);
  const HjbCoefficients coeff(p);
  const std::size_t n = grid.n_steps();

  OdeOracleResult err;
  auto compare = [&](std::size_t k, const State& s) {
    const double t = grid[k];
    err.a_informed = std::max(err.a_informed, std::fabs(s[0] - coeff.a_informed(t)));
    err.b_informed = std::max(err.b_informed, std::fabs(s[1] - coeff.b_informed(t)));
    err.a_uninformed = std::max(err.a_uninformed, std::fabs(s[2] - coeff.a_uninformed(t)));
    err.b_uninformed = std::max(err.b_uninformed, std::fabs(s[3] - coeff.b_uninformed(t)));
  };

  State s{0.0, 0.0, 0.0, 0.0};
  compare(n, s);
  for (std::size_t k = n; k > 0; --k) {
    const double t = grid[k];
    const double h = grid[k - 1] - t;  // negative
    const State k1 = rhs(p, t, s);
    const State k2 = rhs(p, t + 0.5 * h, axpy(s, 0.5 * h, k1));
    const State k3 = rhs(p, t + 0.5 * h, axpy(s, 0.5 * h, k2));
    const State k4 = rhs(p, t + h, axpy(s, h, k3));
    for (std::size_t i = 0; i < 4; ++i) {
      s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    compare(k - 1, s);
  }
  return err;
}

}  // namespace infoprice
