// Quadrature-based oracles: the one-period problem and the Volterra kernel
// identity. Nothing here calls into closed_form.

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "infoprice/errors.hpp"
#include "infoprice/oracles.hpp"
#include "infoprice/signal_filter.hpp"

namespace infoprice {

GaussHermiteRule::GaussHermiteRule(std::size_t n) : nodes(n), weights(n) {
  if (n == 0) throw DomainError("n", "need at least one node");
  // Newton iteration on orthonormal Hermite polynomials, roots found from the
  // largest down using the usual asymptotic starting guesses.
  const double pi_m4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const std::size_t m = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nd, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * nodes[1];
    } else {
      z = 2.0 * z - nodes[i - 2];
    }
    double pp = 0.0;
    int it = 0;
    for (; it < 100; ++it) {
      double p1 = pi_m4;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / jd) * p2 - std::sqrt((jd - 1.0) / jd) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      const double z_prev = z;
      z = z_prev - p1 / pp;
      if (std::fabs(z - z_prev) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
    }
    if (it == 100) throw ConvergenceError("Gauss-Hermite node iteration did not converge");
    nodes[i] = z;
    nodes[n - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[n - 1 - i] = weights[i];
  }
  // Ascending order.
  std::reverse(nodes.begin(), nodes.end());
  std::reverse(weights.begin(), weights.end());
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kHermiteNodes = 64;

/// log-sum-exp over weighted terms: log sum_i w_i exp(e_i).
double log_weighted_sum(std::span<const double> w, std::span<const double> e) {
  const double top = *std::max_element(e.begin(), e.end());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::exp(e[i] - top);
  return top + std::log(s);
}

class SinglePeriodProblem {
 public:
  SinglePeriodProblem(const ModelParams& p, const GaussHermiteRule& rule) : p_(p) {
    // Outcomes of the price increment mu + Y + sigma_z B with probability weights.
    const double inv_pi = 1.0 / std::numbers::pi;
    const double root2 = std::numbers::sqrt2;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double signal = p.y0 + root2 * p.sigma_y * rule.nodes[i];
        returns_.push_back(p.mu + signal + root2 * p.sigma_z * rule.nodes[j]);
        weights_.push_back(rule.weights[i] * rule.weights[j] * inv_pi);
      }
    }
    scratch_.resize(returns_.size());
    // Informed: optimum over the position given Y, integrated over Y.
    std::vector<double> e(rule.nodes.size());
    std::vector<double> w(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double edge = p.mu + p.y0 + root2 * p.sigma_y * rule.nodes[i];
      e[i] = -edge * edge / (2.0 * p.sigma_z * p.sigma_z);
      w[i] = rule.weights[i] / std::sqrt(std::numbers::pi);
    }
    informed_log_ = log_weighted_sum(w, e);
  }

  /// log E[exp(-gamma phi R)].
  double cumulant(double phi) {
    for (std::size_t k = 0; k < returns_.size(); ++k) scratch_[k] = -p_.gamma * phi * returns_[k];
    return log_weighted_sum(weights_, scratch_);
  }

  /// Proportional to the derivative of the cumulant, sign-flipped: E[R exp(-gamma phi R)].
  double first_order(double phi) const {
    double s = 0.0;
    for (std::size_t k = 0; k < returns_.size(); ++k) {
      s += weights_[k] * returns_[k] * std::exp(-p_.gamma * phi * returns_[k]);
    }
    return s;
  }

  double informed_log() const { return informed_log_; }

 private:
  ModelParams p_;
  std::vector<double> returns_;
  std::vector<double> weights_;
  std::vector<double> scratch_;
  double informed_log_ = 0.0;
};

double golden_section_min(SinglePeriodProblem& prob, double& lo, double& hi) {
  // Bracket the minimum of the convex cumulant by expansion from 0.
  double a = 0.0;
  double b = 1.0;
  double fa = prob.cumulant(a);
  double fb = prob.cumulant(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
    b = -1.0;
    fb = prob.cumulant(b);
    if (fb > fa) {
      lo = -1.0;
      hi = 1.0;
      a = 0.0;
      b = 0.0;
    }
  }
  if (a != b) {
    double c = b + 2.0 * (b - a);
    double fc = prob.cumulant(c);
    int expansions = 0;
    while (fc < fb) {
      if (++expansions > 200) throw ConvergenceError("could not bracket the uninformed optimum");
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      c = b + 2.0 * (b - a);
      fc = prob.cumulant(c);
    }
    lo = std::min(a, c);
    hi = std::max(a, c);
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = prob.cumulant(x1);
  double f2 = prob.cumulant(x2);
  while (hi - lo > 1e-7 * (1.0 + std::fabs(lo) + std::fabs(hi))) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = prob.cumulant(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = prob.cumulant(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SinglePeriodOracleResult single_period_oracle(const ModelParams& params) {
  const ModelParams p = validate(params);
  const GaussHermiteRule rule(kHermiteNodes);
  SinglePeriodProblem prob(p, rule);

  double lo = 0.0;
  double hi = 0.0;
  double phi = golden_section_min(prob, lo, hi);

  // Golden section stalls at sqrt(eps) in the position; finish on the
  // first-order condition E[R exp(-gamma phi R)] = 0, which is decreasing in phi.
  double pad = hi - lo;
  while (!(prob.first_order(lo) >= 0.0 && prob.first_order(hi) <= 0.0)) {
    lo -= pad;
    hi += pad;
    pad *= 2.0;
    if (pad > 1e12) throw ConvergenceError("first-order condition not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::fabs(phi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (prob.first_order(mid) > 0.0 ? lo : hi) = mid;
  }
  phi = 0.5 * (lo + hi);

  SinglePeriodOracleResult r;
  r.phi_ui = phi;
  const double log_ui = -p.gamma * p.x0 + prob.cumulant(phi);
  r.v_ui = -std::exp(log_ui);

  // Informed log-utility at charge C is gamma C - gamma x + informed_log,
  // decreasing in utility as C grows; find where it meets log_ui.
  auto gap = [&](double charge) {
    return log_ui - (p.gamma * charge - p.gamma * p.x0 + prob.informed_log());
  };
  const double g0 = gap(0.0);
  if (g0 <= 0.0) {
    if (-g0 <= 1e-12 * std::max(1.0, std::fabs(log_ui))) {
      r.c_hat = 0.0;
      return r;
    }
    throw ConvergenceError("information has negative value at zero charge");
  }
  double c_lo = 0.0;
  double c_hi = 1.0;
  int doublings = 0;
  while (gap(c_hi) > 0.0) {
    c_lo = c_hi;
    c_hi *= 2.0;
    if (++doublings > 200) throw ConvergenceError("charge bracket not found");
  }
  while (c_hi - c_lo > 1e-12 * std::max(1.0, c_hi)) {
    const double mid = 0.5 * (c_lo + c_hi);
    if (mid == c_lo || mid == c_hi) break;
    (gap(mid) > 0.0 ? c_lo : c_hi) = mid;
  }
  r.c_hat = 0.5 * (c_lo + c_hi);
  return r;
}

// ---------------------------------------------------------------------------

double hitsuda_residual(const ModelParams& params, double t, double u) {
  const ModelParams p = validate(params);
  if (!(u >= 0.0 && u <= t && t <= p.t_end)) throw DomainError("u", "need 0 <= u <= t <= T");
  double integral = 0.0;
  if (u > 0.0) {
    auto integrand = [&](double v) { return hitsuda_kernel(p, t, v) * hitsuda_kernel(p, u, v); };
    integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, u, 15,
                                                                             1e-14);
  }
  return p.sigma_z * hitsuda_kernel(p, t, u) - integral + p.sigma_y * p.sigma_y * u;
}

OracleReport hitsuda_residual_check(const ModelParams& params, std::size_t n, double tolerance) {
  const ModelParams p = validate(params);
  if (n < 2) throw DomainError("n", "lattice needs at least two points per axis");
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = p.t_end * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double u = p.t_end * static_cast<double>(j) / static_cast<double>(n - 1);
      if (u > t) continue;
      worst = std::max(worst, std::fabs(hitsuda_residual(p, t, u)));
      ++checked;
    }
  }
  return make_report("hitsuda_kernel_residual", worst, 0.0, tolerance, ToleranceKind::Absolute,
                     std::to_string(checked) + " lattice points with u <= t");
}

}  // namespace infoprice
