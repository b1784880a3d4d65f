#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace infoprice {

/**
 * Market and preference constants.
 *
 * The same struct serves the single-period model, where sigma_y and
 * sigma_z are the standard deviations of the signal and of the price noise
 * over the one period and t_end is ignored.
 */
struct ModelParams {
  double mu = 0.0;       ///< Drift of the price, per unit time
  double sigma_y = 0.0;  ///< Signal volatility (0 only as a degenerate case)
  double sigma_z = 0.0;  ///< Price volatility
  double gamma = 0.0;    ///< Absolute risk aversion
  double x0 = 0.0;       ///< Initial wealth
  double y0 = 0.0;       ///< Initial signal value (known to everyone)
  double s0 = 0.0;       ///< Initial price
  double t_end = 0.0;    ///< Horizon T

  /// sigma_y / sigma_z, the rate at which the filter learns.
  double noise_ratio() const { return sigma_y / sigma_z; }

  bool operator==(const ModelParams&) const = default;
};

/// Returns p unchanged or throws DomainError naming the first bad field.
ModelParams validate(const ModelParams& p);

/// The illustrative parameter set used throughout the examples and tests:
/// mu=0.05, sigma_y=0.1, sigma_z=0.05, gamma=0.1, x=0, y=0, S0=10, T=1.
ModelParams example_params();

/// Uniform partition of [0, t_end] with the last node pinned to t_end.
class TimeGrid {
 public:
  TimeGrid(double t_end, std::size_t n_steps);

  double t_end() const { return t_end_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t size() const { return n_steps_ + 1; }
  double dt() const { return dt_; }

  /// Node k; node n_steps is exactly t_end.
  double operator[](std::size_t k) const;

  std::vector<double> points() const;

  /// Index of the node closest to t (clamped to [0, T]); ties go to the
  /// earlier node.
  std::size_t nearest_index(double t) const;
  double snap(double t) const { return (*this)[nearest_index(t)]; }

 private:
  double t_end_;
  std::size_t n_steps_;
  double dt_;
};

TimeGrid make_grid(double t_end, std::size_t n_steps);

/// Who knows the signal, and from when.
class InformationMode {
 public:
  enum class Kind { Uninformed, InformedFromStart, SubscribeAt };

  static InformationMode uninformed() { return InformationMode(Kind::Uninformed, 0.0); }
  static InformationMode informed_from_start() {
    return InformationMode(Kind::InformedFromStart, 0.0);
  }
  static InformationMode subscribe_at(double t_star);

  Kind kind() const { return kind_; }
  double subscribe_time() const { return t_star_; }

  /// First grid index at which the signal is observed; grid.size() when never.
  std::size_t subscribe_index(const TimeGrid& grid) const;

  std::string label() const;

 private:
  InformationMode(Kind kind, double t_star) : kind_(kind), t_star_(t_star) {}

  Kind kind_;
  double t_star_;
};

}  // namespace infoprice
