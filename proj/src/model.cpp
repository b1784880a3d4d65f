#include "infoprice/model.hpp"

#include <cmath>
#include <sstream>

#include "infoprice/errors.hpp"

namespace infoprice {

namespace {

void require_finite(const char* name, double v) {
  if (!std::isfinite(v)) throw DomainError(name, "must be finite");
}

}  // namespace

ModelParams validate(const ModelParams& p) {
  require_finite("mu", p.mu);
  require_finite("sigma_y", p.sigma_y);
  if (p.sigma_y < 0.0) throw DomainError("sigma_y", "must be non-negative");
  require_finite("sigma_z", p.sigma_z);
  if (!(p.sigma_z > 0.0)) throw DomainError("sigma_z", "must be strictly positive");
  require_finite("gamma", p.gamma);
  if (!(p.gamma > 0.0)) throw DomainError("gamma", "must be strictly positive");
  require_finite("x0", p.x0);
  require_finite("y0", p.y0);
  require_finite("s0", p.s0);
  require_finite("t_end", p.t_end);
  if (!(p.t_end > 0.0)) throw DomainError("t_end", "must be strictly positive");
  return p;
}

ModelParams example_params() {
  ModelParams p;
  p.mu = 0.05;
  p.sigma_y = 0.1;
  p.sigma_z = 0.05;
  p.gamma = 0.1;
  p.x0 = 0.0;
  p.y0 = 0.0;
  p.s0 = 10.0;
  p.t_end = 1.0;
  return p;
}

TimeGrid::TimeGrid(double t_end, std::size_t n_steps) : t_end_(t_end), n_steps_(n_steps) {
  if (!std::isfinite(t_end) || !(t_end > 0.0)) {
    throw DomainError("t_end", "must be finite and strictly positive");
  }
  if (n_steps == 0) throw DomainError("n_steps", "must be at least 1");
  dt_ = t_end_ / static_cast<double>(n_steps_);
}

double TimeGrid::operator[](std::size_t k) const {
  if (k >= n_steps_) return t_end_;
  return static_cast<double>(k) * t_end_ / static_cast<double>(n_steps_);
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (*this)[k];
  return out;
}

std::size_t TimeGrid::nearest_index(double t) const {
  if (!(t > 0.0)) return 0;
  if (t >= t_end_) return n_steps_;
  auto lo = static_cast<std::size_t>(std::floor(t / dt_));
  if (lo >= n_steps_) return n_steps_;
  // floor() can land one cell off after rounding; walk to the bracketing cell.
  while (lo > 0 && (*this)[lo] > t) --lo;
  while (lo + 1 < n_steps_ && (*this)[lo + 1] <= t) ++lo;
  const double below = t - (*this)[lo];
  const double above = (*this)[lo + 1] - t;
  return above < below ? lo + 1 : lo;
}

TimeGrid make_grid(double t_end, std::size_t n_steps) { return TimeGrid(t_end, n_steps); }

InformationMode InformationMode::subscribe_at(double t_star) {
  if (!std::isfinite(t_star) || t_star < 0.0) {
    throw DomainError("t_star", "must be finite and non-negative");
  }
  return InformationMode(Kind::SubscribeAt, t_star);
}

std::size_t InformationMode::subscribe_index(const TimeGrid& grid) const {
  switch (kind_) {
    case Kind::Uninformed:
      return grid.size();
    case Kind::InformedFromStart:
      return 0;
    case Kind::SubscribeAt:
      if (t_star_ > grid.t_end()) throw DomainError("t_star", "beyond the horizon");
      return grid.nearest_index(t_star_);
  }
  return grid.size();
}

std::string InformationMode::label() const {
  switch (kind_) {
    case Kind::Uninformed:
      return "uninformed";
    case Kind::InformedFromStart:
      return "informed";
    case Kind::SubscribeAt: {
      std::ostringstream os;
      os << "subscribe@" << t_star_;
      return os.str();
    }
  }
  return "unknown";
}

}  // namespace infoprice
