#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "infoprice/model.hpp"

namespace infoprice {

/**
 * Deterministic subscription rate c(t) >= 0, continuous and piecewise
 * linear between strictly increasing knots. Step-like schedules are
 * expressed as one-cell ramps.
 */
class RateSchedule {
 public:
  /// Throws ScheduleDomainError on fewer than two knots, non-increasing
  /// knots, negative or non-finite rates, or mismatched lengths.
  RateSchedule(std::vector<double> knots, std::vector<double> values);

  static RateSchedule constant(double t_end, double rate);

  /// Samples f at every grid node.
  static RateSchedule sampled(const TimeGrid& grid, const std::function<double(double)>& f);

  /// c(t). Throws ScheduleDomainError outside [front(), back()].
  double operator()(double t) const;

  /// Exact integral of the piecewise-linear curve over [a, b], a <= b.
  double integral(double a, double b) const;

  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

  /// Throws ScheduleDomainError unless the schedule is defined on [a, b].
  void require_covers(double a, double b) const;

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }

  /// Same schedule with a constant added to every rate.
  RateSchedule shifted(double delta) const;

 private:
  std::size_t segment(double t) const;
  double cumulative(double t) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> prefix_;  // integral from front() to each knot
};

/// Two-column CSV "t,c" with a header row.
RateSchedule read_schedule_csv(std::istream& in);
RateSchedule read_schedule_csv_file(const std::string& path);
void write_schedule_csv(std::ostream& out, const RateSchedule& schedule);

}  // namespace infoprice
