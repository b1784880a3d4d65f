#include "infoprice/rate_schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "infoprice/errors.hpp"

namespace infoprice {

RateSchedule::RateSchedule(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size()) {
    throw ScheduleDomainError("knots and values differ in length");
  }
  if (knots_.size() < 2) throw ScheduleDomainError("need at least two knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
      throw ScheduleDomainError("non-finite entry at row " + std::to_string(i));
    }
    if (values_[i] < 0.0) {
      throw ScheduleDomainError("negative rate at t=" + std::to_string(knots_[i]));
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      throw ScheduleDomainError("knots not strictly increasing at row " + std::to_string(i));
    }
  }
  prefix_.resize(knots_.size());
  prefix_[0] = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    prefix_[i] = prefix_[i - 1] + 0.5 * (values_[i - 1] + values_[i]) * (knots_[i] - knots_[i - 1]);
  }
}

RateSchedule RateSchedule::constant(double t_end, double rate) {
  return RateSchedule({0.0, t_end}, {rate, rate});
}

RateSchedule RateSchedule::sampled(const TimeGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> t = grid.points();
  std::vector<double> c(t.size());
  std::transform(t.begin(), t.end(), c.begin(), f);
  return RateSchedule(std::move(t), std::move(c));
}

void RateSchedule::require_covers(double a, double b) const {
  if (a < knots_.front() || b > knots_.back()) {
    throw ScheduleDomainError("schedule defined on [" + std::to_string(knots_.front()) + ", " +
                              std::to_string(knots_.back()) + "], needed [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
  }
}

std::size_t RateSchedule::segment(double t) const {
  // Index i with knots_[i] <= t <= knots_[i+1].
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, knots_.size() - 2);
}

double RateSchedule::operator()(double t) const {
  require_covers(t, t);
  const std::size_t i = segment(t);
  const double w = (t - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double RateSchedule::cumulative(double t) const {
  const std::size_t i = segment(t);
  const double h = t - knots_[i];
  const double slope = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
  return prefix_[i] + h * (values_[i] + 0.5 * slope * h);
}

double RateSchedule::integral(double a, double b) const {
  if (a > b) throw ScheduleDomainError("integral bounds reversed");
  require_covers(a, b);
  return cumulative(b) - cumulative(a);
}

RateSchedule RateSchedule::shifted(double delta) const {
  std::vector<double> v(values_);
  for (double& c : v) c += delta;
  return RateSchedule(knots_, std::move(v));
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ScheduleDomainError("line " + std::to_string(line) + ": not a number: '" +
                              std::string(s) + "'");
  }
  return v;
}

}  // namespace

RateSchedule read_schedule_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<double> t;
  std::vector<double> c;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw ScheduleDomainError("line " + std::to_string(line_no) + ": expected two columns");
    }
    if (!have_header) {
      if (trim(row.substr(0, comma)) != "t" || trim(row.substr(comma + 1)) != "c") {
        throw ScheduleDomainError("missing header 't,c'");
      }
      have_header = true;
      continue;
    }
    t.push_back(parse_number(row.substr(0, comma), line_no));
    c.push_back(parse_number(row.substr(comma + 1), line_no));
  }
  if (!have_header) throw ScheduleDomainError("empty schedule file");
  return RateSchedule(std::move(t), std::move(c));
}

RateSchedule read_schedule_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScheduleDomainError("cannot open schedule file " + path);
  return read_schedule_csv(in);
}

void write_schedule_csv(std::ostream& out, const RateSchedule& schedule) {
  char buf[64];
  out << "t,c\n";
  for (std::size_t i = 0; i < schedule.knots().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", schedule.knots()[i], schedule.values()[i]);
    out << buf;
  }
}

}  // namespace infoprice
