#include "dwqa/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace dwqa {

Schedule Schedule::linear(double slope, double intercept) {
  Schedule sched;
  sched.slope_ = slope;
  sched.intercept_ = intercept;
  return sched;
}

Schedule Schedule::tabulated(std::vector<double> s, std::vector<double> b) {
  if (s.size() != b.size() || s.size() < 2) {
    throw std::invalid_argument("schedule: need >= 2 (s, B) pairs of equal length");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw std::invalid_argument("schedule: s must be strictly increasing");
  }
  Schedule sched;
  sched.s_ = std::move(s);
  sched.b_ = std::move(b);
  return sched;
}

double Schedule::operator()(double s) const {
  if (s_.empty()) return intercept_ + slope_ * s;
  if (s <= s_.front()) return b_.front();
  if (s >= s_.back()) return b_.back();
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const auto hi = static_cast<std::size_t>(it - s_.begin());
  const std::size_t lo = hi - 1;
  const double w = (s - s_[lo]) / (s_[hi] - s_[lo]);
  return b_[lo] + w * (b_[hi] - b_[lo]);
}

}  // namespace dwqa
