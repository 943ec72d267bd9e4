#include "rjd/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rjd {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> points) : points_(std::move(points)) {
  for (double p : points_)
    if (!std::isfinite(p)) throw std::invalid_argument("sample points must be finite");
  std::sort(points_.begin(), points_.end());
  weights_.assign(points_.size(), points_.empty() ? 0.0 : 1.0 / static_cast<double>(points_.size()));
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> points, std::vector<double> weights)
    : uniform_(false) {
  if (points.size() != weights.size()) throw std::invalid_argument("points and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw std::invalid_argument("sample points must be finite");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("weights must be positive");
    total += weights[i];
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  points_.reserve(points.size());
  weights_.reserve(points.size());
  for (std::size_t i : order) {
    points_.push_back(points[i]);
    weights_.push_back(weights[i] / total);
  }
}

double EmpiricalDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) m += weights_[i] * points_[i];
  return m;
}

EmpiricalDistribution EmpiricalDistribution::translated(double c) const {
  EmpiricalDistribution out = *this;
  for (double& p : out.points_) p += c;
  return out;
}

}  // namespace rjd
